"""Command-line front end: dataset ingestion, config loading, batch pipeline
execution, and artifact emission (masks, overlays, metrics CSV, manifest).

Subcommands: vessels, optic-disc, exudates, eval, dcnn-shapes.
"""

import argparse
import concurrent.futures
import dataclasses
import json
import logging
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .imgcore import apply_circular_mask
from .pipelines import (PipelineConfig, segment_vessels, locate_optic_disc,
                        detect_exudates, mask_optic_disc)
from .eval import confusion, metrics, od_hit, od_reference
from .dcnn import LayerSpec, reference_layers, trace_shapes, validate_reference_layout

log = logging.getLogger("retina")

SUPPORTED_EXTS = {".png", ".tif", ".tiff", ".jpg", ".jpeg", ".ppm"}
_METRIC_COLS = ("accuracy", "specificity", "sensitivity", "dice")


# ---------------------------------------------------------------- image io

def read_rgb(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_EXTS:
        raise ValueError(f"unsupported image format: {path.name} "
                         f"(supported: {', '.join(sorted(SUPPORTED_EXTS))})")
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def read_mask(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_EXTS:
        raise ValueError(f"unsupported mask format: {path.name}")
    with Image.open(path) as im:
        return np.asarray(im.convert("L")) > 127


def write_mask(path, mask: np.ndarray) -> None:
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(path)


def write_rgb(path, img: np.ndarray) -> None:
    Image.fromarray(img, mode="RGB").save(path)


def overlay(img: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Foreground tinted pure green at 60 percent opacity over the image."""
    out = img.astype(np.float64).copy()
    green = np.array([0.0, 255.0, 0.0])
    out[mask] = 0.4 * out[mask] + 0.6 * green
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


# ---------------------------------------------------------------- datasets

@dataclass(frozen=True)
class DatasetItem:
    id: str
    image_path: Path
    gt_vessel_path: Path | None = None
    fov_path: Path | None = None
    gt_od_mask_path: Path | None = None
    gt_exudate_mask_path: Path | None = None
    gt_od_center: tuple[float, float] | None = None
    warnings: tuple = ()


def _image_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.iterdir()
                  if p.is_file() and p.suffix.lower() in SUPPORTED_EXTS)


def _leading_index(name: str) -> str | None:
    m = re.match(r"(\d+)", name)
    return m.group(1) if m else None


def _pair_by_index(image: Path, gt_dir: Path) -> tuple[Path | None, str | None]:
    """Ground-truth file whose leading integer matches the image's, or whose
    stem starts with the image stem."""
    if not gt_dir.is_dir():
        return None, f"{gt_dir.name}: directory missing"
    idx = _leading_index(image.stem)
    candidates = []
    for p in sorted(gt_dir.iterdir()):
        if not p.is_file():
            continue
        matches = (idx is not None and _leading_index(p.stem) == idx) or \
            p.stem.startswith(image.stem)
        if matches:
            candidates.append(p)
    usable = [p for p in candidates if p.suffix.lower() in SUPPORTED_EXTS]
    if usable:
        return usable[0], None
    if candidates:
        return None, (f"{candidates[0].name}: unsupported format, convert to "
                      f"PNG first (see README)")
    return None, f"no match for {image.stem} in {gt_dir.name}"


def load_dataset(root, layout: str) -> list[DatasetItem]:
    """Enumerate a dataset directory into items, ordered by file name.

    Layouts: 'drive' expects images/, 1st_manual/, mask/ subdirectories
    paired by leading image index; 'idrid-seg' expects images/, optic_disc/,
    hard_exudates/ paired by stem prefix; 'flat' is a plain directory of
    images. Missing ground truth leaves the field unset and attaches a
    warning to the item.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset root not found: {root}")
    if layout not in ("drive", "idrid-seg", "flat"):
        raise ValueError(f"unknown layout: {layout!r}")

    if layout == "flat":
        return [DatasetItem(id=p.stem, image_path=p) for p in _image_files(root)]

    images_dir = root / "images"
    if not images_dir.is_dir():
        raise FileNotFoundError(f"missing images/ directory under {root}")
    items = []
    for image in _image_files(images_dir):
        warns = []
        fields = {}
        if layout == "drive":
            gt, warn = _pair_by_index(image, root / "1st_manual")
            fields["gt_vessel_path"] = gt
            if warn:
                warns.append(warn)
            fov, warn = _pair_by_index(image, root / "mask")
            fields["fov_path"] = fov
            if warn:
                warns.append(warn)
        else:
            od, warn = _pair_by_index(image, root / "optic_disc")
            fields["gt_od_mask_path"] = od
            if warn:
                warns.append(warn)
            ex, warn = _pair_by_index(image, root / "hard_exudates")
            fields["gt_exudate_mask_path"] = ex
            if warn:
                warns.append(warn)
        for w in warns:
            log.warning("%s: %s", image.stem, w)
        items.append(DatasetItem(id=image.stem, image_path=image,
                                 warnings=tuple(warns), **fields))
    return items


# ------------------------------------------------------------------ config

def _parse_int_list(text: str) -> list[int]:
    found = re.findall(r"-?\d+", text)
    if not found:
        raise ValueError(f"expected integers in {text!r}")
    return [int(t) for t in found]


def _parse_value(name: str, text: str, default):
    text = text.strip()
    if name == "asf_schedule":
        ints = _parse_int_list(text)
        if len(ints) % 2 != 0:
            raise ValueError("asf_schedule needs (w,h) pairs, e.g. 5,5;7,7")
        return tuple((ints[i], ints[i + 1]) for i in range(0, len(ints), 2))
    if isinstance(default, bool):
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{name}: expected a boolean, got {text!r}")
    if isinstance(default, tuple):
        ints = _parse_int_list(text)
        if len(ints) != 2:
            raise ValueError(f"{name}: expected two integers, got {text!r}")
        return (ints[0], ints[1])
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def load_config(path=None, overrides=()) -> PipelineConfig:
    """Build a PipelineConfig from an optional `key = value` file plus
    `key=value` override strings (CLI flags win over the file)."""
    defaults = PipelineConfig()
    values = {}

    def apply(key: str, raw: str, origin: str):
        key = key.strip()
        if not hasattr(defaults, key):
            raise ValueError(f"{origin}: unknown config key {key!r}")
        values[key] = _parse_value(key, raw, getattr(defaults, key))

    if path is not None:
        text = Path(path).read_text()
        for ln, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected key = value")
            key, raw = line.split("=", 1)
            apply(key, raw, f"{path}:{ln}")
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"--set {item!r}: expected key=value")
        key, raw = item.split("=", 1)
        apply(key, raw, "--set")
    return dataclasses.replace(defaults, **values)


def format_config(cfg: PipelineConfig) -> str:
    lines = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "asf_schedule":
            v = ";".join(f"{w},{h}" for w, h in v)
        elif isinstance(v, tuple):
            v = ",".join(str(x) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines)


# --------------------------------------------------------------- batch run

@dataclass(frozen=True)
class RunManifest:
    command: str
    config: dict
    items: tuple
    aggregates: dict
    warnings: tuple

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)


def _metrics_dict(pred, gt, roi) -> dict:
    rep = metrics(confusion(pred, gt, roi))
    return {c: getattr(rep, c) for c in _METRIC_COLS}


def _process_item(args) -> dict:
    cmd, item, cfg, out_dir = args
    out_dir = Path(out_dir)
    rec = {"id": item.id, "ok": True, "error": None, "seconds": 0.0,
           "outputs": {}, "metrics": None, "od": None,
           "warnings": list(item.warnings)}
    t0 = time.perf_counter()
    try:
        img = read_rgb(item.image_path)
        if cmd == "vessels":
            mask = segment_vessels(img, cfg)
            rec["metrics"] = _evaluate_mask(mask, item.gt_vessel_path, item.fov_path)
            _write_mask_outputs(rec, out_dir, item.id, img, mask)
        elif cmd == "exudates":
            mask = detect_exudates(img, cfg)
            rec["metrics"] = _evaluate_mask(mask, item.gt_exudate_mask_path, None)
            _write_mask_outputs(rec, out_dir, item.id, img, mask)
        elif cmd == "optic-disc":
            od = locate_optic_disc(img, cfg)
            rec["od"] = {"x": od.center_full[0], "y": od.center_full[1],
                         "radius": od.radius, "score": od.score, "hit": None}
            if item.gt_od_mask_path is not None:
                center, radius = od_reference(read_mask(item.gt_od_mask_path))
                rec["od"]["hit"] = od_hit(od, center, radius)
            elif item.gt_od_center is not None:
                tol = 0.05 * float(np.hypot(*img.shape[:2]))
                rec["od"]["hit"] = od_hit(od, item.gt_od_center, tol)
            shown = apply_circular_mask(img, od.center_full,
                                        od.radius * cfg.od_mask_scale, 0)
            path = out_dir / f"{item.id}_odmask.png"
            write_rgb(path, shown)
            rec["outputs"]["odmask"] = path.name
        else:
            raise ValueError(f"unknown command: {cmd!r}")
    except Exception as exc:  # per-item failures must not kill the batch
        rec["ok"] = False
        rec["error"] = f"{type(exc).__name__}: {exc}"
    rec["seconds"] = time.perf_counter() - t0
    return rec


def _evaluate_mask(mask, gt_path, fov_path) -> dict | None:
    if gt_path is None:
        return None
    gt = read_mask(gt_path)
    roi = read_mask(fov_path) if fov_path is not None else None
    return _metrics_dict(mask, gt, roi)


def _write_mask_outputs(rec, out_dir, item_id, img, mask) -> None:
    mask_path = out_dir / f"{item_id}_mask.png"
    over_path = out_dir / f"{item_id}_overlay.png"
    write_mask(mask_path, mask)
    write_rgb(over_path, overlay(img, mask))
    rec["outputs"]["mask"] = mask_path.name
    rec["outputs"]["overlay"] = over_path.name


def _aggregate(records) -> dict:
    agg = {}
    for col in _METRIC_COLS:
        vals = [r["metrics"][col] for r in records
                if r["metrics"] is not None and r["metrics"][col] is not None]
        agg[col] = float(np.mean(vals)) if vals else None
        agg[f"{col}_defined"] = len(vals)
    hits = [r["od"]["hit"] for r in records
            if r["od"] is not None and r["od"]["hit"] is not None]
    agg["od_hits"] = int(sum(hits)) if hits else 0
    agg["od_evaluated"] = len(hits)
    secs = [r["seconds"] for r in records if r["ok"]]
    agg["mean_seconds"] = float(np.mean(secs)) if secs else None
    return agg


def run_batch(cmd: str, items, cfg: PipelineConfig, out_dir,
              jobs: int = 1) -> RunManifest:
    """Run one pipeline over all items, writing per-item artifacts into
    out_dir. Per-item failures are recorded and the batch continues."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    work = [(cmd, item, cfg, str(out_dir)) for item in items]
    if jobs > 1 and len(work) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_process_item, work))
    else:
        records = [_process_item(w) for w in work]
    manifest = RunManifest(
        command=cmd,
        config=cfg.to_dict(),
        items=tuple(records),
        aggregates=_aggregate(records),
        warnings=tuple(w for r in records for w in r["warnings"]),
    )
    (out_dir / "manifest.json").write_text(manifest.to_json() + "\n")
    if any(r["metrics"] is not None for r in records):
        write_metrics_csv(manifest, out_dir / "metrics.csv")
    if cmd == "optic-disc":
        lines = []
        for r in records:
            if r["od"] is None:
                continue
            lines.append(json.dumps({"id": r["id"], "x": r["od"]["x"],
                                     "y": r["od"]["y"],
                                     "score": round(r["od"]["score"], 6)}))
        (out_dir / "od_locations.jsonl").write_text("\n".join(lines) + "\n")
    return manifest


def _fmt(v) -> str:
    return "" if v is None else f"{v:.4f}"


def write_metrics_csv(manifest: RunManifest, path) -> None:
    """Per-item metric rows plus a MEAN row over the defined values.

    The seconds column is a fixed 0.0000 placeholder so repeated runs emit
    byte-identical files; measured wall-clock lives in manifest.json.
    """
    rows = [r for r in manifest.items if r["metrics"] is not None]
    lines = ["id,accuracy,specificity,sensitivity,dice,seconds"]
    for r in rows:
        cells = [_fmt(r["metrics"][c]) for c in _METRIC_COLS]
        lines.append(",".join([r["id"]] + cells + ["0.0000"]))
    means = []
    for c in _METRIC_COLS:
        vals = [r["metrics"][c] for r in rows if r["metrics"][c] is not None]
        means.append(_fmt(float(np.mean(vals))) if vals else "")
    lines.append(",".join(["MEAN"] + means + ["0.0000"]))
    Path(path).write_text("\n".join(lines) + "\n")


# ------------------------------------------------------------ subcommands

class _Parser(argparse.ArgumentParser):
    # usage errors are fatal (exit 1); exit 2 is reserved for partial
    # per-item failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _items_for_input(input_path: Path, layout: str) -> list[DatasetItem]:
    if input_path.is_file():
        return [DatasetItem(id=input_path.stem, image_path=input_path)]
    return load_dataset(input_path, layout)


def _cmd_pipeline(cmd: str, args) -> int:
    cfg = load_config(args.config, args.set or ())
    if args.print_config:
        print(format_config(cfg))
        if args.input is None:
            return 0
    if args.input is None or args.out is None:
        print(f"retina {cmd}: --input and --out are required", file=sys.stderr)
        return 1
    items = _items_for_input(Path(args.input), args.layout)
    manifest = run_batch(cmd, items, cfg, Path(args.out), jobs=args.jobs)
    failed = [r["id"] for r in manifest.items if not r["ok"]]
    for r in manifest.items:
        if r["error"]:
            print(f"{r['id']}: {r['error']}", file=sys.stderr)
    agg = manifest.aggregates
    if agg["accuracy_defined"]:
        print("mean: " + " ".join(
            f"{c}={_fmt(agg[c])}" for c in _METRIC_COLS if agg[c] is not None))
    if cmd == "optic-disc" and agg["od_evaluated"]:
        print(f"od hits: {agg['od_hits']}/{agg['od_evaluated']}")
    print(f"{len(manifest.items) - len(failed)}/{len(manifest.items)} items "
          f"written to {args.out}")
    return 2 if failed else 0


def _match_key(stem: str) -> str:
    idx = _leading_index(stem)
    if idx is not None:
        return idx
    for suffix in ("_mask", "_manual1", "_gt"):
        if stem.endswith(suffix):
            return stem[:-len(suffix)]
    return stem


def _cmd_eval(args) -> int:
    pred_dir = Path(args.pred)
    gt_dir = Path(args.gt)
    if not pred_dir.is_dir() or not gt_dir.is_dir():
        print("eval: --pred and --gt must be directories", file=sys.stderr)
        return 1
    gt_by_key = {_match_key(p.stem): p for p in _image_files(gt_dir)}
    fov_by_key = {}
    if args.fov:
        fov_by_key = {_match_key(p.stem): p for p in _image_files(Path(args.fov))}
    records = []
    partial = False
    for pred_path in _image_files(pred_dir):
        if pred_path.stem.endswith(("_overlay", "_odmask")):
            continue
        key = _match_key(pred_path.stem)
        gt_path = gt_by_key.get(key)
        if gt_path is None:
            print(f"eval: no ground truth for {pred_path.name}", file=sys.stderr)
            partial = True
            continue
        pred = read_mask(pred_path)
        gt = read_mask(gt_path)
        roi = read_mask(fov_by_key[key]) if key in fov_by_key else None
        rec = {"id": key, "ok": True, "error": None, "seconds": 0.0,
               "outputs": {}, "od": None, "warnings": [],
               "metrics": _metrics_dict(pred, gt, roi)}
        records.append(rec)
    if not records:
        print("eval: no prediction/ground-truth pairs found", file=sys.stderr)
        return 1
    manifest = RunManifest(command="eval", config={}, items=tuple(records),
                           aggregates=_aggregate(records), warnings=())
    write_metrics_csv(manifest, args.out)
    agg = manifest.aggregates
    print("mean: " + " ".join(f"{c}={_fmt(agg[c])}" for c in _METRIC_COLS))
    print(f"{len(records)} rows written to {args.out}")
    return 2 if partial else 0


def _layers_from_json(path) -> list[LayerSpec]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise ValueError("architecture file must hold a JSON list")
    layers = []
    for entry in data:
        if isinstance(entry, str):
            entry = {"kind": entry}
        kind = entry["kind"]
        if kind == "conv":
            layers.append(LayerSpec(kind="conv",
                                    kernel=int(entry.get("kernel", 3)),
                                    stride=int(entry.get("stride", 1)),
                                    padding=entry.get("padding", "same"),
                                    out_features=int(entry["filters"])))
        elif kind == "maxpool":
            layers.append(LayerSpec(kind="maxpool",
                                    kernel=int(entry.get("kernel", 2)),
                                    stride=int(entry.get("stride", 2)),
                                    padding="valid"))
        elif kind == "flatten":
            layers.append(LayerSpec(kind="flatten"))
        elif kind == "dense":
            layers.append(LayerSpec(kind="dense",
                                    out_features=int(entry["units"])))
        else:
            raise ValueError(f"unknown layer kind: {kind!r}")
    return layers


def _cmd_dcnn_shapes(args) -> int:
    m = re.fullmatch(r"(\d+)x(\d+)(?:x(\d+))?", args.input)
    if not m:
        print("dcnn-shapes: --input must look like 300x300x3", file=sys.stderr)
        return 1
    h, w = int(m.group(1)), int(m.group(2))
    c = int(m.group(3)) if m.group(3) else 3
    layers = _layers_from_json(args.arch) if args.arch else reference_layers()
    if args.check:
        validate_reference_layout(layers)
    trace = trace_shapes((h, w, c), layers)
    name_w = max(len(r.layer) for r in trace.rows)
    shape_w = max(len(str(r.shape)) for r in trace.rows)
    for r in trace.rows:
        print(f"{r.layer:<{name_w}}  {str(r.shape):<{shape_w}}  {r.params:>12,}")
    print(f"total parameters: {trace.total_params:,}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="retina",
                     description="Classical retinal fundus analysis pipelines")
    sub = parser.add_subparsers(dest="command", required=True)

    for cmd, blurb in (("vessels", "segment blood vessels"),
                       ("optic-disc", "locate the optic disc"),
                       ("exudates", "detect bright lesions")):
        p = sub.add_parser(cmd, help=blurb)
        p.add_argument("--input", help="image file or dataset directory")
        p.add_argument("--layout", choices=("drive", "idrid-seg", "flat"),
                       default="flat")
        p.add_argument("--out", help="output directory")
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one config value (repeatable)")
        p.add_argument("--jobs", type=int, default=1,
                       help="process this many images concurrently")
        p.add_argument("--print-config", action="store_true",
                       help="print the effective configuration")

    p = sub.add_parser("eval", help="score predicted masks against ground truth")
    p.add_argument("--pred", required=True, help="directory of predicted masks")
    p.add_argument("--gt", required=True, help="directory of reference masks")
    p.add_argument("--fov", help="optional directory of field-of-view masks")
    p.add_argument("--out", required=True, help="metrics CSV path")

    p = sub.add_parser("dcnn-shapes", help="print the classifier shape trace")
    p.add_argument("--input", default="300x300x3", help="input size, HxWxC")
    p.add_argument("--arch", help="JSON layer list (default: stock 14-conv stack)")
    p.add_argument("--check", action="store_true",
                   help="validate the stock layout constraints")

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command in ("vessels", "optic-disc", "exudates"):
            return _cmd_pipeline(args.command, args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_dcnn_shapes(args)
    except (OSError, ValueError) as exc:
        print(f"retina {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
