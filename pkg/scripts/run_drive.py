"""Segment the DRIVE test images and score them against the manual
annotations. Expects the standard directory names (images/, 1st_manual/,
mask/) with everything readable as PNG or TIFF; the original GIF
annotations must be converted first, see the README.

    python3 scripts/run_drive.py --root /data/DRIVE/test --out drive_out
"""

import argparse
import os
import sys
from pathlib import Path

from retina.cli import main as cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--root", default=os.environ.get("RETINA_DRIVE_ROOT"),
                    help="DRIVE test split root (or set RETINA_DRIVE_ROOT)")
    ap.add_argument("--out", default="drive_out")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--set", action="append", default=[],
                    metavar="KEY=VALUE", help="config override, repeatable")
    args = ap.parse_args()
    if not args.root:
        print("no dataset root: pass --root or set RETINA_DRIVE_ROOT",
              file=sys.stderr)
        return 1

    out = Path(args.out)
    argv = ["vessels", "--input", args.root, "--layout", "drive",
            "--out", str(out), "--jobs", str(args.jobs)]
    for item in args.set:
        argv += ["--set", item]
    rc = cli(argv)
    if rc != 0:
        return rc
    return cli(["eval", "--pred", str(out),
                "--gt", str(Path(args.root) / "1st_manual"),
                "--fov", str(Path(args.root) / "mask"),
                "--out", str(out / "scores.csv")])


if __name__ == "__main__":
    raise SystemExit(main())
