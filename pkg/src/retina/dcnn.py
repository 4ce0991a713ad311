"""Numeric building blocks of the image classifier: activations, the
binary cross-entropy loss, the Adam update, and layer shape bookkeeping.
No weights, no training loop; everything here is checkable arithmetic."""

from dataclasses import dataclass

import numpy as np

_BCE_EPS = 1e-12


def relu(x):
    """Elementwise max(0, x)."""
    return np.maximum(0.0, np.asarray(x, dtype=np.float64))


def sigmoid(x):
    """Elementwise logistic 1/(1 + exp(-x)), overflow-safe for large |x|."""
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out[0]) if scalar else out


def bce_loss(labels, probs) -> float:
    """Mean binary cross-entropy with probabilities clamped to
    [1e-12, 1 - 1e-12] so the log stays finite at 0 and 1."""
    y = np.asarray(labels, dtype=np.float64).ravel()
    p = np.asarray(probs, dtype=np.float64).ravel()
    if len(y) != len(p) or len(y) == 0:
        raise ValueError("labels and probs must be equal-length and non-empty")
    if np.any((y != 0.0) & (y != 1.0)):
        raise ValueError("labels must be 0 or 1")
    p = np.clip(p, _BCE_EPS, 1.0 - _BCE_EPS)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


@dataclass(frozen=True)
class AdamState:
    """Per-parameter moment estimates and the step counter."""
    t: int
    m: np.ndarray
    v: np.ndarray
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_init(n: int, lr: float = 1e-4, beta1: float = 0.9,
              beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    return AdamState(t=0, m=np.zeros(n), v=np.zeros(n),
                     lr=lr, beta1=beta1, beta2=beta2, eps=eps)


def adam_step(params, grads, state: AdamState):
    """One Adam update. Returns (new params, new state); nothing is mutated.

    m and v are the usual exponential moment estimates, bias-corrected by
    the step count; eps sits outside the square root.
    """
    p = np.asarray(params, dtype=np.float64)
    g = np.asarray(grads, dtype=np.float64)
    if p.shape != g.shape or p.shape != state.m.shape:
        raise ValueError("params, grads, and state must have matching shapes")
    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * g
    v = state.beta2 * state.v + (1.0 - state.beta2) * (g * g)
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_p = p - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return new_p, AdamState(t=t, m=m, v=v, lr=state.lr, beta1=state.beta1,
                            beta2=state.beta2, eps=state.eps)


@dataclass(frozen=True)
class LayerSpec:
    """One layer of the shape trace. kind is conv, maxpool, flatten, or
    dense; kernel/stride/padding only matter for conv and maxpool;
    out_features is the filter count (conv) or unit count (dense)."""
    kind: str
    kernel: int = 3
    stride: int = 1
    padding: str = "same"
    out_features: int | None = None


@dataclass(frozen=True)
class TraceRow:
    layer: str
    shape: tuple
    params: int


@dataclass(frozen=True)
class ShapeTrace:
    rows: tuple
    total_params: int


def conv_output_size(n: int, k: int, stride: int, pad: int) -> int:
    """floor((n + 2*pad - k) / stride) + 1; must stay positive."""
    if n < 1 or k < 1 or stride < 1 or pad < 0:
        raise ValueError("bad size arguments")
    out = (n + 2 * pad - k) // stride + 1
    if out < 1:
        raise ValueError(f"layer output collapses to {out} (input {n}, kernel {k})")
    return out


def trace_shapes(input_shape: tuple, layers) -> ShapeTrace:
    """Walk the layer list, applying the output-size formula per layer.

    input_shape is (h, w, c). An empty layer list traces to the input shape
    unchanged. Raises ValueError when a spatial dimension collapses or when
    a dense layer appears before flattening.
    """
    layers = list(layers)
    h, w, c = input_shape
    if h < 1 or w < 1 or c < 1:
        raise ValueError("input dimensions must be >= 1")
    shape: tuple = (h, w, c)
    rows = [TraceRow("input", shape, 0)]
    for spec in layers:
        if spec.kind == "conv":
            if len(shape) != 3:
                raise ValueError("conv after flatten is invalid")
            if spec.out_features is None:
                raise ValueError("conv needs out_features")
            pad = spec.kernel // 2 if spec.padding == "same" else 0
            oh = conv_output_size(shape[0], spec.kernel, spec.stride, pad)
            ow = conv_output_size(shape[1], spec.kernel, spec.stride, pad)
            params = (spec.kernel * spec.kernel * shape[2] + 1) * spec.out_features
            shape = (oh, ow, spec.out_features)
            name = f"conv{spec.kernel}x{spec.kernel}-{spec.out_features}"
        elif spec.kind == "maxpool":
            if len(shape) != 3:
                raise ValueError("maxpool after flatten is invalid")
            oh = conv_output_size(shape[0], spec.kernel, spec.stride, 0)
            ow = conv_output_size(shape[1], spec.kernel, spec.stride, 0)
            params = 0
            shape = (oh, ow, shape[2])
            name = f"maxpool{spec.kernel}x{spec.kernel}"
        elif spec.kind == "flatten":
            if len(shape) != 3:
                raise ValueError("flatten applied twice")
            params = 0
            shape = (shape[0] * shape[1] * shape[2],)
            name = "flatten"
        elif spec.kind == "dense":
            if len(shape) != 1:
                raise ValueError("dense requires a flattened input")
            if spec.out_features is None:
                raise ValueError("dense needs out_features")
            params = (shape[0] + 1) * spec.out_features
            shape = (spec.out_features,)
            name = f"dense-{spec.out_features}"
        else:
            raise ValueError(f"unknown layer kind: {spec.kind!r}")
        rows.append(TraceRow(name, shape, params))
    return ShapeTrace(rows=tuple(rows), total_params=sum(r.params for r in rows))


def reference_layers(stage_convs=(2, 4, 4, 4),
                     stage_filters=(64, 128, 256, 512)) -> list:
    """The stock classifier stack: conv stages separated by 2x2 max pools,
    then flatten, a 1024-unit layer, and a single output unit."""
    if len(stage_convs) != len(stage_filters):
        raise ValueError("stage lists must align")
    layers = []
    for i, (reps, filters) in enumerate(zip(stage_convs, stage_filters)):
        if i > 0:
            layers.append(LayerSpec(kind="maxpool", kernel=2, stride=2))
        layers.extend(LayerSpec(kind="conv", out_features=filters)
                      for _ in range(reps))
    layers.append(LayerSpec(kind="flatten"))
    layers.append(LayerSpec(kind="dense", out_features=1024))
    layers.append(LayerSpec(kind="dense", out_features=1))
    return layers


def validate_reference_layout(layers) -> None:
    """Assert the stock layout: 14 convs of 3x3 in 4 stages split by three
    2x2/stride-2 pools, ending in flatten, dense-1024, dense-1."""
    layers = list(layers)
    convs = [l for l in layers if l.kind == "conv"]
    pools = [l for l in layers if l.kind == "maxpool"]
    denses = [l for l in layers if l.kind == "dense"]
    if len(convs) != 14:
        raise ValueError(f"expected 14 conv layers, found {len(convs)}")
    if any(l.kernel != 3 for l in convs):
        raise ValueError("all conv kernels must be 3x3")
    if len(pools) != 3 or any(l.kernel != 2 or l.stride != 2 for l in pools):
        raise ValueError("expected three 2x2 stride-2 pools")
    if [l.out_features for l in denses] != [1024, 1]:
        raise ValueError("head must be dense-1024 then dense-1")
    # pools sit strictly between conv stages, never first or last
    kinds = [l.kind for l in layers if l.kind in ("conv", "maxpool")]
    if kinds[0] != "conv" or kinds[-1] != "conv":
        raise ValueError("pools must sit between conv stages")
    stages = 1 + sum(1 for a, b in zip(kinds, kinds[1:])
                     if a == "maxpool" and b == "conv")
    if stages != 4:
        raise ValueError(f"expected 4 conv stages, found {stages}")
