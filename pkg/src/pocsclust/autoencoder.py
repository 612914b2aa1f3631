"""Dense mirrored autoencoder trained with plain backprop and Adam.

The default network squeezes 784-pixel rows through 128-64-32 units and
mirrors back out, relu throughout except a sigmoid output so reconstructions
stay in [0, 1]. Everything is explicit numpy: forward caches, analytic
gradients, and the bias-corrected Adam update.
"""

import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .data_io import EmbeddingDataset
from .errors import DataFormatError, NumericError, ValidationError

DEFAULT_DIMS = (784, 128, 64, 32)
CHECKPOINT_FORMAT = "dense-ae-v1"

RELU = "relu"
SIGMOID = "sigmoid"
IDENTITY = "identity"

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
DEFAULT_LR = 0.001


@dataclass
class DenseLayer:
    """Affine map x @ W + b followed by a fixed nonlinearity."""

    W: np.ndarray
    b: np.ndarray
    activation: str

    @property
    def param_count(self) -> int:
        return self.W.size + self.b.size


@dataclass
class AeModel:
    """Encoder and decoder stacks. The last encoder layer's output is the code."""

    encoder: List[DenseLayer]
    decoder: List[DenseLayer]

    @property
    def input_dim(self) -> int:
        return self.encoder[0].W.shape[0]

    @property
    def code_dim(self) -> int:
        return self.encoder[-1].W.shape[1]

    @property
    def encoder_param_count(self) -> int:
        return sum(l.param_count for l in self.encoder)

    @property
    def decoder_param_count(self) -> int:
        return sum(l.param_count for l in self.decoder)

    @property
    def param_count(self) -> int:
        return self.encoder_param_count + self.decoder_param_count

    @property
    def layers(self) -> List[DenseLayer]:
        return self.encoder + self.decoder


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 256
    rng_seed: Optional[int] = None
    loss: str = "mse"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.loss != "mse":
            raise ValidationError(f"only 'mse' loss is supported, got {self.loss!r}")


def init_model(seed=None, dims=DEFAULT_DIMS) -> AeModel:
    """Glorot-uniform weights, zero biases. dims lists the encoder widths
    from input to code; the decoder mirrors them."""
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ValidationError(f"dims must be >= 2 positive widths, got {dims}")
    rng = np.random.default_rng(seed)

    def glorot(fan_in, fan_out):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-limit, limit, size=(fan_in, fan_out))

    encoder = []
    for a, b in zip(dims[:-1], dims[1:]):
        encoder.append(DenseLayer(glorot(a, b), np.zeros(b), RELU))
    rev = dims[::-1]
    decoder = []
    for i, (a, b) in enumerate(zip(rev[:-1], rev[1:])):
        act = SIGMOID if i == len(rev) - 2 else RELU
        decoder.append(DenseLayer(glorot(a, b), np.zeros(b), act))
    return AeModel(encoder=encoder, decoder=decoder)


def _activate(z, kind):
    if kind == RELU:
        return np.maximum(z, 0.0)
    if kind == SIGMOID:
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    if kind == IDENTITY:
        return z
    raise ValidationError(f"unknown activation {kind!r}")


def _activation_grad(a, kind):
    # derivative expressed through the activation value itself
    if kind == RELU:
        return (a > 0.0).astype(np.float64)
    if kind == SIGMOID:
        return a * (1.0 - a)
    if kind == IDENTITY:
        return np.ones_like(a)
    raise ValidationError(f"unknown activation {kind!r}")


def _as_batch(model: AeModel, batch):
    X = np.ascontiguousarray(batch, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise ValidationError(
            f"batch must be (n, {model.input_dim}), got shape {X.shape}"
        )
    return X


def forward(model: AeModel, batch):
    """(code, reconstruction) for a batch of rows."""
    X = _as_batch(model, batch)
    a = X
    for layer in model.encoder:
        a = _activate(a @ layer.W + layer.b, layer.activation)
    code = a
    for layer in model.decoder:
        a = _activate(a @ layer.W + layer.b, layer.activation)
    return code, a


def loss_and_gradients(model: AeModel, batch):
    """Mean squared reconstruction error over every entry of the batch and
    its gradient for each layer's W and b, ordered encoder then decoder."""
    X = _as_batch(model, batch)
    layers = model.layers
    acts = [X]
    a = X
    for layer in layers:
        a = _activate(a @ layer.W + layer.b, layer.activation)
        acts.append(a)
    recon = acts[-1]
    diff = recon - X
    loss = float(np.mean(diff * diff))
    grads = [None] * len(layers)
    delta = (2.0 / diff.size) * diff
    for i in range(len(layers) - 1, -1, -1):
        delta = delta * _activation_grad(acts[i + 1], layers[i].activation)
        gW = acts[i].T @ delta
        gb = delta.sum(axis=0)
        grads[i] = (gW, gb)
        if i > 0:
            delta = delta @ layers[i].W.T
    return loss, grads


@dataclass
class AdamState:
    """First and second moment accumulators, one pair per parameter array."""

    m: list = field(default_factory=list)
    v: list = field(default_factory=list)
    t: int = 0

    @classmethod
    def for_model(cls, model: AeModel) -> "AdamState":
        m, v = [], []
        for layer in model.layers:
            m.extend([np.zeros_like(layer.W), np.zeros_like(layer.b)])
            v.extend([np.zeros_like(layer.W), np.zeros_like(layer.b)])
        return cls(m=m, v=v, t=0)


def adam_step(state: AdamState, params, grads, lr: float = DEFAULT_LR) -> None:
    """One bias-corrected Adam update, applied to params in place."""
    if len(params) != len(state.m) or len(params) != len(grads):
        raise ValidationError("params, grads, and Adam state sizes disagree")
    state.t += 1
    b1t = 1.0 - ADAM_BETA1 ** state.t
    b2t = 1.0 - ADAM_BETA2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= ADAM_BETA1
        m += (1.0 - ADAM_BETA1) * g
        v *= ADAM_BETA2
        v += (1.0 - ADAM_BETA2) * (g * g)
        p -= lr * (m / b1t) / (np.sqrt(v / b2t) + ADAM_EPS)


def _flat_params(model: AeModel):
    out = []
    for layer in model.layers:
        out.extend([layer.W, layer.b])
    return out


def train(model: AeModel, dataset, config: TrainConfig, *, lr: float = DEFAULT_LR):
    """Minibatch training with a fresh shuffle every epoch. Returns the model
    and one mean loss per epoch (weighted by batch size, so it is the exact
    epoch mean)."""
    X = dataset.features if isinstance(dataset, EmbeddingDataset) else np.asarray(dataset)
    X = _as_batch(model, X)
    if not (np.isfinite(lr) and lr >= 0.0):
        raise ValidationError(f"lr must be finite and >= 0, got {lr}")
    rng = np.random.default_rng(config.rng_seed)
    state = AdamState.for_model(model)
    params = _flat_params(model)
    n = X.shape[0]
    curve = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = X[order[start : start + config.batch_size]]
            loss, grads = loss_and_gradients(model, batch)
            flat_grads = []
            for gW, gb in grads:
                flat_grads.extend([gW, gb])
            adam_step(state, params, flat_grads, lr=lr)
            total += loss * batch.shape[0]
        epoch_loss = total / n
        if not np.isfinite(epoch_loss):
            raise NumericError(f"training diverged: epoch loss {epoch_loss}")
        curve.append(epoch_loss)
    return model, curve


def embed(model: AeModel, dataset: EmbeddingDataset, batch_size: int = 1024) -> EmbeddingDataset:
    """Encode a dataset into code space, carrying labels through."""
    codes = np.empty((dataset.n, model.code_dim), dtype=np.float64)
    for start in range(0, dataset.n, batch_size):
        stop = min(start + batch_size, dataset.n)
        code, _ = forward(model, dataset.features[start:stop])
        codes[start:stop] = code
    return EmbeddingDataset(codes, dataset.labels, name=f"{dataset.name}-code{model.code_dim}")


def save_checkpoint(path, model: AeModel) -> None:
    """One JSON manifest line, then the raw little-endian float64 parameter
    blob in layer order (W then b per layer, encoder first)."""
    manifest = {
        "format": CHECKPOINT_FORMAT,
        "dims": [model.input_dim] + [l.W.shape[1] for l in model.encoder],
        "activations": [l.activation for l in model.layers],
        "dtype": "<f8",
        "param_count": model.param_count,
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(manifest, sort_keys=True).encode("ascii") + b"\n")
        for layer in model.layers:
            fh.write(np.ascontiguousarray(layer.W, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(layer.b, dtype="<f8").tobytes())


def load_checkpoint(path) -> AeModel:
    """Inverse of save_checkpoint; validates the manifest and blob length."""
    with open(path, "rb") as fh:
        line = fh.readline()
        blob = fh.read()
    try:
        manifest = json.loads(line.decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"{path}: bad manifest line: {exc}") from None
    if manifest.get("format") != CHECKPOINT_FORMAT:
        raise DataFormatError(f"{path}: unknown format {manifest.get('format')!r}")
    dims = manifest.get("dims")
    if (
        not isinstance(dims, list)
        or len(dims) < 2
        or any(not isinstance(d, int) or d < 1 for d in dims)
    ):
        raise DataFormatError(f"{path}: bad dims {dims!r}")
    model = init_model(seed=0, dims=tuple(dims))
    expect_acts = [l.activation for l in model.layers]
    if manifest.get("activations") != expect_acts:
        raise DataFormatError(f"{path}: unsupported activation list")
    if manifest.get("dtype") != "<f8":
        raise DataFormatError(f"{path}: unsupported dtype {manifest.get('dtype')!r}")
    count = model.param_count
    if manifest.get("param_count") != count:
        raise DataFormatError(
            f"{path}: manifest param_count {manifest.get('param_count')} does not match dims ({count})"
        )
    if len(blob) != 8 * count:
        raise DataFormatError(f"{path}: expected {8 * count} blob bytes, got {len(blob)}")
    flat = np.frombuffer(blob, dtype="<f8")
    at = 0
    for layer in model.layers:
        w = layer.W.size
        layer.W = flat[at : at + w].reshape(layer.W.shape).copy()
        at += w
        b = layer.b.size
        layer.b = flat[at : at + b].copy()
        at += b
    return model
