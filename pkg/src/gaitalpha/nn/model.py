"""Parameter containers for the stance-weight regression network.

The network maps a standardized window of joint kinematics, shape
``(window_len, N_CHANNELS)``, to a single weight-distribution value in (0,1):

    window -> [gaussian noise, train only] -> LSTM(LSTM_UNITS)
           -> dense(hidden, sigmoid) -> dense(1, sigmoid) -> alpha

All parameters are float64. The LSTM packs its four gates into one axis in
the fixed order [input, forget, cell-candidate, output].
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigError, DataIntegrityError

N_CHANNELS = 5
LSTM_UNITS = 20
GATE_ORDER = ("input", "forget", "cell", "output")

CHANNEL_NAMES = ("theta_l_hip", "theta_r_hip", "theta_l_knee", "theta_r_knee", "theta_b")


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if out is arr:
        out = out.copy()
    out.flags.writeable = False
    return out


def _require_finite(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise DataIntegrityError(f"{name} contains non-finite values")


@dataclass(frozen=True)
class LstmParams:
    """Input kernel (n_in, 4*units), recurrent kernel (units, 4*units),
    bias (4*units,), gates packed in GATE_ORDER."""

    w_in: np.ndarray
    u_rec: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w_in", _freeze(self.w_in))
        object.__setattr__(self, "u_rec", _freeze(self.u_rec))
        object.__setattr__(self, "bias", _freeze(self.bias))
        if self.w_in.ndim != 2 or self.u_rec.ndim != 2 or self.bias.ndim != 1:
            raise ConfigError("lstm parameter arrays have wrong rank")
        n4 = self.w_in.shape[1]
        if n4 % 4 != 0:
            raise ConfigError(f"gate axis must be a multiple of 4, got {n4}")
        if self.u_rec.shape != (n4 // 4, n4) or self.bias.shape != (n4,):
            raise ConfigError(
                f"inconsistent lstm shapes: w_in {self.w_in.shape}, "
                f"u_rec {self.u_rec.shape}, bias {self.bias.shape}"
            )
        for name in ("w_in", "u_rec", "bias"):
            _require_finite(f"lstm.{name}", getattr(self, name))

    @property
    def n_in(self) -> int:
        return self.w_in.shape[0]

    @property
    def units(self) -> int:
        return self.u_rec.shape[0]


@dataclass(frozen=True)
class DenseParams:
    """One fully connected layer; this model only ever uses sigmoid output."""

    weight: np.ndarray
    bias: np.ndarray
    activation: str = "sigmoid"

    def __post_init__(self):
        object.__setattr__(self, "weight", _freeze(self.weight))
        object.__setattr__(self, "bias", _freeze(self.bias))
        if self.activation != "sigmoid":
            raise ConfigError(f"unsupported dense activation {self.activation!r}")
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[1],):
            raise ConfigError(
                f"inconsistent dense shapes: weight {self.weight.shape}, bias {self.bias.shape}"
            )
        _require_finite("dense.weight", self.weight)
        _require_finite("dense.bias", self.bias)

    @property
    def n_in(self) -> int:
        return self.weight.shape[0]

    @property
    def n_out(self) -> int:
        return self.weight.shape[1]


@dataclass(frozen=True)
class StanceModel:
    """Complete, immutable model: learnable parameters plus the per-channel
    standardization statistics it was trained with.

    ``window_len`` is either 1 (instantaneous posture) or the number of
    samples covering ~300 ms at ``sample_rate_hz``.
    """

    lstm: LstmParams
    dense_hidden: DenseParams
    dense_out: DenseParams
    channel_mean: np.ndarray
    channel_std: np.ndarray
    noise_sigma: float = 0.01
    sample_rate_hz: float = 333.0
    window_len: int = 99

    def __post_init__(self):
        object.__setattr__(self, "channel_mean", _freeze(self.channel_mean))
        object.__setattr__(self, "channel_std", _freeze(self.channel_std))
        n_in = self.lstm.n_in
        if self.channel_mean.shape != (n_in,) or self.channel_std.shape != (n_in,):
            raise ConfigError("standardization stats must match the input width")
        _require_finite("channel_mean", self.channel_mean)
        _require_finite("channel_std", self.channel_std)
        if np.any(self.channel_std <= 0.0):
            raise ConfigError("channel_std entries must be strictly positive")
        if self.dense_hidden.n_in != self.lstm.units:
            raise ConfigError("dense_hidden input width must equal lstm units")
        if self.dense_out.n_in != self.dense_hidden.n_out or self.dense_out.n_out != 1:
            raise ConfigError("dense_out must map hidden width to a single output")
        if self.noise_sigma < 0.0:
            raise ConfigError("noise_sigma must be >= 0")
        if self.sample_rate_hz <= 0.0:
            raise ConfigError("sample_rate_hz must be positive")
        if self.window_len < 1:
            raise ConfigError("window_len must be >= 1")
        # A window either degenerates to a single posture or spans ~300 ms.
        if self.window_len != 1:
            dt = 1.0 / self.sample_rate_hz
            if abs(self.window_len * dt - 0.3) > dt:
                raise ConfigError(
                    f"window_len {self.window_len} at {self.sample_rate_hz} Hz "
                    "does not cover ~300 ms"
                )

    @property
    def n_channels(self) -> int:
        return self.lstm.n_in

    @property
    def hidden_units(self) -> int:
        return self.dense_hidden.n_out

    @property
    def n_params(self) -> int:
        return sum(a.size for a in _param_arrays(self))

    def with_stats(self, mean: np.ndarray, std: np.ndarray) -> "StanceModel":
        return replace(self, channel_mean=mean, channel_std=std)


@dataclass(frozen=True)
class Gradients:
    """Loss gradients, one array per learnable parameter array."""

    w_in: np.ndarray
    u_rec: np.ndarray
    bias: np.ndarray
    w_hidden: np.ndarray
    b_hidden: np.ndarray
    w_out: np.ndarray
    b_out: np.ndarray

    def to_vector(self) -> np.ndarray:
        return np.concatenate(
            [
                self.w_in.ravel(),
                self.u_rec.ravel(),
                self.bias.ravel(),
                self.w_hidden.ravel(),
                self.b_hidden.ravel(),
                self.w_out.ravel(),
                self.b_out.ravel(),
            ]
        )

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(a))) if a.size else 0.0 for a in self._arrays())

    def _arrays(self):
        return (self.w_in, self.u_rec, self.bias, self.w_hidden, self.b_hidden, self.w_out, self.b_out)


def _param_arrays(model: StanceModel):
    """Learnable arrays in the fixed flattening order."""
    return (
        model.lstm.w_in,
        model.lstm.u_rec,
        model.lstm.bias,
        model.dense_hidden.weight,
        model.dense_hidden.bias,
        model.dense_out.weight,
        model.dense_out.bias,
    )


def flatten_params(model: StanceModel) -> np.ndarray:
    """All learnable parameters as one float64 vector (fixed order:
    lstm w_in, u_rec, bias, then hidden weight/bias, then output weight/bias).
    Standardization statistics and noise_sigma are not learnable."""
    return np.concatenate([a.ravel() for a in _param_arrays(model)])


def unflatten_params(template: StanceModel, vec: np.ndarray) -> StanceModel:
    """Rebuild a model from ``vec`` using ``template`` for all shapes and
    non-learnable fields."""
    if vec.shape != (template.n_params,):
        raise ConfigError(f"parameter vector has shape {vec.shape}, expected ({template.n_params},)")
    parts = []
    offset = 0
    for arr in _param_arrays(template):
        parts.append(vec[offset : offset + arr.size].reshape(arr.shape))
        offset += arr.size
    return replace(
        template,
        lstm=LstmParams(w_in=parts[0], u_rec=parts[1], bias=parts[2]),
        dense_hidden=DenseParams(weight=parts[3], bias=parts[4]),
        dense_out=DenseParams(weight=parts[5], bias=parts[6]),
    )


def _glorot(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    limit = np.sqrt(6.0 / (shape[0] + shape[1]))
    return rng.uniform(-limit, limit, size=shape)


def init_stance_model(
    seed: int,
    hidden_units: int = 10,
    window_len: int = 99,
    noise_sigma: float = 0.01,
    sample_rate_hz: float = 333.0,
    channel_mean: np.ndarray | None = None,
    channel_std: np.ndarray | None = None,
    n_channels: int = N_CHANNELS,
    lstm_units: int = LSTM_UNITS,
) -> StanceModel:
    """Fresh model: Glorot-uniform kernels, zero biases, forget-gate bias 1.0."""
    if hidden_units < 1:
        raise ConfigError("hidden_units must be >= 1")
    rng = np.random.default_rng(seed)
    n4 = 4 * lstm_units
    bias = np.zeros(n4)
    bias[lstm_units : 2 * lstm_units] = 1.0
    lstm = LstmParams(
        w_in=_glorot(rng, (n_channels, n4)),
        u_rec=_glorot(rng, (lstm_units, n4)),
        bias=bias,
    )
    dense_hidden = DenseParams(weight=_glorot(rng, (lstm_units, hidden_units)), bias=np.zeros(hidden_units))
    dense_out = DenseParams(weight=_glorot(rng, (hidden_units, 1)), bias=np.zeros(1))
    if channel_mean is None:
        channel_mean = np.zeros(n_channels)
    if channel_std is None:
        channel_std = np.ones(n_channels)
    return StanceModel(
        lstm=lstm,
        dense_hidden=dense_hidden,
        dense_out=dense_out,
        channel_mean=channel_mean,
        channel_std=channel_std,
        noise_sigma=noise_sigma,
        sample_rate_hz=sample_rate_hz,
        window_len=window_len,
    )
