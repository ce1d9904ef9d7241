"""Versioned, checksummed binary model files.

Layout (all integers and floats little-endian):

    magic           8 bytes  b"GAITMODL"
    version         u32      currently 1
    input_dim       u32
    lstm_units      u32
    hidden_units    u32
    window_len      u32
    sample_rate_hz  f64
    noise_sigma     f64
    channel_mean    f64 * input_dim
    channel_std     f64 * input_dim
    w_in            f64 * input_dim * 4*lstm_units      (row-major)
    u_rec           f64 * lstm_units * 4*lstm_units
    bias            f64 * 4*lstm_units
    w_hidden        f64 * lstm_units * hidden_units
    b_hidden        f64 * hidden_units
    w_out           f64 * hidden_units * 1
    b_out           f64
    crc32           u32      over every preceding byte

The format is self-describing (shapes derive from the header) and platform
independent. The checksum is verified before any field is interpreted, so a
corrupted file can never load as a silently wrong model.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from ..errors import (
    ModelChecksumError,
    ModelFormatError,
    ModelTruncatedError,
    ModelVersionError,
)
from ..nn.model import DenseParams, LstmParams, StanceModel

MAGIC = b"GAITMODL"
FORMAT_VERSION = 1
_FIXED = struct.Struct("<4I2d")  # dims + sample rate + noise sigma
_MIN_FILE = len(MAGIC) + 4 + _FIXED.size + 4

__all__ = ["MAGIC", "FORMAT_VERSION", "save_model", "load_model"]


def _le_bytes(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


def save_model(model: StanceModel, path: str) -> None:
    parts = [
        MAGIC,
        struct.pack("<I", FORMAT_VERSION),
        _FIXED.pack(
            model.n_channels,
            model.lstm.units,
            model.hidden_units,
            model.window_len,
            model.sample_rate_hz,
            model.noise_sigma,
        ),
        _le_bytes(model.channel_mean),
        _le_bytes(model.channel_std),
        _le_bytes(model.lstm.w_in),
        _le_bytes(model.lstm.u_rec),
        _le_bytes(model.lstm.bias),
        _le_bytes(model.dense_hidden.weight),
        _le_bytes(model.dense_hidden.bias),
        _le_bytes(model.dense_out.weight),
        _le_bytes(model.dense_out.bias),
    ]
    blob = b"".join(parts)
    blob += struct.pack("<I", zlib.crc32(blob) & 0xFFFFFFFF)
    with open(path, "wb") as fh:
        fh.write(blob)


def load_model(path: str) -> StanceModel:
    """Read a model file; every single-byte corruption raises a distinct,
    explicit error (never a silently wrong model)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _MIN_FILE:
        raise ModelTruncatedError(f"{path}: {len(blob)} bytes is shorter than any valid model file")
    if blob[: len(MAGIC)] != MAGIC:
        raise ModelFormatError(f"{path}: not a model file (bad magic)")
    (stored_crc,) = struct.unpack("<I", blob[-4:])
    actual_crc = zlib.crc32(blob[:-4]) & 0xFFFFFFFF
    if stored_crc != actual_crc:
        raise ModelChecksumError(
            f"{path}: checksum mismatch (stored {stored_crc:#010x}, computed {actual_crc:#010x})"
        )
    offset = len(MAGIC)
    (version,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"{path}: format version {version}, supported: {FORMAT_VERSION}")
    n_in, units, hidden, window_len, rate, sigma = _FIXED.unpack_from(blob, offset)
    offset += _FIXED.size
    n4 = 4 * units
    counts = [n_in, n_in, n_in * n4, units * n4, n4, units * hidden, hidden, hidden, 1]
    expected = offset + 8 * sum(counts) + 4
    if len(blob) != expected:
        raise ModelTruncatedError(f"{path}: {len(blob)} bytes, header demands {expected}")
    arrays = []
    for count in counts:
        arrays.append(np.frombuffer(blob, dtype="<f8", count=count, offset=offset).astype(np.float64))
        offset += 8 * count
    mean, std, w_in, u_rec, bias, w_h, b_h, w_o, b_o = arrays
    return StanceModel(
        lstm=LstmParams(
            w_in=w_in.reshape(n_in, n4),
            u_rec=u_rec.reshape(units, n4),
            bias=bias,
        ),
        dense_hidden=DenseParams(weight=w_h.reshape(units, hidden), bias=b_h),
        dense_out=DenseParams(weight=w_o.reshape(hidden, 1), bias=b_o),
        channel_mean=mean,
        channel_std=std,
        noise_sigma=sigma,
        sample_rate_hz=rate,
        window_len=window_len,
    )
