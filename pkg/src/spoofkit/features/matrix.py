"""Feature matrix container and the ADSF binary dump format.

ADSF layout (little-endian)::

    0..3   b"ADSF"
    4      version (1)
    5      kind code
    6..7   reserved, zero
    8..11  frames (uint32)
    12..15 dims (uint32)
    16..   frames*dims float32 values, row-major
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import numpy as np

from ..exceptions import BadMagic, ShapeMismatch, SpoofkitError

MAGIC = b"ADSF"
VERSION = 1
HEADER = struct.Struct("<4sBBHII")


class FeatureKind(IntEnum):
    LogMag = 0
    Phase = 1
    LogFbank = 2
    Mfcc = 3
    LogCqt = 4
    Mrp = 5

    @classmethod
    def parse(cls, value) -> "FeatureKind":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            for kind in cls:
                if kind.name.lower() == value.lower():
                    return kind
            raise ValueError(f"unknown feature kind {value!r}")
        return cls(int(value))


def config_digest(**params) -> str:
    """Stable short token identifying an extraction configuration."""
    text = ";".join(f"{k}={params[k]!r}" for k in sorted(params))
    return hashlib.sha1(text.encode()).hexdigest()[:16]


@dataclass(frozen=True, eq=False, repr=False)
class FeatureMatrix:
    """``frames x dims`` float32 matrix tagged with its kind.

    Values are held in float32, the dump precision, so that a dump/load
    round trip is bit-exact for every matrix this class can hold.
    """

    kind: FeatureKind
    values: np.ndarray
    config_digest: str = ""

    def __init__(self, kind, values, config_digest: str = ""):
        v = np.array(values, dtype=np.float32)
        if v.ndim != 2:
            raise ShapeMismatch(f"feature values must be 2-D, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("feature values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "kind", FeatureKind.parse(kind))
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "config_digest", config_digest)

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]

    def __repr__(self) -> str:
        return f"FeatureMatrix({self.kind.name}, {self.frames}x{self.dims})"


def dump_features(f: FeatureMatrix, path) -> None:
    header = HEADER.pack(MAGIC, VERSION, int(f.kind), 0, f.frames, f.dims)
    body = np.ascontiguousarray(f.values, dtype="<f4").tobytes()
    try:
        Path(path).write_bytes(header + body)
    except OSError as exc:
        raise SpoofkitError(f"could not write {path}: {exc}") from exc


def load_features(path) -> FeatureMatrix:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise SpoofkitError(f"could not read {path}: {exc}") from exc
    if len(data) < HEADER.size:
        raise ShapeMismatch(f"{path}: file shorter than the ADSF header")
    magic, version, kind, reserved, frames, dims = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise BadMagic(f"{path}: unsupported ADSF version {version}")
    expected = HEADER.size + 4 * frames * dims
    if len(data) != expected:
        raise ShapeMismatch(f"{path}: {len(data)} bytes, header implies {expected}")
    values = np.frombuffer(data, dtype="<f4", offset=HEADER.size).reshape(frames, dims)
    return FeatureMatrix(FeatureKind(kind), values, "")
