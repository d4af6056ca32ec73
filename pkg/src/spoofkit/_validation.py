"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np

from .audio import AudioBuffer
from .exceptions import RateMismatch

GENUINE = "genuine"
FAKE = "fake"


def as_audio(x, sample_rate: int) -> AudioBuffer:
    if isinstance(x, AudioBuffer):
        if x.sample_rate != sample_rate:
            raise RateMismatch(f"expected {sample_rate} Hz audio, got {x.sample_rate} Hz")
        return x
    return AudioBuffer(np.asarray(x, dtype=np.float64), sample_rate)


def as_audio_list(X, sample_rate: int) -> list[AudioBuffer]:
    if isinstance(X, AudioBuffer) or (isinstance(X, np.ndarray) and X.ndim == 1):
        raise ValueError("expected a sequence of waveforms, got a single waveform")
    return [as_audio(x, sample_rate) for x in X]


def same_rate(a: AudioBuffer, b: AudioBuffer) -> None:
    if a.sample_rate != b.sample_rate:
        raise RateMismatch(f"sample rates differ: {a.sample_rate} Hz vs {b.sample_rate} Hz")


def genuine_mask(y) -> np.ndarray:
    """Boolean mask, True for genuine.

    Accepts 'genuine'/'fake' strings, booleans, or 1 (genuine) / 0 (fake).
    """
    y = np.asarray(y)
    if y.dtype.kind in "USO":
        labels = np.char.lower(y.astype(str))
        bad = ~np.isin(labels, [GENUINE, FAKE])
        if bad.any():
            raise ValueError(f"unknown label {y[bad][0]!r}; expected 'genuine' or 'fake'")
        return labels == GENUINE
    if y.dtype.kind == "b":
        return y.copy()
    if not np.all(np.isin(y, [0, 1])):
        raise ValueError("numeric labels must be 1 (genuine) or 0 (fake)")
    return y == 1
