"""Mono PCM16 audio: loading, saving and duration normalisation."""

from __future__ import annotations

import wave
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Union

import numpy as np

from .exceptions import EmptyAudio, MissingFile, NotWav, SpoofkitError, UnsupportedFormat

DEFAULT_SAMPLE_RATE = 16000

PathType = Union[str, PathLike]


@dataclass(frozen=True, eq=False, repr=False)
class AudioBuffer:
    """Immutable mono signal with its sample rate.

    Samples are stored as a read-only float64 array. Constructing with
    ``clamp=True`` clips every sample into [-1, 1].
    """

    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __init__(self, samples, sample_rate: int = DEFAULT_SAMPLE_RATE, clamp: bool = False):
        x = np.array(samples, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(x)):
            raise ValueError("audio samples must be finite")
        if clamp:
            np.clip(x, -1.0, 1.0, out=x)
        if int(sample_rate) != sample_rate or sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {sample_rate!r}")
        x.flags.writeable = False
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate", int(sample_rate))

    def __repr__(self) -> str:
        return f"AudioBuffer(n={len(self)}, sample_rate={self.sample_rate})"

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def with_samples(self, samples, clamp: bool = False) -> "AudioBuffer":
        return AudioBuffer(samples, self.sample_rate, clamp=clamp)


@dataclass(frozen=True)
class FixedSeconds:
    """Crop or repeat-tile to exactly ``target_s`` seconds."""

    target_s: float

    def __post_init__(self):
        if not self.target_s > 0:
            raise ValueError("target_s must be > 0")


@dataclass(frozen=True)
class CapSeconds:
    """Keep at most ``max_s`` seconds; shorter inputs pass through."""

    max_s: float

    def __post_init__(self):
        if not self.max_s > 0:
            raise ValueError("max_s must be > 0")


TrimMode = Union[FixedSeconds, CapSeconds]


def load_wav(path: PathType, require_rate: int | None = None) -> AudioBuffer:
    """Read a mono 16-bit PCM RIFF/WAVE file.

    Integer samples are mapped to floats by dividing by 32768, so -32768
    becomes exactly -1.0.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    with open(path, "rb") as fh:
        head = fh.read(12)
    if len(head) < 12 or head[:4] != b"RIFF" or head[8:12] != b"WAVE":
        raise NotWav(f"{path}: missing RIFF/WAVE magic")
    try:
        with wave.open(str(path), "rb") as wf:
            n_channels = wf.getnchannels()
            width = wf.getsampwidth()
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        raise UnsupportedFormat(f"{path}: {exc}") from exc
    except EOFError as exc:
        raise NotWav(f"{path}: truncated header") from exc
    if n_channels != 1:
        raise UnsupportedFormat(f"{path}: {n_channels} channels, expected mono")
    if width != 2:
        raise UnsupportedFormat(f"{path}: {8 * width}-bit samples, expected 16-bit PCM")
    if require_rate is not None and rate != require_rate:
        raise UnsupportedFormat(f"{path}: sample rate {rate}, expected {require_rate}")
    ints = np.frombuffer(raw, dtype="<i2")
    return AudioBuffer(ints.astype(np.float64) / 32768.0, rate)


def _to_pcm16(samples: np.ndarray) -> np.ndarray:
    # scale by 32768 (matching the loader) so the round trip stays within one LSB;
    # +1.0 saturates to 32767
    y = np.clip(samples, -1.0, 1.0) * 32768.0
    y = np.sign(y) * np.floor(np.abs(y) + 0.5)
    return np.clip(y, -32768, 32767).astype("<i2")


def save_wav(audio: AudioBuffer, path: PathType) -> None:
    """Write ``audio`` as mono PCM16, clamping to [-1, 1] first."""
    if not np.all(np.isfinite(audio.samples)):
        raise ValueError("cannot save non-finite samples")
    data = _to_pcm16(audio.samples)
    try:
        with wave.open(str(path), "wb") as wf:
            wf.setnchannels(1)
            wf.setsampwidth(2)
            wf.setframerate(audio.sample_rate)
            wf.writeframes(data.tobytes())
    except OSError as exc:
        raise SpoofkitError(f"could not write {path}: {exc}") from exc


def trim_or_pad(audio: AudioBuffer, mode: TrimMode, rng: np.random.Generator | None = None) -> AudioBuffer:
    """Normalise the duration of ``audio``.

    ``FixedSeconds`` crops long inputs (from offset 0, or from a random
    offset when ``rng`` is given) and repeat-tiles short ones.
    ``CapSeconds`` only crops.
    """
    n = len(audio)
    if n == 0:
        raise EmptyAudio("cannot trim an empty buffer")
    x = audio.samples
    if isinstance(mode, FixedSeconds):
        target = int(round(mode.target_s * audio.sample_rate))
        if n >= target:
            start = 0 if rng is None else int(rng.integers(0, n - target + 1))
            out = x[start:start + target]
        else:
            reps = -(-target // n)
            out = np.tile(x, reps)[:target]
    elif isinstance(mode, CapSeconds):
        limit = int(round(mode.max_s * audio.sample_rate))
        if n <= limit:
            return audio
        out = x[:limit]
    else:
        raise TypeError(f"unknown trim mode {mode!r}")
    if out.shape[0] == n and rng is None:
        return audio
    return AudioBuffer(out, audio.sample_rate)
