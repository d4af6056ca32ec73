"""Low-quality data augmentation: additive noise at a target SNR, reverberation, fades."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.signal import fftconvolve

from ._validation import same_rate
from .audio import AudioBuffer
from .exceptions import EmptyRir, SilentInput

CLIP_PEAK = 0.99


class AugmentKind(str, Enum):
    Noise = "noise"
    Music = "music"
    WhiteNoise = "white"
    Reverb = "reverb"
    Fade = "fade"

    @classmethod
    def parse(cls, value) -> "AugmentKind":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        for kind in cls:
            if v in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown augmentation kind {value!r}")


@dataclass(frozen=True)
class AugmentSpec:
    kind: AugmentKind
    snr_db: float | None = None
    rir: AudioBuffer | None = None
    fade_in_frac: float = 1 / 3
    fade_out_frac: float = 1 / 3
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", AugmentKind.parse(self.kind))
        if self.fade_in_frac < 0 or self.fade_out_frac < 0 or self.fade_in_frac + self.fade_out_frac > 1:
            raise ValueError("fade fractions must be >= 0 and sum to at most 1")
        if self.kind in (AugmentKind.Noise, AugmentKind.Music, AugmentKind.WhiteNoise):
            if self.snr_db is None or not np.isfinite(self.snr_db):
                raise ValueError(f"{self.kind.value} augmentation needs a finite snr_db")
        if self.kind is AugmentKind.Reverb and self.rir is None:
            raise ValueError("reverb augmentation needs an rir")


def file_seed(seed: int, name: str) -> int:
    """Per-file seed: ``seed`` XOR a stable 32-bit hash of ``name``."""
    return (int(seed) ^ zlib.crc32(name.encode("utf-8"))) & 0xFFFFFFFFFFFFFFFF


def _power(x: np.ndarray) -> float:
    return float(np.mean(x * x))


def fit_noise(noise: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Loop short noise, or crop long noise at a seeded offset, to length ``n``."""
    m = noise.shape[0]
    if m == n:
        return noise
    if m > n:
        start = int(rng.integers(0, m - n + 1))
        return noise[start:start + n]
    return np.tile(noise, -(-n // m))[:n]


def noise_gain(signal_power: float, noise_power: float, snr_db: float) -> float:
    return float(np.sqrt(signal_power / (noise_power * 10.0 ** (snr_db / 10.0))))


def mix_at_snr(signal: AudioBuffer, noise: AudioBuffer, snr_db: float, seed: int = 0) -> AudioBuffer:
    """Add ``noise`` to ``signal`` at ``snr_db`` (powers over the whole utterance).

    If the mixture would clip it is rescaled to a peak of 0.99; the
    rescaling is applied to both components so the SNR is unchanged.
    """
    same_rate(signal, noise)
    if len(noise) == 0:
        raise SilentInput("noise buffer is empty")
    s = signal.samples
    n = fit_noise(noise.samples, s.shape[0], np.random.default_rng(seed))
    ps, pn = _power(s), _power(n)
    if ps == 0:
        raise SilentInput("signal has zero power")
    if pn == 0:
        raise SilentInput("noise has zero power over the mixed region")
    out = s + noise_gain(ps, pn, snr_db) * n
    peak = np.max(np.abs(out))
    if peak > 1.0:
        out = out * (CLIP_PEAK / peak)
    return signal.with_samples(out)


def white_noise_at_snr(signal: AudioBuffer, snr_db: float, seed: int = 0) -> AudioBuffer:
    noise = np.random.default_rng(seed).standard_normal(len(signal))
    return mix_at_snr(signal, AudioBuffer(noise, signal.sample_rate), snr_db, seed)


def convolve_rir(signal: AudioBuffer, rir: AudioBuffer) -> AudioBuffer:
    """Convolve with an impulse response, keep the input length, match the input peak."""
    same_rate(signal, rir)
    if len(rir) == 0:
        raise EmptyRir("impulse response is empty")
    s, h = signal.samples, rir.samples
    n = s.shape[0]
    if h.shape[0] <= 64:
        wet = np.convolve(s, h)[:n]
    else:
        wet = fftconvolve(s, h)[:n]
    peak_in = np.max(np.abs(s)) if n else 0.0
    peak_out = np.max(np.abs(wet)) if n else 0.0
    if peak_out > 0 and peak_out != peak_in:
        wet = wet * (peak_in / peak_out)
    return signal.with_samples(wet)


def fade_gains(n: int, fade_in_frac: float = 1 / 3, fade_out_frac: float = 1 / 3) -> np.ndarray:
    """Per-sample gain of :func:`fade`; linear 0->1 and 1->0 ramps."""
    gains = np.ones(n)
    if n < 3:
        return gains
    n_in = int(np.floor(fade_in_frac * n + 1e-9))
    n_out = int(np.floor(fade_out_frac * n + 1e-9))
    if n_in:
        gains[:n_in] = np.arange(n_in) / (n_in - 1) if n_in > 1 else 0.0
    if n_out:
        gains[n - n_out:] = (np.arange(n_out)[::-1] / (n_out - 1)) if n_out > 1 else 0.0
    return gains


def fade(signal: AudioBuffer, fade_in_frac: float = 1 / 3, fade_out_frac: float = 1 / 3) -> AudioBuffer:
    if fade_in_frac < 0 or fade_out_frac < 0 or fade_in_frac + fade_out_frac > 1:
        raise ValueError("fade fractions must be >= 0 and sum to at most 1")
    if len(signal) < 3:
        return signal
    return signal.with_samples(signal.samples * fade_gains(len(signal), fade_in_frac, fade_out_frac))


def apply(signal: AudioBuffer, spec: AugmentSpec, noise: AudioBuffer | None = None) -> AudioBuffer:
    """Dispatch one :class:`AugmentSpec`; ``noise`` is required for Noise and Music."""
    kind = spec.kind
    if kind in (AugmentKind.Noise, AugmentKind.Music):
        if noise is None:
            raise ValueError(f"{kind.value} augmentation needs a noise recording")
        return mix_at_snr(signal, noise, spec.snr_db, spec.seed)
    if kind is AugmentKind.WhiteNoise:
        return white_noise_at_snr(signal, spec.snr_db, spec.seed)
    if kind is AugmentKind.Reverb:
        return convolve_rir(signal, spec.rir)
    return fade(signal, spec.fade_in_frac, spec.fade_out_frac)
