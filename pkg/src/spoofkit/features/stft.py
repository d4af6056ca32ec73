"""Short-time Fourier analysis: framing, log-magnitude and phase spectrograms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import get_window

from ..audio import AudioBuffer
from ..exceptions import TooShort
from .matrix import FeatureKind, FeatureMatrix, config_digest

EPS = 1e-10

_WINDOWS = {"hamming": "hamming", "hanning": "hann", "hann": "hann"}


@dataclass(frozen=True)
class StftConfig:
    frame_len_ms: float = 50.0
    hop_ms: float = 25.0
    fft_size: int = 1024
    window: str = "hamming"

    def __post_init__(self):
        if self.window.lower() not in _WINDOWS:
            raise ValueError(f"window must be Hamming or Hanning, got {self.window!r}")
        if not self.hop_ms > 0 or not self.frame_len_ms > 0:
            raise ValueError("frame_len_ms and hop_ms must be > 0")
        if self.fft_size < 1 or self.fft_size & (self.fft_size - 1):
            raise ValueError(f"fft_size must be a power of two, got {self.fft_size}")

    def frame_len(self, sample_rate: int) -> int:
        return int(round(self.frame_len_ms * sample_rate / 1000))

    def hop(self, sample_rate: int) -> int:
        return int(round(self.hop_ms * sample_rate / 1000))

    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    def n_frames(self, n_samples: int, sample_rate: int) -> int:
        frame_len = self.frame_len(sample_rate)
        if n_samples < frame_len:
            return 0
        return 1 + (n_samples - frame_len) // self.hop(sample_rate)

    def check(self, sample_rate: int) -> None:
        if self.fft_size < self.frame_len(sample_rate):
            raise ValueError(
                f"fft_size {self.fft_size} shorter than the {self.frame_len(sample_rate)}-sample frame"
            )
        if self.hop(sample_rate) < 1:
            raise ValueError("hop rounds to zero samples")

    def window_array(self, sample_rate: int) -> np.ndarray:
        return get_window(_WINDOWS[self.window.lower()], self.frame_len(sample_rate))

    def digest(self, sample_rate: int, **extra) -> str:
        return config_digest(
            frame_len_ms=self.frame_len_ms, hop_ms=self.hop_ms, fft_size=self.fft_size,
            window=self.window.lower(), sample_rate=sample_rate, **extra,
        )


@dataclass(frozen=True, eq=False)
class ComplexSpectrogram:
    """One-sided STFT, ``frames x (fft_size/2 + 1)`` complex values."""

    values: np.ndarray
    sample_rate: int
    config: StftConfig

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def bins(self) -> int:
        return self.values.shape[1]


def frame_signal(x: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    """View ``x`` as overlapping frames, no padding; frame t starts at t*hop."""
    if x.shape[0] < frame_len:
        raise TooShort(f"signal of {x.shape[0]} samples is shorter than one {frame_len}-sample frame")
    return sliding_window_view(x, frame_len)[::hop]


def stft(audio: AudioBuffer, cfg: StftConfig = StftConfig()) -> ComplexSpectrogram:
    sr = audio.sample_rate
    cfg.check(sr)
    frames = frame_signal(audio.samples, cfg.frame_len(sr), cfg.hop(sr))
    spec = np.fft.rfft(frames * cfg.window_array(sr), n=cfg.fft_size, axis=1)
    return ComplexSpectrogram(spec, sr, cfg)


def log_magnitude(spec: ComplexSpectrogram) -> FeatureMatrix:
    """ln(|X| + 1e-10) per bin."""
    values = np.log(np.abs(spec.values) + EPS)
    return FeatureMatrix(FeatureKind.LogMag, values, spec.config.digest(spec.sample_rate))


def principal_phase(z: np.ndarray) -> np.ndarray:
    """Phase in (-pi, pi]; bins with |z| < 1e-10 map to 0."""
    ph = np.angle(z)
    # angle() returns -pi for (-x, -0.0); fold onto +pi
    ph[ph <= -np.pi] = np.pi
    ph[np.abs(z) < EPS] = 0.0
    return ph


def phase(spec: ComplexSpectrogram) -> FeatureMatrix:
    values = principal_phase(spec.values).astype(np.float32)
    # float32(pi) > pi, so -pi values can reappear after the cast
    values[values <= -np.float32(np.pi)] = np.float32(np.pi)
    return FeatureMatrix(FeatureKind.Phase, values, spec.config.digest(spec.sample_rate))
