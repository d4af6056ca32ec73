"""Direct (time-domain correlation) constant-Q transform."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import get_window

from ..audio import AudioBuffer
from ..exceptions import TooShort
from .matrix import FeatureKind, FeatureMatrix, config_digest
from .stft import EPS


@dataclass(frozen=True)
class CqtConfig:
    fmin: float = 32.7
    bins_per_octave: int = 12
    n_bins: int = 84
    hop_ms: float = 25.0
    max_kernel_len: int | None = None

    def __post_init__(self):
        if self.n_bins < 1 or self.bins_per_octave < 1:
            raise ValueError("n_bins and bins_per_octave must be >= 1")
        if not self.fmin > 0 or not self.hop_ms > 0:
            raise ValueError("fmin and hop_ms must be > 0")

    @property
    def q(self) -> float:
        return 1.0 / (2.0 ** (1.0 / self.bins_per_octave) - 1.0)

    def center_freqs(self) -> np.ndarray:
        return self.fmin * 2.0 ** (np.arange(self.n_bins) / self.bins_per_octave)

    def kernel_lengths(self, sample_rate: int) -> np.ndarray:
        n = np.ceil(self.q * sample_rate / self.center_freqs()).astype(int)
        if self.max_kernel_len is not None:
            n = np.minimum(n, self.max_kernel_len)
        return n

    def check(self, sample_rate: int) -> None:
        top = self.center_freqs()[-1]
        if top > sample_rate / 2:
            raise ValueError(f"top CQT bin {top:.1f} Hz is above Nyquist ({sample_rate / 2} Hz)")

    def hop(self, sample_rate: int) -> int:
        return int(round(self.hop_ms * sample_rate / 1000))

    def n_frames(self, n_samples: int, sample_rate: int) -> int:
        longest = int(self.kernel_lengths(sample_rate).max())
        if n_samples < longest:
            return 0
        return 1 + (n_samples - longest) // self.hop(sample_rate)


def cqt_kernels(cfg: CqtConfig, sample_rate: int) -> list[np.ndarray]:
    """Hann-windowed complex exponentials, each normalised by its window sum."""
    kernels = []
    for f, n in zip(cfg.center_freqs(), cfg.kernel_lengths(sample_rate)):
        win = get_window("hann", int(n), fftbins=False)
        t = np.arange(n) - (n - 1) / 2
        kernels.append(win * np.exp(-2j * np.pi * f * t / sample_rate) / win.sum())
    return kernels


@lru_cache(maxsize=16)
def kernel_matrix(cfg: CqtConfig, sample_rate: int) -> np.ndarray:
    """All kernels in one ``longest x n_bins`` matrix, centred on a common sample."""
    kernels = cqt_kernels(cfg, sample_rate)
    longest = max(k.shape[0] for k in kernels)
    mat = np.zeros((longest, len(kernels)), dtype=np.complex128)
    for j, kern in enumerate(kernels):
        start = longest // 2 - kern.shape[0] // 2
        mat[start:start + kern.shape[0], j] = kern
    mat.flags.writeable = False
    return mat


def cqt(audio: AudioBuffer, cfg: CqtConfig = CqtConfig()) -> np.ndarray:
    """Complex CQT coefficients, frames x n_bins.

    Frame t is centred at ``t*hop + longest//2``; every bin's kernel is
    centred there, so frames exist only where the longest kernel fits.
    """
    sr = audio.sample_rate
    cfg.check(sr)
    mat = kernel_matrix(cfg, sr)
    longest = mat.shape[0]
    x = audio.samples
    if x.shape[0] < longest:
        raise TooShort(f"signal of {x.shape[0]} samples is shorter than the {longest}-sample CQT kernel")
    frames = sliding_window_view(x, longest)[::cfg.hop(sr)]
    return frames @ mat


def log_cqt(audio: AudioBuffer, cfg: CqtConfig = CqtConfig()) -> FeatureMatrix:
    values = np.log(np.abs(cqt(audio, cfg)) + EPS)
    digest = config_digest(
        fmin=cfg.fmin, bins_per_octave=cfg.bins_per_octave, n_bins=cfg.n_bins,
        hop_ms=cfg.hop_ms, max_kernel_len=cfg.max_kernel_len, sample_rate=audio.sample_rate,
    )
    return FeatureMatrix(FeatureKind.LogCqt, values, digest)
