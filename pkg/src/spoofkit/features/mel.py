"""Mel filterbanks, log filterbank energies and MFCCs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..audio import AudioBuffer
from ..exceptions import DegenerateFilter
from .matrix import FeatureKind, FeatureMatrix
from .stft import EPS, StftConfig, stft


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True, eq=False)
class MelFilterbank:
    n_mels: int
    fmin: float
    fmax: float
    fft_size: int
    sample_rate: int
    weights: np.ndarray  # n_mels x (fft_size/2 + 1)
    center_bins: np.ndarray

    @property
    def center_freqs(self) -> np.ndarray:
        return self.center_bins * self.sample_rate / self.fft_size


def mel_matrix(n_mels: int = 80, fmin: float = 0.0, fmax: float | None = None,
               fft_size: int = 1024, sample_rate: int = 16000) -> MelFilterbank:
    """Triangular mel filters on the FFT bin grid.

    ``n_mels + 2`` breakpoints are spaced evenly on the mel scale between
    ``fmin`` and ``fmax`` and snapped to the nearest FFT bin; filter ``m``
    rises from breakpoint ``m`` to a peak of 1 at ``m + 1`` and falls to 0
    at ``m + 2``.
    """
    if fmax is None:
        fmax = sample_rate / 2
    if not 0 <= fmin < fmax <= sample_rate / 2:
        raise ValueError(f"need 0 <= fmin < fmax <= {sample_rate / 2}, got fmin={fmin}, fmax={fmax}")
    if n_mels < 1:
        raise ValueError("n_mels must be >= 1")
    n_bins = fft_size // 2 + 1
    mels = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2)
    bins = np.round(mel_to_hz(mels) * fft_size / sample_rate).astype(int)
    if np.any(np.diff(bins) <= 0):
        bad = int(np.flatnonzero(np.diff(bins) <= 0)[0])
        raise DegenerateFilter(
            f"mel breakpoints {bad} and {bad + 1} both fall on FFT bin {bins[bad]}; "
            f"use fewer filters or a larger FFT"
        )
    k = np.arange(n_bins)
    weights = np.zeros((n_mels, n_bins))
    for m in range(n_mels):
        lo, mid, hi = bins[m], bins[m + 1], bins[m + 2]
        rise = (k - lo) / (mid - lo)
        fall = (hi - k) / (hi - mid)
        weights[m] = np.clip(np.minimum(rise, fall), 0.0, None)
    weights.flags.writeable = False
    return MelFilterbank(n_mels, float(fmin), float(fmax), fft_size, sample_rate, weights, bins[1:-1])


def _check_bank(audio: AudioBuffer, cfg: StftConfig, mel: MelFilterbank) -> None:
    if mel.fft_size != cfg.fft_size or mel.sample_rate != audio.sample_rate:
        raise ValueError(
            f"filterbank built for fft {mel.fft_size} @ {mel.sample_rate} Hz, "
            f"input is fft {cfg.fft_size} @ {audio.sample_rate} Hz"
        )


def log_mel_energies(audio: AudioBuffer, cfg: StftConfig, mel: MelFilterbank) -> np.ndarray:
    """float64 ln(mel @ |X|^2 + eps), frames x n_mels."""
    _check_bank(audio, cfg, mel)
    power = np.abs(stft(audio, cfg).values) ** 2
    return np.log(power @ mel.weights.T + EPS)


def log_fbank(audio: AudioBuffer, cfg: StftConfig = StftConfig(), mel: MelFilterbank | None = None) -> FeatureMatrix:
    if mel is None:
        mel = mel_matrix(80, 0.0, None, cfg.fft_size, audio.sample_rate)
    values = log_mel_energies(audio, cfg, mel)
    digest = cfg.digest(audio.sample_rate, n_mels=mel.n_mels, fmin=mel.fmin, fmax=mel.fmax)
    return FeatureMatrix(FeatureKind.LogFbank, values, digest)


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II basis; row k holds coefficient k."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    g = np.cos(np.pi * k * (2 * i + 1) / (2 * n)) * np.sqrt(2.0 / n)
    g[0] /= np.sqrt(2.0)
    return g


def cepstra(log_mel: np.ndarray, n_coeffs: int) -> np.ndarray:
    n_mels = log_mel.shape[1]
    if not 1 <= n_coeffs <= n_mels:
        raise ValueError(f"n_coeffs must be in [1, {n_mels}], got {n_coeffs}")
    return log_mel @ dct_matrix(n_mels)[:n_coeffs].T


def mfcc(audio: AudioBuffer, cfg: StftConfig = StftConfig(), mel: MelFilterbank | None = None,
         n_coeffs: int = 23) -> FeatureMatrix:
    """DCT-II of the log filterbank energies, coefficient 0 included; no liftering."""
    if mel is None:
        mel = mel_matrix(80, 0.0, None, cfg.fft_size, audio.sample_rate)
    values = cepstra(log_mel_energies(audio, cfg, mel), n_coeffs)
    digest = cfg.digest(audio.sample_rate, n_mels=mel.n_mels, fmin=mel.fmin, fmax=mel.fmax, n_coeffs=n_coeffs)
    return FeatureMatrix(FeatureKind.Mfcc, values, digest)
