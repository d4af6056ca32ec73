"""Mel relative phase (MRP).

Each frame's STFT phase is re-referenced so that the bin nearest a base
frequency has phase zero, with every other bin shifted proportionally to
its frequency. The re-referenced phase is encoded as (cos, sin) and each
channel is pooled by a mel filterbank whose rows sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..audio import AudioBuffer
from .matrix import FeatureKind, FeatureMatrix
from .mel import mel_matrix
from .stft import StftConfig, principal_phase, stft


@dataclass(frozen=True)
class MrpConfig:
    base_freq: float = 1000.0
    n_mels: int = 60
    stft: StftConfig = field(default_factory=StftConfig)

    @property
    def dims(self) -> int:
        return 2 * self.n_mels

    def base_bin(self, sample_rate: int) -> int:
        if not 0 < self.base_freq <= sample_rate / 2:
            raise ValueError(f"base_freq {self.base_freq} Hz outside (0, {sample_rate / 2}]")
        b = int(round(self.base_freq * self.stft.fft_size / sample_rate))
        if b < 1:
            raise ValueError(f"base_freq {self.base_freq} Hz rounds to the DC bin")
        return b


def wrap_phase(x: np.ndarray) -> np.ndarray:
    """Wrap angles into (-pi, pi]."""
    y = np.pi - np.mod(np.pi - x, 2 * np.pi)
    return y


def relative_phase(theta: np.ndarray, base_bin: int) -> np.ndarray:
    """Re-reference per-frame phases ``theta`` (frames x bins) to ``base_bin``."""
    ratio = np.arange(theta.shape[1]) / base_bin
    return wrap_phase(theta - ratio[None, :] * theta[:, base_bin:base_bin + 1])


def mrp(audio: AudioBuffer, cfg: MrpConfig = MrpConfig()) -> FeatureMatrix:
    sr = audio.sample_rate
    b = cfg.base_bin(sr)
    spec = stft(audio, cfg.stft)
    psi = relative_phase(principal_phase(spec.values), b)
    bank = mel_matrix(cfg.n_mels, 0.0, None, cfg.stft.fft_size, sr).weights
    bank = bank / bank.sum(axis=1, keepdims=True)
    values = np.hstack([np.cos(psi) @ bank.T, np.sin(psi) @ bank.T])
    np.clip(values, -1.0, 1.0, out=values)
    digest = cfg.stft.digest(sr, base_freq=cfg.base_freq, n_mels=cfg.n_mels)
    return FeatureMatrix(FeatureKind.Mrp, values, digest)
