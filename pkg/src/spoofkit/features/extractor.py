"""sklearn-compatible wrappers around the feature extractors."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .._validation import as_audio_list
from ..audio import AudioBuffer, CapSeconds, FixedSeconds, trim_or_pad
from .cqt import CqtConfig, log_cqt
from .matrix import FeatureKind, FeatureMatrix
from .mel import log_fbank, mel_matrix, mfcc
from .mrp import MrpConfig, mrp
from .stft import StftConfig, log_magnitude, phase, stft


class FeatureExtractor(TransformerMixin, BaseEstimator):
    """Turn a list of waveforms into a list of ``frames x dims`` arrays.

    Stateless: ``fit`` only validates parameters. Inputs may be
    :class:`AudioBuffer` objects or 1-D arrays at ``sample_rate``.
    """

    def __init__(self, kind="LogFbank", sample_rate=16000, frame_len_ms=50.0, hop_ms=25.0,
                 fft_size=1024, window="hamming", n_mels=80, n_mfcc=23, cqt_fmin=32.7,
                 cqt_bins_per_octave=12, cqt_n_bins=84, mrp_base_freq=1000.0, mrp_n_mels=60):
        self.kind = kind
        self.sample_rate = sample_rate
        self.frame_len_ms = frame_len_ms
        self.hop_ms = hop_ms
        self.fft_size = fft_size
        self.window = window
        self.n_mels = n_mels
        self.n_mfcc = n_mfcc
        self.cqt_fmin = cqt_fmin
        self.cqt_bins_per_octave = cqt_bins_per_octave
        self.cqt_n_bins = cqt_n_bins
        self.mrp_base_freq = mrp_base_freq
        self.mrp_n_mels = mrp_n_mels

    def stft_config(self) -> StftConfig:
        return StftConfig(self.frame_len_ms, self.hop_ms, self.fft_size, self.window)

    def cqt_config(self) -> CqtConfig:
        return CqtConfig(self.cqt_fmin, self.cqt_bins_per_octave, self.cqt_n_bins, self.hop_ms)

    def mrp_config(self) -> MrpConfig:
        return MrpConfig(self.mrp_base_freq, self.mrp_n_mels, self.stft_config())

    @property
    def dims(self) -> int:
        kind = FeatureKind.parse(self.kind)
        return {
            FeatureKind.LogMag: self.fft_size // 2 + 1,
            FeatureKind.Phase: self.fft_size // 2 + 1,
            FeatureKind.LogFbank: self.n_mels,
            FeatureKind.Mfcc: self.n_mfcc,
            FeatureKind.LogCqt: self.cqt_n_bins,
            FeatureKind.Mrp: 2 * self.mrp_n_mels,
        }[kind]

    def fit(self, X=None, y=None):
        kind = FeatureKind.parse(self.kind)
        cfg = self.stft_config()
        cfg.check(self.sample_rate)
        if kind in (FeatureKind.LogFbank, FeatureKind.Mfcc):
            self.mel_ = mel_matrix(self.n_mels, 0.0, None, self.fft_size, self.sample_rate)
        if kind is FeatureKind.LogCqt:
            self.cqt_config().check(self.sample_rate)
        self.kind_ = kind
        return self

    def extract(self, audio: AudioBuffer) -> FeatureMatrix:
        if not hasattr(self, "kind_"):
            self.fit()
        kind = self.kind_
        cfg = self.stft_config()
        if kind is FeatureKind.LogMag:
            return log_magnitude(stft(audio, cfg))
        if kind is FeatureKind.Phase:
            return phase(stft(audio, cfg))
        if kind is FeatureKind.LogFbank:
            return log_fbank(audio, cfg, self.mel_)
        if kind is FeatureKind.Mfcc:
            return mfcc(audio, cfg, self.mel_, self.n_mfcc)
        if kind is FeatureKind.LogCqt:
            return log_cqt(audio, self.cqt_config())
        return mrp(audio, self.mrp_config())

    def transform(self, X):
        return [self.extract(a).values for a in as_audio_list(X, self.sample_rate)]


class TrimOrPad(TransformerMixin, BaseEstimator):
    """Duration normalisation as a pipeline step (``mode`` is 'fixed' or 'cap')."""

    def __init__(self, seconds=3.0, mode="fixed", sample_rate=16000):
        self.seconds = seconds
        self.mode = mode
        self.sample_rate = sample_rate

    def fit(self, X=None, y=None):
        if self.mode not in ("fixed", "cap"):
            raise ValueError(f"mode must be 'fixed' or 'cap', got {self.mode!r}")
        return self

    def transform(self, X):
        self.fit()
        mode = FixedSeconds(self.seconds) if self.mode == "fixed" else CapSeconds(self.seconds)
        return [trim_or_pad(a, mode) for a in as_audio_list(X, self.sample_rate)]


class StatsPooling(TransformerMixin, BaseEstimator):
    """Mean and population std over frames: list of matrices -> (n, 2*dims) array."""

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        from ..backend import pool

        return np.vstack([pool(f) for f in X])
