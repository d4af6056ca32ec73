"""Hand-crafted spectro-temporal features."""

from .cqt import CqtConfig, cqt, log_cqt
from .extractor import FeatureExtractor, StatsPooling, TrimOrPad
from .matrix import FeatureKind, FeatureMatrix, dump_features, load_features
from .mel import MelFilterbank, dct_matrix, hz_to_mel, log_fbank, mel_matrix, mel_to_hz, mfcc
from .mrp import MrpConfig, mrp
from .stft import EPS, ComplexSpectrogram, StftConfig, log_magnitude, phase, stft

__all__ = [
    "EPS", "ComplexSpectrogram", "CqtConfig", "FeatureExtractor", "FeatureKind", "FeatureMatrix",
    "MelFilterbank", "MrpConfig", "StatsPooling", "StftConfig", "TrimOrPad", "cqt", "dct_matrix",
    "dump_features", "hz_to_mel", "load_features", "log_cqt", "log_fbank", "log_magnitude",
    "mel_matrix", "mel_to_hz", "mfcc", "mrp", "phase", "stft",
]
