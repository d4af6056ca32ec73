"""Flat ``key = value`` pipeline configuration."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .audio import CapSeconds, FixedSeconds
from .augment import AugmentKind
from .exceptions import ConfigError
from .features import FeatureExtractor, FeatureKind
from .forge import SpliceMode


@dataclass(frozen=True)
class PipelineConfig:
    sample_rate: int = 16000
    feature: str = "LogFbank"
    frame_len_ms: float = 50.0
    hop_ms: float = 25.0
    fft_size: int = 1024
    window: str = "hamming"
    n_mels: int = 80
    n_mfcc: int = 23
    cqt_fmin: float = 32.7
    cqt_bins_per_octave: int = 12
    cqt_n_bins: int = 84
    mrp_base_freq: float = 1000.0
    mrp_n_mels: int = 60
    trim: str = "fixed"
    trim_seconds: float = 3.0
    augment: str = ""
    noise_snr_min: float = 0.0
    noise_snr_max: float = 20.0
    music_snr_min: float = 0.0
    music_snr_max: float = 20.0
    white_snr_min: float = 5.0
    white_snr_max: float = 25.0
    fade_in_frac: float = 1 / 3
    fade_out_frac: float = 1 / 3
    seed: int = 0
    pf_mode: str = "insert"
    crossfade_ms: float = 0.0
    var_floor: float = 1e-6
    corpus_dir: str = ""
    noise_dir: str = ""
    music_dir: str = ""
    rir_dir: str = ""
    output_dir: str = ""

    def __post_init__(self):
        try:
            self.extractor().fit()
            self.trim_mode()
            self.augment_kinds()
            SpliceMode(self.pf_mode)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.fade_in_frac < 0 or self.fade_out_frac < 0 or self.fade_in_frac + self.fade_out_frac > 1:
            raise ConfigError("fade fractions must be >= 0 and sum to at most 1")
        for kind in ("noise", "music", "white"):
            lo, hi = getattr(self, f"{kind}_snr_min"), getattr(self, f"{kind}_snr_max")
            if lo > hi:
                raise ConfigError(f"{kind}_snr_min > {kind}_snr_max")
        if self.crossfade_ms < 0 or self.var_floor <= 0 or self.seed < 0:
            raise ConfigError("crossfade_ms and seed must be >= 0, var_floor > 0")

    def extractor(self) -> FeatureExtractor:
        return FeatureExtractor(
            kind=FeatureKind.parse(self.feature).name, sample_rate=self.sample_rate,
            frame_len_ms=self.frame_len_ms, hop_ms=self.hop_ms, fft_size=self.fft_size,
            window=self.window, n_mels=self.n_mels, n_mfcc=self.n_mfcc, cqt_fmin=self.cqt_fmin,
            cqt_bins_per_octave=self.cqt_bins_per_octave, cqt_n_bins=self.cqt_n_bins,
            mrp_base_freq=self.mrp_base_freq, mrp_n_mels=self.mrp_n_mels,
        )

    def trim_mode(self):
        if self.trim == "none":
            return None
        if self.trim == "fixed":
            return FixedSeconds(self.trim_seconds)
        if self.trim == "cap":
            return CapSeconds(self.trim_seconds)
        raise ValueError(f"trim must be none, fixed or cap, got {self.trim!r}")

    def augment_kinds(self) -> list[AugmentKind]:
        return [AugmentKind.parse(k.strip()) for k in self.augment.split(",") if k.strip()]

    def snr_range(self, kind: AugmentKind) -> tuple[float, float]:
        prefix = {AugmentKind.Noise: "noise", AugmentKind.Music: "music", AugmentKind.WhiteNoise: "white"}[kind]
        return getattr(self, f"{prefix}_snr_min"), getattr(self, f"{prefix}_snr_max")

    def with_overrides(self, **kw) -> "PipelineConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _coerce(name: str, typ, raw: str):
    try:
        if typ == "int":
            return int(raw)
        if typ == "float":
            num, _, den = raw.partition("/")
            return float(num) / float(den) if den else float(num)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {raw!r} as {typ}") from None
    return raw


def parse_config(text: str) -> PipelineConfig:
    types = {f.name: f.type for f in fields(PipelineConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, types[key], raw)
    return PipelineConfig(**values)


def load_config(path) -> PipelineConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
