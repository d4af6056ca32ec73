"""Synthetic genuine/fake corpus for smoke-testing the whole pipeline.

Genuine utterances are band-limited noise bursts. Fake utterances are
generated the same way and then carry a steady 3.1 kHz tone 15 dB below
the burst signal's power.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.signal import butter, sosfilt

from .audio import AudioBuffer, save_wav
from .io import write_key, write_manifest

ARTIFACT_HZ = 3100.0
ARTIFACT_DB = -15.0
SPLITS = (("train", 0.5), ("dev", 0.25), ("eval", 0.25))


def noise_bursts(rng: np.random.Generator, n: int, sample_rate: int) -> np.ndarray:
    low = rng.uniform(100.0, 400.0)
    high = rng.uniform(2500.0, 6000.0)
    sos = butter(4, [low, high], btype="bandpass", fs=sample_rate, output="sos")
    x = sosfilt(sos, rng.standard_normal(n))
    env = np.zeros(n)
    for _ in range(int(rng.integers(2, 6))):
        width = int(rng.integers(n // 8, n // 2))
        start = int(rng.integers(0, n - width))
        env[start:start + width] += np.hanning(width) * rng.uniform(0.3, 1.0)
    x *= env + 0.02
    return x * (rng.uniform(0.05, 0.3) / np.max(np.abs(x)))


def make_utterance(rng: np.random.Generator, fake: bool, duration_s: float = 3.0,
                   sample_rate: int = 16000) -> AudioBuffer:
    n = int(round(duration_s * sample_rate))
    x = noise_bursts(rng, n, sample_rate)
    if fake:
        p = np.mean(x * x) * 10.0 ** (ARTIFACT_DB / 10.0)
        t = np.arange(n) / sample_rate
        x = x + np.sqrt(2 * p) * np.sin(2 * np.pi * ARTIFACT_HZ * t + rng.uniform(0, 2 * np.pi))
    return AudioBuffer(x, sample_rate, clamp=True)


def write_corpus(out_dir, n_per_class: int = 400, seed: int = 0, duration_s: float = 3.0,
                 sample_rate: int = 16000) -> dict[str, tuple[Path, Path]]:
    """Write WAVs plus per-split manifests and keys; returns split -> (manifest, key)."""
    out = Path(out_dir)
    (out / "wav").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    utts = []
    for label in ("genuine", "fake"):
        for i in range(n_per_class):
            utt_id = f"{label[0]}{i:04d}"
            audio = make_utterance(rng, label == "fake", duration_s, sample_rate)
            save_wav(audio, out / "wav" / f"{utt_id}.wav")
            utts.append((utt_id, label, i))
    result = {}
    lo = 0.0
    for split, frac in SPLITS:
        hi = lo + frac
        a, b = int(round(lo * n_per_class)), int(round(hi * n_per_class))
        rows = [(u, lab) for u, lab, i in utts if a <= i < b]
        manifest, key = out / f"{split}.tsv", out / f"{split}.key"
        write_manifest([(u, f"wav/{u}.wav") for u, _ in rows], manifest)
        write_key(dict(rows), key)
        result[split] = (manifest, key)
        lo = hi
    return result
