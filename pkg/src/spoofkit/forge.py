"""Partially-fake utterance construction with sample-accurate segment labels."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._validation import FAKE, GENUINE, same_rate
from .audio import AudioBuffer
from .exceptions import BadPosition, CrossfadeTooLong, GapInLabels
from .features.stft import StftConfig


class SpliceMode(str, Enum):
    Insert = "insert"
    Substitute = "substitute"


@dataclass(frozen=True)
class SegmentLabel:
    start: int
    end: int
    label: str  # "genuine" | "fake"

    @property
    def is_fake(self) -> bool:
        return self.label == FAKE


@dataclass(frozen=True)
class SplicePlan:
    mode: SpliceMode
    position: int
    length: int = 0
    crossfade_ms: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", SpliceMode(self.mode))
        if self.crossfade_ms < 0:
            raise ValueError("crossfade_ms must be >= 0")

    def crossfade_samples(self, sample_rate: int) -> int:
        return int(round(self.crossfade_ms * sample_rate / 1000))


def crossfade_ramps(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Equal-power (raised-cosine) fade-out and fade-in weights of length ``n``."""
    t = (np.arange(n) + 0.5) / n if n else np.zeros(0)
    return np.cos(0.5 * np.pi * t), np.sin(0.5 * np.pi * t)


def _join(a: np.ndarray, b: np.ndarray, overlap: int) -> np.ndarray:
    if overlap == 0:
        return np.concatenate([a, b])
    w_out, w_in = crossfade_ramps(overlap)
    mid = a[-overlap:] * w_out + b[:overlap] * w_in
    return np.concatenate([a[:-overlap], mid, b[overlap:]])


def _segments(bounds: list[tuple[int, int, str]]) -> list[SegmentLabel]:
    out: list[SegmentLabel] = []
    for start, end, label in bounds:
        if end <= start:
            continue
        if out and out[-1].label == label:
            out[-1] = SegmentLabel(out[-1].start, end, label)
        else:
            out.append(SegmentLabel(start, end, label))
    return out


def splice(host: AudioBuffer, insert: AudioBuffer, plan: SplicePlan) -> tuple[AudioBuffer, list[SegmentLabel]]:
    """Insert or substitute ``insert`` into ``host``.

    With an ``L``-sample crossfade each join overlaps the last ``L`` samples
    of the left piece with the first ``L`` of the right piece. Overlap
    regions and all inserted samples are labelled fake.
    """
    same_rate(host, insert)
    h, ins = host.samples, insert.samples
    p = plan.position
    if plan.mode is SpliceMode.Insert:
        if not 0 <= p <= h.shape[0]:
            raise BadPosition(f"insert position {p} outside host of {h.shape[0]} samples")
        tail_start = p
    else:
        if plan.length != ins.shape[0]:
            raise BadPosition(f"substitute length {plan.length} differs from insert length {ins.shape[0]}")
        if p < 0 or p + plan.length > h.shape[0]:
            raise BadPosition(f"substitute region [{p}, {p + plan.length}) outside host of {h.shape[0]} samples")
        tail_start = p + plan.length
    head, tail = h[:p], h[tail_start:]
    n_ins = ins.shape[0]
    L = plan.crossfade_samples(host.sample_rate)
    if L:
        pieces = (("host head", head.shape[0]), ("insert", n_ins), ("host tail", tail.shape[0]))
        for name, size in pieces:
            if 2 * L > size:
                raise CrossfadeTooLong(f"{L}-sample crossfade exceeds half of the {size}-sample {name}")
    out = _join(_join(head, ins, L), tail, L)
    fake_start = p - L
    fake_end = fake_start + n_ins
    labels = _segments([
        (0, fake_start, GENUINE),
        (fake_start, fake_end, FAKE),
        (fake_end, out.shape[0], GENUINE),
    ])
    return host.with_samples(out), labels


def check_labels(labels: list[SegmentLabel]) -> int:
    """Validate that ``labels`` tile [0, n) without gaps; return n."""
    if not labels:
        raise GapInLabels("no segments")
    pos = 0
    for seg in labels:
        if seg.start != pos or seg.end <= seg.start:
            raise GapInLabels(f"segment {seg} does not continue from sample {pos}")
        if seg.label not in (GENUINE, FAKE):
            raise ValueError(f"bad segment label {seg.label!r}")
        pos = seg.end
    return pos


def label_to_frames(labels: list[SegmentLabel], cfg: StftConfig = StftConfig(),
                    sample_rate: int = 16000) -> np.ndarray:
    """Frame-level labels: True (fake) where any fake sample falls in the frame."""
    n = check_labels(labels)
    frame_len, hop = cfg.frame_len(sample_rate), cfg.hop(sample_rate)
    n_frames = cfg.n_frames(n, sample_rate)
    fake = np.zeros(n, dtype=bool)
    for seg in labels:
        if seg.is_fake:
            fake[seg.start:seg.end] = True
    # prefix sums give the fake count in each frame span
    csum = np.concatenate([[0], np.cumsum(fake)])
    starts = np.arange(n_frames) * hop
    return (csum[starts + frame_len] - csum[starts]) > 0


def write_labels(labels: list[SegmentLabel], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for seg in labels:
            fh.write(f"{seg.start}\t{seg.end}\t{seg.label}\n")


def read_labels(path) -> list[SegmentLabel]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            start, end, label = line.rstrip("\n").split("\t")
            out.append(SegmentLabel(int(start), int(end), label))
    check_labels(out)
    return out
