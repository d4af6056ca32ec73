"""Tab-separated text formats: score files, trial keys, manifests."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from ._validation import FAKE, GENUINE

SCORE_HEADER = "# polarity: higher=genuine"


def _rows(path, min_fields: int):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < min_fields:
                raise ValueError(f"{path}:{lineno}: expected {min_fields} tab-separated fields")
            yield lineno, fields


def write_scores(scores: Mapping[str, float], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(SCORE_HEADER + "\n")
        for u, s in scores.items():
            fh.write(f"{u}\t{float(s)!r}\n")


def read_scores(path) -> dict[str, float]:
    out: dict[str, float] = {}
    for lineno, (u, s, *_) in _rows(path, 2):
        if u in out:
            raise ValueError(f"{path}:{lineno}: duplicate id {u!r}")
        out[u] = float(s)
    return out


def write_key(key: Mapping[str, str], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, label in key.items():
            fh.write(f"{u}\t{label}\n")


def read_key(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, (u, label, *_) in _rows(path, 2):
        label = label.strip().lower()
        if label not in (GENUINE, FAKE):
            raise ValueError(f"{path}:{lineno}: label must be genuine or fake, got {label!r}")
        if u in out:
            raise ValueError(f"{path}:{lineno}: duplicate id {u!r}")
        out[u] = label
    return out


def read_manifest(path, base_dir=None) -> list[tuple[str, Path]]:
    """``utt_id<TAB>path`` lines; relative paths resolve against ``base_dir``."""
    base = Path(base_dir) if base_dir else Path(path).parent
    out = []
    seen = set()
    for lineno, (u, p, *_) in _rows(path, 2):
        if u in seen:
            raise ValueError(f"{path}:{lineno}: duplicate id {u!r}")
        seen.add(u)
        q = Path(p)
        out.append((u, q if q.is_absolute() else base / q))
    return out


def write_manifest(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(str(v) for v in row) + "\n")
