"""Equal error rate by interpolated crossing of the FNR/FPR step functions."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ._validation import FAKE, GENUINE, genuine_mask
from .exceptions import MissingScore, SingleClass

ScoreSet = dict  # utterance id -> float, higher = more genuine
TrialKey = dict  # utterance id -> "genuine" | "fake"


def align(scores: Mapping[str, float], key: Mapping[str, str]) -> tuple[np.ndarray, np.ndarray]:
    """Score and genuine-mask arrays in key order."""
    missing = [u for u in key if u not in scores]
    if missing:
        raise MissingScore(f"{len(missing)} trial(s) have no score, e.g. {missing[0]!r}")
    ids = list(key)
    return (np.array([scores[u] for u in ids], dtype=np.float64),
            genuine_mask([key[u] for u in ids]))


def operating_points(scores, is_genuine) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(thresholds, fpr, fnr) for 'accept iff score >= t'.

    Thresholds are the distinct scores in ascending order followed by one
    value just above the maximum (reject everything). Tied scores form a
    single step.
    """
    s = np.asarray(scores, dtype=np.float64)
    g = np.asarray(is_genuine, dtype=bool)
    n_gen, n_fake = int(g.sum()), int((~g).sum())
    if n_gen == 0 or n_fake == 0:
        raise SingleClass("EER needs both genuine and fake trials")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    order = np.argsort(s, kind="stable")
    s_sorted, g_sorted = s[order], g[order]
    distinct, first = np.unique(s_sorted, return_index=True)
    # rejected below threshold distinct[i] = everything before index first[i]
    gen_below = np.concatenate([[0], np.cumsum(g_sorted)])
    fake_below = np.concatenate([[0], np.cumsum(~g_sorted)])
    cut = np.append(first, s.shape[0])
    fnr = gen_below[cut] / n_gen
    fpr = (n_fake - fake_below[cut]) / n_fake
    thresholds = np.append(distinct, np.nextafter(distinct[-1], np.inf))
    return thresholds, fpr, fnr


def interpolated_crossing(thresholds, fpr, fnr) -> tuple[float, float]:
    """EER and threshold where FNR - FPR changes sign, linear between neighbours."""
    d = fnr - fpr
    j = int(np.argmax(d >= 0))
    if d[j] == 0 or j == 0:
        return float(fnr[j]), float(thresholds[j])
    alpha = -d[j - 1] / (d[j] - d[j - 1])
    eer = fnr[j - 1] + alpha * (fnr[j] - fnr[j - 1])
    thr = thresholds[j - 1] + alpha * (thresholds[j] - thresholds[j - 1])
    return float(eer), float(thr)


def eer_from_arrays(scores, is_genuine) -> tuple[float, float]:
    return interpolated_crossing(*operating_points(scores, is_genuine))


def compute_eer(scores: Mapping[str, float], key: Mapping[str, str]) -> tuple[float, float]:
    """Return ``(eer, threshold)`` with ``eer`` as a ratio."""
    return eer_from_arrays(*align(scores, key))


def det_points(scores: Mapping[str, float], key: Mapping[str, str]) -> list[tuple[float, float, float]]:
    """(threshold, fpr, fnr) operating points, for text DET output."""
    thr, fpr, fnr = operating_points(*align(scores, key))
    return list(zip(thr.tolist(), fpr.tolist(), fnr.tolist()))


__all__ = ["FAKE", "GENUINE", "ScoreSet", "TrialKey", "align", "compute_eer", "det_points",
           "eer_from_arrays", "interpolated_crossing", "operating_points"]
