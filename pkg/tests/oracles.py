"""Independent reference computations used as test oracles.

These deliberately avoid the toolkit's own code paths: plain loops,
explicit sums and scipy.stats densities.
"""

import math

import numpy as np
from scipy import stats


def brute_force_eer(scores, is_genuine):
    """EER from thresholds midway between adjacent distinct scores.

    Each threshold is checked by direct counting; the crossing is
    interpolated linearly between the last point with FNR < FPR and the
    first with FNR >= FPR.
    """
    scores = [float(s) for s in scores]
    gen = np.array([s for s, g in zip(scores, is_genuine) if g])
    fake = np.array([s for s, g in zip(scores, is_genuine) if not g])
    distinct = sorted(set(scores))
    thresholds = [distinct[0] - 1.0]
    thresholds += [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]
    thresholds.append(distinct[-1] + 1.0)
    t = np.array(thresholds)[:, None]
    n_fn = (gen[None, :] < t).sum(axis=1)
    n_fp = (fake[None, :] >= t).sum(axis=1)
    points = [(int(a) / len(gen), int(b) / len(fake)) for a, b in zip(n_fn, n_fp)]
    prev = None
    for fnr, fpr in points:
        if fnr - fpr >= 0:
            if fnr == fpr or prev is None:
                return fnr
            pf, pp = prev
            d0, d1 = pf - pp, fnr - fpr
            a = -d0 / (d1 - d0)
            return pf + a * (fnr - pf)
        prev = (fnr, fpr)
    raise AssertionError("unreachable: reject-all point has FNR=1, FPR=0")


def direct_dft(frame, n_fft):
    """One-sided DFT by explicit summation."""
    x = np.zeros(n_fft)
    x[: len(frame)] = frame
    n = np.arange(n_fft)
    return np.array([np.sum(x * np.exp(-2j * np.pi * k * n / n_fft)) for k in range(n_fft // 2 + 1)])


def two_pass_mean_std(rows):
    rows = [list(map(float, r)) for r in rows]
    n, d = len(rows), len(rows[0])
    mean = [sum(r[j] for r in rows) / n for j in range(d)]
    std = [math.sqrt(sum((r[j] - mean[j]) ** 2 for r in rows) / n) for j in range(d)]
    return mean + std


def diag_llr(e, mean_g, var_g, mean_f, var_f):
    lg = stats.norm.logpdf(e, loc=mean_g, scale=np.sqrt(var_g)).sum()
    lf = stats.norm.logpdf(e, loc=mean_f, scale=np.sqrt(var_f)).sum()
    return lg - lf
