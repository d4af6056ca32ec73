"""Greedy score-level fusion.

Subsystems are visited in ascending order of development-set EER. Each
one is blended into the running primary system as
``mu * primary + (1 - mu) * candidate`` and the blend is kept only if
the development EER does not increase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DegenerateSpread, EmptySet, IdMismatch
from .metrics import ScoreSet, TrialKey, compute_eer, eer_from_arrays

DEFAULT_MU = 0.9


def fuse_pair(primary: Mapping[str, float], best: Mapping[str, float], mu: float = DEFAULT_MU) -> ScoreSet:
    if not 0 < mu <= 1:
        raise ValueError(f"mu must be in (0, 1], got {mu}")
    if primary.keys() != best.keys():
        raise IdMismatch("score sets cover different utterance ids")
    return {u: mu * primary[u] + (1 - mu) * best[u] for u in primary}


def znorm(scores: Mapping[str, float]) -> ScoreSet:
    if len(scores) < 2:
        raise DegenerateSpread("z-normalisation needs at least two scores")
    v = np.array(list(scores.values()), dtype=np.float64)
    mean, std = v.mean(), v.std()
    if not std > 0:
        raise DegenerateSpread("all scores are equal")
    return {u: float((s - mean) / std) for u, s in scores.items()}


@dataclass
class Subsystem:
    id: str
    scores_dev: ScoreSet
    scores_eval: ScoreSet | None = None
    eer_dev: float = float("nan")

    @classmethod
    def from_scores(cls, id: str, scores_dev: Mapping[str, float], key: TrialKey,
                    scores_eval: Mapping[str, float] | None = None) -> "Subsystem":
        dev = dict(scores_dev)
        return cls(id, dev, None if scores_eval is None else dict(scores_eval), compute_eer(dev, key)[0])


@dataclass
class FusionResult:
    selected: list[str]
    fused_dev: ScoreSet
    fused_eval: ScoreSet | None
    eer_dev: float
    trajectory: list[tuple[str, float, bool]] = field(default_factory=list)

    def report(self) -> str:
        lines = [f"{cid}\t{eer!r}\t{'accepted' if ok else 'rejected'}" for cid, eer, ok in self.trajectory]
        lines.append(f"{self.eer_dev!r}\tselected={','.join(self.selected)}")
        return "\n".join(lines) + "\n"


def greedy_fuse(subsystems: Sequence[Subsystem], key: TrialKey, mu: float = DEFAULT_MU) -> FusionResult:
    """Greedy fusion over ``subsystems``; dev EERs are recomputed against ``key``.

    Ties in dev EER keep the input order. Eval scores, when every subsystem
    has them, replay exactly the accepted dev-side blends.
    """
    if not subsystems:
        raise EmptySet("no subsystems to fuse")
    ids = [s.id for s in subsystems]
    if len(set(ids)) != len(ids):
        raise ValueError("subsystem ids must be unique")
    dev_ids = set(subsystems[0].scores_dev)
    if not set(key) <= dev_ids:
        raise IdMismatch(f"subsystem {subsystems[0].id!r} does not cover the trial key")
    has_eval = all(s.scores_eval is not None for s in subsystems)
    for s in subsystems:
        if set(s.scores_dev) != dev_ids:
            raise IdMismatch(f"subsystem {s.id!r} dev scores cover different ids")
        if has_eval and set(s.scores_eval) != set(subsystems[0].scores_eval):
            raise IdMismatch(f"subsystem {s.id!r} eval scores cover different ids")
    eers = [compute_eer(s.scores_dev, key)[0] for s in subsystems]
    order = sorted(range(len(subsystems)), key=lambda i: eers[i])

    first = subsystems[order[0]]
    primary_dev = dict(first.scores_dev)
    primary_eval = dict(first.scores_eval) if has_eval else None
    primary_eer = eers[order[0]]
    selected = [first.id]
    trajectory = []
    for i in order[1:]:
        cand = subsystems[i]
        trial_dev = fuse_pair(primary_dev, cand.scores_dev, mu)
        trial_eer = compute_eer(trial_dev, key)[0]
        accepted = trial_eer <= primary_eer
        trajectory.append((cand.id, trial_eer, accepted))
        if accepted:
            primary_dev, primary_eer = trial_dev, trial_eer
            if has_eval:
                primary_eval = fuse_pair(primary_eval, cand.scores_eval, mu)
            selected.append(cand.id)
    return FusionResult(selected, primary_dev, primary_eval, primary_eer, trajectory)


class GreedyFusion(BaseEstimator):
    """Array front end to :func:`greedy_fuse`.

    ``X`` is ``(n_trials, n_subsystems)``; ``y`` labels trials as in
    :class:`~spoofkit.backend.GaussianScorer`. After ``fit``,
    ``decision_function`` replays the accepted blends on new score columns.
    With ``znorm=True`` every column is z-normalised with its own statistics.
    """

    def __init__(self, mu=DEFAULT_MU, znorm=False):
        self.mu = mu
        self.znorm = znorm

    def _prep(self, X):
        X = check_array(X, dtype=np.float64)
        if self.znorm:
            std = X.std(axis=0)
            if np.any(std == 0):
                raise DegenerateSpread("a score column has zero spread")
            X = (X - X.mean(axis=0)) / std
        return X

    def fit(self, X, y):
        from ._validation import genuine_mask

        X = self._prep(X)
        g = genuine_mask(y)
        if not 0 < self.mu <= 1:
            raise ValueError(f"mu must be in (0, 1], got {self.mu}")
        eers = [eer_from_arrays(X[:, j], g)[0] for j in range(X.shape[1])]
        order = sorted(range(X.shape[1]), key=lambda j: eers[j])
        primary, primary_eer = X[:, order[0]], eers[order[0]]
        selected, trajectory = [order[0]], []
        for j in order[1:]:
            trial = self.mu * primary + (1 - self.mu) * X[:, j]
            trial_eer = eer_from_arrays(trial, g)[0]
            accepted = trial_eer <= primary_eer
            trajectory.append((j, trial_eer, accepted))
            if accepted:
                primary, primary_eer = trial, trial_eer
                selected.append(j)
        self.selected_ = selected
        self.trajectory_ = trajectory
        self.eer_ = primary_eer
        self.subsystem_eers_ = np.array(eers)
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "selected_")
        X = self._prep(X)
        if X.shape[1] != self.n_features_in_:
            raise IdMismatch(f"expected {self.n_features_in_} subsystem columns, got {X.shape[1]}")
        out = X[:, self.selected_[0]]
        for j in self.selected_[1:]:
            out = self.mu * out + (1 - self.mu) * X[:, j]
        return out

    @property
    def weights_(self) -> np.ndarray:
        """Effective linear weight of each column in the fused score."""
        check_is_fitted(self, "selected_")
        w = np.zeros(self.n_features_in_)
        w[self.selected_[0]] = 1.0
        for j in self.selected_[1:]:
            w *= self.mu
            w[j] += 1 - self.mu
        return w
