"""Diagonal-Gaussian baseline scorer over pooled feature statistics.

Scores are log-likelihood ratios, higher meaning more genuine.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import FAKE, GENUINE, genuine_mask
from .exceptions import DimMismatch, EmptyFeature, MissingClass, TooFewExamples
from .features.matrix import FeatureKind, FeatureMatrix

VAR_FLOOR = 1e-6
_LOG_2PI = np.log(2.0 * np.pi)


def pool(f) -> np.ndarray:
    """Concatenate per-dimension mean and population std over frames."""
    values = f.values if isinstance(f, FeatureMatrix) else np.asarray(f)
    if values.ndim != 2 or values.shape[0] < 1:
        raise EmptyFeature(f"cannot pool a feature matrix of shape {values.shape}")
    v = values.astype(np.float64)
    return np.concatenate([v.mean(axis=0), v.std(axis=0)])


def _diag_log_density(X: np.ndarray, mean: np.ndarray, var: np.ndarray) -> np.ndarray:
    return -0.5 * (np.sum(np.log(var)) + X.shape[-1] * _LOG_2PI + np.sum((X - mean) ** 2 / var, axis=-1))


class GaussianScorer(ClassifierMixin, BaseEstimator):
    """Two-class diagonal Gaussian model; ``decision_function`` is the LLR.

    ``y`` may be 'genuine'/'fake' strings, booleans, or 1/0 with 1 meaning
    genuine. ``predict`` returns 'genuine' where the LLR is >= 0.
    """

    def __init__(self, var_floor=VAR_FLOOR):
        self.var_floor = var_floor

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        is_genuine = genuine_mask(y)
        if is_genuine.shape[0] != X.shape[0]:
            raise ValueError(f"{X.shape[0]} embeddings but {is_genuine.shape[0]} labels")
        for name, mask in ((GENUINE, is_genuine), (FAKE, ~is_genuine)):
            count = int(mask.sum())
            if count == 0:
                raise MissingClass(f"no {name} examples")
            if count < 2:
                raise TooFewExamples(f"need >= 2 {name} examples, got {count}")
        self.mean_genuine_ = X[is_genuine].mean(axis=0)
        self.var_genuine_ = np.maximum(X[is_genuine].var(axis=0), self.var_floor)
        self.mean_fake_ = X[~is_genuine].mean(axis=0)
        self.var_fake_ = np.maximum(X[~is_genuine].var(axis=0), self.var_floor)
        self.classes_ = np.array([FAKE, GENUINE])
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "mean_genuine_")
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.n_features_in_:
            raise DimMismatch(f"embedding has {X.shape[-1]} dims, scorer expects {self.n_features_in_}")
        X = check_array(np.atleast_2d(X))
        return (_diag_log_density(X, self.mean_genuine_, self.var_genuine_)
                - _diag_log_density(X, self.mean_fake_, self.var_fake_))

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, GENUINE, FAKE)

    def to_text(self, kind: FeatureKind | None = None, digest: str = "") -> str:
        check_is_fitted(self, "mean_genuine_")
        vec = lambda a: " ".join(repr(float(v)) for v in a)  # noqa: E731
        lines = [
            "# spoofkit gaussian scorer",
            f"kind {kind.name if kind is not None else '-'}",
            f"config_digest {digest or '-'}",
            f"dim {self.n_features_in_}",
            f"var_floor {self.var_floor!r}",
            f"genuine_mean {vec(self.mean_genuine_)}",
            f"genuine_var {vec(self.var_genuine_)}",
            f"fake_mean {vec(self.mean_fake_)}",
            f"fake_var {vec(self.var_fake_)}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple["GaussianScorer", FeatureKind | None, str]:
        fields = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            fields[key] = rest.strip()
        try:
            scorer = cls(var_floor=float(fields["var_floor"]))
            vec = lambda k: np.array([float(v) for v in fields[k].split()])  # noqa: E731
            scorer.mean_genuine_ = vec("genuine_mean")
            scorer.var_genuine_ = vec("genuine_var")
            scorer.mean_fake_ = vec("fake_mean")
            scorer.var_fake_ = vec("fake_var")
            dim = int(fields["dim"])
        except KeyError as exc:
            raise ValueError(f"model file is missing field {exc}") from None
        if any(a.shape != (dim,) for a in (scorer.mean_genuine_, scorer.var_genuine_,
                                            scorer.mean_fake_, scorer.var_fake_)):
            raise DimMismatch("model vectors disagree with the declared dim")
        scorer.n_features_in_ = dim
        scorer.classes_ = np.array([FAKE, GENUINE])
        kind = None if fields.get("kind", "-") == "-" else FeatureKind.parse(fields["kind"])
        digest = "" if fields.get("config_digest", "-") == "-" else fields["config_digest"]
        return scorer, kind, digest


def fit(embeddings, labels, var_floor: float = VAR_FLOOR) -> GaussianScorer:
    return GaussianScorer(var_floor=var_floor).fit(np.vstack(embeddings), labels)


def score(scorer: GaussianScorer, e) -> float:
    e = np.asarray(e, dtype=np.float64)
    if e.ndim != 1:
        raise DimMismatch(f"expected one embedding vector, got shape {e.shape}")
    return float(scorer.decision_function(e[None, :])[0])
