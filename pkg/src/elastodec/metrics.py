"""Far-field distances, Hausdorff distance and the logarithmic stability modulus."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, GridError, PreconditionError

WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True)
class FarFieldPattern:
    """Complex vector samples on a weighted direction grid.

    Attributes:
        directions: Unit vectors, shape ``(P, 3)``.
        weights: Positive quadrature weights summing to ``4 pi``.
        values: Complex samples, shape ``(P, 3)``.
        tag: ``"p"``, ``"s"`` or ``"t"``.
    """

    directions: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    tag: str = "t"

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        vals = np.asarray(self.values, dtype=complex).reshape(len(dirs), -1)
        if len(w) != len(dirs):
            raise PreconditionError("need one weight per direction")
        if np.any(w <= 0) or abs(w.sum() - 4.0 * math.pi) > WEIGHT_SUM_TOL:
            raise PreconditionError("weights must be positive and sum to 4 pi")
        if np.any(np.abs(np.linalg.norm(dirs, axis=-1) - 1.0) > 1e-10):
            raise PreconditionError("directions must be unit vectors")
        if self.tag not in ("p", "s", "t"):
            raise ValueError(f"unknown far-field tag {self.tag!r}")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", vals)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "directions": self.directions.tolist(),
            "weights": self.weights.tolist(),
            "values": [[[float(z.real), float(z.imag)] for z in row] for row in self.values],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FarFieldPattern":
        vals = np.array([[complex(re, im) for re, im in row] for row in data["values"]])
        return cls(np.array(data["directions"]), np.array(data["weights"]), vals, data.get("tag", "t"))


def farfield_distance(F: FarFieldPattern, G: FarFieldPattern) -> float:
    """Quadrature-weighted ``L^2(S^2)`` distance between two patterns."""
    if F.directions.shape != G.directions.shape or not (
        np.array_equal(F.directions, G.directions) and np.array_equal(F.weights, G.weights)
    ):
        raise GridError("far-field patterns are sampled on different grids")
    diff2 = np.sum(np.abs(F.values - G.values) ** 2, axis=-1)
    return float(math.sqrt(F.weights @ diff2))


def hausdorff(A, B) -> float:
    """Hausdorff distance between two finite point sets."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.size == 0 or B.size == 0:
        raise DomainError("Hausdorff distance needs two nonempty point sets")
    dab, _ = cKDTree(B).query(A)
    dba, _ = cKDTree(A).query(B)
    return float(max(dab.max(), dba.max()))


def psi(t: float) -> float:
    """``exp(-sqrt(log(-log t)))`` on ``0 < t < 1/e``."""
    if not 0.0 < t < math.exp(-1.0):
        raise DomainError(f"stability modulus is defined on (0, 1/e); got {t}")
    return math.exp(-math.sqrt(math.log(-math.log(t))))


def stability_modulus(epsilon: float, s: float = 1.0, C: float = 1.0, alpha: float = 1.0) -> float:
    """The bound ``C psi(s epsilon)^alpha`` for user-supplied constants."""
    if s <= 0 or C <= 0 or alpha <= 0:
        raise DomainError("s, C and alpha must be positive")
    return C * psi(s * epsilon) ** alpha
