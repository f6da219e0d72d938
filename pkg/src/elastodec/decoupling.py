"""Decoupling-condition residuals, far-field correspondences and reflection identities.

The two decoupling pairs are evaluated term by term on the sphere.  The
second-order quantities use the identities satisfied by every Lame solution,

    grad(div U) = -kp^2 U_p,        curl curl U = ks^2 U_s,

so no numerical differentiation of the series is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ball_solver import BoundaryKind, MultipoleSolution, _Evaluator
from .errors import DomainError, PreconditionError
from .harmonics import SphereQuadrature, sphere_quadrature
from .wavefuncs import WaveParams


@dataclass(frozen=True)
class DecouplingResidual:
    """Max and L2 norms of the kind-matched decoupling pair on a sphere grid."""

    kind: str
    scalar_residual: float
    vector_residual: float
    scalar_l2: float
    vector_l2: float
    grid_size: tuple[int, int]
    scale: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "grid": list(self.grid_size),
            "scale": self.scale,
            "scalar": {"max": self.scalar_residual, "l2": self.scalar_l2},
            "vector": {"max": self.vector_residual, "l2": self.vector_l2},
        }


def residual_scale(sol: MultipoleSolution) -> float:
    """``max(|alpha_p| kp, |alpha_s| ks)``, used to make residuals amplitude-free."""
    inc, params = sol.incident, sol.params
    return max(abs(inc.alpha_p) * params.kp, abs(inc.alpha_s) * params.ks)


def decoupling_residual(
    sol: MultipoleSolution,
    grid: tuple[int, int] | SphereQuadrature = (32, 64),
    scale: float | None = None,
) -> DecouplingResidual:
    """Evaluate the decoupling pair of the solution's kind on ``|x| = R``.

    Kind IV: ``div U`` and ``nu ^ curl curl U``.  Kind III:
    ``nu . grad(div U)`` and ``nu ^ curl U``.  Both are taken on the total
    field and divided by ``scale`` (default :func:`residual_scale`); a zero
    scale yields zero residuals.

    Args:
        sol: Solved (or manufactured) multipole solution.
        grid: ``(n_theta, n_phi)`` of the boundary product rule, or a
            ready-made (e.g. rotated) :class:`SphereQuadrature`.
        scale: Override for the normalisation.
    """
    if scale is None:
        scale = residual_scale(sol)
    quad = grid if isinstance(grid, SphereQuadrature) else sphere_quadrature(*grid)
    grid = (quad.n_theta, quad.n_phi)
    dirs = quad.dirs
    w = quad.weights * sol.radius**2
    if scale == 0:
        return DecouplingResidual(sol.kind.value, 0.0, 0.0, 0.0, 0.0, tuple(grid), 0.0)

    ev = _Evaluator(sol, sol.radius * dirs)
    params, inc = sol.params, sol.incident
    pts = ev.points
    up_in, us_in = ev.incident()
    if sol.kind is BoundaryKind.IV:
        s = np.abs(inc.divergence(params, pts) + ev.scattered_div())
        v = np.linalg.norm(np.cross(dirs, params.ks**2 * (us_in + ev.scattered_s())), axis=-1)
    else:
        s = np.abs(np.einsum("pk,pk->p", dirs, -(params.kp**2) * (up_in + ev.scattered_p())))
        curl = inc.curl(params, pts) + ev.scattered_curl()
        v = np.linalg.norm(np.cross(dirs, curl), axis=-1)
    s, v = s / scale, v / scale
    return DecouplingResidual(
        kind=sol.kind.value,
        scalar_residual=float(s.max()),
        vector_residual=float(v.max()),
        scalar_l2=float(math.sqrt(w @ s**2)),
        vector_l2=float(math.sqrt(w @ v**2)),
        grid_size=tuple(grid),
        scale=float(scale),
    )


def _unit_dirs(dirs, tol: float = 1e-10) -> np.ndarray:
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if np.any(np.abs(np.linalg.norm(dirs, axis=-1) - 1.0) > tol):
        raise PreconditionError("far-field directions must be unit vectors")
    return dirs


def split_far_field(Ut_inf, dirs):
    """Radial (P) and tangential (S) parts of a total far-field pattern."""
    xhat = _unit_dirs(dirs)
    Ut = np.asarray(Ut_inf, dtype=complex).reshape(xhat.shape)
    up = np.einsum("pk,pk->p", Ut, xhat)[:, None] * xhat
    return up, Ut - up


def farfield_correspondence(Ut_inf, dirs, params: WaveParams):
    """Map a total elastic far field to the scalar and vector far fields.

    ``v_p^inf = -i kp x_hat . U_p^inf`` and ``E_s^inf = i ks x_hat ^ U_s^inf``.
    """
    xhat = _unit_dirs(dirs)
    up, us = split_far_field(Ut_inf, xhat)
    vp = -1j * params.kp * np.einsum("pk,pk->p", xhat, up)
    Es = 1j * params.ks * np.cross(xhat, us)
    return vp, Es


def inverse_correspondence(vp_inf, Es_inf, dirs, params: WaveParams):
    """``U_p^inf = (i/kp) v_p^inf x_hat`` and ``U_s^inf = (i/ks) x_hat ^ E_s^inf``."""
    xhat = _unit_dirs(dirs)
    up = (1j / params.kp) * np.asarray(vp_inf, dtype=complex)[:, None] * xhat
    us = (1j / params.ks) * np.cross(xhat, np.asarray(Es_inf, dtype=complex))
    return up, us


# ----------------------------------------------------------------------------
# reflection principle


@dataclass(frozen=True)
class Plane:
    """The plane ``{x : normal . x = offset}``."""

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if norm == 0:
            raise DomainError("plane normal must be nonzero")
        object.__setattr__(self, "normal", n / norm)

    def reflect(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        dist = x @ self.normal - self.offset
        return x - 2.0 * dist[..., None] * self.normal

    def reflect_vector(self, v) -> np.ndarray:
        """Linear part of the reflection (the offset dropped)."""
        v = np.asarray(v)
        return v - 2.0 * (v @ self.normal)[..., None] * self.normal


@dataclass(frozen=True)
class ReflectionReport:
    gradient_error: float
    curl_error: float
    n_probes: int

    def to_dict(self) -> dict:
        return {
            "gradient_error": self.gradient_error,
            "curl_error": self.curl_error,
            "n_probes": self.n_probes,
        }


def _fd_gradient(f, x, h):
    # for vector f this is the Jacobian J[i, j] = d f_i / d x_j
    cols = []
    for e in np.eye(3):
        cols.append((f(x + h * e) - f(x - h * e)) / (2.0 * h))
    return np.stack(cols, axis=-1)


def _curl_from_jacobian(J):
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])


def _guarded(f: Callable, name: str):
    def wrapped(x):
        try:
            val = np.asarray(f(x))
        except DomainError as exc:
            raise DomainError(f"{name} sampler rejected point {x}: {exc}") from exc
        if not np.all(np.isfinite(val)):
            raise DomainError(f"{name} sampler returned non-finite values at {x}")
        return val

    return wrapped


def reflect_check(
    plane: Plane,
    probes,
    scalar: Callable | None = None,
    vector: Callable | None = None,
    h: float = 1e-5,
) -> ReflectionReport:
    """Check the gradient and curl reflection identities by central differences.

    With ``R`` the reflection across ``plane`` and ``R'`` its linear part:

        grad(v o R)(x)          = R' grad v(R x)
        curl(-R' E o R)(x)      = R' curl E(R x)

    Args:
        plane: Mirror plane.
        probes: Points ``x``; both ``x`` and ``R x`` must lie in the samplers' domain.
        scalar: ``v(x) -> complex`` for one point, or ``None`` to skip.
        vector: ``E(x) -> complex 3-vector`` for one point, or ``None`` to skip.
        h: Difference step (scaled by ``max(1, |x|)``).

    Returns:
        Largest absolute discrepancy of each identity over the probes.
    """
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    grad_err = 0.0
    curl_err = 0.0
    v = _guarded(scalar, "scalar") if scalar is not None else None
    E = _guarded(vector, "vector") if vector is not None else None
    for x in probes:
        step = h * max(1.0, float(np.linalg.norm(x)))
        rx = plane.reflect(x)
        if v is not None:
            lhs = _fd_gradient(lambda y: v(plane.reflect(y)), x, step)
            rhs = plane.reflect_vector(_fd_gradient(v, rx, step))
            grad_err = max(grad_err, float(np.max(np.abs(lhs - rhs))))
        if E is not None:
            lhs = _curl_from_jacobian(_fd_gradient(lambda y: -plane.reflect_vector(E(plane.reflect(y))), x, step))
            rhs = plane.reflect_vector(_curl_from_jacobian(_fd_gradient(E, rx, step)))
            curl_err = max(curl_err, float(np.max(np.abs(lhs - rhs))))
    return ReflectionReport(gradient_error=grad_err, curl_error=curl_err, n_probes=len(probes))
