"""Orthonormal spherical harmonics and their surface gradients.

Convention: ``Y_n^m(theta, phi) = Pbar_n^m(cos theta) exp(i m phi)`` with the
Condon-Shortley phase folded into ``Pbar`` and
``int_{S^2} Y_n^m conj(Y_n'^m') = delta_nn' delta_mm'``.  Negative orders
follow ``Y_n^{-m} = (-1)^m conj(Y_n^m)``.

The normalised Legendre functions are evaluated as
``Pbar_n^m(x) = sin(theta)^m Q_n^m(x)`` where ``Q_n^m`` is a polynomial
obtained by the usual three-term recurrence.  Keeping the ``sin^m`` factor
separate gives ``Pbar/sin`` and ``dPbar/dtheta`` without dividing by
``sin(theta)``, so the poles need no separate branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MultipoleIndexError


def check_index(n: int, m: int) -> None:
    if n < 0 or abs(m) > n:
        raise MultipoleIndexError(f"invalid multipole index (n={n}, m={m}); need |m| <= n")


def flat_index(n: int, m: int) -> int:
    """Position of ``(n, m)`` in the packed ordering ``n^2 + n + m``."""
    return n * n + n + m


def n_modes(nmax: int) -> int:
    return (nmax + 1) ** 2


def mode_indices(nmax: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``(n, m)`` for the packed ordering up to degree ``nmax``."""
    ns = np.concatenate([np.full(2 * n + 1, n) for n in range(nmax + 1)])
    ms = np.concatenate([np.arange(-n, n + 1) for n in range(nmax + 1)])
    return ns, ms


def as_unit(v, tol: float = 1e-12) -> np.ndarray:
    """Normalise a vector (or a stack of vectors along the last axis)."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(norm <= tol):
        raise DomainError("cannot normalise a zero vector")
    return v / norm


def spherical_frame(dirs: np.ndarray):
    """Return ``(cos theta, sin theta, phi, theta_hat, phi_hat)`` for unit ``dirs``."""
    dirs = np.asarray(dirs, dtype=float)
    x = np.clip(dirs[..., 2], -1.0, 1.0)
    s = np.hypot(dirs[..., 0], dirs[..., 1])
    phi = np.arctan2(dirs[..., 1], dirs[..., 0])
    cp, sp = np.cos(phi), np.sin(phi)
    theta_hat = np.stack([x * cp, x * sp, -s], axis=-1)
    phi_hat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
    return x, s, phi, theta_hat, phi_hat


def harmonics_table(nmax: int, dirs, with_grad: bool = True):
    """Evaluate all ``Y_n^m`` (and ``Grad Y_n^m``) for ``n <= nmax``.

    Args:
        nmax: Highest degree.
        dirs: Unit vectors, shape ``(..., 3)``.
        with_grad: Also return the surface gradients.

    Returns:
        ``Y`` with shape ``((nmax+1)^2, ...)`` and, if requested, ``G`` with
        shape ``((nmax+1)^2, ..., 3)``, both in the packed ``(n, m)`` order.
    """
    dirs = np.asarray(dirs, dtype=float)
    pshape = dirs.shape[:-1]
    x, s, phi, theta_hat, phi_hat = spherical_frame(dirs.reshape(-1, 3))
    npts = x.size
    L = n_modes(nmax)
    Y = np.zeros((L, npts), dtype=complex)
    G = np.zeros((L, npts, 3), dtype=complex) if with_grad else None

    cmm = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(nmax + 1):
        if m > 0:
            cmm *= -math.sqrt((2.0 * m + 1.0) / (2.0 * m))
        sm = s**m
        smm1 = s ** (m - 1) if m > 0 else None
        eim = np.exp(1j * m * phi)
        q_prev = q_prev2 = dq_prev = dq_prev2 = None
        for n in range(m, nmax + 1):
            if n == m:
                q = np.full(npts, cmm)
                dq = np.zeros(npts)
            elif n == m + 1:
                a = math.sqrt(2.0 * m + 3.0)
                q = a * x * q_prev
                dq = a * q_prev
            else:
                a = math.sqrt((4.0 * n * n - 1.0) / (n * n - m * m))
                b = math.sqrt(((n - 1.0) ** 2 - m * m) * (2.0 * n + 1.0) / ((2.0 * n - 3.0) * (n * n - m * m)))
                q = a * x * q_prev - b * q_prev2
                dq = a * (q_prev + x * dq_prev) - b * dq_prev2
            q_prev2, q_prev = q_prev, q
            dq_prev2, dq_prev = dq_prev, dq

            ypos = sm * q * eim
            Y[flat_index(n, m)] = ypos
            if m > 0:
                Y[flat_index(n, -m)] = (-1) ** m * np.conj(ypos)
            if with_grad:
                dtheta = -(s ** (m + 1)) * dq
                if m > 0:
                    dtheta = dtheta + m * smm1 * x * q
                    dphi_over_s = 1j * m * smm1 * q
                    g = (dtheta[:, None] * theta_hat + dphi_over_s[:, None] * phi_hat) * eim[:, None]
                    G[flat_index(n, m)] = g
                    G[flat_index(n, -m)] = (-1) ** m * np.conj(g)
                else:
                    G[flat_index(n, 0)] = dtheta[:, None] * theta_hat
    Y = Y.reshape((L,) + pshape)
    if with_grad:
        return Y, G.reshape((L,) + pshape + (3,))
    return Y


def sph_harmonic(n: int, m: int, direction) -> complex:
    """``Y_n^m`` at one unit direction."""
    check_index(n, m)
    d = as_unit(direction)
    Y = harmonics_table(n, d[None, :], with_grad=False)
    return complex(Y[flat_index(n, m), 0])


def surface_grad_sph_harmonic(n: int, m: int, direction) -> np.ndarray:
    """``Grad Y_n^m`` at one unit direction, as a complex Cartesian 3-vector.

    The result is tangent to the sphere; it vanishes identically for ``n = 0``.
    """
    check_index(n, m)
    d = as_unit(direction)
    _, G = harmonics_table(n, d[None, :])
    return G[flat_index(n, m), 0].copy()


@dataclass(frozen=True)
class SphereQuadrature:
    """Gauss-Legendre in ``cos theta`` times a uniform rule in ``phi``."""

    dirs: np.ndarray
    weights: np.ndarray
    n_theta: int
    n_phi: int

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum over the trailing point axis (axis ``-1``)."""
        return values @ self.weights


def sphere_quadrature(n_theta: int = 64, n_phi: int = 128) -> SphereQuadrature:
    """Product rule on the unit sphere; weights sum to ``4 pi``.

    Exact for ``Y_n^m conj(Y_n'^m')`` products as long as
    ``n + n' <= 2 n_theta - 1`` and ``|m - m'| < n_phi``.
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    X, P = np.meshgrid(x, phi, indexing="ij")
    S = np.sqrt(1.0 - X**2)
    dirs = np.stack([S * np.cos(P), S * np.sin(P), X], axis=-1).reshape(-1, 3)
    weights = np.repeat(wx * (2.0 * np.pi / n_phi), n_phi)
    return SphereQuadrature(dirs=dirs, weights=weights, n_theta=n_theta, n_phi=n_phi)
