"""Spherical wave functions, elastic wave parameters and plane-wave expansions.

Every vector field handled here is written in the local spherical basis

    V(x) = rho(r) Y(x_hat) x_hat + g(r) Grad Y(x_hat) + q(r) x_hat ^ Grad Y(x_hat)

summed over the packed multipole index.  :class:`SphericalBasis` caches the
angular factors at a set of points and :func:`assemble` contracts radial
coefficient arrays against them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MultipoleIndexError, PreconditionError
from .harmonics import (
    as_unit,
    check_index,
    flat_index,
    harmonics_table,
    mode_indices,
)
from .special import RadialKind, radial_table

ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class WaveParams:
    """Lame constants and angular frequency; wavenumbers are derived."""

    lam: float
    mu: float
    omega: float

    def __post_init__(self):
        if not self.mu > 0:
            raise PreconditionError("shear modulus mu must be positive")
        if not 3.0 * self.lam + 2.0 * self.mu > 0:
            raise PreconditionError("Lame constants must satisfy 3*lambda + 2*mu > 0")
        if not self.omega > 0:
            raise PreconditionError("angular frequency must be positive")

    @property
    def kp(self) -> float:
        return self.omega / math.sqrt(self.lam + 2.0 * self.mu)

    @property
    def ks(self) -> float:
        return self.omega / math.sqrt(self.mu)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "omega": self.omega, "kp": self.kp, "ks": self.ks}

    @classmethod
    def from_dict(cls, data: dict) -> "WaveParams":
        lam = data["lambda"] if "lambda" in data else data["lam"]
        return cls(lam=float(lam), mu=float(data["mu"]), omega=float(data["omega"]))


@dataclass(frozen=True)
class IncidentWave:
    """Plane wave ``alpha_p d e^{i kp d.x} + alpha_s dperp e^{i ks d.x}``."""

    d: np.ndarray
    dperp: np.ndarray
    alpha_p: complex = 1.0
    alpha_s: complex = 0.0

    def __post_init__(self):
        d = as_unit(self.d)
        dperp = as_unit(self.dperp)
        if abs(float(d @ dperp)) > ORTHO_TOL:
            raise PreconditionError("polarization must be orthogonal to the propagation direction")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "dperp", dperp)
        object.__setattr__(self, "alpha_p", complex(self.alpha_p))
        object.__setattr__(self, "alpha_s", complex(self.alpha_s))

    @property
    def is_zero(self) -> bool:
        return self.alpha_p == 0 and self.alpha_s == 0

    def parts(self, params: WaveParams, points) -> tuple[np.ndarray, np.ndarray]:
        """P- and S-parts of the incident displacement at ``points``."""
        x = np.asarray(points, dtype=float)
        phase = x @ self.d
        up = self.alpha_p * np.exp(1j * params.kp * phase)[..., None] * self.d
        us = self.alpha_s * np.exp(1j * params.ks * phase)[..., None] * self.dperp
        return up, us

    def divergence(self, params: WaveParams, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        return 1j * params.kp * self.alpha_p * np.exp(1j * params.kp * (x @ self.d))

    def curl(self, params: WaveParams, points) -> np.ndarray:
        x = np.asarray(points, dtype=float)
        amp = 1j * params.ks * self.alpha_s * np.exp(1j * params.ks * (x @ self.d))
        return amp[..., None] * np.cross(self.d, self.dperp)

    def radial_derivative(self, params: WaveParams, points) -> tuple[np.ndarray, np.ndarray]:
        """``(x_hat . grad)`` applied to the P- and S-parts."""
        x = np.asarray(points, dtype=float)
        xhat = x / np.linalg.norm(x, axis=-1, keepdims=True)
        cos = xhat @ self.d
        up, us = self.parts(params, x)
        return (1j * params.kp * cos)[..., None] * up, (1j * params.ks * cos)[..., None] * us

    def to_dict(self) -> dict:
        return {
            "d": [float(v) for v in self.d],
            "dperp": [float(v) for v in self.dperp],
            "alpha_p": [self.alpha_p.real, self.alpha_p.imag],
            "alpha_s": [self.alpha_s.real, self.alpha_s.imag],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IncidentWave":
        return cls(
            d=np.asarray(data["d"], dtype=float),
            dperp=np.asarray(data["dperp"], dtype=float),
            alpha_p=_parse_complex(data.get("alpha_p", 0.0)),
            alpha_s=_parse_complex(data.get("alpha_s", 0.0)),
        )


def _parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    return complex(value)


def default_truncation(kr: float) -> int:
    """Mie-style truncation degree for a series evaluated out to ``k r``."""
    kr = max(float(kr), 0.0)
    return int(math.ceil(kr + 4.0 * kr ** (1.0 / 3.0) + 12.0))


class SphericalBasis:
    """Angular factors of every multipole up to ``nmax`` at a set of points."""

    def __init__(self, nmax: int, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts, axis=-1)
        if np.any(r <= 0):
            raise DomainError("wave functions are evaluated off the origin only")
        self.nmax = nmax
        self.points = pts
        self.r = r
        self.xhat = pts / r[:, None]
        self.Y, self.G = harmonics_table(nmax, self.xhat)
        self.XG = np.cross(self.xhat[None, :, :], self.G)
        ns, ms = mode_indices(nmax)
        self.n = ns
        self.m = ms
        self.nn1 = (ns * (ns + 1)).astype(float)

    def radial(self, kind: RadialKind | str, k: float):
        """``(t, f, f', f'')`` expanded onto the packed mode axis, shape ``(L, P)``."""
        t = k * self.r
        f, df, ddf = radial_table(kind, self.nmax, t)
        return t, f[self.n], df[self.n], ddf[self.n]


def assemble(basis: SphericalBasis, coeff, rho=None, g=None, q=None) -> np.ndarray:
    """Sum ``coeff_l * (rho Y x_hat + g Grad Y + q x_hat ^ Grad Y)`` over modes.

    ``coeff`` has shape ``(L,)``; ``rho``, ``g``, ``q`` have shape ``(L, P)``.
    Returns an array of shape ``(P, 3)``.
    """
    coeff = np.asarray(coeff)
    out = np.zeros(basis.points.shape, dtype=complex)
    if rho is not None:
        out += np.einsum("l,lp,lp->p", coeff, rho, basis.Y)[:, None] * basis.xhat
    if g is not None:
        out += np.einsum("l,lp,lpk->pk", coeff, g, basis.G)
    if q is not None:
        out += np.einsum("l,lp,lpk->pk", coeff, q, basis.XG)
    return out


def assemble_scalar(basis: SphericalBasis, coeff, values) -> np.ndarray:
    """Sum ``coeff_l * values_l * Y_l`` over modes; returns shape ``(P,)``."""
    return np.einsum("l,lp,lp->p", np.asarray(coeff), values, basis.Y)


def _single(n: int, m: int):
    check_index(n, m)
    return flat_index(n, m)


def scalar_wavefunc(kind: RadialKind | str, k: float, n: int, m: int, x):
    """``u_n^m[f; k](x) = f_n(k|x|) Y_n^m(x_hat)`` and its gradient."""
    l = _single(n, m)
    basis = SphericalBasis(n, np.asarray(x, dtype=float)[None, :])
    _, f, df, _ = basis.radial(kind, k)
    coeff = np.zeros(len(basis.n), dtype=complex)
    coeff[l] = 1.0
    value = assemble_scalar(basis, coeff, f)[0]
    grad = assemble(basis, coeff, rho=k * df, g=f / basis.r)[0]
    return complex(value), grad


def vector_wavefunc(kind: RadialKind | str, k: float, n: int, m: int, x):
    """``M_n^m[f; k](x)`` and ``curl M_n^m[f; k](x)`` for ``n >= 1``."""
    if n == 0:
        raise MultipoleIndexError("M_0^0 vanishes identically; n must be >= 1")
    l = _single(n, m)
    basis = SphericalBasis(n, np.asarray(x, dtype=float)[None, :])
    t, f, df, _ = basis.radial(kind, k)
    coeff = np.zeros(len(basis.n), dtype=complex)
    coeff[l] = 1.0
    M = assemble(basis, coeff, q=-f)[0]
    curlM = assemble(basis, coeff, rho=basis.nn1[:, None] * f / basis.r, g=(f + t * df) / basis.r)[0]
    return M, curlM


def plane_wave_coeff_table(nmax: int, d, dperp):
    """Packed arrays ``(A1, A2, A3)`` for every ``(n, m)`` with ``n <= nmax``."""
    d = as_unit(d)
    dperp = as_unit(dperp)
    if abs(float(d @ dperp)) > ORTHO_TOL:
        raise PreconditionError("polarization must be orthogonal to the propagation direction")
    Y, G = harmonics_table(nmax, d[None, :])
    Yc = np.conj(Y[:, 0])
    Gc = np.conj(G[:, 0, :])
    ns, _ = mode_indices(nmax)
    ipow = 1j ** (ns % 4)
    A1 = 4.0 * np.pi * 1j * ipow * Yc
    A2 = 4.0 * np.pi * 1j * ipow * (Gc @ dperp)
    A3 = 4.0 * np.pi * ipow * (np.cross(Gc, d) @ dperp)
    return A1, A2, A3


def plane_wave_coeffs(n: int, m: int, d, dperp) -> tuple[complex, complex, complex]:
    """``(A_n^m(1), A_n^m(2), A_n^m(3))`` for incident direction and polarization."""
    l = _single(n, m)
    A1, A2, A3 = plane_wave_coeff_table(n, d, dperp)
    return complex(A1[l]), complex(A2[l]), complex(A3[l])


def _origin_gradient_basis() -> np.ndarray:
    """``[Y_1^m(e_j)]_j`` for m = -1, 0, 1: gradients of ``r Y_1^m``."""
    Y = harmonics_table(1, np.eye(3), with_grad=False)
    return Y[1:4].T.copy()  # shape (3 coords, 3 orders)


def expand_plane_wave(which: str, k: float, d, dperp, N: int, x) -> np.ndarray:
    """Truncated multipole expansion of a longitudinal or transversal plane wave.

    ``which="longitudinal"`` approximates ``d e^{i k x.d}``;
    ``which="transversal"`` approximates ``dperp e^{i k x.d}``.  ``x`` may be a
    single point or an array of points; the origin is handled by the
    analytic limit of the ``n = 1`` terms.
    """
    if N < 1:
        raise PreconditionError("truncation degree must be >= 1")
    which = which.lower()
    if which not in ("longitudinal", "transversal"):
        raise ValueError(f"unknown plane-wave family {which!r}")
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    A1, A2, A3 = plane_wave_coeff_table(N, d, dperp)
    ns, _ = mode_indices(N)
    nn1 = np.where(ns > 0, ns * (ns + 1), 1).astype(float)

    out = np.zeros(pts.shape, dtype=complex)
    r = np.linalg.norm(pts, axis=-1)
    at_origin = r == 0.0
    if np.any(~at_origin):
        basis = SphericalBasis(N, pts[~at_origin])
        t, f, df, _ = basis.radial(RadialKind.J, k)
        if which == "longitudinal":
            val = assemble(basis, -A1 / k, rho=k * df, g=f / basis.r)
        else:
            bcoef = np.where(ns > 0, -A2 / (k * nn1), 0.0)
            ccoef = np.where(ns > 0, A3 / nn1, 0.0)
            val = assemble(basis, bcoef, rho=basis.nn1[:, None] * f / basis.r, g=(f + t * df) / basis.r)
            val += assemble(basis, ccoef, q=-f)
        out[~at_origin] = val
    if np.any(at_origin):
        grad_rY1 = _origin_gradient_basis()
        if which == "longitudinal":
            # grad u_1^m[j] -> (k/3) grad(r Y_1^m) at the origin
            vec = grad_rY1 @ (-A1[1:4] / k) * (k / 3.0)
        else:
            # curl M_1^m[j] -> (2k/3) grad(r Y_1^m); M_1^m[j] vanishes there
            vec = grad_rY1 @ (-A2[1:4] / (2.0 * k)) * (2.0 * k / 3.0)
        out[at_origin] = vec
    return out[0] if single else out
