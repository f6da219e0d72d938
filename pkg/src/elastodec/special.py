"""Spherical Bessel and Hankel functions of integer order.

All routines work on real, strictly positive arguments.  ``j_n`` is built by
a downward (Miller) recurrence normalised against the closed forms of
``j_0`` and ``j_1``; ``y_n`` (and hence ``h_n = j_n + i y_n``) by the upward
recurrence, which is stable for the second solution.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OrderOverflowError

N_MAX_DEFAULT = 200

_RESCALE_AT = 1e200
_SERIES_BELOW = 1e-3


class RadialKind(enum.Enum):
    """Which radial function family to evaluate."""

    J = "j"
    H1 = "h"

    @classmethod
    def parse(cls, value: "RadialKind | str") -> "RadialKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown radial kind {value!r}")


@dataclass(frozen=True)
class RadialEval:
    """Value, derivatives and the two auxiliary combinations at one point.

    ``check`` is ``f + t f'`` and ``tilde`` is ``f - t f'``.
    """

    f: complex
    df: complex
    ddf: complex
    check: complex
    tilde: complex


def _as_positive_array(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if arr.size and not np.all(arr > 0):
        raise DomainError("radial argument must be positive")
    return arr


def _miller_start(nmax: int, tmax: float) -> int:
    base = max(nmax, int(math.ceil(tmax)))
    return base + 16 + int(math.ceil(math.sqrt(40.0 * (base + 1))))


def spherical_jn_all(nmax: int, t) -> np.ndarray:
    """Return ``j_0 .. j_nmax`` at every ``t``; shape ``(nmax + 1, *t.shape)``."""
    t = _as_positive_array(t)
    shape = t.shape
    tf = t.reshape(-1)
    out = np.zeros((nmax + 1, tf.size))
    if tf.size == 0:
        return out.reshape((nmax + 1,) + shape)

    tiny = tf < _SERIES_BELOW
    if np.any(tiny):
        out[:, tiny] = _jn_series(nmax, tf[tiny])
        if np.all(tiny):
            return out.reshape((nmax + 1,) + shape)
    out[:, ~tiny] = _miller(nmax, tf[~tiny])
    return out.reshape((nmax + 1,) + shape)


def _jn_series(nmax: int, t: np.ndarray) -> np.ndarray:
    """Three terms of the ascending series; relative error below ``t^6``."""
    out = np.empty((nmax + 1, t.size))
    lead = np.ones_like(t)
    t2 = t * t
    for n in range(nmax + 1):
        if n > 0:
            lead = lead * t / (2 * n + 1)
        out[n] = lead * (1.0 - t2 / (2 * (2 * n + 3)) + t2 * t2 / (8 * (2 * n + 3) * (2 * n + 5)))
    return out


def _miller(nmax: int, tf: np.ndarray) -> np.ndarray:
    out = np.zeros((nmax + 1, tf.size))
    start = _miller_start(nmax, float(tf.max()))
    upper = np.zeros_like(tf)
    cur = np.full_like(tf, 1e-300)
    for k in range(start, 0, -1):
        if k <= nmax:
            out[k] = cur
        lower = (2 * k + 1) / tf * cur - upper
        upper, cur = cur, lower
        big = np.abs(cur) > _RESCALE_AT
        if np.any(big):
            cur[big] /= _RESCALE_AT
            upper[big] /= _RESCALE_AT
            if k <= nmax:
                out[k:, big] /= _RESCALE_AT
    out[0] = cur
    # j_1 is the trial value at order 1 whether or not nmax reaches it
    trial1 = out[1] if nmax >= 1 else upper

    s, c = np.sin(tf), np.cos(tf)
    j0 = s / tf
    j1 = s / tf**2 - c / tf
    # least-squares fit against both closed forms (they never vanish
    # together); below t = 1 the j_1 formula cancels, so j_0 alone is used
    small = tf < 1.0
    mag = np.maximum(np.abs(out[0]), np.abs(trial1))
    a, b = out[0] / mag, trial1 / mag
    wb = np.where(small, 0.0, b)
    out *= (j0 * a + j1 * wb) / (a * a + wb * wb) / mag
    out[0] = j0
    if nmax >= 1:
        out[1] = np.where(small, out[1], j1)
    return out


def spherical_yn_all(nmax: int, t) -> np.ndarray:
    """Return ``y_0 .. y_nmax`` by upward recurrence."""
    t = _as_positive_array(t)
    shape = t.shape
    tf = t.reshape(-1)
    out = np.empty((nmax + 1, tf.size))
    s, c = np.sin(tf), np.cos(tf)
    out[0] = -c / tf
    if nmax >= 1:
        out[1] = -c / tf**2 - s / tf
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, nmax):
            out[n + 1] = (2 * n + 1) / tf * out[n] - out[n - 1]
    return out.reshape((nmax + 1,) + shape)


def radial_table(kind: RadialKind | str, nmax: int, t):
    """Vectorised ``(f, f', f'')`` for orders ``0..nmax``.

    Each array has shape ``(nmax + 1, *np.shape(t))``; the ``J`` family is
    returned as real arrays, ``H1`` as complex.
    """
    kind = RadialKind.parse(kind)
    t = _as_positive_array(t)
    if kind is RadialKind.J:
        f_ext = spherical_jn_all(nmax + 1, t)
    else:
        y = spherical_yn_all(nmax + 1, t)
        f_ext = spherical_jn_all(nmax + 1, t) + 1j * np.where(np.isinf(y), 0.0, y)
        # 1j * inf would give a nan real part; keep overflow visible as inf
        f_ext.imag[np.isinf(y)] = y[np.isinf(y)]
    f = f_ext[: nmax + 1]
    df = np.empty_like(f)
    df[0] = -f_ext[1]
    if nmax >= 1:
        n = np.arange(1, nmax + 1).reshape((-1,) + (1,) * t.ndim)
        with np.errstate(over="ignore", invalid="ignore"):
            df[1:] = f_ext[:nmax] - (n + 1) / t * f_ext[1 : nmax + 1]
    nn = np.arange(nmax + 1).reshape((-1,) + (1,) * t.ndim)
    with np.errstate(over="ignore", invalid="ignore"):
        ddf = -2.0 / t * df + (nn * (nn + 1) / t**2 - 1.0) * f
    return f, df, ddf


def radial_eval(
    kind: RadialKind | str, n: int, t: float, n_max: int = N_MAX_DEFAULT
) -> RadialEval:
    """Evaluate ``f_n(t)`` with its derivatives for ``f`` in ``{j, h}``."""
    if n < 0:
        raise DomainError("order must be non-negative")
    if n > n_max:
        raise OrderOverflowError(f"order {n} exceeds cap {n_max}")
    if not t > 0:
        raise DomainError("radial argument must be positive")
    f, df, ddf = radial_table(kind, n, np.array([float(t)]))
    fv, dfv, ddfv = complex(f[n, 0]), complex(df[n, 0]), complex(ddf[n, 0])
    if not all(map(np.isfinite, (fv, dfv, ddfv))):
        raise OrderOverflowError(f"order {n} overflows double range at t={t}")
    return RadialEval(
        f=fv,
        df=dfv,
        ddf=ddfv,
        check=fv + t * dfv,
        tilde=fv - t * dfv,
    )
