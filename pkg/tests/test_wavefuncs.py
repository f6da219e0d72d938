import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elastodec.errors import DomainError, MultipoleIndexError, PreconditionError
from elastodec.harmonics import as_unit, sph_harmonic
from elastodec.wavefuncs import (
    IncidentWave,
    WaveParams,
    default_truncation,
    expand_plane_wave,
    plane_wave_coeffs,
    scalar_wavefunc,
    vector_wavefunc,
)
from conftest import D_GENERIC, DPERP_GENERIC, exterior_points


def test_wave_params_and_wavenumbers():
    p = WaveParams(2.0, 1.0, 1.0)
    assert p.kp == pytest.approx(0.5, rel=1e-14)
    assert p.ks == pytest.approx(1.0, rel=1e-14)
    assert WaveParams.from_dict(p.to_dict()) == p


@pytest.mark.parametrize("lam,mu,omega", [(1.0, 0.0, 1.0), (-1.0, 1.0, 1.0), (1.0, 1.0, 0.0)])
def test_wave_params_invariants(lam, mu, omega):
    with pytest.raises(PreconditionError):
        WaveParams(lam, mu, omega)


def test_incident_wave_normalises_and_checks_orthogonality():
    inc = IncidentWave([0, 0, 2.0], [3.0, 0, 0], 1.0, 0.5j)
    assert np.linalg.norm(inc.d) == pytest.approx(1.0, abs=1e-12)
    assert IncidentWave.from_dict(inc.to_dict()).alpha_s == 0.5j
    with pytest.raises(PreconditionError):
        IncidentWave([0, 0, 1], [0, 1, 1])
    assert IncidentWave([0, 0, 1], [1, 0, 0], 0, 0).is_zero


def test_incident_derivatives_by_finite_differences(rng):
    p = WaveParams(2.0, 1.0, 1.3)
    inc = IncidentWave(D_GENERIC, DPERP_GENERIC, 0.7 - 0.2j, 1.1 + 0.4j)
    from oracles import curl_of, fd_jacobian

    x = exterior_points(rng, 10)
    J = fd_jacobian(lambda y: sum(inc.parts(p, y)), x, 1e-3)
    np.testing.assert_allclose(inc.divergence(p, x), np.trace(J, axis1=1, axis2=2), atol=1e-10)
    np.testing.assert_allclose(inc.curl(p, x), curl_of(J), atol=1e-10)
    xhat = x / np.linalg.norm(x, axis=1, keepdims=True)
    dp, ds = inc.radial_derivative(p, x)
    np.testing.assert_allclose(dp + ds, np.einsum("pij,pj->pi", J, xhat), atol=1e-10)


def test_scalar_wavefunc_examples():
    val, _ = scalar_wavefunc("j", 1.0, 0, 0, [math.pi, 0, 0])
    assert abs(val) < 1e-16
    with pytest.raises(DomainError):
        scalar_wavefunc("h", 1.0, 1, 0, [0, 0, 0])
    with pytest.raises(MultipoleIndexError):
        scalar_wavefunc("h", 1.0, 1, 2, [1, 0, 0])


def test_scalar_gradient_by_finite_differences(rng):
    h = 1e-5
    for x in exterior_points(rng, 20, 0.5, 3.0):
        n, m = int(rng.integers(0, 6)), 0
        m = int(rng.integers(-n, n + 1)) if n else 0
        for kind in ("j", "h"):
            _, grad = scalar_wavefunc(kind, 1.3, n, m, x)
            fd = np.array(
                [
                    (scalar_wavefunc(kind, 1.3, n, m, x + h * e)[0] - scalar_wavefunc(kind, 1.3, n, m, x - h * e)[0])
                    / (2 * h)
                    for e in np.eye(3)
                ]
            )
            assert np.max(np.abs(grad - fd)) < 1e-7 * max(1.0, np.abs(grad).max())


def test_scalar_wavefunc_definition(rng):
    from oracles import mp_spherical

    x = np.array([0.4, -1.2, 0.9])
    r = np.linalg.norm(x)
    val, _ = scalar_wavefunc("h", 2.0, 3, -2, x)
    assert val == pytest.approx(mp_spherical("h", 3, 2.0 * r) * sph_harmonic(3, -2, x), rel=1e-12)


def _fd_curl(F, x, h=1e-5):
    J = np.zeros((3, 3), dtype=complex)
    for j, e in enumerate(np.eye(3)):
        J[:, j] = (F(x + h * e) - F(x - h * e)) / (2 * h)
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]]), np.trace(J)


def test_vector_wavefunc_curl_and_divergence(rng):
    k = 1.3
    for x in exterior_points(rng, 10, 0.7, 3.0):
        for kind in ("j", "h"):
            M, curlM = vector_wavefunc(kind, k, 2, 1, x)
            fd_curl, fd_div = _fd_curl(lambda y: vector_wavefunc(kind, k, 2, 1, y)[0], x)
            assert np.max(np.abs(curlM - fd_curl)) < 1e-6
            assert abs(fd_div) < 1e-6 * k * np.linalg.norm(M) + 1e-9
            # curl curl M = k^2 M for a solution of the vector Helmholtz equation
            fd_cc, _ = _fd_curl(lambda y: vector_wavefunc(kind, k, 2, 1, y)[1], x)
            assert np.max(np.abs(fd_cc - k * k * M)) < 1e-6


def test_vector_wavefunc_rejects_n0():
    with pytest.raises(MultipoleIndexError):
        vector_wavefunc("h", 1.0, 0, 0, [1, 0, 0])


def test_m_is_tangential_cross_of_gradient(rng):
    # M_n^m = grad u_n^m ^ x
    for x in exterior_points(rng, 5):
        M, _ = vector_wavefunc("h", 0.8, 3, 2, x)
        _, g = scalar_wavefunc("h", 0.8, 3, 2, x)
        np.testing.assert_allclose(M, np.cross(g, x), atol=1e-13)


def test_plane_wave_coeff_examples():
    A1, A2, A3 = plane_wave_coeffs(0, 0, D_GENERIC, DPERP_GENERIC)
    assert A1 == pytest.approx(2j * math.sqrt(math.pi))
    assert A2 == 0 and A3 == 0
    d, dp = np.array([0.0, 0, 1]), np.array([1.0, 0, 0])
    A1, A2, A3 = plane_wave_coeffs(1, 0, d, dp)
    # Grad Y_1^0 = -sqrt(3/4pi) sin(theta) theta_hat vanishes at the pole along z
    assert abs(A2) < 1e-12 and abs(A3) < 1e-12
    d = np.array([1.0, 0, 0])
    dp = np.array([0.0, 0, 1.0])
    grad_y10 = -math.sqrt(3 / (4 * math.pi)) * np.array([0.0, 0.0, -1.0])  # theta_hat at theta=pi/2 is -z
    A1, A2, A3 = plane_wave_coeffs(1, 0, d, dp)
    assert A2 == pytest.approx(4 * math.pi * 1j * 1j * (grad_y10 @ dp), abs=1e-12)
    assert A3 == pytest.approx(4 * math.pi * 1j * (np.cross(grad_y10, d) @ dp), abs=1e-12)
    with pytest.raises(PreconditionError):
        plane_wave_coeffs(1, 0, [0, 0, 1], [0, 1, 1])


@pytest.mark.parametrize("which", ["longitudinal", "transversal"])
def test_expansion_at_origin(which):
    out = expand_plane_wave(which, 1.0, D_GENERIC, DPERP_GENERIC, 2, np.zeros(3))
    ref = D_GENERIC if which == "longitudinal" else DPERP_GENERIC
    np.testing.assert_allclose(out, ref, atol=1e-12)


@pytest.mark.parametrize("which", ["longitudinal", "transversal"])
def test_expansion_matches_plane_wave(which, rng):
    k = 2.0
    x = as_unit(rng.normal(size=(50, 3))) * 3.0
    out = expand_plane_wave(which, k, D_GENERIC, DPERP_GENERIC, 40, x)
    pol = D_GENERIC if which == "longitudinal" else DPERP_GENERIC
    exact = np.exp(1j * k * (x @ D_GENERIC))[:, None] * pol
    assert np.max(np.abs(out - exact)) < 1e-10


@pytest.mark.parametrize("kr", [2.0, 5.0, 10.0])
def test_truncation_convergence(kr, rng):
    x = as_unit(rng.normal(size=(40, 3))) * kr
    exact = np.exp(1j * (x @ D_GENERIC))[:, None] * DPERP_GENERIC
    errs = [np.max(np.abs(expand_plane_wave("transversal", 1.0, D_GENERIC, DPERP_GENERIC, N, x) - exact)) for N in
            (int(kr) + 10, int(kr) + 14, int(kr) + 18)]
    assert errs[0] < 1e-3 and errs[1] < errs[0] * 1e-2 and errs[2] < max(errs[1] * 1e-2, 1e-13)


def test_sommerfeld_condition_for_radiating_modes(rng):
    k = 1.0
    xhat = as_unit(rng.normal(size=3))
    for n, m in [(0, 0), (2, 1), (5, -3)]:
        vals = []
        for r in (100.0 / k, 200.0 / k):
            v, g = scalar_wavefunc("h", k, n, m, r * xhat)
            vals.append(abs(r * (g @ xhat - 1j * k * v)))
        assert vals[1] / vals[0] <= 0.6


def test_default_truncation():
    assert default_truncation(2.0) == math.ceil(2 + 4 * 2 ** (1 / 3) + 12)


@settings(max_examples=25, deadline=None)
@given(
    theta=st.floats(0.0, math.pi),
    phi=st.floats(0.0, 2 * math.pi),
    r=st.floats(0.0, 4.0),
)
def test_expansion_property(theta, phi, r):
    x = r * np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
    out = expand_plane_wave("longitudinal", 1.5, D_GENERIC, DPERP_GENERIC, 35, x)
    np.testing.assert_allclose(out, np.exp(1.5j * (x @ D_GENERIC)) * D_GENERIC, atol=1e-11)
