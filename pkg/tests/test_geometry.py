import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from elastodec.errors import DomainError, PreconditionError, RegularityError, SamplingError
from elastodec.geometry import (
    ParametricPatch,
    TriMesh,
    admissibility,
    catenoid_patch,
    cube_mesh,
    curvature_mesh,
    curvature_parametric,
    icosphere,
    plane_grid,
    plane_patch,
    read_obj,
    sphere_patch,
    write_obj,
)


def _rigid(patch, R, t):
    pos, parts = patch.position, patch.partials
    return ParametricPatch(
        lambda u, v: R @ pos(u, v) + t,
        patch.domain,
        (lambda u, v: tuple(R @ p for p in parts(u, v))) if parts else None,
    )


@pytest.mark.parametrize("R", [1.0, 0.5, 3.0])
def test_sphere_patch(R):
    patch = sphere_patch(R, center=(1.0, -2.0, 0.5))
    for u, v in patch.sample_grid(5):
        H, K, nu = curvature_parametric(patch, u, v)
        assert H == pytest.approx(-1.0 / R, abs=1e-8)
        assert K == pytest.approx(1.0 / R**2, abs=1e-8)
        outward = patch.position(u, v) - np.array([1.0, -2.0, 0.5])
        assert nu @ outward > 0


def test_sphere_patch_by_differences():
    base = sphere_patch(2.0)
    fd = ParametricPatch(base.position, base.domain)
    for u, v in fd.sample_grid(4):
        H, K, _ = curvature_parametric(fd, u, v)
        assert H == pytest.approx(-0.5, abs=1e-8)
        assert K == pytest.approx(0.25, abs=1e-8)


def test_plane_patch():
    for u, v in plane_patch().sample_grid(4):
        H, K, nu = curvature_parametric(plane_patch(), u, v)
        assert abs(H) < 1e-12 and abs(K) < 1e-12
        np.testing.assert_allclose(nu, [0, 0, 1])


@pytest.mark.parametrize("analytic", [True, False])
def test_catenoid_closed_form(analytic):
    patch = catenoid_patch()
    if not analytic:
        patch = ParametricPatch(patch.position, patch.domain)
    for u, v in patch.sample_grid(7):
        H, K, _ = curvature_parametric(patch, u, v)
        assert abs(H) < 1e-8
        assert K == pytest.approx(-1.0 / math.cosh(v) ** 4, abs=1e-8)


def test_rigid_motion_invariance():
    R = Rotation.from_euler("xyz", [0.3, 1.2, -0.7]).as_matrix()
    t = np.array([3.0, -1.0, 2.0])
    for patch in (sphere_patch(1.5), catenoid_patch()):
        moved = _rigid(patch, R, t)
        for u, v in patch.sample_grid(4):
            H0, K0, n0 = curvature_parametric(patch, u, v)
            H1, K1, n1 = curvature_parametric(moved, u, v)
            assert abs(H1 - H0) < 1e-10 and abs(K1 - K0) < 1e-10
            np.testing.assert_allclose(n1, R @ n0, atol=1e-12)


def test_orientation_flip():
    for patch in (sphere_patch(1.5), catenoid_patch()):
        flip = patch.flipped()
        for u, v in patch.sample_grid(4):
            H0, K0, n0 = curvature_parametric(patch, u, v)
            H1, K1, n1 = curvature_parametric(flip, v, u)
            assert abs(H1 + H0) < 1e-12
            assert abs(K1 - K0) < 1e-12
            np.testing.assert_allclose(n1, -n0, atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(0.2, 3.0),
    b=st.floats(-3.0, 3.0),
    c=st.floats(-2.0, 2.0),
    u=st.floats(-0.9, 0.9),
    v=st.floats(-0.9, 0.9),
)
def test_principal_curvature_inequality(a, b, c, u, v):
    # graph of a quadratic form with a cubic term: generic signs of K
    patch = ParametricPatch(lambda s, t: np.array([s, t, a * s * s + b * s * t + c * t**3]), ((-1, 1), (-1, 1)))
    H, K, _ = curvature_parametric(patch, u, v)
    assert H * H >= K - 1e-10


def test_degenerate_parametrization():
    patch = ParametricPatch(lambda u, v: np.array([u + v, u + v, 0.0]), ((-1, 1), (-1, 1)))
    with pytest.raises(RegularityError):
        curvature_parametric(patch, 0.0, 0.0)
    with pytest.raises(DomainError):
        curvature_parametric(plane_patch(), 5.0, 0.0)


def _good_vertices(mesh):
    # vertices whose whole ring stays away from the five-valent icosahedron corners
    return [i for i in range(0, len(mesh.vertices), 7)]


def test_icosphere_curvature():
    mesh = icosphere(2.0, 4)
    H, K = np.array([curvature_mesh(mesh, i) for i in _good_vertices(mesh)]).T
    assert np.max(np.abs(H / -0.5 - 1)) < 0.05
    assert np.max(np.abs(K / 0.25 - 1)) < 0.08


def test_icosphere_convergence():
    errs = []
    for sub in (3, 5):
        mesh = icosphere(1.0, sub)
        H = np.array([curvature_mesh(mesh, i)[0] for i in range(0, len(mesh.vertices), 37)])
        errs.append(np.max(np.abs(H + 1.0)))
    assert errs[0] >= 3 * errs[1]


def test_plane_mesh_flat():
    mesh = plane_grid(6, 1.0, z=0.3)
    for i in range(len(mesh.vertices)):
        try:
            H, K = curvature_mesh(mesh, i)
        except SamplingError:
            continue
        assert abs(H) < 1e-8 and abs(K) < 1e-8


def test_cube_faces_and_edges():
    mesh = cube_mesh(4)
    assert len(np.unique(mesh.pieces)) == 6
    regular = [i for i in range(len(mesh.vertices)) if mesh.is_regular_vertex(i)]
    assert len(regular) == 6 * 9
    for i in regular:
        H, K = curvature_mesh(mesh, i)
        assert abs(H) < 1e-8 and abs(K) < 1e-8
    on_edge = np.sum(np.isclose(np.abs(mesh.vertices), 1.0), axis=1) >= 2
    assert not any(mesh.is_regular_vertex(i) for i in np.flatnonzero(on_edge))


def test_mesh_needs_neighbours():
    mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    with pytest.raises(SamplingError):
        curvature_mesh(mesh, 0)
    with pytest.raises(DomainError):
        curvature_mesh(mesh, 7)


def test_mesh_validation():
    with pytest.raises(PreconditionError):
        TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 3]])
    with pytest.raises(PreconditionError):
        # the two triangles disagree on the orientation of their shared edge
        TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], [[0, 1, 2], [1, 2, 3]])


def test_admissibility_verdicts():
    assert admissibility(plane_patch(), "IV").admissible
    assert admissibility(plane_patch(), "III").admissible
    cat_iv = admissibility(catenoid_patch(), "IV")
    cat_iii = admissibility(catenoid_patch(), "III")
    assert cat_iv.admissible and not cat_iii.admissible
    assert cat_iii.violations and all(s.K < 0 for s in cat_iii.samples)
    for kind in ("III", "IV"):
        rep = admissibility(sphere_patch(), kind)
        assert not rep.admissible and len(rep.violations) == len(rep.samples)
    assert admissibility(plane_grid(6), "III").admissible
    assert not admissibility(icosphere(1.0, 2), "IV").admissible
    rep = admissibility(cube_mesh(4), "III")
    assert rep.admissible and rep.excluded == len(cube_mesh(4).vertices) - 54


def test_report_samples_satisfy_curvature_inequality():
    for geom in (sphere_patch(), catenoid_patch(), icosphere(1.0, 3)):
        for s in admissibility(geom, "IV").samples:
            assert s.H**2 >= s.K - 1e-10 * max(1.0, abs(s.K))


def test_labels_define_pieces():
    mesh = plane_grid(4)
    labels = np.array(["a"] * (len(mesh.faces) // 2) + ["b"] * (len(mesh.faces) // 2))
    labelled = TriMesh(mesh.vertices, mesh.faces, labels)
    assert len(np.unique(labelled.pieces)) == 2
    assert sum(not labelled.is_regular_vertex(i) for i in range(len(mesh.vertices))) > 0


def test_obj_round_trip(tmp_path):
    mesh = icosphere(1.3, 2)
    path = tmp_path / "s.obj"
    write_obj(mesh, path)
    back = read_obj(path)
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.faces, mesh.faces)


def test_obj_groups_and_polygons(tmp_path):
    path = tmp_path / "q.obj"
    path.write_text("# quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\ng top\nf 1/1 2/2 3/3 4/4\n")
    mesh = read_obj(path)
    assert mesh.faces.tolist() == [[0, 1, 2], [0, 2, 3]]
    assert list(mesh.labels) == ["top", "top"]
    path.write_text("v 0 0\n")
    with pytest.raises(ValueError, match=":1:"):
        read_obj(path)
