"""Mean and Gaussian curvature of parametric patches and triangle meshes.

Sign convention: with the unit normal ``nu = x_u ^ x_v / |x_u ^ x_v|`` and
second fundamental form ``e = x_uu . nu`` (etc.),

    H = (e G - 2 f F + g E) / (2 (E G - F^2)),   K = (e g - f^2) / (E G - F^2),

so that ``2H = -div nu``.  A sphere of radius ``R`` parametrized with an
outward normal has ``H = -1/R`` and ``K = 1/R^2``.

Mesh curvature fits a quadric height field ``z = a x^2 + b xy + c y^2 + d x + e y``
in the tangent frame of each vertex; see :func:`curvature_mesh`.
"""
from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, PreconditionError, RegularityError, SamplingError

REGULARITY_TOL = 1e-10
DIHEDRAL_DEG = 20.0


# ----------------------------------------------------------------------------
# parametric patches


def _fd_partials(position: Callable, u: float, v: float, h: float):
    """Fourth-order central differences for first and second partials."""

    def x(a, b):
        return np.asarray(position(a, b), dtype=float)

    c1 = (1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0)
    c2 = (-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0)
    offs = (-2, -1, 0, 1, 2)
    xu = sum(c * x(u + o * h, v) for c, o in zip(c1, offs) if c) / h
    xv = sum(c * x(u, v + o * h) for c, o in zip(c1, offs) if c) / h
    xuu = sum(c * x(u + o * h, v) for c, o in zip(c2, offs)) / h**2
    xvv = sum(c * x(u, v + o * h) for c, o in zip(c2, offs)) / h**2
    xuv = sum(
        ci * cj * x(u + oi * h, v + oj * h)
        for ci, oi in zip(c1, offs)
        for cj, oj in zip(c1, offs)
        if ci and cj
    ) / h**2
    return xu, xv, xuu, xuv, xvv


@dataclass(frozen=True)
class ParametricPatch:
    """A surface patch ``x(u, v)`` on a rectangle of the parameter plane.

    Attributes:
        position: ``(u, v) -> (x, y, z)``.
        domain: ``((u_min, u_max), (v_min, v_max))``.
        partials: Optional ``(u, v) -> (x_u, x_v, x_uu, x_uv, x_vv)``; finite
            differences with step ``fd_step`` are used when absent.
        fd_step: Difference step in parameter units.
    """

    position: Callable
    domain: tuple = ((0.0, 1.0), (0.0, 1.0))
    partials: Callable | None = None
    fd_step: float = 1e-3

    def derivatives(self, u: float, v: float):
        (u0, u1), (v0, v1) = self.domain
        if not (u0 <= u <= u1 and v0 <= v <= v1):
            raise DomainError(f"parameter ({u}, {v}) outside the patch domain")
        if self.partials is not None:
            return tuple(np.asarray(p, dtype=float) for p in self.partials(u, v))
        return _fd_partials(self.position, u, v, self.fd_step)

    def flipped(self) -> "ParametricPatch":
        """Same surface with the parameters swapped (reversed normal)."""
        partials = None
        if self.partials is not None:
            base = self.partials

            def partials(u, v):
                xu, xv, xuu, xuv, xvv = base(v, u)
                return xv, xu, xvv, xuv, xuu

        pos = self.position
        return ParametricPatch(
            position=lambda u, v: pos(v, u),
            domain=(self.domain[1], self.domain[0]),
            partials=partials,
            fd_step=self.fd_step,
        )

    def sample_grid(self, n: int = 9, margin: float = 0.05) -> list[tuple[float, float]]:
        """An ``n x n`` grid of parameters kept ``margin`` away from the domain edges."""
        (u0, u1), (v0, v1) = self.domain
        us = np.linspace(u0 + margin * (u1 - u0), u1 - margin * (u1 - u0), n)
        vs = np.linspace(v0 + margin * (v1 - v0), v1 - margin * (v1 - v0), n)
        return [(float(a), float(b)) for a in us for b in vs]


def curvature_parametric(patch: ParametricPatch, u: float, v: float):
    """Return ``(H, K, normal)`` of the patch at parameter ``(u, v)``."""
    xu, xv, xuu, xuv, xvv = patch.derivatives(u, v)
    cross = np.cross(xu, xv)
    area = np.linalg.norm(cross)
    if area <= REGULARITY_TOL:
        raise RegularityError(f"degenerate parametrization at ({u}, {v})")
    nu = cross / area
    E, F, G = xu @ xu, xu @ xv, xv @ xv
    e, f, g = xuu @ nu, xuv @ nu, xvv @ nu
    det = E * G - F * F
    H = (e * G - 2.0 * f * F + g * E) / (2.0 * det)
    K = (e * g - f * f) / det
    return float(H), float(K), nu


def sphere_patch(radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> ParametricPatch:
    """Outward-oriented polar parametrization (poles excluded from the domain)."""
    c = np.asarray(center, dtype=float)

    def pos(th, ph):
        return c + radius * np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])

    def partials(th, ph):
        st, ct, sp, cp = math.sin(th), math.cos(th), math.sin(ph), math.cos(ph)
        xu = radius * np.array([ct * cp, ct * sp, -st])
        xv = radius * np.array([-st * sp, st * cp, 0.0])
        xuu = radius * np.array([-st * cp, -st * sp, -ct])
        xuv = radius * np.array([-ct * sp, ct * cp, 0.0])
        xvv = radius * np.array([-st * cp, -st * sp, 0.0])
        return xu, xv, xuu, xuv, xvv

    return ParametricPatch(pos, ((0.1, math.pi - 0.1), (0.0, 2.0 * math.pi)), partials)


def plane_patch(size: float = 1.0) -> ParametricPatch:
    return ParametricPatch(lambda u, v: np.array([u, v, 0.0]), ((-size, size), (-size, size)))


def catenoid_patch(height: float = 1.0) -> ParametricPatch:
    """``(cosh v cos u, cosh v sin u, v)``."""

    def partials(u, v):
        ch, sh, cu, su = math.cosh(v), math.sinh(v), math.cos(u), math.sin(u)
        xu = np.array([-ch * su, ch * cu, 0.0])
        xv = np.array([sh * cu, sh * su, 1.0])
        xuu = np.array([-ch * cu, -ch * su, 0.0])
        xuv = np.array([-sh * su, sh * cu, 0.0])
        xvv = np.array([ch * cu, ch * su, 0.0])
        return xu, xv, xuu, xuv, xvv

    return ParametricPatch(
        lambda u, v: np.array([math.cosh(v) * math.cos(u), math.cosh(v) * math.sin(u), v]),
        ((0.0, 2.0 * math.pi), (-height, height)),
        partials,
    )


# ----------------------------------------------------------------------------
# triangle meshes


@dataclass
class TriMesh:
    """Indexed triangle mesh with optional per-face piece labels.

    Faces must be consistently oriented: every interior edge is traversed
    once in each direction.  Counter-clockwise faces seen from outside give
    outward normals.
    """

    vertices: np.ndarray
    faces: np.ndarray
    labels: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise PreconditionError("face references a vertex that does not exist")
        if np.any((self.faces[:, 0] == self.faces[:, 1]) | (self.faces[:, 1] == self.faces[:, 2]) | (self.faces[:, 0] == self.faces[:, 2])):
            raise PreconditionError("degenerate face with repeated vertex")
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if len(self.labels) != len(self.faces):
                raise PreconditionError("need one piece label per face")
        self._check_orientation()

    def _check_orientation(self):
        seen = set()
        for tri in self.faces:
            for k in range(3):
                edge = (int(tri[k]), int(tri[(k + 1) % 3]))
                if edge in seen:
                    raise PreconditionError(
                        f"mesh is not consistently oriented (edge {edge} traversed twice in one direction)"
                    )
                seen.add(edge)

    @property
    def face_normals(self) -> np.ndarray:
        """Unnormalised face normals (length = twice the area)."""
        if "fn" not in self._cache:
            v = self.vertices[self.faces]
            self._cache["fn"] = np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])
        return self._cache["fn"]

    @property
    def vertex_faces(self) -> list[list[int]]:
        if "vf" not in self._cache:
            vf: list[list[int]] = [[] for _ in range(len(self.vertices))]
            for fi, tri in enumerate(self.faces):
                for vi in tri:
                    vf[int(vi)].append(fi)
            self._cache["vf"] = vf
        return self._cache["vf"]

    @property
    def pieces(self) -> np.ndarray:
        """Piece id per face: labels when given, else dihedral-angle clustering."""
        if "pieces" not in self._cache:
            if self.labels is not None:
                _, ids = np.unique(self.labels, return_inverse=True)
                self._cache["pieces"] = ids
            else:
                self._cache["pieces"] = self._cluster(DIHEDRAL_DEG)
        return self._cache["pieces"]

    def _cluster(self, threshold_deg: float) -> np.ndarray:
        fn = self.face_normals
        unit = fn / np.linalg.norm(fn, axis=1, keepdims=True)
        edge_faces = defaultdict(list)
        for fi, tri in enumerate(self.faces):
            for k in range(3):
                a, b = int(tri[k]), int(tri[(k + 1) % 3])
                edge_faces[(min(a, b), max(a, b))].append(fi)
        adj: list[list[int]] = [[] for _ in range(len(self.faces))]
        cos_t = math.cos(math.radians(threshold_deg))
        for fs in edge_faces.values():
            if len(fs) == 2 and unit[fs[0]] @ unit[fs[1]] >= cos_t:
                adj[fs[0]].append(fs[1])
                adj[fs[1]].append(fs[0])
        ids = np.full(len(self.faces), -1, dtype=np.int64)
        nxt = 0
        for start in range(len(self.faces)):
            if ids[start] >= 0:
                continue
            ids[start] = nxt
            queue = deque([start])
            while queue:
                f = queue.popleft()
                for g in adj[f]:
                    if ids[g] < 0:
                        ids[g] = nxt
                        queue.append(g)
            nxt += 1
        return ids

    def vertex_pieces(self, vertex: int) -> set[int]:
        return {int(self.pieces[f]) for f in self.vertex_faces[vertex]}

    def is_regular_vertex(self, vertex: int) -> bool:
        """A vertex is regular when all its faces belong to one piece."""
        return len(self.vertex_pieces(vertex)) == 1

    def ring(self, vertex: int, depth: int = 2, piece: int | None = None) -> list[int]:
        """Vertices within ``depth`` edges of ``vertex`` (excluded), optionally within one piece."""
        faces_ok = (lambda f: True) if piece is None else (lambda f: self.pieces[f] == piece)
        seen = {vertex}
        frontier = [vertex]
        for _ in range(depth):
            nxt = []
            for v in frontier:
                for f in self.vertex_faces[v]:
                    if not faces_ok(f):
                        continue
                    for w in self.faces[f]:
                        w = int(w)
                        if w not in seen:
                            seen.add(w)
                            nxt.append(w)
            frontier = nxt
        seen.discard(vertex)
        return sorted(seen)

    def vertex_normal(self, vertex: int, piece: int | None = None) -> np.ndarray:
        fs = [f for f in self.vertex_faces[vertex] if piece is None or self.pieces[f] == piece]
        if not fs:
            raise SamplingError(f"vertex {vertex} has no incident faces")
        n = self.face_normals[fs].sum(axis=0)
        return n / np.linalg.norm(n)


def _tangent_frame(nu: np.ndarray):
    helper = np.array([1.0, 0.0, 0.0]) if abs(nu[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    t1 = np.cross(nu, helper)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(nu, t1)


def curvature_mesh(mesh: TriMesh, vertex: int, ring: int = 2):
    """Return ``(H, K)`` at a mesh vertex from a local quadric fit.

    The neighbourhood is the ``ring``-ring of ``vertex`` restricted to its
    piece (the full ring at piece-boundary vertices).  The fit is done in the
    frame of the area-weighted vertex normal, and ``H``, ``K`` are read off
    the Monge-patch formulas at the origin.
    """
    if not 0 <= vertex < len(mesh.vertices):
        raise DomainError(f"vertex index {vertex} out of range")
    pcs = mesh.vertex_pieces(vertex)
    piece = next(iter(pcs)) if len(pcs) == 1 else None
    nbrs = mesh.ring(vertex, ring, piece)
    if len(nbrs) < 5:
        raise SamplingError(f"vertex {vertex} has {len(nbrs)} neighbours; at least 5 are needed")
    nu = mesh.vertex_normal(vertex, piece)
    t1, t2 = _tangent_frame(nu)
    rel = mesh.vertices[nbrs] - mesh.vertices[vertex]
    x, y, z = rel @ t1, rel @ t2, rel @ nu
    A = np.column_stack([x * x, x * y, y * y, x, y])
    scale = np.abs(A).max(axis=0)
    scale[scale == 0] = 1.0
    coef, *_ = np.linalg.lstsq(A / scale, z, rcond=None)
    a, b, c, d, e = coef / scale
    fxx, fxy, fyy, fx, fy = 2.0 * a, b, 2.0 * c, d, e
    w2 = 1.0 + fx * fx + fy * fy
    H = ((1.0 + fy * fy) * fxx - 2.0 * fx * fy * fxy + (1.0 + fx * fx) * fyy) / (2.0 * w2**1.5)
    K = (fxx * fyy - fxy * fxy) / w2**2
    return float(H), float(K)


# ----------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class CurvatureSample:
    location: tuple
    H: float
    K: float
    normal: tuple

    def to_dict(self) -> dict:
        return {"location": list(self.location), "H": self.H, "K": self.K, "normal": list(self.normal)}


@dataclass(frozen=True)
class CurvatureReport:
    """Curvature samples over the regular part of a surface and both verdicts.

    ``verdict_iv`` needs ``max|H| <= tol``; ``verdict_iii`` additionally needs
    ``max|K| <= tol^2``.
    """

    kind: str
    tol: float
    samples: list
    verdict_iv: bool
    verdict_iii: bool
    violations: list
    excluded: int = 0

    @property
    def admissible(self) -> bool:
        return self.verdict_iv if self.kind == "IV" else self.verdict_iii

    @property
    def max_abs_H(self) -> float:
        return max((abs(s.H) for s in self.samples), default=0.0)

    @property
    def max_abs_K(self) -> float:
        return max((abs(s.K) for s in self.samples), default=0.0)

    def to_dict(self, with_samples: bool = True) -> dict:
        out = {
            "schema": "1",
            "kind": self.kind,
            "tol": self.tol,
            "admissible": self.admissible,
            "verdict_iv": self.verdict_iv,
            "verdict_iii": self.verdict_iii,
            "max_abs_H": self.max_abs_H,
            "max_abs_K": self.max_abs_K,
            "n_samples": len(self.samples),
            "n_excluded": self.excluded,
            "violations": [s.to_dict() for s in self.violations],
        }
        if with_samples:
            out["samples"] = [s.to_dict() for s in self.samples]
        return out


def _samples_for(geometry, ring: int, n_grid: int):
    excluded = 0
    samples = []
    if isinstance(geometry, ParametricPatch):
        for u, v in geometry.sample_grid(n_grid):
            H, K, nu = curvature_parametric(geometry, u, v)
            loc = np.asarray(geometry.position(u, v), dtype=float)
            samples.append(CurvatureSample(tuple(map(float, loc)), H, K, tuple(map(float, nu))))
    elif isinstance(geometry, TriMesh):
        for vi in range(len(geometry.vertices)):
            if not geometry.is_regular_vertex(vi):
                excluded += 1
                continue
            try:
                H, K = curvature_mesh(geometry, vi, ring)
            except SamplingError:
                excluded += 1
                continue
            piece = next(iter(geometry.vertex_pieces(vi)))
            nu = geometry.vertex_normal(vi, piece)
            samples.append(
                CurvatureSample(tuple(map(float, geometry.vertices[vi])), H, K, tuple(map(float, nu)))
            )
    else:
        raise TypeError("geometry must be a ParametricPatch or a TriMesh")
    return samples, excluded


def admissibility(geometry, kind: str = "IV", tol: float = 1e-6, ring: int = 2, n_grid: int = 9) -> CurvatureReport:
    """Classify a surface against the curvature conditions for decoupling.

    Args:
        geometry: :class:`ParametricPatch` (sampled on an ``n_grid`` square
            grid) or :class:`TriMesh` (all regular vertices).
        kind: ``"III"`` or ``"IV"``; selects the reported violations.
        tol: Curvature tolerance in inverse length units.
        ring: Neighbourhood depth for mesh fits.
        n_grid: Samples per parameter direction for patches.
    """
    kind = str(kind).upper()
    if kind not in ("III", "IV"):
        raise ValueError(f"unknown boundary kind {kind!r}")
    if tol < 0:
        raise PreconditionError("tolerance must be non-negative")
    samples, excluded = _samples_for(geometry, ring, n_grid)
    bad_h = [s for s in samples if abs(s.H) > tol]
    bad_k = [s for s in samples if abs(s.K) > tol * tol]
    verdict_iv = not bad_h
    verdict_iii = not bad_h and not bad_k
    if kind == "IV":
        violations = bad_h
    else:
        violations = [s for s in samples if abs(s.H) > tol or abs(s.K) > tol * tol]
    return CurvatureReport(kind, tol, samples, verdict_iv, verdict_iii, violations, excluded)


# ----------------------------------------------------------------------------
# mesh IO and generators


def _merge_vertices(vertices: np.ndarray, faces: np.ndarray, decimals: int = 10):
    keys = np.round(vertices, decimals)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    new_vertices = vertices[first[order]]
    return new_vertices, remap[inverse.reshape(-1)][faces]


def read_obj(path) -> TriMesh:
    """Read ``v`` and ``f`` records of a Wavefront OBJ file.

    Polygons are fan-triangulated; ``v/vt/vn`` face tokens use the vertex
    index only; negative indices count from the end.  ``g`` group names,
    when present, become piece labels.
    """
    verts: list[list[float]] = []
    faces: list[list[int]] = []
    labels: list[str] = []
    group = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split("#", 1)[0].split()
            if not parts:
                continue
            tag = parts[0]
            try:
                if tag == "v":
                    if len(parts) < 4:
                        raise ValueError("vertex needs three coordinates")
                    verts.append([float(t) for t in parts[1:4]])
                elif tag == "f":
                    idx = []
                    for tok in parts[1:]:
                        i = int(tok.split("/")[0])
                        idx.append(i - 1 if i > 0 else len(verts) + i)
                    for k in range(1, len(idx) - 1):
                        faces.append([idx[0], idx[k], idx[k + 1]])
                        labels.append(group)
                elif tag == "g":
                    group = " ".join(parts[1:]) or None
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed '{tag}' record") from exc
    use_labels = any(lbl is not None for lbl in labels)
    return TriMesh(
        np.array(verts),
        np.array(faces, dtype=np.int64),
        np.array([lbl or "" for lbl in labels]) if use_labels else None,
    )


def write_obj(mesh: TriMesh, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in mesh.vertices:
            fh.write("v %r %r %r\n" % tuple(float(c) for c in v))
        for f in mesh.faces:
            fh.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")


def icosphere(radius: float = 1.0, subdivisions: int = 3) -> TriMesh:
    """Subdivided icosahedron projected onto the sphere, outward oriented."""
    p = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, p, 0), (1, p, 0), (-1, -p, 0), (1, -p, 0),
        (0, -1, p), (0, 1, p), (0, -1, -p), (0, 1, -p),
        (p, 0, -1), (p, 0, 1), (-p, 0, -1), (-p, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    vs = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = vs[a] + vs[b]
                vs.append(m / np.linalg.norm(m))
                cache[key] = len(vs) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return TriMesh(radius * np.array(vs), np.array(faces, dtype=np.int64))


def plane_grid(n: int = 10, size: float = 1.0, z: float = 0.0) -> TriMesh:
    """``n x n`` cells on ``[-size, size]^2`` at height ``z``, normal ``+z``."""
    xs = np.linspace(-size, size, n + 1)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    verts = np.column_stack([X.ravel(), Y.ravel(), np.full(X.size, z)])
    faces = []
    for i in range(n):
        for j in range(n):
            a = i * (n + 1) + j
            b, c, d = a + (n + 1), a + (n + 1) + 1, a + 1
            faces += [(a, b, c), (a, c, d)]
    return TriMesh(verts, np.array(faces, dtype=np.int64))


def cube_mesh(n: int = 4, size: float = 1.0) -> TriMesh:
    """Surface of ``[-size, size]^3`` with ``n x n`` cells per face, outward oriented."""
    base = plane_grid(n, size, size)
    rotations = []
    for axis, sign in ((2, 1), (2, -1), (0, 1), (0, -1), (1, 1), (1, -1)):
        # rotation taking +z to sign * e_axis
        target = np.zeros(3)
        target[axis] = sign
        if axis == 2:
            Rm = np.diag([1.0, sign, sign])
        else:
            e_o = np.eye(3)[1 - axis]
            Rm = np.column_stack([e_o, np.cross(target, e_o), target])
        rotations.append(Rm)
    verts, faces = [], []
    for Rm in rotations:
        faces.append(base.faces + sum(len(v) for v in verts))
        verts.append(base.vertices @ Rm.T)
    V, F = _merge_vertices(np.vstack(verts), np.vstack(faces))
    return TriMesh(V, F)
