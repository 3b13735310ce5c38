"""Triangulated scatterer surfaces, pulse bases, and panel quadrature.

A :class:`SurfaceMesh` is a closed, consistently outward-oriented triangle
mesh.  One piecewise-constant (pulse) basis function sits on each triangle.
Regular panel integrals use collapsed-product Gauss rules on the reference
triangle; touching panel pairs are handled by splitting kernels into an
analytically integrated static part plus a numerically integrated smooth
remainder, and nearly touching pairs by subdividing the source panel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "SurfaceMesh",
    "PulseBasis",
    "QuadratureRule",
    "MeshFormatError",
    "load_mesh",
    "triangle_rule",
    "subdivided_rule",
    "panel_points",
    "panel_integral_regular",
    "panel_pair_integral_singular",
    "classify_pairs",
]

_DEGENERATE_REL_AREA = 1e-12


class MeshFormatError(ValueError):
    """Raised when a mesh file cannot be parsed; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# mesh container
# ---------------------------------------------------------------------------
@dataclass
class SurfaceMesh:
    """Closed triangle mesh with outward normals and per-panel areas."""

    vertices: np.ndarray  # (V, 3)
    triangles: np.ndarray  # (F, 3) vertex indices
    normals: np.ndarray = field(default=None)  # (F, 3) unit outward
    areas: np.ndarray = field(default=None)  # (F,)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=int).reshape(-1, 3)
        if self.normals is None or self.areas is None:
            self._recompute()

    def _recompute(self):
        tri = self.vertices[self.triangles]  # (F, 3, 3)
        cross = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        nrm = np.linalg.norm(cross, axis=1)
        self.areas = 0.5 * nrm
        with np.errstate(invalid="ignore", divide="ignore"):
            self.normals = np.where(nrm[:, None] > 0, cross / nrm[:, None], 0.0)

    # -- derived quantities ------------------------------------------------
    @property
    def n_panels(self) -> int:
        return len(self.triangles)

    @property
    def panel_vertices(self) -> np.ndarray:
        return self.vertices[self.triangles]

    @property
    def centroids(self) -> np.ndarray:
        return self.panel_vertices.mean(axis=1)

    @property
    def diameters(self) -> np.ndarray:
        tri = self.panel_vertices
        e = np.stack(
            [tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 1], tri[:, 0] - tri[:, 2]],
            axis=1,
        )
        return np.linalg.norm(e, axis=2).max(axis=1)

    def signed_volume(self) -> float:
        tri = self.panel_vertices
        return float(
            np.sum(np.einsum("ij,ij->i", np.cross(tri[:, 0], tri[:, 1]), tri[:, 2]))
            / 6.0
        )

    def total_area(self) -> float:
        return float(np.sum(self.areas))

    def validate(self, fix_orientation: bool = True) -> "SurfaceMesh":
        """Check closedness, orientation consistency, and degeneracy.

        Inward-oriented meshes are flipped outward (with a warning) when
        ``fix_orientation`` is set.  Returns ``self`` for chaining.
        """
        if self.n_panels == 0:
            return self
        mean_area = float(np.mean(self.areas))
        bad = np.nonzero(self.areas <= _DEGENERATE_REL_AREA * mean_area)[0]
        if bad.size:
            raise ValueError(f"degenerate triangles (area ~ 0): {bad.tolist()[:8]}")

        edges: dict[tuple[int, int], list[int]] = {}
        for t, (i, j, k) in enumerate(self.triangles):
            for a, b in ((i, j), (j, k), (k, i)):
                key = (min(a, b), max(a, b))
                edges.setdefault(key, []).append(1 if a < b else -1)
        for (a, b), dirs in edges.items():
            if len(dirs) != 2:
                raise ValueError(
                    f"open surface: edge ({a}, {b}) shared by {len(dirs)} triangle(s)"
                )
            if dirs[0] == dirs[1]:
                raise ValueError(f"inconsistent winding across edge ({a}, {b})")

        vol = self.signed_volume()
        if vol < 0:
            if not fix_orientation:
                raise ValueError("mesh is oriented inward (negative signed volume)")
            warnings.warn("mesh oriented inward; flipping triangle winding")
            self.triangles = self.triangles[:, [0, 2, 1]]
            self._recompute()

        n_comp = self._component_count()
        chi = len(self.vertices) - len(edges) + self.n_panels
        if chi != 2 * n_comp:
            warnings.warn(
                f"Euler characteristic {chi} != {2 * n_comp} "
                f"(non-genus-0 component present)"
            )
        return self

    def _component_count(self) -> int:
        parent = list(range(self.n_panels))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        edge_owner: dict[tuple[int, int], int] = {}
        for t, (i, j, k) in enumerate(self.triangles):
            for a, b in ((i, j), (j, k), (k, i)):
                key = (min(a, b), max(a, b))
                if key in edge_owner:
                    ra, rb = find(edge_owner[key]), find(t)
                    parent[ra] = rb
                else:
                    edge_owner[key] = t
        return len({find(t) for t in range(self.n_panels)})

    def permuted(self, order: np.ndarray) -> "SurfaceMesh":
        """Relabeled copy with panels reordered by ``order``."""
        return SurfaceMesh(self.vertices.copy(), self.triangles[order].copy())

    def summary(self) -> dict:
        """JSON-ready summary of counts and geometric aggregates."""
        d = self.diameters if self.n_panels else np.zeros(0)
        return {
            "n_vertices": int(len(self.vertices)),
            "n_panels": int(self.n_panels),
            "total_area": self.total_area(),
            "signed_volume": self.signed_volume(),
            "h_min": float(d.min()) if d.size else 0.0,
            "h_max": float(d.max()) if d.size else 0.0,
        }


@dataclass(frozen=True)
class PulseBasis:
    """Piecewise-constant basis: one unit pulse per panel."""

    mesh: SurfaceMesh

    @property
    def size(self) -> int:
        return self.mesh.n_panels


# ---------------------------------------------------------------------------
# file readers
# ---------------------------------------------------------------------------
def _as_text(data) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8", errors="replace")
    return str(data)


def _parse_off(text: str):
    lines = text.splitlines()
    idx = 0

    def next_line():
        nonlocal idx
        while idx < len(lines):
            raw = lines[idx]
            idx += 1
            s = raw.split("#", 1)[0].strip()
            if s:
                return s, idx
        return None, idx

    s, ln = next_line()
    if s is None or s.upper() != "OFF":
        raise MeshFormatError("expected 'OFF' header", ln)
    s, ln = next_line()
    try:
        nv, nf, _ = (int(t) for t in s.split()[:3])
    except Exception:
        raise MeshFormatError(f"bad count line {s!r}", ln)
    verts = np.zeros((nv, 3))
    for i in range(nv):
        s, ln = next_line()
        if s is None:
            raise MeshFormatError("unexpected end of file in vertex block", ln)
        try:
            verts[i] = [float(t) for t in s.split()[:3]]
        except Exception:
            raise MeshFormatError(f"bad vertex {s!r}", ln)
    tris = np.zeros((nf, 3), dtype=int)
    for i in range(nf):
        s, ln = next_line()
        if s is None:
            raise MeshFormatError("unexpected end of file in face block", ln)
        parts = s.split()
        try:
            cnt = int(parts[0])
            if cnt != 3:
                raise MeshFormatError(f"non-triangle face ({cnt} vertices)", ln)
            tris[i] = [int(t) for t in parts[1 : 1 + cnt]]
        except MeshFormatError:
            raise
        except Exception:
            raise MeshFormatError(f"bad face {s!r}", ln)
        if np.any(tris[i] < 0) or np.any(tris[i] >= nv):
            raise MeshFormatError(f"face references missing vertex: {s!r}", ln)
    return verts, tris


def _parse_gmsh2(text: str):
    lines = [l.rstrip() for l in text.splitlines()]
    verts = None
    tris = []
    i = 0
    while i < len(lines):
        s = lines[i].strip()
        if s == "$MeshFormat":
            ver = lines[i + 1].split()
            if not ver or not ver[0].startswith("2"):
                raise MeshFormatError(f"unsupported gmsh version {ver!r}", i + 2)
            i += 3
        elif s == "$Nodes":
            try:
                n = int(lines[i + 1].strip())
            except Exception:
                raise MeshFormatError("bad node count", i + 2)
            verts = np.zeros((n, 3))
            idmap = {}
            for j in range(n):
                parts = lines[i + 2 + j].split()
                try:
                    idmap[int(parts[0])] = j
                    verts[j] = [float(t) for t in parts[1:4]]
                except Exception:
                    raise MeshFormatError(f"bad node {lines[i+2+j]!r}", i + 3 + j)
            i += 2 + n
            if lines[i].strip() != "$EndNodes":
                raise MeshFormatError("missing $EndNodes", i + 1)
            i += 1
        elif s == "$Elements":
            try:
                n = int(lines[i + 1].strip())
            except Exception:
                raise MeshFormatError("bad element count", i + 2)
            for j in range(n):
                parts = lines[i + 2 + j].split()
                try:
                    etype = int(parts[1])
                    ntags = int(parts[2])
                    if etype == 2:  # 3-node triangle
                        ids = [int(t) for t in parts[3 + ntags : 6 + ntags]]
                        tris.append([idmap[t] for t in ids])
                except Exception:
                    raise MeshFormatError(f"bad element {lines[i+2+j]!r}", i + 3 + j)
            i += 2 + n
            if lines[i].strip() != "$EndElements":
                raise MeshFormatError("missing $EndElements", i + 1)
            i += 1
        else:
            i += 1
    if verts is None:
        raise MeshFormatError("no $Nodes block found")
    if not tris:
        raise MeshFormatError("no triangle elements found")
    return verts, np.asarray(tris, dtype=int)


def load_mesh(data, format: str = "off") -> SurfaceMesh:
    """Parse and validate a surface mesh from file content.

    Parameters
    ----------
    data : bytes or str
        File content (``off`` ASCII or ``gmsh-v2`` ASCII).
    format : {'off', 'gmsh-v2'}

    Returns a validated, outward-oriented :class:`SurfaceMesh`.  An OFF file
    with zero vertices/faces yields the (valid) empty mesh.
    """
    text = _as_text(data)
    if format == "off":
        verts, tris = _parse_off(text)
    elif format == "gmsh-v2":
        verts, tris = _parse_gmsh2(text)
    else:
        raise ValueError(f"unknown mesh format {format!r}")
    mesh = SurfaceMesh(verts, tris)
    return mesh.validate()


# ---------------------------------------------------------------------------
# quadrature on the reference triangle
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class QuadratureRule:
    """Points (barycentric) and weights on the reference triangle.

    Weights are normalized to sum to 1, so an integral over a physical
    triangle is ``area * sum(w_i * f(x_i))``.
    """

    bary: np.ndarray  # (n, 3)
    weights: np.ndarray  # (n,)
    order: int

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")


@lru_cache(maxsize=64)
def triangle_rule(order: int) -> QuadratureRule:
    """Collapsed-product Gauss rule exact for polynomials of given degree.

    Built from an ``n x n`` tensor Gauss-Legendre rule on the unit square
    mapped by ``(u, v) -> (u(1-v), uv)``; all weights positive.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    n = max(1, (order + 3) // 2)  # 2n - 1 >= order + 1
    xg, wg = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (xg + 1.0)
    w = 0.5 * wg
    U, V = np.meshgrid(u, u, indexing="ij")
    WU, WV = np.meshgrid(w, w, indexing="ij")
    x = (U * (1.0 - V)).ravel()
    y = (U * V).ravel()
    wt = (2.0 * WU * WV * U).ravel()  # jacobian u, normalized by area 1/2
    bary = np.stack([1.0 - x - y, x, y], axis=1)
    return QuadratureRule(bary=bary, weights=wt, order=order)


def _child_corners(depth: int) -> np.ndarray:
    """Barycentric corners of the 4**depth uniform children, shape (c, 3, 3)."""
    corners = np.array([np.eye(3)])
    for _ in range(depth):
        new = []
        for c in corners:
            m01, m12, m20 = (c[0] + c[1]) / 2, (c[1] + c[2]) / 2, (c[2] + c[0]) / 2
            new += [
                np.array([c[0], m01, m20]),
                np.array([m01, c[1], m12]),
                np.array([m20, m12, c[2]]),
                np.array([m01, m12, m20]),
            ]
        corners = np.array(new)
    return corners


@lru_cache(maxsize=64)
def subdivided_rule(order: int, depth: int) -> QuadratureRule:
    """Rule obtained by applying :func:`triangle_rule` on each of the
    ``4**depth`` uniform sub-triangles; used for near-singular kernels."""
    base = triangle_rule(order)
    if depth == 0:
        return base
    corners = _child_corners(depth)  # (c, 3, 3)
    bary = np.einsum("qi,cij->cqj", base.bary, corners).reshape(-1, 3)
    w = np.tile(base.weights, len(corners)) / len(corners)
    return QuadratureRule(bary=bary, weights=w, order=order)


def panel_points(tri_vertices: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    """Map rule points onto triangles; ``tri_vertices`` is (..., 3, 3)."""
    return np.einsum("qi,...ij->...qj", rule.bary, np.asarray(tri_vertices, float))


def panel_integral_regular(tri_vertices, kernel, rule: QuadratureRule) -> complex:
    """``area * sum w_i kernel(x_i)`` over one flat triangle."""
    tri = np.asarray(tri_vertices, dtype=float)
    pts = panel_points(tri, rule)
    area = 0.5 * np.linalg.norm(np.cross(tri[1] - tri[0], tri[2] - tri[0]))
    vals = np.asarray(kernel(pts))
    return area * np.sum(rule.weights * vals)


# ---------------------------------------------------------------------------
# analytic static integrals over a flat triangle
# ---------------------------------------------------------------------------
def _tri_frame(tri: np.ndarray):
    cr = np.cross(tri[1] - tri[0], tri[2] - tri[0])
    area = 0.5 * np.linalg.norm(cr)
    nu = cr / (2.0 * area)
    return nu, area


def static_potential(r: np.ndarray, tri: np.ndarray) -> float:
    """``int_T 1/|r - y| dA(y)`` in closed form (edge summation).

    Finite for any ``r``, including points on the panel itself.
    """
    nu, _ = _tri_frame(tri)
    d = float(np.dot(r - tri[0], nu))
    rho = r - d * nu
    total = 0.0
    for i in range(3):
        P0, P1 = tri[i], tri[(i + 1) % 3]
        s = P1 - P0
        s = s / np.linalg.norm(s)
        m = np.cross(s, nu)
        lm = float(np.dot(P0 - rho, s))
        lp = float(np.dot(P1 - rho, s))
        p0 = float(np.dot(P0 - rho, m))
        R02 = p0 * p0 + d * d
        Rm = math.sqrt(lm * lm + R02)
        Rp = math.sqrt(lp * lp + R02)
        num, den = Rp + lp, Rm + lm
        logt = 0.0 if (num <= 1e-300 or den <= 1e-300) else math.log(num / den)
        att = math.atan2(p0 * lp, R02 + abs(d) * Rp) - math.atan2(
            p0 * lm, R02 + abs(d) * Rm
        )
        total += p0 * logt - abs(d) * att
    return total


def static_potential_gradient(r: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """Gradient of :func:`static_potential` with respect to ``r``."""
    nu, _ = _tri_frame(tri)
    d = float(np.dot(r - tri[0], nu))
    rho = r - d * nu
    acc = np.zeros(3)
    for i in range(3):
        P0, P1 = tri[i], tri[(i + 1) % 3]
        s = P1 - P0
        s = s / np.linalg.norm(s)
        m = np.cross(s, nu)
        lm = float(np.dot(P0 - rho, s))
        lp = float(np.dot(P1 - rho, s))
        p0 = float(np.dot(P0 - rho, m))
        R02 = p0 * p0 + d * d
        Rm = math.sqrt(lm * lm + R02)
        Rp = math.sqrt(lp * lp + R02)
        num, den = Rp + lp, Rm + lm
        logt = 0.0 if (num <= 1e-300 or den <= 1e-300) else math.log(num / den)
        acc += m * logt
    return -acc - nu * solid_angle(r, tri)


def solid_angle(r: np.ndarray, tri: np.ndarray) -> float:
    """Signed solid angle of the triangle seen from ``r``.

    Positive on the side the unit normal (right-handed vertex order) points
    to; zero for coplanar observation points.
    """
    a = tri[0] - r
    b = tri[1] - r
    c = tri[2] - r
    la, lb, lc = np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(c)
    num = float(np.dot(a, np.cross(b, c)))
    den = float(
        la * lb * lc
        + np.dot(a, b) * lc
        + np.dot(a, c) * lb
        + np.dot(b, c) * la
    )
    # coplanar observation: principal value is zero (atan2 branch is unstable
    # there when den < 0, i.e. for points inside the panel)
    scale = (
        la * lb * lc
        + abs(np.dot(a, b)) * lc
        + abs(np.dot(a, c)) * lb
        + abs(np.dot(b, c)) * la
    )
    if abs(num) < 1e-12 * scale:
        return 0.0
    return -2.0 * math.atan2(num, den)


def solid_angle_gradient(r: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """Gradient of the signed solid angle (line-integral closed form).

    Evaluated in the panel plane this yields the finite-part value of the
    strongly singular normal-derivative kernel integral.
    """
    g = np.zeros(3)
    for i in range(3):
        A, B = tri[i], tri[(i + 1) % 3]
        ra = A - r
        rb = B - r
        na, nb = np.linalg.norm(ra), np.linalg.norm(rb)
        den = na * nb * (na * nb + float(np.dot(ra, rb)))
        g += np.cross(ra, rb) * (na + nb) / den
    return -g


# ---------------------------------------------------------------------------
# singular panel-pair integrals (static/dynamic splitting)
# ---------------------------------------------------------------------------
def _remainder_coeff(x: np.ndarray) -> np.ndarray:
    """``(1 + jx) e^{-jx} - 1`` evaluated without cancellation (x = kD)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-2
    out = np.empty(x.shape, dtype=complex)
    xs = x[small]
    acc = np.zeros_like(xs, dtype=complex)
    term = np.ones_like(xs, dtype=complex)
    jx = 1j * xs
    fact = 1.0
    for n in range(1, 9):
        term = term * (-jx)
        fact *= n
        if n >= 2:
            acc += term * (1.0 - n) / fact
    out[small] = -acc
    xl = x[~small]
    out[~small] = (
        -2.0 * np.sin(xl / 2.0) ** 2
        + xl * np.sin(xl)
        + 1j * (xl * np.cos(xl) - np.sin(xl))
    )
    return out


def _expm1_phase(x: np.ndarray) -> np.ndarray:
    """``e^{-jx} - 1`` without cancellation."""
    x = np.asarray(x, dtype=float)
    return -2.0 * np.sin(x / 2.0) ** 2 - 1j * np.sin(x)


_SINGULAR_CLASSES = (
    "weak_1overR",
    "double_layer",
    "adjoint_double_layer",
    "hypersingular",
    "hypersingular_kderiv",
)


def panel_pair_integral_singular(
    tri_m: np.ndarray,
    tri_n: np.ndarray,
    kernel_class: str,
    k: float,
    outer_order: int = 3,
    inner_order: int = 6,
    remainder_depth: int = 2,
) -> complex:
    """Galerkin double integral over a touching panel pair.

    The static (zero-wavenumber) part of the kernel is integrated in closed
    form over the source panel for every outer quadrature point; the smooth
    remainder is integrated with a subdivided product rule.  Supported
    ``kernel_class`` values:

    ``weak_1overR``           G
    ``double_layer``          dG/dn'   (source normal)
    ``adjoint_double_layer``  dG/dn    (observation normal)
    ``hypersingular``         d^2 G/(dn dn')     (finite-part static term)
    ``hypersingular_kderiv``  d^2 (dG/dk)/(dn dn')

    Normals are taken from the panels' own right-handed orientation.  For the
    finite-part classes the outer rule is part of the entry's definition: the
    inner finite-part value is not outer-integrable in the classical sense,
    so entries are defined with the fixed documented outer rule.
    """
    if kernel_class not in _SINGULAR_CLASSES:
        raise ValueError(f"unsupported kernel class {kernel_class!r}")
    tri_m = np.asarray(tri_m, dtype=float)
    tri_n = np.asarray(tri_n, dtype=float)
    n_m, area_m = _tri_frame(tri_m)
    n_n, area_n = _tri_frame(tri_n)

    outer = triangle_rule(outer_order)
    x = panel_points(tri_m, outer)  # (q, 3)
    inner = subdivided_rule(inner_order, remainder_depth)
    y = panel_points(tri_n, inner)  # (p, 3)

    u = x[:, None, :] - y[None, :, :]
    D = np.linalg.norm(u, axis=2)
    D = np.maximum(D, 1e-300)
    kD = k * D
    four_pi = 4.0 * math.pi

    static_inner = np.zeros(len(x), dtype=complex)
    rem = np.zeros(D.shape, dtype=complex)

    if kernel_class == "weak_1overR":
        for a in range(len(x)):
            static_inner[a] = static_potential(x[a], tri_n) / four_pi
        rem = _expm1_phase(kD) / (four_pi * D)
    elif kernel_class == "double_layer":
        uns = np.einsum("qpj,j->qp", u, n_n)
        for a in range(len(x)):
            static_inner[a] = solid_angle(x[a], tri_n) / four_pi
        rem = _remainder_coeff(kD) * uns / (four_pi * D**3)
    elif kernel_class == "adjoint_double_layer":
        un = np.einsum("qpj,j->qp", u, n_m)
        for a in range(len(x)):
            static_inner[a] = float(
                np.dot(n_m, static_potential_gradient(x[a], tri_n))
            ) / four_pi
        rem = _remainder_coeff(kD) * un / (four_pi * D**3)
    elif kernel_class == "hypersingular":
        un = np.einsum("qpj,j->qp", u, n_m)
        uns = np.einsum("qpj,j->qp", u, n_n)
        nns = float(np.dot(n_m, n_n))
        for a in range(len(x)):
            static_inner[a] = float(
                np.dot(n_m, solid_angle_gradient(x[a], tri_n))
            ) / four_pi
        ph = np.exp(-1j * kD)
        full = (
            -(2.0 + 2j * kD + (1j * kD) ** 2) * ph / (four_pi * D**3) * un * uns / D**2
            + (1.0 + 1j * kD) * ph / (four_pi * D**2) * (nns / D - un * uns / D**3)
        )
        static = (nns / D**3 - 3.0 * un * uns / D**5) / four_pi
        rem = full - static
    elif kernel_class == "hypersingular_kderiv":
        un = np.einsum("qpj,j->qp", u, n_m)
        uns = np.einsum("qpj,j->qp", u, n_n)
        nns = float(np.dot(n_m, n_n))
        for a in range(len(x)):
            static_inner[a] = k * nns * static_potential(x[a], tri_n) / four_pi
        ph = np.exp(-1j * kD)
        rem = (
            k * nns * _expm1_phase(kD) / (four_pi * D)
            - k * ph / four_pi * (un * uns / D**3 + 1j * k * un * uns / D**2)
        )

    inner_vals = static_inner + area_n * rem @ inner.weights
    return complex(area_m * np.sum(outer.weights * inner_vals))


# ---------------------------------------------------------------------------
# pair classification
# ---------------------------------------------------------------------------
def classify_pairs(mesh: SurfaceMesh, near_factor: float = 2.0):
    """Split panel pairs into touching / near / regular sets.

    Returns ``(touch, near)`` where ``touch`` is an (n, 2) index array of
    pairs sharing at least one vertex (including self pairs) and ``near`` an
    (n, 2) array of disjoint pairs whose centroid distance is below
    ``near_factor * max(diam_i, diam_j)``.  Pairs appear in both orders.
    """
    F = mesh.n_panels
    vert_to_tris: dict[int, list[int]] = {}
    for t, tri in enumerate(mesh.triangles):
        for v in tri:
            vert_to_tris.setdefault(int(v), []).append(t)
    touch = set((t, t) for t in range(F))
    for tris in vert_to_tris.values():
        for a in tris:
            for b in tris:
                touch.add((a, b))
    touch_arr = np.array(sorted(touch), dtype=int).reshape(-1, 2)

    cen = mesh.centroids
    dia = mesh.diameters
    near_pairs = []
    # block over rows to bound memory
    block = max(1, int(4e6 // max(F, 1)))
    touch_mask_rows = [set() for _ in range(F)]
    for a, b in touch:
        touch_mask_rows[a].add(b)
    for start in range(0, F, block):
        stop = min(F, start + block)
        d = np.linalg.norm(cen[start:stop, None, :] - cen[None, :, :], axis=2)
        lim = near_factor * np.maximum(dia[start:stop, None], dia[None, :])
        idx = np.nonzero(d < lim)
        for i, j in zip(*idx):
            a = start + int(i)
            b = int(j)
            if b not in touch_mask_rows[a]:
                near_pairs.append((a, b))
    near_arr = np.array(near_pairs, dtype=int).reshape(-1, 2)
    return touch_arr, near_arr
