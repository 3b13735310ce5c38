"""Reference geometries for validation runs and tests.

These generators back the sphere-validation command and the qualitative
two-plate checks; general mesh generation is out of scope (meshes normally
arrive through :func:`wsbem.mesh.load_mesh`).
"""

from __future__ import annotations

import numpy as np

from .mesh import SurfaceMesh

__all__ = ["octahedron", "icosphere", "box", "parallel_plates"]


def octahedron(radius: float = 1.0) -> SurfaceMesh:
    """Regular octahedron with vertices on the coordinate axes."""
    v = radius * np.array(
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
        dtype=float,
    )
    f = np.array(
        [
            [0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
            [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5],
        ]
    )
    return SurfaceMesh(v, f).validate()


def icosphere(radius: float = 1.0, level: int = 2) -> SurfaceMesh:
    """Icosahedron subdivided ``level`` times, vertices projected to ``radius``.

    Panel count is ``20 * 4**level``.
    """
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in verts]
    for _ in range(level):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = np.array(verts[i]) + np.array(verts[j])
                m /= np.linalg.norm(m)
                verts.append(tuple(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    v = radius * np.array(verts)
    return SurfaceMesh(v, np.array(faces)).validate()


def box(
    size, center=(0.0, 0.0, 0.0), divisions=(4, 4, 1)
) -> SurfaceMesh:
    """Axis-aligned closed box of extents ``size`` with gridded faces.

    ``divisions`` gives the per-axis face grid resolution; each grid cell
    splits into two triangles with outward winding.
    """
    sx, sy, sz = (float(s) for s in size)
    cx, cy, cz = (float(c) for c in center)
    nx, ny, nz = (int(d) for d in divisions)

    verts: list[tuple[float, float, float]] = []
    index: dict[tuple[float, float, float], int] = {}

    def vid(p):
        key = (round(p[0], 12), round(p[1], 12), round(p[2], 12))
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
        return index[key]

    tris: list[tuple[int, int, int]] = []

    def add_face(origin, e1, e2, n1, n2, flip):
        # grid the parallelogram origin + [0,1]e1 + [0,1]e2
        for i in range(n1):
            for j in range(n2):
                p00 = origin + e1 * (i / n1) + e2 * (j / n2)
                p10 = origin + e1 * ((i + 1) / n1) + e2 * (j / n2)
                p01 = origin + e1 * (i / n1) + e2 * ((j + 1) / n2)
                p11 = origin + e1 * ((i + 1) / n1) + e2 * ((j + 1) / n2)
                a, b, c, d = vid(p00), vid(p10), vid(p11), vid(p01)
                if flip:
                    tris.append((a, c, b))
                    tris.append((a, d, c))
                else:
                    tris.append((a, b, c))
                    tris.append((a, c, d))

    lo = np.array([cx - sx / 2, cy - sy / 2, cz - sz / 2])
    ex = np.array([sx, 0, 0])
    ey = np.array([0, sy, 0])
    ez = np.array([0, 0, sz])
    add_face(lo + ez, ex, ey, nx, ny, flip=False)  # top (+z)
    add_face(lo, ex, ey, nx, ny, flip=True)  # bottom (-z)
    add_face(lo + ey, ex, ez, nx, nz, flip=True)  # +y (ex x ez points -y)
    add_face(lo, ex, ez, nx, nz, flip=False)  # -y
    add_face(lo + ex, ey, ez, ny, nz, flip=False)  # +x
    add_face(lo, ey, ez, ny, nz, flip=True)  # -x
    return SurfaceMesh(np.array(verts, dtype=float), np.array(tris)).validate()


def parallel_plates(
    side: float = 2.0,
    gap: float = 1.0,
    thickness: float = 0.1,
    divisions: int = 8,
) -> SurfaceMesh:
    """Two thin square plates (closed boxes) facing each other across ``gap``.

    Plates are normal to z with the gap centered on the origin.
    """
    dz = max(1, int(round(divisions * thickness / side)))
    top = box(
        (side, side, thickness),
        center=(0, 0, (gap + thickness) / 2),
        divisions=(divisions, divisions, dz),
    )
    bot = box(
        (side, side, thickness),
        center=(0, 0, -(gap + thickness) / 2),
        divisions=(divisions, divisions, dz),
    )
    verts = np.vstack([top.vertices, bot.vertices])
    tris = np.vstack([top.triangles, bot.triangles + len(top.vertices)])
    return SurfaceMesh(verts, tris).validate()
