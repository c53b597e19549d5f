import itertools
import math

import numpy as np
import pytest

from disksep.graph import Graph, generate_apollonian
from disksep.packing import Triangulation


def descartes_radii(t: Triangulation, boundary_radius=1.0):
    """Exact radii of an Apollonian network's packing.

    Vertex v >= 3 was inserted into a face of three earlier, mutually tangent
    disks; those are exactly its neighbours with smaller ids. Its curvature is
    the inner Soddy circle's: k = k1 + k2 + k3 + 2 sqrt(k1 k2 + k2 k3 + k3 k1).
    """
    g = Graph.from_triangulation(t)
    k = np.zeros(t.n)
    k[:3] = 1.0 / boundary_radius
    for v in range(3, t.n):
        older = [u for u in g.adjacency[v] if u < v]
        assert len(older) == 3
        a, b, c = k[older]
        k[v] = a + b + c + 2 * math.sqrt(a * b + b * c + c * a)
    return 1.0 / k


def triangle() -> Triangulation:
    return Triangulation(3, ((0, 1), (0, 2), (1, 2)), ((0, 1, 2), (0, 2, 1)), (0, 1, 2))


def octahedron() -> Triangulation:
    # poles 0 and 5 around the square 1-2-3-4
    faces = []
    for i in range(4):
        a, b = 1 + i, 1 + (i + 1) % 4
        faces += [(0, a, b), (5, b, a)]
    return Triangulation.from_faces(6, faces, faces[0])


def icosahedron() -> Triangulation:
    top, bottom = 0, 11
    upper = [1, 2, 3, 4, 5]
    lower = [6, 7, 8, 9, 10]
    faces = []
    for i in range(5):
        u0, u1 = upper[i], upper[(i + 1) % 5]
        l0, l1 = lower[i], lower[(i + 1) % 5]
        faces += [(top, u0, u1), (u0, l0, u1), (u1, l0, l1), (bottom, l1, l0)]
    return Triangulation.from_faces(12, faces, faces[0])


def tiny_corpus():
    """Named triangulations with n <= 12."""
    items = [("triangle", triangle()), ("octahedron", octahedron()), ("icosahedron", icosahedron())]
    for n in range(4, 13):
        for seed in range(3):
            items.append((f"apollonian-{n}-{seed}", generate_apollonian(n, seed)))
    return items


@pytest.fixture
def k4() -> Triangulation:
    return generate_apollonian(4, 0)


def enumeration_k_radius(pts, k) -> float:
    """Smallest radius among disks through 1, 2 or 3 of ``pts`` holding >= k of them."""
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    cands = [np.column_stack([pts, np.zeros(n)])]
    i, j = np.array(list(itertools.combinations(range(n), 2))).T
    mid = (pts[i] + pts[j]) / 2
    cands.append(np.column_stack([mid, np.hypot(*(pts[i] - pts[j]).T) / 2]))
    if n >= 3:
        a, b, c = (pts[idx] for idx in np.array(list(itertools.combinations(range(n), 3))).T)
        d = 2 * (a[:, 0] * (b[:, 1] - c[:, 1]) + b[:, 0] * (c[:, 1] - a[:, 1]) + c[:, 0] * (a[:, 1] - b[:, 1]))
        ok = np.abs(d) > 1e-12
        a, b, c, d = a[ok], b[ok], c[ok], d[ok]
        sa, sb, sc = (np.sum(q * q, axis=1) for q in (a, b, c))
        ux = (sa * (b[:, 1] - c[:, 1]) + sb * (c[:, 1] - a[:, 1]) + sc * (a[:, 1] - b[:, 1])) / d
        uy = (sa * (c[:, 0] - b[:, 0]) + sb * (a[:, 0] - c[:, 0]) + sc * (b[:, 0] - a[:, 0])) / d
        u = np.column_stack([ux, uy])
        r = np.max([np.hypot(*(u - q).T) for q in (a, b, c)], axis=0)
        cands.append(np.column_stack([u, r]))
    cand = np.concatenate(cands)
    dist = np.hypot(cand[:, None, 0] - pts[None, :, 0], cand[:, None, 1] - pts[None, :, 1])
    inside = (dist <= cand[:, 2:3] * (1 + 1e-12) + 1e-15).sum(axis=1)
    return float(cand[inside >= k, 2].min())


ACCEPTANCE_LINES: dict[int, str] = {}


def record(number: int, passed: bool, detail: str) -> None:
    line = f"ACCEPTANCE #{number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
