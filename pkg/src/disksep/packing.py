"""Kissing-disk realizations of planar triangulations.

Radii come from the angle-sum iteration: the three outer-face disks are held
at a fixed radius and every interior vertex is adjusted until the angles of
its incident tangent triangles add up to 2*pi. Centers are then laid out face
by face from one outer edge.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, InvalidInputError, InvalidTriangulationError
from .geometry import Disk, Point2

ANGLE_TOL = 1e-10
VALIDATION_TOL = 1e-6
MAX_ITER = 100_000
_MAX_LOG_STEP = 2.0


@dataclass(frozen=True)
class Triangulation:
    """A maximal planar graph with its triangular faces.

    Vertex ids are ``0..n-1``. ``outer_face`` is one of ``faces``; its three
    vertices form the boundary of the packing.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, int, int], ...]
    outer_face: tuple[int, int, int]

    @classmethod
    def from_faces(cls, n: int, faces, outer_face=None) -> Triangulation:
        """Build from a face list, deriving the edge set."""
        faces = tuple(tuple(int(v) for v in f) for f in faces)
        edges = set()
        for a, b, c in faces:
            for u, v in ((a, b), (b, c), (c, a)):
                edges.add((min(u, v), max(u, v)))
        outer = tuple(outer_face) if outer_face is not None else faces[0]
        return cls(n, tuple(sorted(edges)), faces, outer)

    def validate(self) -> None:
        """Raise :class:`InvalidTriangulationError` unless this is a consistent triangulation."""
        n = self.n
        if n < 3:
            raise InvalidTriangulationError(f"need n >= 3, got {n}")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InvalidTriangulationError(f"bad edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidTriangulationError(f"duplicate edge {key}")
            seen.add(key)
        if len(self.edges) != 3 * n - 6:
            raise InvalidTriangulationError(f"expected {3 * n - 6} edges, got {len(self.edges)}")
        if len(self.faces) != 2 * n - 4:
            raise InvalidTriangulationError(f"expected {2 * n - 4} faces, got {len(self.faces)}")
        use = dict.fromkeys(seen, 0)
        for f in self.faces:
            if len(f) != 3 or len(set(f)) != 3:
                raise InvalidTriangulationError(f"bad face {f}")
            a, b, c = f
            for u, v in ((a, b), (b, c), (c, a)):
                key = (min(u, v), max(u, v))
                if key not in use:
                    raise InvalidTriangulationError(f"face {f} uses missing edge {key}")
                use[key] += 1
        bad = [e for e, k in use.items() if k != 2]
        if bad:
            raise InvalidTriangulationError(f"edge {bad[0]} borders {use[bad[0]]} faces, expected 2")
        outer = set(self.outer_face)
        if len(outer) != 3 or not any(set(f) == outer for f in self.faces):
            raise InvalidTriangulationError(f"outer face {self.outer_face} is not a face")

    def inner_faces(self) -> np.ndarray:
        """Face array without (one copy of) the outer face."""
        outer = set(self.outer_face)
        out, dropped = [], False
        for f in self.faces:
            if not dropped and set(f) == outer:
                dropped = True
                continue
            out.append(f)
        return np.array(out, dtype=np.int64).reshape(-1, 3)


@dataclass(frozen=True, eq=False)
class Packing:
    """Vertex-indexed disks; ``centers`` has shape (n, 2), ``radii`` shape (n,)."""

    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        c = np.array(self.centers, dtype=float).reshape(-1, 2)
        r = np.array(self.radii, dtype=float).reshape(-1)
        if len(c) != len(r):
            raise InvalidInputError(f"{len(c)} centers but {len(r)} radii")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(r))):
            raise InvalidInputError("packing contains non-finite values")
        if np.any(r < 0):
            raise InvalidInputError("packing contains negative radii")
        c.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    def __eq__(self, other):
        if not isinstance(other, Packing):
            return NotImplemented
        return np.array_equal(self.centers, other.centers) and np.array_equal(self.radii, other.radii)

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.radii)

    @property
    def disks(self) -> list[Disk]:
        return [Disk(Point2(*c), r) for c, r in zip(self.centers.tolist(), self.radii.tolist())]

    def transformed(self, translation, scale: float) -> Packing:
        """Disks mapped by ``p -> (p + translation) * scale``."""
        t = np.asarray(translation, dtype=float)
        return Packing((self.centers + t) * scale, self.radii * scale)


@dataclass
class PackingReport:
    max_tangency_residual: float
    min_separation_slack: float
    ok: bool
    worst_edge: tuple[int, int] | None = None
    worst_pair: tuple[int, int] | None = None


@dataclass
class RadiiSolution:
    radii: np.ndarray
    iterations: int
    max_angle_error: float
    history: list[float] = field(default_factory=list, repr=False)


def _corner_angles(r: np.ndarray, faces: np.ndarray):
    """Angles at each corner of each tangent triangle, plus tan(angle/2).

    The half-angle tangent sqrt(bc / (a(a+b+c))) stays well conditioned when
    one radius is many orders of magnitude below the others.
    """
    x, y, z = r[faces[:, 0]], r[faces[:, 1]], r[faces[:, 2]]
    out = []
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        h = np.sqrt(b * c / (a * (a + b + c)))
        out.append((2.0 * np.arctan(h), h, a, b, c))
    return out


def angle_sums(r: np.ndarray, faces: np.ndarray) -> np.ndarray:
    n = len(r)
    corners = _corner_angles(r, faces)
    if r.dtype == np.float64:
        return sum(np.bincount(faces[:, j], corners[j][0], minlength=n) for j in range(3))
    # bincount would drop extended precision
    out = np.zeros(n, dtype=r.dtype)
    for j in range(3):
        np.add.at(out, faces[:, j], corners[j][0])
    return out


def _uniform_step(r, theta, degree, interior):
    """Uniform-neighbour radius update (one Jacobi sweep)."""
    k = degree[interior]
    beta = np.sin(theta[interior] / (2 * k))
    delta = np.sin(math.pi / k)
    rhat = r[interior] * beta / (1 - beta)
    new = rhat * (1 - delta) / delta
    out = r.copy()
    out[interior] = np.clip(new, 0.5 * r[interior], 2.0 * r[interior])
    return out


def _newton_direction(r, faces, interior_mask, interior, residual=None):
    """Newton direction in log-radii for the interior angle-sum equations.

    ``residual`` overrides the angle-sum residual computed at ``r``.
    """
    n = len(r)
    rows, cols, vals = [], [], []
    theta = np.zeros(n)
    for j, (ang, g, a, b, c) in enumerate(_corner_angles(r, faces)):
        theta += np.bincount(faces[:, j], ang, minlength=n)
        vj, vb, vc = faces[:, j], faces[:, (j + 1) % 3], faces[:, (j + 2) % 3]
        rows += [vj, vj, vj]
        cols += [vj, vb, vc]
        vals += [-g * (a / (a + b) + a / (a + c)), g * a / (a + b), g * a / (a + c)]
    rows_a = np.concatenate(rows)
    cols_a = np.concatenate(cols)
    keep = interior_mask[rows_a] & interior_mask[cols_a]
    index = np.full(n, -1)
    index[interior] = np.arange(len(interior))
    jac = sp.csc_matrix(
        (np.concatenate(vals)[keep], (index[rows_a[keep]], index[cols_a[keep]])),
        shape=(len(interior), len(interior)),
    )
    if residual is None:
        residual = theta[interior] - 2 * math.pi
    du = spla.spsolve(jac, -residual)
    if not np.all(np.isfinite(du)):
        return None
    return du


def _newton_step(r, faces, interior_mask, interior, residual_norm):
    """Damped Newton step; ``None`` if no step length reduces the residual 2-norm."""
    du = _newton_direction(r, faces, interior_mask, interior)
    if du is None:
        return None
    # cap the largest log-radius change, keeping the direction
    step = min(1.0, _MAX_LOG_STEP / max(float(np.abs(du).max()), 1e-300))
    for _ in range(30):
        cand = r.copy()
        cand[interior] = r[interior] * np.exp(step * du)
        th = angle_sums(cand, faces)
        if np.linalg.norm(th[interior] - 2 * math.pi) < residual_norm:
            return cand, th
        step *= 0.5
    return None


def solve_radii(t: Triangulation, tol: float = ANGLE_TOL, max_iter: int = MAX_ITER,
                method: str = "newton", boundary_radius: float = 1.0) -> RadiiSolution:
    """Radii whose interior angle sums are 2*pi within ``tol``.

    ``method="uniform"`` runs the plain uniform-neighbour iteration.
    ``method="newton"`` (default) takes a damped Newton step on log-radii each
    iteration and falls back to the uniform step whenever no damping of the
    Newton direction reduces the residual.
    """
    if method not in ("newton", "uniform"):
        raise ValueError(f"unknown method {method!r}")
    n = t.n
    faces = t.inner_faces()
    interior_mask = np.ones(n, dtype=bool)
    interior_mask[list(t.outer_face)] = False
    interior = np.nonzero(interior_mask)[0]
    degree = np.bincount(faces.ravel(), minlength=n).astype(float)
    r = np.full(n, float(boundary_radius))
    history = []
    if len(interior) == 0:
        return RadiiSolution(r, 0, 0.0, history)

    theta = angle_sums(r, faces)
    err = float(np.abs(theta[interior] - 2 * math.pi).max())
    it = 0
    while err >= tol and it < max_iter:
        it += 1
        stepped = None
        if method == "newton":
            try:
                resid = float(np.linalg.norm(theta[interior] - 2 * math.pi))
                stepped = _newton_step(r, faces, interior_mask, interior, resid)
            except (RuntimeError, ValueError):
                stepped = None
        if stepped is None:
            r = _uniform_step(r, theta, degree, interior)
            theta = angle_sums(r, faces)
        else:
            r, theta = stepped
        err = float(np.abs(theta[interior] - 2 * math.pi).max())
        history.append(err)
    if err >= tol:
        raise ConvergenceError(
            f"angle-sum iteration did not converge: max error {err:.3e} after {it} iterations",
            max_residual=err, iterations=it,
        )
    return RadiiSolution(r, it, err, history)


def _half_tan(ra, rb, rc):
    """tan of half the angle at the ``ra`` disk in a triangle of tangent disks."""
    return np.sqrt(rb * rc / (ra * (ra + rb + rc)))


def layout(radii, t: Triangulation) -> np.ndarray:
    """Place centers given radii; returns an (n, 2) float array.

    The first outer-face edge lies on the positive x-axis from the origin and
    the third outer vertex above it. Remaining vertices are placed breadth
    first across shared edges of adjacent faces.

    Placement runs in extended precision (``numpy.longdouble``) and is rounded
    once at the end: tiny disks sit next to disks 1e8 times larger, and
    rounding errors accumulated along placement chains would otherwise show
    up as tangency residuals between them.
    """
    ext = np.longdouble
    r = np.asarray(radii).astype(ext)
    n = t.n
    pos = np.zeros((n, 2), dtype=ext)
    placed = np.zeros(n, dtype=bool)
    one = ext(1)

    faces = [tuple(f) for f in t.faces]
    edge_faces: dict[tuple[int, int], list[int]] = {}
    for i, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            edge_faces.setdefault((min(u, v), max(u, v)), []).append(i)

    def side(u, v, q):
        (ux, uy), (vx, vy), (qx, qy) = pos[u], pos[v], pos[q]
        return 1 if (vx - ux) * (qy - uy) - (vy - uy) * (qx - ux) > 0 else -1

    def place(u, v, w, sign):
        ex, ey = pos[v] - pos[u]
        norm = np.hypot(ex, ey)
        ex, ey = ex / norm, ey / norm
        h = _half_tan(r[u], r[v], r[w])
        cos_t, sin_t = (one - h * h) / (one + h * h), sign * 2 * h / (one + h * h)
        d = r[u] + r[w]
        pos[w] = (pos[u, 0] + d * (ex * cos_t - ey * sin_t), pos[u, 1] + d * (ex * sin_t + ey * cos_t))
        placed[w] = True

    a, b, c = t.outer_face
    pos[b] = (r[a] + r[b], 0)
    placed[a] = placed[b] = True
    place(a, b, c, 1)

    # breadth-first over faces; a neighbour across edge uv of face (u, v, o)
    # lies opposite o, except across the outer face where it is on the same side
    outer = set(t.outer_face)
    start = next(i for i, f in enumerate(faces) if set(f) == outer)
    seen = {start}
    queue = deque([start])
    while queue:
        fi = queue.popleft()
        f = faces[fi]
        flip = 1 if fi == start else -1
        for u, v, o in ((f[0], f[1], f[2]), (f[1], f[2], f[0]), (f[2], f[0], f[1])):
            for gi in edge_faces[(min(u, v), max(u, v))]:
                if gi in seen:
                    continue
                seen.add(gi)
                queue.append(gi)
                (w,) = set(faces[gi]) - {u, v}
                if not placed[w]:
                    place(u, v, w, flip * side(u, v, o))
    if not placed.all():
        missing = int(np.nonzero(~placed)[0][0])
        raise InvalidTriangulationError(f"vertex {missing} is not reachable from the outer face")
    return pos.astype(float)


def refine_radii(radii, t: Triangulation, steps: int = 3) -> np.ndarray:
    """Newton refinement of converged radii in ``numpy.longdouble``.

    Residuals are evaluated in extended precision and corrections solved with
    the double-precision Jacobian (mixed-precision iterative refinement).
    """
    ext = np.longdouble
    r = np.asarray(radii).astype(ext)
    faces = t.inner_faces()
    interior_mask = np.ones(t.n, dtype=bool)
    interior_mask[list(t.outer_face)] = False
    interior = np.nonzero(interior_mask)[0]
    if len(interior) == 0:
        return r
    two_pi = 8 * np.arctan(ext(1))
    for _ in range(steps):
        res = angle_sums(r, faces)[interior] - two_pi
        try:
            du = _newton_direction(r.astype(float), faces, interior_mask, interior, res.astype(float))
        except (RuntimeError, ValueError):
            break
        if du is None:
            break
        r[interior] *= np.exp(du.astype(ext))
    return r


def compute_packing(t: Triangulation, tol: float = ANGLE_TOL, max_iter: int = MAX_ITER, *,
                    method: str = "newton", boundary_radius: float = 1.0) -> Packing:
    """Kissing-disk packing of ``t``; outer-face disks get ``boundary_radius``.

    Raises :class:`InvalidTriangulationError` for inconsistent input and
    :class:`ConvergenceError` when the radii do not settle within ``max_iter``.
    """
    t.validate()
    sol = solve_radii(t, tol, max_iter, method=method, boundary_radius=boundary_radius)
    fine = refine_radii(sol.radii, t)
    return Packing(layout(fine, t), fine.astype(float))


def validate_packing(p: Packing, t, tol_rel: float = VALIDATION_TOL) -> PackingReport:
    """Check tangency along edges and interior disjointness elsewhere.

    ``t`` only needs ``n`` and ``edges`` (a :class:`Triangulation` or a
    :class:`~disksep.graph.Graph`). Residuals and slacks are relative to
    ``r_u + r_v``; all non-adjacent pairs are checked.
    """
    n = t.n
    if p.n != n:
        raise InvalidInputError(f"packing has {p.n} disks but graph has {n} vertices")
    c, r = p.centers, p.radii
    edges = np.array(list(t.edges), dtype=np.int64).reshape(-1, 2)

    max_res, worst_edge = 0.0, None
    if len(edges):
        u, v = edges[:, 0], edges[:, 1]
        d = np.hypot(*(c[u] - c[v]).T)
        s = r[u] + r[v]
        res = np.abs(d - s) / s
        i = int(np.argmax(res))
        max_res, worst_edge = float(res[i]), (int(u[i]), int(v[i]))

    adj = sp.csr_matrix((np.ones(2 * len(edges), dtype=bool),
                         (np.concatenate([edges[:, 0], edges[:, 1]]),
                          np.concatenate([edges[:, 1], edges[:, 0]]))), shape=(n, n))
    min_slack, worst_pair = math.inf, None
    chunk = max(1, 4_000_000 // max(n, 1))
    cols = np.arange(n)
    for s0 in range(0, n, chunk):
        rows = np.arange(s0, min(n, s0 + chunk))
        d = np.hypot(c[rows, None, 0] - c[None, :, 0], c[rows, None, 1] - c[None, :, 1])
        tot = r[rows, None] + r[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            slack = (d - tot) / tot
        mask = (cols[None, :] > rows[:, None]) & ~adj[rows].toarray()
        slack = np.where(mask, slack, np.inf)
        slack[np.isnan(slack)] = -np.inf
        if slack.size:
            k = int(np.argmin(slack))
            val = float(slack.flat[k])
            if val < min_slack:
                min_slack, worst_pair = val, (int(rows[k // n]), int(k % n))

    ok = bool(np.all(r > 0)) and max_res <= tol_rel and min_slack >= -tol_rel
    return PackingReport(max_res, min_slack, ok, worst_edge, worst_pair)
