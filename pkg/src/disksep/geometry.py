"""Planar primitives: disks, cutting-circle predicates, lens areas and
smallest (k-)enclosing disks.

All containment and intersection tests use closed sets: tangency counts as
intersection and boundary points count as contained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidInputError

EXACT_K_THRESHOLD = 200
TWO_PI = 2.0 * math.pi


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Disk:
    """A closed disk."""

    center: Point2
    radius: float

    def __post_init__(self):
        cx, cy = (float(v) for v in self.center)
        r = float(self.radius)
        if not (math.isfinite(cx) and math.isfinite(cy) and math.isfinite(r)):
            raise InvalidInputError(f"non-finite disk: center={self.center}, radius={self.radius}")
        if r < 0:
            raise InvalidInputError(f"negative radius {r}")
        object.__setattr__(self, "center", Point2(cx, cy))
        object.__setattr__(self, "radius", r)

    def contains_point(self, p: Sequence[float]) -> bool:
        return count_in_disk([p], self) == 1

    def contains_disk(self, other: Disk) -> bool:
        d = _norm(other.center[0] - self.center[0], other.center[1] - self.center[1])
        return d + other.radius <= self.radius


@dataclass(frozen=True)
class CoverWitness:
    """Unit disks whose union covers the closed radius-2 disk at the origin."""

    disks: tuple[Disk, ...]

    def covers(self, points) -> np.ndarray:
        """Boolean mask: which of ``points`` (shape (m, 2)) lie in some witness disk."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        hit = np.zeros(len(pts), dtype=bool)
        for d in self.disks:
            hit |= np.hypot(pts[:, 0] - d.center.x, pts[:, 1] - d.center.y) <= d.radius
        return hit


def _norm(x: float, y: float) -> float:
    # np.hypot so scalar and array paths agree bit-for-bit
    return float(np.hypot(x, y))


def as_points(points) -> np.ndarray:
    """Coerce a sequence of points to a float array of shape (n, 2)."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 2))
    arr = arr.reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("points must be finite")
    return arr


# ---------------------------------------------------------------------------
# cutting circles centred at the origin

def circle_hit_interval(d: Disk) -> tuple[float, float]:
    """Radii ``[lo, hi]`` of origin-centred circles that meet ``d``.

    ``lo`` may be negative when the disk covers the origin; the circle of
    radius ``x > 0`` meets ``d`` iff ``max(lo, 0) <= x <= hi``.
    """
    norm = _norm(d.center.x, d.center.y)
    return norm - d.radius, norm + d.radius


def hit_intervals(centers: np.ndarray, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`circle_hit_interval`."""
    norms = np.hypot(centers[:, 0], centers[:, 1])
    return norms - radii, norms + radii


def circle_intersects_disk(d: Disk, x: float) -> bool:
    lo, hi = circle_hit_interval(d)
    return max(lo, 0.0) <= x <= hi


def hit_length(lo, hi, a: float = 1.0, b: float = 2.0):
    """Length of ``[a, b]`` intersected with ``[lo, hi]`` (elementwise)."""
    return np.maximum(np.minimum(hi, b) - np.maximum(lo, a), 0.0)


# ---------------------------------------------------------------------------
# lens areas

def lens_areas(r1, r2, d) -> np.ndarray:
    """Intersection area of closed disks with radii ``r1``, ``r2`` at center distance ``d``.

    Broadcasts over its arguments. Disjoint or externally tangent pairs give
    exactly 0, nested pairs exactly ``pi * min(r1, r2)**2``.
    """
    r1, r2, d = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r1, r2, d)))
    out = np.zeros(r1.shape)
    nested = d <= np.abs(r1 - r2)
    out[nested] = math.pi * np.minimum(r1[nested], r2[nested]) ** 2
    part = ~nested & (d < r1 + r2)
    if np.any(part):
        # rescale to unit size so squares of tiny inputs do not underflow
        s = np.maximum(np.maximum(r1[part], r2[part]), d[part])
        a, b, e = r1[part] / s, r2[part] / s, d[part] / s
        ca = np.clip((e * e + a * a - b * b) / (2 * e * a), -1.0, 1.0)
        cb = np.clip((e * e + b * b - a * a) / (2 * e * b), -1.0, 1.0)
        kite = (-e + a + b) * (e + a - b) * (e - a + b) * (e + a + b)
        area = a * a * np.arccos(ca) + b * b * np.arccos(cb) - 0.5 * np.sqrt(np.maximum(kite, 0.0))
        out[part] = s * s * np.clip(area, 0.0, math.pi * np.minimum(a, b) ** 2)
    return out


def lens_area(a: Disk, b: Disk) -> float:
    d = _norm(a.center.x - b.center.x, a.center.y - b.center.y)
    return float(lens_areas(a.radius, b.radius, d))


def surrogate_radii(centers: np.ndarray, radii: np.ndarray, bound: Disk) -> np.ndarray:
    """Vectorised :func:`surrogate_radius` against a single ``bound`` disk."""
    d = np.hypot(centers[:, 0] - bound.center.x, centers[:, 1] - bound.center.y)
    inside = d + radii <= bound.radius
    rho = np.sqrt(lens_areas(radii, bound.radius, d) / math.pi)
    rho = np.minimum(rho, np.minimum(radii, bound.radius))
    return np.where(inside, radii, rho)


def surrogate_radius(b: Disk, d2: Disk) -> float:
    """Radius of a disk with the same area as ``b`` clipped to ``d2``.

    Returns ``b.radius`` when ``b`` lies inside ``d2``.
    """
    c = np.array([[b.center.x, b.center.y]])
    return float(surrogate_radii(c, np.array([b.radius]), d2)[0])


# ---------------------------------------------------------------------------
# enclosing disks

def count_in_disk(points, d: Disk) -> int:
    pts = as_points(points)
    if len(pts) == 0:
        return 0
    return int(np.count_nonzero(np.hypot(pts[:, 0] - d.center.x, pts[:, 1] - d.center.y) <= d.radius))


def _dists(pts: np.ndarray, c) -> np.ndarray:
    return np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1])


def _circumcircle(a, b, c):
    ax, ay = b[0] - a[0], b[1] - a[1]
    bx, by = c[0] - a[0], c[1] - a[1]
    det = 2.0 * (ax * by - ay * bx)
    scale = max(abs(ax), abs(ay), abs(bx), abs(by))
    if abs(det) <= 1e-14 * scale * scale:
        return None
    a2, b2 = ax * ax + ay * ay, bx * bx + by * by
    ux = (by * a2 - ay * b2) / det
    uy = (ax * b2 - bx * a2) / det
    return (a[0] + ux, a[1] + uy)


def _mec_with(pts: np.ndarray, fixed: list) -> tuple[tuple[float, float], float]:
    """Smallest disk through all of ``fixed`` containing ``pts`` (incremental)."""

    def contains(c, r, p):
        return math.hypot(p[0] - c[0], p[1] - c[1]) <= r * (1 + 1e-12) + 1e-300

    def diametral(p, q):
        c = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        return c, math.hypot(p[0] - c[0], p[1] - c[1])

    def through3(p, q, s):
        cc = _circumcircle(p, q, s)
        if cc is None:
            # collinear: the farthest pair spans the others
            pairs = [(p, q), (p, s), (q, s)]
            return max((diametral(u, v) for u, v in pairs), key=lambda t: t[1])
        return cc, max(math.hypot(u[0] - cc[0], u[1] - cc[1]) for u in (p, q, s))

    if len(fixed) == 0:
        c, r = (pts[0][0], pts[0][1]), 0.0
        for i in range(1, len(pts)):
            if not contains(c, r, pts[i]):
                c, r = _mec_with(pts[:i], [pts[i]])
        return c, r
    if len(fixed) == 1:
        (q,) = fixed
        c, r = (q[0], q[1]), 0.0
        for i, p in enumerate(pts):
            if not contains(c, r, p):
                c, r = _mec_with(pts[:i], [q, p])
        return c, r
    q, s = fixed
    c, r = diametral(q, s)
    for p in pts:
        if not contains(c, r, p):
            c, r = through3(q, s, p)
    return c, r


def smallest_enclosing_disk(points) -> Disk:
    """Minimum-radius closed disk containing every point (Welzl, iterative form)."""
    pts = as_points(points)
    if len(pts) == 0:
        raise InvalidInputError("smallest_enclosing_disk of an empty point set")
    # fixed permutation: expected linear time, deterministic output
    order = np.random.default_rng(0x5EC).permutation(len(pts))
    c, _ = _mec_with([tuple(p) for p in pts[order]], [])
    radius = float(_dists(pts, c).max())
    return Disk(Point2(*c), radius)


def _kth_radius(pts: np.ndarray, c, k: int) -> float:
    return float(np.partition(_dists(pts, c), k - 1)[k - 1])


def _knn_upper_bound(pts: np.ndarray, k: int) -> tuple[np.ndarray, int]:
    """Distance from each point to its k-th nearest point (itself included)."""
    if len(pts) <= 2000:
        dmat = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        dk = np.partition(dmat, k - 1, axis=1)[:, k - 1]
    else:
        dk, _ = cKDTree(pts).query(pts, k=k)
        dk = dk[:, -1] if k > 1 else np.zeros(len(pts))
    return dk, int(np.argmin(dk))


def _exact_k_disk(pts: np.ndarray, k: int) -> tuple[tuple[float, float], float]:
    n = len(pts)
    dk, best_i = _knn_upper_bound(pts, k)
    r_ub = float(dk[best_i])
    scale = float(np.abs(pts).max()) + 1.0
    tol = 1e-12 * scale
    reach = 2 * r_ub + 4 * tol
    dmat = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    close = dmat <= reach

    cands_c: list[np.ndarray] = [pts.copy()]
    cands_r: list[np.ndarray] = [np.zeros(n)]
    cands_def: list[np.ndarray] = [np.stack([np.arange(n)] * 3, axis=1)]

    ii, jj = np.nonzero(np.triu(close, 1))
    if len(ii):
        cands_c.append((pts[ii] + pts[jj]) / 2)
        cands_r.append(dmat[ii, jj] / 2)
        cands_def.append(np.stack([ii, jj, jj], axis=1))

    for i in range(n - 2):
        nb = np.nonzero(close[i, i + 1:])[0] + i + 1
        if len(nb) < 2:
            continue
        a, b = np.triu_indices(len(nb), 1)
        j, m = nb[a], nb[b]
        keep = close[j, m]
        j, m = j[keep], m[keep]
        if len(j) == 0:
            continue
        p0 = pts[i]
        u = pts[j] - p0
        v = pts[m] - p0
        det = 2.0 * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        mag = np.maximum(np.abs(u).max(axis=1), np.abs(v).max(axis=1))
        ok = np.abs(det) > 1e-14 * mag * mag
        if not np.any(ok):
            continue
        u, v, det, j, m = u[ok], v[ok], det[ok], j[ok], m[ok]
        u2 = (u * u).sum(axis=1)
        v2 = (v * v).sum(axis=1)
        ux = (v[:, 1] * u2 - u[:, 1] * v2) / det
        uy = (u[:, 0] * v2 - v[:, 0] * u2) / det
        r = np.hypot(ux, uy)
        fit = r <= r_ub + tol
        if not np.any(fit):
            continue
        cands_c.append(np.stack([ux[fit] + p0[0], uy[fit] + p0[1]], axis=1))
        cands_r.append(r[fit])
        cands_def.append(np.stack([np.full(int(fit.sum()), i), j[fit], m[fit]], axis=1))

    centers = np.concatenate(cands_c)
    radii = np.concatenate(cands_r)
    defining = np.concatenate(cands_def)
    order = np.argsort(radii, kind="stable")
    centers, radii, defining = centers[order], radii[order], defining[order]

    counts = np.zeros(len(radii), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(n, 1))
    rows_all = np.arange(chunk)
    cutoff = math.inf
    for s in range(0, len(radii), chunk):
        if radii[s] > cutoff:
            break
        c = centers[s:s + chunk]
        rows = rows_all[: len(c)]
        inside = np.hypot(c[:, None, 0] - pts[None, :, 0], c[:, None, 1] - pts[None, :, 1]) <= (
            radii[s:s + chunk, None] + tol
        )
        # defining points are on the boundary by construction
        for col in range(3):
            inside[rows, defining[s:s + chunk, col]] = True
        counts[s:s + chunk] = inside.sum(axis=1)
        good = np.nonzero(counts[s:s + chunk] >= k)[0]
        if len(good) and cutoff == math.inf:
            rmin = radii[s + good[0]]
            cutoff = rmin * (1 + 1e-12) + tol

    feasible = np.nonzero(counts >= k)[0]
    tied = feasible[radii[feasible] <= cutoff]
    keys = np.lexsort((radii[tied], centers[tied, 1], centers[tied, 0]))
    pick = tied[keys[0]]
    return (float(centers[pick, 0]), float(centers[pick, 1])), float(radii[pick])


def _max_depth(pts, src, pdist, pang, r: float) -> tuple[int, tuple[float, float] | None]:
    """Most points coverable by a radius-``r`` disk with some point on its boundary.

    Angular sweep around every source point over the arcs of admissible
    centre directions.
    """
    m = pdist <= 2 * r
    if not np.any(m):
        return 1, None
    p = src[m]
    d = pdist[m]
    w = np.arccos(np.clip(d / (2 * r), -1.0, 1.0))
    # a coincident point is covered from every direction; one unsplit arc
    same = d == 0
    s = np.where(same, 0.0, np.mod(pang[m] - w, TWO_PI))
    e = np.where(same, TWO_PI, s + 2 * w)
    wrap = e > TWO_PI
    starts = np.concatenate([s, np.zeros(int(wrap.sum()))])
    ends = np.concatenate([np.minimum(e, TWO_PI), e[wrap] - TWO_PI])
    groups = np.concatenate([p, p[wrap]])
    angles = np.concatenate([starts, ends])
    delta = np.concatenate([np.ones(len(starts), dtype=np.int64), -np.ones(len(ends), dtype=np.int64)])
    grp = np.concatenate([groups, groups])
    order = np.lexsort((-delta, angles, grp))
    depth = np.cumsum(delta[order])
    at = int(np.argmax(depth))
    g, a = int(grp[order][at]), float(angles[order][at])
    center = (pts[g, 0] + r * math.cos(a), pts[g, 1] + r * math.sin(a))
    return int(depth[at]) + 1, center


def _approx_k_disk(pts: np.ndarray, k: int, rel_eps: float) -> tuple[tuple[float, float], float]:
    dk, best_i = _knn_upper_bound(pts, k)
    hi = float(dk[best_i])
    best = (float(pts[best_i, 0]), float(pts[best_i, 1]))
    if hi == 0.0:
        return best, 0.0
    lo = hi / 2
    pairs = cKDTree(pts).query_pairs(2 * hi, output_type="ndarray")
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    # only points with k-1 others within 2r can sit on a feasible boundary
    while hi > lo * (1 + rel_eps):
        keep = dk[src] <= 2 * hi
        src, dst = src[keep], dst[keep]
        mid = 0.5 * (lo + hi)
        diff = pts[dst] - pts[src]
        pdist = np.hypot(diff[:, 0], diff[:, 1])
        pang = np.arctan2(diff[:, 1], diff[:, 0])
        depth, center = _max_depth(pts, src, pdist, pang, mid)
        if depth >= k and center is not None:
            hi, best = mid, center
        else:
            lo = mid
    # polish: exact enclosing disk of the k points nearest the feasible centre
    near = np.argsort(_dists(pts, best), kind="stable")[:k]
    d = smallest_enclosing_disk(pts[near])
    return (d.center.x, d.center.y), d.radius


def smallest_k_enclosing_disk(points, k: int, *, exact_threshold: int = EXACT_K_THRESHOLD,
                              rel_eps: float = 1e-9) -> Disk:
    """Minimum-radius closed disk containing at least ``k`` of ``points``.

    Exact (enumeration of every disk determined by one, two or three input
    points) when ``len(points) <= exact_threshold``. Larger inputs use a
    bisection on the radius with an angular-sweep feasibility test, giving a
    radius within a factor ``1 + rel_eps`` of optimal.

    Among optimal disks the lexicographically smallest ``(cx, cy, r)`` is
    returned (exact path only). The reported radius is the distance to the
    k-th nearest point, so :func:`count_in_disk` always sees ``>= k`` points.
    """
    pts = as_points(points)
    n = len(pts)
    if n == 0 or not 1 <= k <= n:
        raise InvalidInputError(f"k={k} out of range for {n} points")
    if k == 1:
        i = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
        return Disk(Point2(*pts[i]), 0.0)
    if k == n:
        return smallest_enclosing_disk(pts)
    if n <= exact_threshold:
        c, _ = _exact_k_disk(pts, k)
    else:
        c, _ = _approx_k_disk(pts, k, rel_eps)
    return Disk(Point2(*c), _kth_radius(pts, c, k))


def nine_cover_witness() -> CoverWitness:
    """One unit disk at the origin plus eight centred on the radius-1.5 circle at 45 degree steps."""
    disks = [Disk(Point2(0.0, 0.0), 1.0)]
    for j in range(8):
        t = math.radians(45 * j)
        disks.append(Disk(Point2(1.5 * math.cos(t), 1.5 * math.sin(t)), 1.0))
    return CoverWitness(tuple(disks))
