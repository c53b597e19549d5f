"""Cutting-circle separators for kissing-disk packings.

The packing is normalized so that the smallest disk holding ceil(n/10)
centers becomes the unit disk at the origin. A circle of radius x in [1, 2]
is then chosen, at random or by sweeping every breakpoint, and the disks it
meets form the separator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BelowRecursionBaseError, DegenerateNormalizationError
from .geometry import (
    EXACT_K_THRESHOLD,
    Disk,
    Point2,
    hit_intervals,
    hit_length,
    smallest_k_enclosing_disk,
    surrogate_radii,
)
from .packing import Packing

MIN_N = 11
RANDOMIZED = "randomized"
DERANDOMIZED = "derandomized"
_SEED_MASK = (1 << 64) - 1


def enclosing_count(n: int) -> int:
    """ceil(n / 10)."""
    return -(-n // 10)


@dataclass(frozen=True)
class NormalizedPacking:
    """A packing mapped by ``p -> (p + translation) * scale``."""

    packing: Packing
    k: int
    translation: Point2
    scale: float

    @property
    def n(self) -> int:
        return self.packing.n

    @property
    def centers(self) -> np.ndarray:
        return self.packing.centers

    @property
    def radii(self) -> np.ndarray:
        return self.packing.radii


@dataclass(frozen=True)
class Certificate:
    rho: np.ndarray = field(compare=False)
    sum_rho_sq: float
    expected_bound: float  # sum of 2 * rho_i
    cs_bound: float  # 2 sqrt(n) sqrt(sum rho_i^2)
    theorem_bound: float  # 4 sqrt(n)
    expected_exact: float  # sum of |[1, 2] ∩ hit interval_i|

    def chain_holds(self, slack: float = 1e-6) -> bool:
        return (
            self.sum_rho_sq <= 4 + slack
            and self.expected_exact <= self.expected_bound + 1e-9
            and self.expected_bound <= self.cs_bound + 1e-9
            and self.cs_bound <= self.theorem_bound + slack
        )


@dataclass(frozen=True)
class SeparatorResult:
    x: float
    S: tuple[int, ...]
    inside: tuple[int, ...]
    outside: tuple[int, ...]
    mode: str | None = None
    certificate: Certificate | None = None


@dataclass(frozen=True)
class ExpectationEstimate:
    mean: float
    std: float
    samples: int

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(self.samples)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & _SEED_MASK)


def normalize(p: Packing, *, exact_threshold: int = EXACT_K_THRESHOLD,
              rel_eps: float = 1e-9) -> NormalizedPacking:
    """Translate and scale ``p`` so its smallest ceil(n/10)-enclosing disk of centers is the unit disk.

    Raises :class:`BelowRecursionBaseError` for n < 11 and
    :class:`DegenerateNormalizationError` if that disk has zero radius.
    """
    n = p.n
    if n < MIN_N:
        raise BelowRecursionBaseError(f"below recursion base: n={n} < {MIN_N}")
    k = enclosing_count(n)
    d = smallest_k_enclosing_disk(p.centers, k, exact_threshold=exact_threshold, rel_eps=rel_eps)
    if d.radius <= 0:
        raise DegenerateNormalizationError(
            f"degenerate normalization: {k} centers coincide at {tuple(d.center)}"
        )
    translation = Point2(-d.center.x, -d.center.y)
    scale = 1.0 / d.radius
    # rounding may push the k-th center a hair outside the unit disk
    for _ in range(16):
        q = p.transformed(translation, scale)
        kth = np.partition(np.hypot(q.centers[:, 0], q.centers[:, 1]), k - 1)[k - 1]
        if kth <= 1.0:
            break
        scale = math.nextafter(scale / kth, 0.0)
    return NormalizedPacking(q, k, translation, scale)


def partition_at(np_: NormalizedPacking, x: float, mode: str | None = None,
                 cert: Certificate | None = None) -> SeparatorResult:
    """Split vertices by the circle of radius ``x`` (closed intersection)."""
    lo, hi = hit_intervals(np_.centers, np_.radii)
    norms = np.hypot(np_.centers[:, 0], np_.centers[:, 1])
    in_s = (np.maximum(lo, 0.0) <= x) & (x <= hi)
    S = np.nonzero(in_s)[0]
    inside = np.nonzero(~in_s & (norms < x))[0]
    outside = np.nonzero(~in_s & (norms > x))[0]
    return SeparatorResult(float(x), tuple(S.tolist()), tuple(inside.tolist()),
                           tuple(outside.tolist()), mode, cert)


def _hit_counts(np_: NormalizedPacking, xs: np.ndarray) -> np.ndarray:
    """Number of disks met by the circle of radius x, for each x >= 0."""
    lo, hi = hit_intervals(np_.centers, np_.radii)
    lo = np.sort(np.maximum(lo, 0.0))
    hi = np.sort(hi)
    return np.searchsorted(lo, xs, side="right") - np.searchsorted(hi, xs, side="left")


def certificate(np_: NormalizedPacking) -> Certificate:
    n = np_.n
    rho = surrogate_radii(np_.centers, np_.radii, Disk(Point2(0.0, 0.0), 2.0))
    s2 = float(np.sum(rho * rho))
    lo, hi = hit_intervals(np_.centers, np_.radii)
    return Certificate(
        rho=rho,
        sum_rho_sq=s2,
        expected_bound=float(2 * np.sum(rho)),
        cs_bound=2 * math.sqrt(n) * math.sqrt(s2),
        theorem_bound=4 * math.sqrt(n),
        expected_exact=float(np.sum(hit_length(lo, hi))),
    )


def select_random(np_: NormalizedPacking, seed: int) -> SeparatorResult:
    """Cut at x drawn uniformly from [1, 2) by ``numpy.random.default_rng(seed)``."""
    x = 1.0 + float(_rng(seed).random())
    return partition_at(np_, x, RANDOMIZED, certificate(np_))


def candidate_radii(np_: NormalizedPacking) -> np.ndarray:
    """Breakpoints in [1, 2] (with both endpoints) and the midpoints between them, sorted."""
    lo, hi = hit_intervals(np_.centers, np_.radii)
    b = np.concatenate([lo, hi, [1.0, 2.0]])
    b = np.unique(b[(b >= 1.0) & (b <= 2.0)])
    mids = 0.5 * (b[:-1] + b[1:])
    return np.sort(np.concatenate([b, mids]))


def select_derandomized(np_: NormalizedPacking) -> SeparatorResult:
    """Cut at the radius in [1, 2] meeting the fewest disks (smallest such radius on ties).

    The selected set only changes at the breakpoints ``|p_i| +- r_i``, so
    evaluating every breakpoint and one point inside every gap is exhaustive.
    """
    xs = candidate_radii(np_)
    counts = _hit_counts(np_, xs)
    x = float(xs[int(np.argmin(counts))])
    return partition_at(np_, x, DERANDOMIZED, certificate(np_))


def estimate_expected_size(np_: NormalizedPacking, samples: int, seed: int) -> ExpectationEstimate:
    """Monte Carlo mean and sample standard deviation of ``|S|`` over uniform x in [1, 2)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    xs = 1.0 + _rng(seed).random(samples)
    counts = _hit_counts(np_, xs).astype(float)
    std = float(counts.std(ddof=1)) if samples > 1 else 0.0
    return ExpectationEstimate(float(counts.mean()), std, samples)


def separate(p: Packing, mode: str = DERANDOMIZED, seed: int = 0, **normalize_kw):
    """Normalize ``p`` and select a separator; returns ``(normalized, result)``."""
    np_ = normalize(p, **normalize_kw)
    if mode == DERANDOMIZED:
        return np_, select_derandomized(np_)
    if mode == RANDOMIZED:
        return np_, select_random(np_, seed)
    raise ValueError(f"unknown mode {mode!r}")
