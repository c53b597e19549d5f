"""Graph-side machinery: components after vertex removal, separator
verification, instance generators and a brute-force separator oracle."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import InvalidInputError, PartitionMismatchError
from .packing import Triangulation

if TYPE_CHECKING:
    from .separator import SeparatorResult

EXHAUSTIVE_MAX_N = 14


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``0..n-1`` with sorted adjacency tuples."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InvalidInputError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def from_triangulation(cls, t: Triangulation) -> Graph:
        return cls.from_edges(t.n, t.edges)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    max_component: int
    balance_ok: bool
    separator_size: int
    size_ok: bool
    n: int
    components: int

    @property
    def ok(self) -> bool:
        return self.valid and self.balance_ok and self.size_ok


def balance_limit(n: int) -> int:
    """Largest allowed component, floor(9n/10)."""
    return 9 * n // 10


def size_limit(n: int) -> int:
    """Largest allowed separator, floor(4 sqrt(n))."""
    return math.isqrt(16 * n)


def connected_components(g: Graph, removed=()) -> list[list[int]]:
    """Components of ``g`` minus ``removed``, each sorted, ordered by smallest vertex."""
    gone = np.zeros(g.n, dtype=bool)
    gone[list(removed)] = True
    comps = []
    for s in range(g.n):
        if gone[s]:
            continue
        gone[s] = True
        comp, queue = [s], deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not gone[v]:
                    gone[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def verify_separator(g: Graph, r: SeparatorResult) -> VerifyReport:
    n = g.n
    label = np.full(n, -1)
    for code, part in ((0, r.S), (1, r.inside), (2, r.outside)):
        for v in part:
            if not 0 <= v < n:
                raise PartitionMismatchError(f"vertex {v} out of range for n={n}")
            if label[v] != -1:
                raise PartitionMismatchError(f"vertex {v} appears in more than one part")
            label[v] = code
    if np.any(label == -1):
        raise PartitionMismatchError(f"vertex {int(np.argmax(label == -1))} is in no part")

    valid = not any(
        {label[u], label[v]} == {1, 2} for u in range(n) for v in g.adjacency[u] if u < v
    )
    comps = connected_components(g, r.S)
    biggest = max((len(c) for c in comps), default=0)
    size = len(r.S)
    return VerifyReport(
        valid=valid,
        max_component=biggest,
        balance_ok=biggest <= balance_limit(n),
        separator_size=size,
        size_ok=size <= size_limit(n),
        n=n,
        components=len(comps),
    )


def generate_apollonian(n: int, seed: int) -> Triangulation:
    """Random Apollonian network on ``n >= 4`` vertices.

    Starts from K4 with outer face (0, 1, 2) and centre 3; every further
    vertex subdivides a uniformly chosen inner face.
    """
    if n < 4:
        raise InvalidInputError(f"Apollonian networks need n >= 4, got {n}")
    rng = np.random.default_rng(int(seed) & ((1 << 64) - 1))
    inner = [(0, 1, 3), (1, 2, 3), (2, 0, 3)]
    for v in range(4, n):
        i = int(rng.integers(len(inner)))
        a, b, c = inner[i]
        inner[i] = (a, b, v)
        inner.append((b, c, v))
        inner.append((c, a, v))
    outer = (0, 1, 2)
    return Triangulation.from_faces(n, [outer, *inner], outer)


def exhaustive_min_balanced_separator(g: Graph, balance: float) -> int:
    """Smallest ``|S|`` leaving every component of ``g - S`` with at most ``balance * n`` vertices."""
    n = g.n
    if n > EXHAUSTIVE_MAX_N:
        raise InvalidInputError(f"exhaustive search limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
    cap = math.floor(balance * n + 1e-9)
    for size in range(n + 1):
        for s in itertools.combinations(range(n), size):
            if all(len(c) <= cap for c in connected_components(g, s)):
                return size
    return n
