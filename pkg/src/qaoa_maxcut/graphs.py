"""Undirected unweighted graphs: seeded generators, cut arithmetic, exact Max-Cut."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "GraphClass",
    "gen_random_regular",
    "gen_erdos_renyi",
    "cut_value",
    "cut_table",
    "max_cut_brute_force",
    "classify",
    "read_edge_list",
    "write_edge_list",
]

# 2^24 basis states is the largest enumeration we allow for the exact solver.
BRUTE_FORCE_MAX_VERTICES = 24

# Restarts for the pairing-model regular generator before giving up.
_REGULAR_MAX_TRIES = 2000


class GraphClass(enum.Enum):
    """Degree-based classification that selects the optimization bounds."""

    ODD_REGULAR = "odd_regular"
    EVEN_REGULAR = "even_regular"
    NON_REGULAR = "non_regular"


@dataclass(frozen=True)
class Graph:
    """Simple undirected unweighted graph on vertices 0..n-1.

    Edges are stored canonically as sorted (lo, hi) pairs in sorted order.
    `kind`, `degree` and `edge_prob` record how the instance was generated;
    they are provenance metadata and excluded from equality so that instances
    survive an edge-list round trip.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    kind: str = field(default="general", compare=False)
    degree: int | None = field(default=None, compare=False)
    edge_prob: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"vertex count must be >= 1, got {self.n}")
        canonical = []
        seen = set()
        for j, k in self.edges:
            if j == k:
                raise ValueError(f"self-loop at vertex {j}")
            if not (0 <= j < self.n and 0 <= k < self.n):
                raise ValueError(f"edge ({j},{k}) out of range for n={self.n}")
            e = (j, k) if j < k else (k, j)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            canonical.append(e)
        canonical.sort()
        object.__setattr__(self, "edges", tuple(canonical))
        if self.kind == "regular":
            d = self.degree
            if d is None or any(deg != d for deg in self.degrees()):
                raise ValueError(f"graph is not {d}-regular")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for j, k in self.edges:
            deg[j] += 1
            deg[k] += 1
        return deg


def gen_random_regular(n: int, d: int, seed: int) -> Graph:
    """Sample a simple d-regular graph on n vertices (pairing model with restarts).

    Deterministic for a fixed seed. Raises ValueError when no d-regular graph
    exists (n*d odd, or d >= n).
    """
    if d >= n:
        raise ValueError(f"degree d={d} must be smaller than n={n}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even for a d-regular graph, got n={n}, d={d}")

    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(_REGULAR_MAX_TRIES):
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, stubs.size, 2):
            u, v = int(stubs[i]), int(stubs[i + 1])
            if u == v:
                ok = False
                break
            e = (u, v) if u < v else (v, u)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n=n, edges=tuple(edges), kind="regular", degree=d)
    raise RuntimeError(f"failed to sample a simple {d}-regular graph on {n} vertices")


def gen_erdos_renyi(n: int, prob: float, seed: int) -> Graph:
    """Sample G(n, prob): each pair (u, v), u < v in lexicographic order, is an
    edge independently with probability `prob`. Deterministic for a fixed seed."""
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {prob}")
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < prob:
                edges.append((u, v))
    return Graph(n=n, edges=tuple(edges), kind="erdos_renyi", edge_prob=prob)


def cut_value(g: Graph, assignment: str) -> int:
    """Number of edges whose endpoints get different sides.

    `assignment` is a 0/1 string of length n; character i is vertex i's side.
    """
    if len(assignment) != g.n:
        raise ValueError(f"assignment length {len(assignment)} != n={g.n}")
    if any(c not in "01" for c in assignment):
        raise ValueError("assignment must contain only '0' and '1'")
    return sum(1 for j, k in g.edges if assignment[j] != assignment[k])


def _cut_values_at(g: Graph, indices: np.ndarray) -> np.ndarray:
    """Cut values for basis-state indices; bit j of an index is vertex j's side."""
    acc = np.zeros(indices.shape, dtype=np.int64)
    for j, k in g.edges:
        acc += (indices >> j ^ indices >> k) & 1
    return acc


def cut_table(g: Graph) -> np.ndarray:
    """Cut value of every basis state, indexed with vertex 0 as the least
    significant bit. Length 2^n, dtype float64 (ready to dot with probabilities)."""
    indices = np.arange(1 << g.n, dtype=np.int64)
    return _cut_values_at(g, indices).astype(np.float64)


def max_cut_brute_force(g: Graph) -> tuple[int, str]:
    """Exact maximum cut by enumeration; returns (C_max, one maximizing assignment).

    Only assignments with vertex 0 on side 0 are enumerated (2^(n-1) states);
    the complement of a cut has the same value.
    """
    if g.n > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(
            f"brute force supports n <= {BRUTE_FORCE_MAX_VERTICES}, got n={g.n}"
        )
    indices = np.arange(0, 1 << g.n, 2, dtype=np.int64)
    cuts = _cut_values_at(g, indices)
    best = int(np.argmax(cuts))
    z = int(indices[best])
    assignment = "".join(str(z >> i & 1) for i in range(g.n))
    return int(cuts[best]), assignment


def classify(g: Graph) -> GraphClass:
    """odd_regular / even_regular when all degrees are equal, else non_regular."""
    degs = g.degrees()
    d = degs[0]
    if any(deg != d for deg in degs):
        return GraphClass.NON_REGULAR
    return GraphClass.ODD_REGULAR if d % 2 == 1 else GraphClass.EVEN_REGULAR


def write_edge_list(g: Graph, path: str | Path) -> None:
    """Persist as text: first line "n m", then one "j k" line per edge."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{j} {k}" for j, k in g.edges)
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> Graph:
    """Parse the edge-list text format written by `write_edge_list`."""
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing 'n m' header")
    n, m = int(tokens[0]), int(tokens[1])
    if len(tokens) != 2 + 2 * m:
        raise ValueError(f"{path}: expected {m} edges, found {(len(tokens) - 2) // 2}")
    pairs = tokens[2:]
    edges = tuple(
        (int(pairs[2 * i]), int(pairs[2 * i + 1])) for i in range(m)
    )
    return Graph(n=n, edges=edges)
