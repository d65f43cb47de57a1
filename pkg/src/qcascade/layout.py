"""Device coupling graphs, chain search and the initial layout built from a chain."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class LayoutError(ValueError):
    """No chain or layout of the requested length exists."""

    def __init__(self, message: str, achieved: int | None = None):
        super().__init__(message)
        self.achieved = achieved


def distance_matrix(n: int, adjacency: Sequence[Sequence[int]]) -> np.ndarray:
    """All-pairs hop counts by breadth-first search from every node."""
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if dist[s, v] < 0:
                    dist[s, v] = dist[s, u] + 1
                    queue.append(v)
    if (dist < 0).any():
        raise ValueError("coupling graph is disconnected")
    return dist


@dataclass(frozen=True)
class CouplingMap:
    """Undirected device graph over physical qubits ``0..n-1``."""

    n: int
    edges: frozenset[tuple[int, int]]
    name: str = ""
    neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self loop on {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "neighbors", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> CouplingMap:
        return cls(n, frozenset(tuple(e) for e in edges), name)

    @classmethod
    def parse(cls, text: str, name: str = "") -> CouplingMap:
        """Read ``n`` on the first line, then one ``u v`` pair per line."""
        rows = [ln.split("#")[0].split() for ln in text.splitlines()]
        rows = [r for r in rows if r]
        if not rows or len(rows[0]) != 1:
            raise ValueError("coupling map must start with the qubit count")
        n = int(rows[0][0])
        edges = []
        for r in rows[1:]:
            if len(r) != 2:
                raise ValueError(f"bad edge line: {' '.join(r)}")
            edges.append((int(r[0]), int(r[1])))
        return cls.from_edges(n, edges, name)

    @classmethod
    def load(cls, path: str | Path) -> CouplingMap:
        path = Path(path)
        return cls.parse(path.read_text(), path.stem)

    @classmethod
    def builtin(cls, name: str) -> CouplingMap:
        """One of the bundled device maps (``tokyo``, ``almaden``)."""
        text = resources.files("qcascade.data.maps").joinpath(f"{name}.txt").read_text()
        return cls.parse(text, name)

    @classmethod
    def line(cls, n: int) -> CouplingMap:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"line{n}")

    @classmethod
    def grid(cls, rows: int, cols: int) -> CouplingMap:
        edges = []
        for r in range(rows):
            for c in range(cols):
                q = r * cols + c
                if c + 1 < cols:
                    edges.append((q, q + 1))
                if r + 1 < rows:
                    edges.append((q, q + cols))
        return cls.from_edges(rows * cols, edges, f"grid{rows}x{cols}")

    @classmethod
    def star(cls, n: int, center: int = 0) -> CouplingMap:
        return cls.from_edges(n, [(center, q) for q in range(n) if q != center], f"star{n}")

    def to_text(self) -> str:
        return "\n".join([str(self.n)] + [f"{u} {v}" for u, v in sorted(self.edges)]) + "\n"

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for v in self.neighbors[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def distance_matrix(self) -> np.ndarray:
        return distance_matrix(self.n, self.neighbors)


@dataclass(frozen=True)
class Chain:
    """Physical qubits in chain order.

    ``spliced`` lists nodes added after the walk by :func:`expand_chain`;
    only those positions may break adjacency. ``visits`` counts node
    explorations during the walk.
    """

    order: tuple[int, ...]
    isolated: frozenset[int] = frozenset()
    spliced: frozenset[int] = frozenset()
    visits: int = 0

    @property
    def walk(self) -> tuple[int, ...]:
        """The chain as it was before any splicing."""
        return tuple(q for q in self.order if q not in self.spliced)


@dataclass(frozen=True)
class Layout:
    """Virtual-to-physical assignment; ``v2p[i]`` is where virtual qubit ``i`` lives."""

    v2p: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "v2p", tuple(self.v2p))
        if len(set(self.v2p)) != len(self.v2p):
            raise ValueError(f"layout is not injective: {self.v2p}")
        if any(not 0 <= p < self.n for p in self.v2p):
            raise ValueError(f"layout {self.v2p} outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.v2p)

    @property
    def p2v(self) -> dict[int, int]:
        return {p: v for v, p in enumerate(self.v2p)}

    @classmethod
    def trivial(cls, m: int, n: int | None = None) -> Layout:
        return cls(tuple(range(m)), m if n is None else n)


def check_for_isolated(G: CouplingMap, C: Sequence[int], E: set[int], I: set[int]) -> bool:
    """Mark unexplored nodes touching an isolated or chain node as isolated.

    ``E`` and ``I`` are updated in place. Returns whether anything changed.
    """
    in_chain = set(C)
    changed = False
    for q in range(G.n):
        if q in E or q in I:
            continue
        nbrs = G.neighbors[q]
        if any(r in I for r in nbrs) or any(r in in_chain for r in nbrs):
            I.add(q)
            E.add(q)
            changed = True
    return changed


def expand_chain(G: CouplingMap, C: list[int], I: set[int], m: int) -> list[int]:
    """Splice isolated nodes into ``C`` until it holds ``m`` nodes.

    Each splice puts the smallest attachable isolated node right after its
    lowest-numbered chain neighbour, so the chain may stop being a path at
    that point. ``C`` and ``I`` are updated in place.
    """
    while len(C) < m:
        members = set(C)
        for q in sorted(I):
            anchors = [x for x in G.neighbors[q] if x in members]
            if anchors:
                C.insert(C.index(min(anchors)) + 1, q)
                I.discard(q)
                break
        else:
            raise LayoutError(f"chain stuck at {len(C)} of {m} nodes", achieved=len(C))
    return C


def _walk(G: CouplingMap, start: int) -> tuple[list[int], set[int], set[int], int]:
    n = G.n
    C = [start]
    E = {start}
    I: set[int] = set()
    S = set(range(n)) - {start}
    x = start
    last_back_step = -1
    backtracks = 0
    visits = 1
    while len(E) < n:
        N = [q for q in G.neighbors[x] if q not in E]
        if N:
            x = x + 1 if x + 1 in N else min(N)
            E.add(x)
            C.append(x)
            S.discard(x)
            visits += 1
            if len(E) < n - 1:
                # prune dead ends next to the new tail for later splicing
                for q in G.neighbors[x]:
                    if q in E or len(E) >= n - 1:
                        continue
                    if all(r in E for r in G.neighbors[q] if r != x):
                        E.add(q)
                        S.discard(q)
                        I.add(q)
                        visits += 1
        else:
            if len(C) < 2 or backtracks >= n:
                break
            if last_back_step != C[-2] and n - len(E) > abs(x - min(S)):
                break
            I.add(x)
            C.pop()
            x = C[-1]
            last_back_step = x
            backtracks += 1
    return C, E, I, visits


def chain(G: CouplingMap, m: int, *, try_all_starts: bool = False) -> Chain:
    """Greedy walk for a path of at least ``m`` physical qubits.

    Starts at node 0 (or every node with ``try_all_starts``, keeping the
    longest walk), prefers the next-numbered neighbour, and otherwise takes
    the smallest unexplored one. Short walks are extended by splicing in
    nodes left out along the way.
    """
    if m > G.n:
        raise LayoutError(f"circuit needs {m} qubits, device has {G.n}", achieved=0)
    if G.n == 0:
        return Chain(())
    starts = range(G.n) if try_all_starts else (0,)
    walks = [_walk(G, s) for s in starts]
    C, E, I, visits = max(walks, key=lambda w: len(w[0]))
    walked = set(C)
    if len(C) < m:
        while True:
            check_for_isolated(G, C, E, I)
            try:
                expand_chain(G, C, I, m)
                break
            except LayoutError:
                if not check_for_isolated(G, C, E, I):
                    raise
    return Chain(tuple(C), frozenset(I), frozenset(C) - walked, visits)


def initial_layout(C: Chain, m: int, n: int | None = None) -> Layout:
    """Virtual qubit ``i`` goes to chain element ``C.order[i]``."""
    if len(C.order) < m:
        raise LayoutError(f"chain has {len(C.order)} nodes, circuit needs {m}",
                          achieved=len(C.order))
    size = n if n is not None else (max(C.order) + 1 if C.order else 0)
    return Layout(C.order[:m], size)


def is_path(G: CouplingMap, order: Sequence[int]) -> bool:
    return all(G.has_edge(a, b) for a, b in zip(order, order[1:]))
