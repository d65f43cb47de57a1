"""Deterministic SABRE-style swap insertion."""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Gate, QCircuit, swap
from .layout import CouplingMap, Layout

LOOKAHEAD_SIZE = 20
LOOKAHEAD_WEIGHT = 0.5


@dataclass(frozen=True)
class FrontLayer:
    """Pending two-qubit gates whose predecessors have all been emitted."""

    gates: tuple[Gate, ...]
    lookahead: tuple[Gate, ...] = ()


@dataclass(frozen=True)
class RoutedCircuit:
    """A routed circuit over the device's physical qubits.

    ``permutation[p]`` is where the state that started on physical qubit
    ``p`` ends up after every inserted swap.
    """

    circuit: QCircuit
    initial_layout: Layout
    final_layout: Layout
    swap_count: int
    permutation: tuple[int, ...]


def _apply_swap(v2p: Sequence[int], s: tuple[int, int]) -> list[int]:
    a, b = s
    out = list(v2p)
    for v, p in enumerate(out):
        if p == a:
            out[v] = b
        elif p == b:
            out[v] = a
    return out


def swap_score(F: FrontLayer, L: Layout, s: tuple[int, int] | None,
               D: np.ndarray) -> float:
    """Summed distance of the front layer after swap ``s``, plus half the lookahead sum."""
    v2p = L.v2p if s is None else _apply_swap(L.v2p, s)
    front = sum(int(D[v2p[g.qubits[0]], v2p[g.qubits[1]]]) for g in F.gates)
    ahead = sum(int(D[v2p[g.qubits[0]], v2p[g.qubits[1]]]) for g in F.lookahead)
    return front + LOOKAHEAD_WEIGHT * ahead


def _needs_route(g: Gate) -> bool:
    return g.is_two_qubit


def route(c: QCircuit, L0: Layout, G: CouplingMap) -> RoutedCircuit:
    """Insert SWAP gates so every two-qubit gate acts on a coupling edge.

    Gates are emitted in dependency order as soon as they are executable.
    When only blocked two-qubit gates remain, the swap on an edge touching
    them with the lowest :func:`swap_score` is applied (ties go to the
    smaller edge), and the swap just applied is never immediately undone.
    If ``G.n`` swaps pass without progress, the oldest blocked gate is
    forced through along a shortest path.
    """
    if L0.m != c.m:
        raise ValueError(f"layout covers {L0.m} qubits, circuit has {c.m}")
    if L0.n > G.n:
        raise ValueError(f"layout targets {L0.n} qubits, device has {G.n}")
    D = G.distance_matrix()
    gates = c.gates
    n_gates = len(gates)

    succ: list[list[int]] = [[] for _ in range(n_gates)]
    npred = [0] * n_gates
    last = [-1] * c.m
    for i, g in enumerate(gates):
        preds = {last[q] for q in g.qubits if last[q] >= 0}
        for p in sorted(preds):
            succ[p].append(i)
        npred[i] = len(preds)
        for q in g.qubits:
            last[q] = i

    v2p = list(L0.v2p)
    # position of the state that started on each physical qubit
    where = list(range(G.n))
    holder = list(range(G.n))
    out: list[Gate] = []
    ready = [i for i in range(n_gates) if npred[i] == 0]
    heapq.heapify(ready)
    blocked: list[int] = []
    swaps = 0
    idle_swaps = 0
    previous: tuple[int, int] | None = None

    def executable(g: Gate) -> bool:
        return not _needs_route(g) or G.has_edge(v2p[g.qubits[0]], v2p[g.qubits[1]])

    def emit_swap(s: tuple[int, int]) -> None:
        nonlocal v2p, swaps, idle_swaps, previous
        a, b = s
        previous = s
        out.append(swap(a, b))
        v2p = _apply_swap(v2p, s)
        ha, hb = holder[a], holder[b]
        holder[a], holder[b] = hb, ha
        where[ha], where[hb] = b, a
        swaps += 1
        idle_swaps += 1

    def lookahead(front: list[int]) -> list[Gate]:
        seen = set(front)
        queue = deque(front)
        found: list[Gate] = []
        while queue and len(found) < LOOKAHEAD_SIZE:
            u = queue.popleft()
            for v in succ[u]:
                if v in seen:
                    continue
                seen.add(v)
                queue.append(v)
                if _needs_route(gates[v]):
                    found.append(gates[v])
                    if len(found) == LOOKAHEAD_SIZE:
                        break
        return found

    while ready or blocked:
        progressed = False
        pending = ready + blocked
        heapq.heapify(pending)
        ready, blocked = [], []
        while pending:
            i = heapq.heappop(pending)
            g = gates[i]
            if not executable(g):
                blocked.append(i)
                continue
            out.append(g.remap(v2p))
            progressed = True
            for j in succ[i]:
                npred[j] -= 1
                if npred[j] == 0:
                    heapq.heappush(pending, j)
        if progressed:
            idle_swaps = 0
        if not blocked:
            break
        blocked.sort()
        if idle_swaps >= G.n:
            oldest = gates[blocked[0]]
            a, b = v2p[oldest.qubits[0]], v2p[oldest.qubits[1]]
            while D[a, b] > 1:
                step = min(r for r in G.neighbors[a] if D[r, b] == D[a, b] - 1)
                emit_swap((min(a, step), max(a, step)))
                a = step
            continue
        F = FrontLayer(tuple(gates[i] for i in blocked), tuple(lookahead(blocked)))
        active = {v2p[q] for g in F.gates for q in g.qubits}
        candidates = sorted(e for e in G.edges if e[0] in active or e[1] in active)
        # undoing the swap just made can only cycle
        if len(candidates) > 1 and previous in candidates:
            candidates.remove(previous)
        L = Layout(tuple(v2p), G.n)
        best = min(candidates, key=lambda e: (swap_score(F, L, e, D), e))
        emit_swap(best)

    routed = QCircuit(G.n, tuple(out), c.name, c.clbits)
    return RoutedCircuit(routed, L0, Layout(tuple(v2p), G.n), swaps, tuple(where))


def is_compliant(c: QCircuit, G: CouplingMap) -> bool:
    """Every two-qubit gate (SWAPs included) sits on a coupling edge."""
    return all(G.has_edge(*g.qubits) for g in c.gates if g.is_two_qubit)


def embed(c: QCircuit, L: Layout) -> QCircuit:
    """``c`` relabelled onto physical qubits through ``L``."""
    return QCircuit(L.n, tuple(g.remap(L.v2p) for g in c.gates), c.name, c.clbits)


@dataclass(frozen=True)
class CompactPair:
    """A routed circuit and its original placed on a shared compact register.

    ``perm`` is the swap permutation on that register and ``inputs`` the
    positions holding the circuit's virtual qubits at the start.
    """

    routed: QCircuit
    original: QCircuit
    perm: tuple[int, ...]
    inputs: tuple[int, ...]


def compress(r: RoutedCircuit, original: QCircuit) -> CompactPair:
    """Restrict a routed circuit and the embedded original to the touched physical qubits."""
    touched = set(r.initial_layout.v2p)
    for g in r.circuit.gates:
        touched.update(g.qubits)
    keep = sorted(touched)
    index = {p: k for k, p in enumerate(keep)}
    relabel = [index.get(p, -1) for p in range(r.circuit.m)]
    routed = QCircuit(len(keep), tuple(g.remap(relabel) for g in r.circuit.gates))
    placed = QCircuit(len(keep), tuple(g.remap([index[p] for p in r.initial_layout.v2p])
                                       for g in original.gates))
    perm = tuple(index[r.permutation[p]] for p in keep)
    return CompactPair(routed, placed, perm, tuple(index[p] for p in r.initial_layout.v2p))
