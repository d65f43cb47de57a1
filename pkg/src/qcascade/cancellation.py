"""Peephole removal of adjacent self-inverse pairs (CX·CX and H·H).

Adjacency is taken on the dependency graph: two gates are adjacent when,
on every qubit they touch, nothing else sits between them.
"""
from __future__ import annotations

from .circuit import GateKind, QCircuit

_CANCELLABLE = frozenset({GateKind.CX, GateKind.H})


def _cancel(c: QCircuit, kinds: frozenset[GateKind]) -> QCircuit:
    gates = c.gates
    n = len(gates)
    # prev_on[i][q] / next_on[i][q]: neighbouring gate index on qubit q, -1 if none
    prev_on: list[dict[int, int]] = [dict() for _ in range(n)]
    next_on: list[dict[int, int]] = [dict() for _ in range(n)]
    last = [-1] * c.m
    for i, g in enumerate(gates):
        for q in g.qubits:
            j = last[q]
            prev_on[i][q] = j
            next_on[i][q] = -1
            if j >= 0:
                next_on[j][q] = i
            last[q] = i
    alive = [True] * n

    def partner(i: int) -> int:
        g = gates[i]
        if g.kind not in kinds:
            return -1
        j = next_on[i][g.qubits[0]]
        if j < 0 or gates[j] != g:
            return -1
        # CX needs the same successor on both wires
        if any(next_on[i][q] != j for q in g.qubits):
            return -1
        return j

    def unlink(i: int) -> list[int]:
        touched = []
        for q in gates[i].qubits:
            p, s = prev_on[i][q], next_on[i][q]
            if p >= 0:
                next_on[p][q] = s
                touched.append(p)
            if s >= 0:
                prev_on[s][q] = p
        alive[i] = False
        return touched

    work = list(range(n - 1, -1, -1))
    while work:
        i = work.pop()
        if not alive[i]:
            continue
        j = partner(i)
        if j < 0:
            continue
        # unlink the later gate first so the earlier one's links stay consistent
        touched = unlink(j) + unlink(i)
        work.extend(t for t in touched if alive[t])
    return c.with_gates(g for i, g in enumerate(gates) if alive[i])


def cnot_cancellation(c: QCircuit) -> QCircuit:
    """Remove adjacent identical CX pairs until none remain."""
    return _cancel(c, frozenset({GateKind.CX}))


def gate_cancellation(c: QCircuit) -> QCircuit:
    """Remove adjacent identical CX pairs and adjacent H pairs until none remain."""
    return _cancel(c, _CANCELLABLE)


def is_fixed_point(c: QCircuit) -> bool:
    return len(gate_cancellation(c)) == len(c)

