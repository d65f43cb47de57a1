"""CNOT-cascade detection and nearest-neighbour rewriting.

A *cascade* is a run of CX gates sharing one target (fan-in). An *inverted*
cascade shares one control (fan-out); conjugating every CX by Hadamards on
both operands turns it into a fan-in cascade. Each detected cascade is
replaced by a parity sweep whose CX gates only join consecutive qubits of the
cascade's own sorted qubit list.
"""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from typing import Sequence

from .circuit import Gate, LayeredView, QCircuit, cx, h, layers, wires


class Direction(enum.Enum):
    PLAIN = "plain"
    INVERTED = "inverted"


@dataclass(frozen=True)
class CascadeMatch:
    """A detected cascade, always described in fan-in form.

    For an inverted match ``target`` is the shared CX *control* of the
    original gates and ``ctrls`` are their targets.
    """

    target: int
    ctrls: tuple[int, ...]
    skip: frozenset[int]
    before: tuple[int, ...] = ()
    after: tuple[int, ...] = ()
    last: int = 0
    inverted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ctrls", tuple(sorted(self.ctrls)))
        object.__setattr__(self, "skip", frozenset(self.skip))
        if len(set(self.ctrls)) != len(self.ctrls):
            raise ValueError(f"repeated control in {self.ctrls}")
        if self.target in self.ctrls:
            raise ValueError(f"target {self.target} also listed as control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(sorted((*self.ctrls, self.target)))

    @property
    def size(self) -> int:
        return len(self.skip)


class _Index:
    """Per-circuit lookup tables shared by all cascade scans."""

    def __init__(self, c: QCircuit, lv: LayeredView | None = None):
        self.c = c
        self.lv = lv if lv is not None else layers(c)
        self.wires = wires(c)
        self.pos: list[dict[int, int]] = [dict() for _ in c.gates]
        for q, w in enumerate(self.wires):
            for k, i in enumerate(w):
                self.pos[i][q] = k


def _scan(ix: _Index, start: int, direction: Direction,
          consumed: Sequence[bool] | None) -> CascadeMatch | None:
    gates = ix.c.gates
    g0 = gates[start]
    if not g0.is_cx:
        raise ValueError(f"cascade anchor must be a CX, got {g0}")
    plain = direction is Direction.PLAIN
    anchor = g0.target if plain else g0.control

    def partner(g: Gate) -> int | None:
        if not g.is_cx:
            return None
        if plain:
            return g.control if g.target == anchor else None
        return g.target if g.control == anchor else None

    wire = ix.wires[anchor]
    k = ix.pos[start][anchor]
    first = ix.lv.layer_of[start]
    stop = min(first + 2 * ix.c.m, ix.lv.l)

    partners = [partner(g0)]
    skip = [start]
    used = {anchor, partners[0]}
    # qubits whose latest scanned gate depends on a consumed gate
    hot = {partners[0]}
    before: list[int] = []
    after: list[int] = []
    last = first
    running = True
    for layer in range(first, stop):
        for i in ix.lv.layers[layer]:
            if i == start:
                continue
            g = gates[i]
            if k + 1 < len(wire) and i == wire[k + 1]:
                p = partner(g)
                taken = consumed is not None and consumed[i]
                if p is None or taken or p in used or p in hot:
                    running = False
                    break
                partners.append(p)
                skip.append(i)
                used.add(p)
                hot.add(p)
                last = layer
                k += 1
            elif any(q in hot for q in g.qubits):
                hot.update(g.qubits)
                after.append(i)
            else:
                before.append(i)
        if not running:
            break

    if len(partners) < 2:
        return None
    # window gates scanned past the last consumed gate are not part of the match
    before = [i for i in before if ix.lv.layer_of[i] <= last]
    after = [i for i in after if ix.lv.layer_of[i] <= last]
    return CascadeMatch(anchor, tuple(partners), frozenset(skip), tuple(before),
                        tuple(after), last, inverted=not plain)


def check_cascade(c: QCircuit, start: int, direction: Direction = Direction.PLAIN, *,
                  lv: LayeredView | None = None,
                  consumed: Sequence[bool] | None = None) -> CascadeMatch | None:
    """Try to grow a cascade from the CX at gate index ``start``.

    The run follows the shared qubit's wire forward for at most ``2 * m``
    layers. It stops at the first gate on that wire that is not a CX in the
    right orientation, re-uses a collected qubit, or whose other operand
    already depends on a collected gate (an *off-limits* qubit). Returns
    ``None`` unless at least two CX gates were collected.
    """
    return _scan(_Index(c, lv), start, direction, consumed)


def nn_decompose(match: CascadeMatch) -> list[Gate]:
    """Parity-sweep realisation of the fan-in cascade ``prod_i CX(ctrl_i, target)``.

    Controls on each side of the target are chained towards it: the sweep
    accumulates their parity into the control adjacent to the target, one CX
    feeds the target, and the sweep is undone. With the target at either end
    of the sorted qubit list this uses ``2k - 1`` CX gates; a target with
    controls on both sides needs ``2k - 2``.
    """
    if len(match.ctrls) < 2:
        raise ValueError("a cascade needs at least two controls")
    t = match.target
    below = [q for q in match.ctrls if q < t]
    above = [q for q in reversed(match.ctrls) if q > t]
    down: list[Gate] = []
    feed: list[Gate] = []
    for side in (below, above):
        down += [cx(a, b) for a, b in zip(side, side[1:])]
        if side:
            feed.append(cx(side[-1], t))
    return down + feed + down[::-1]


def invert_cx(g: Gate) -> list[Gate]:
    """``CX(a, b)`` as ``H(a) H(b) CX(b, a) H(a) H(b)``."""
    a, b = g.qubits
    return [h(a), h(b), cx(b, a), h(a), h(b)]


def cascade_replacement(match: CascadeMatch) -> list[Gate]:
    """Gates that replace the consumed CX gates of ``match``."""
    if not match.inverted:
        return nn_decompose(match)
    if len(match.ctrls) == 1:
        return invert_cx(cx(match.target, match.ctrls[0]))
    hs = [h(q) for q in match.qubits]
    return hs + nn_decompose(match) + hs


def _rebuild(c: QCircuit, matches: list[CascadeMatch]) -> tuple[QCircuit, list[CascadeMatch]]:
    """Contract each match into one node and re-emit in dependency order.

    Returns the new circuit and the matches actually applied; a match that
    would close a dependency cycle with another is dropped.
    """
    n = len(c.gates)
    active = list(matches)
    wire_lists = wires(c)
    while True:
        node = list(range(n))
        for j, mt in enumerate(active):
            for i in mt.skip:
                node[i] = n + j
        total = n + len(active)
        indeg = [0] * total
        succ: list[list[int]] = [[] for _ in range(total)]
        for w in wire_lists:
            for a, b in zip(w, w[1:]):
                u, v = node[a], node[b]
                if u != v:
                    succ[u].append(v)
                    indeg[v] += 1
        key = list(range(n)) + [min(mt.skip) for mt in active]
        live = [i for i in range(n) if node[i] == i] + [n + j for j in range(len(active))]
        heap = [(key[u], u) for u in live if indeg[u] == 0]
        heapq.heapify(heap)
        out: list[Gate] = []
        emitted = 0
        while heap:
            _, u = heapq.heappop(heap)
            emitted += 1
            if u < n:
                out.append(c.gates[u])
            else:
                out += cascade_replacement(active[u - n])
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(heap, (key[v], v))
        if emitted == len(live):
            return c.with_gates(out), active
        stuck = [j for j in range(len(active)) if indeg[n + j] > 0]
        active.pop(max(stuck, key=lambda j: key[n + j]))


def invert_cascade_region(c: QCircuit, match: CascadeMatch) -> QCircuit:
    """Replace an inverted (fan-out) cascade by its Hadamard-conjugated fan-in sweep."""
    if not match.skip:
        return c
    if not match.inverted:
        raise ValueError("match is not an inverted cascade")
    return _rebuild(c, [match])[0]


def find_cascades(c: QCircuit) -> list[CascadeMatch]:
    """All cascades chosen by a layer-by-layer scan, in discovery order.

    At every unconsumed CX both orientations are tried; the one consuming
    more gates wins and ties go to the plain cascade.
    """
    ix = _Index(c)
    consumed = [False] * len(c.gates)
    found: list[CascadeMatch] = []
    for layer in ix.lv.layers:
        for i in layer:
            if consumed[i] or not c.gates[i].is_cx:
                continue
            best = None
            for direction in (Direction.PLAIN, Direction.INVERTED):
                mt = _scan(ix, i, direction, consumed)
                if mt is not None and (best is None or mt.size > best.size):
                    best = mt
            if best is not None:
                for s in best.skip:
                    consumed[s] = True
                found.append(best)
    return found


def patterns(c: QCircuit) -> QCircuit:
    """Rewrite every detected cascade into its nearest-neighbour sweep."""
    found = find_cascades(c)
    if not found:
        return c
    return _rebuild(c, found)[0]
