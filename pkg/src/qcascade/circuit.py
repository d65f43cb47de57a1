"""Circuit data model: gates, circuits, ASAP layering and CNOT metrics."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GateKind(enum.Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    U1 = "u1"
    U2 = "u2"
    U3 = "u3"
    CX = "cx"
    SWAP = "swap"
    BARRIER = "barrier"
    MEASURE = "measure"
    OPAQUE1Q = "opaque1q"
    OPAQUE2Q = "opaque2q"

    @property
    def num_params(self) -> int | None:
        """Required parameter count, or None when any count is allowed."""
        if self in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.U1):
            return 1
        if self is GateKind.U2:
            return 2
        if self is GateKind.U3:
            return 3
        if self in (GateKind.OPAQUE1Q, GateKind.OPAQUE2Q):
            return None
        return 0

    @property
    def num_qubits(self) -> int | None:
        """Required operand count, or None for barriers (any width)."""
        if self is GateKind.BARRIER:
            return None
        if self in (GateKind.CX, GateKind.SWAP, GateKind.OPAQUE2Q):
            return 2
        return 1

    @property
    def is_directive(self) -> bool:
        return self in (GateKind.BARRIER, GateKind.MEASURE)


@dataclass(frozen=True)
class Gate:
    """One instruction. For CX the operands are ``(control, target)``."""

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    label: str | None = None
    clbit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        width = self.kind.num_qubits
        if width is not None and len(self.qubits) != width:
            raise ValueError(f"{self.kind.value} takes {width} qubit(s), got {self.qubits}")
        if not self.qubits:
            raise ValueError(f"{self.kind.value} needs at least one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit operand in {self.kind.value}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        arity = self.kind.num_params
        if arity is not None and len(self.params) != arity:
            raise ValueError(f"{self.kind.value} takes {arity} parameter(s), got {len(self.params)}")
        if self.kind is GateKind.MEASURE and self.clbit is None:
            raise ValueError("measure needs a classical bit")

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[-1]

    @property
    def is_cx(self) -> bool:
        return self.kind is GateKind.CX

    @property
    def is_two_qubit(self) -> bool:
        return self.kind.num_qubits == 2

    def remap(self, mapping: Sequence[int]) -> Gate:
        """Return the same gate acting on ``mapping[q]`` for each operand ``q``."""
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.params,
                    self.label, self.clbit)

    def __str__(self) -> str:
        name = self.label if self.label is not None else self.kind.value
        args = f"({', '.join(f'{p:g}' for p in self.params)})" if self.params else ""
        return f"{name}{args} {','.join(map(str, self.qubits))}"


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def rx(theta: float, q: int) -> Gate:
    return Gate(GateKind.RX, (q,), (theta,))


def ry(theta: float, q: int) -> Gate:
    return Gate(GateKind.RY, (q,), (theta,))


def rz(theta: float, q: int) -> Gate:
    return Gate(GateKind.RZ, (q,), (theta,))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CX, (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


@dataclass(frozen=True)
class QCircuit:
    """Ordered gate list over ``m`` virtual qubits.

    Passes never mutate a circuit; they build a new one.
    """

    m: int
    gates: tuple[Gate, ...] = ()
    name: str = ""
    clbits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.m < 0:
            raise ValueError("qubit count must be nonnegative")
        for g in self.gates:
            if max(g.qubits) >= self.m:
                raise ValueError(f"gate {g} out of range for {self.m} qubit(s)")
            if g.clbit is not None and not 0 <= g.clbit < self.clbits:
                raise ValueError(f"classical bit {g.clbit} out of range for {self.clbits} bit(s)")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> QCircuit:
        return QCircuit(self.m, tuple(gates), self.name, self.clbits)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    def expand_swaps(self) -> QCircuit:
        """Replace every SWAP by its three-CX realisation."""
        out: list[Gate] = []
        for g in self.gates:
            if g.kind is GateKind.SWAP:
                a, b = g.qubits
                out += [cx(a, b), cx(b, a), cx(a, b)]
            else:
                out.append(g)
        return self.with_gates(out)


@dataclass(frozen=True)
class LayeredView:
    """ASAP layering of a circuit: ``layers[k]`` holds gate indices in index order."""

    layers: tuple[tuple[int, ...], ...]
    layer_of: tuple[int, ...] = field(repr=False)

    @property
    def l(self) -> int:
        return len(self.layers)


def wires(c: QCircuit) -> list[list[int]]:
    """Per-qubit gate index lists, in circuit order."""
    out: list[list[int]] = [[] for _ in range(c.m)]
    for i, g in enumerate(c.gates):
        for q in g.qubits:
            out[q].append(i)
    return out


def layers(c: QCircuit) -> LayeredView:
    """Greedy as-soon-as-possible layering.

    Every gate goes one layer after the latest gate sharing a qubit with it,
    so barriers and measurements block all of their operands.
    """
    frontier = [-1] * c.m
    layer_of: list[int] = []
    buckets: list[list[int]] = []
    for i, g in enumerate(c.gates):
        k = 1 + max(frontier[q] for q in g.qubits)
        for q in g.qubits:
            frontier[q] = k
        layer_of.append(k)
        if k == len(buckets):
            buckets.append([])
        buckets[k].append(i)
    return LayeredView(tuple(tuple(b) for b in buckets), tuple(layer_of))


@dataclass(frozen=True)
class Metrics:
    cnot_count: int
    cnot_depth: int
    total_gates: int
    total_depth: int


def metrics(c: QCircuit) -> Metrics:
    """CNOT count and CNOT depth, SWAPs counted as three CX.

    CNOT depth is the ASAP depth of the circuit once every non-CX gate is
    dropped, i.e. the longest chain of CX gates linked through shared qubits.
    ``total_depth`` counts layers holding at least one gate that is not a
    barrier or a measurement.
    """
    flat = c.expand_swaps()
    only_cx = flat.with_gates(g for g in flat.gates if g.kind is GateKind.CX)
    lv = layers(flat)
    busy_layers = sum(
        1 for layer in lv.layers if any(not flat.gates[i].kind.is_directive for i in layer))
    total = sum(1 for g in flat.gates if not g.kind.is_directive)
    return Metrics(len(only_cx), layers(only_cx).l, total, busy_layers)
