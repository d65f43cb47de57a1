"""RyRz hardware-efficient ansatz circuits with full entanglement."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Gate, QCircuit, cx, ry, rz


@dataclass(frozen=True)
class RyRzSpec:
    """Shape of an RyRz circuit.

    ``angles`` is flat, one rotation layer after another, each layer listing
    the RY angle then the RZ angle for every qubit in turn. When omitted,
    angles are drawn uniformly from ``[0, 2*pi)`` with ``seed``.
    """

    m: int
    blocks: int = 5
    angles: tuple[float, ...] | None = None
    seed: int = 0
    fan_in: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one qubit")
        if self.blocks < 0:
            raise ValueError("blocks must be nonnegative")
        if self.angles is not None and len(self.angles) != self.num_angles:
            raise ValueError(f"expected {self.num_angles} angles, got {len(self.angles)}")

    @property
    def num_angles(self) -> int:
        return 2 * self.m * (self.blocks + 1)

    def resolved_angles(self) -> tuple[float, ...]:
        if self.angles is not None:
            return tuple(self.angles)
        rng = np.random.default_rng(self.seed)
        return tuple(float(a) for a in rng.uniform(0.0, 2 * math.pi, self.num_angles))


def entangling_block(m: int, fan_in: bool = False) -> list[Gate]:
    """CX on every pair ``i < j``.

    Grouped as fan-outs by ascending control (``CX(i, i+1) ... CX(i, m-1)``),
    or with ``fan_in`` as fan-ins by ascending target (``CX(0, j) ... CX(j-1, j)``).
    """
    if fan_in:
        return [cx(i, j) for j in range(m) for i in range(j)]
    return [cx(i, j) for i in range(m) for j in range(i + 1, m)]


def gen_ryrz(spec: RyRzSpec) -> QCircuit:
    angles = iter(spec.resolved_angles())
    gates: list[Gate] = []

    def rotations():
        pairs = [(next(angles), next(angles)) for _ in range(spec.m)]
        gates.extend(ry(theta_y, q) for q, (theta_y, _) in enumerate(pairs))
        gates.extend(rz(theta_z, q) for q, (_, theta_z) in enumerate(pairs))

    rotations()
    for _ in range(spec.blocks):
        gates += entangling_block(spec.m, spec.fan_in)
        rotations()
    return QCircuit(spec.m, tuple(gates), f"ryrz_{spec.m}q_{spec.blocks}b")
