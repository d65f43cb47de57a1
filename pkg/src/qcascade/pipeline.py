"""End-to-end compilation: patterns, cancellation, chain layout and routing."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

from .cancellation import gate_cancellation
from .circuit import Metrics, QCircuit, metrics
from .layout import CouplingMap, Layout, chain, initial_layout
from .oracle import (STATEVECTOR_MAX_QUBITS, UNITARY_MAX_QUBITS, equivalent, equivalent_on_inputs,
                     statevector_check)
from .patterns import patterns
from .routing import RoutedCircuit, compress, route

PASS_ORDER = ("patterns", "cancel", "layout", "route")


class VerifyMode(enum.Enum):
    OFF = "off"
    UNITARY = "unitary"
    STATEVECTOR = "statevector"


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    coupling_map_path: str | None = None
    passes: tuple[str, ...] = PASS_ORDER
    verify_mode: VerifyMode = VerifyMode.OFF
    report_format: str = "text"
    seed: int = 0
    try_all_starts: bool = False

    def __post_init__(self):
        unknown = set(self.passes) - set(PASS_ORDER)
        if unknown:
            raise ValueError(f"unknown pass(es): {', '.join(sorted(unknown))}")
        # passes always run in pipeline order
        object.__setattr__(self, "passes", tuple(p for p in PASS_ORDER if p in self.passes))
        if "route" in self.passes and "layout" not in self.passes:
            raise ValueError("route requires layout")
        if self.report_format not in ("text", "csv"):
            raise ValueError(f"unknown report format {self.report_format!r}")


@dataclass
class CompileResult:
    original: QCircuit
    optimized: QCircuit
    output: QCircuit
    before: Metrics
    after: Metrics
    layout: Layout | None = None
    routed: RoutedCircuit | None = None
    seconds: float = 0.0
    verified: bool | None = None
    stages: dict[str, QCircuit] = field(default_factory=dict)

    @property
    def swaps(self) -> int:
        return self.routed.swap_count if self.routed is not None else 0

    def csv_row(self) -> list[str]:
        return [self.original.name, str(self.original.m), str(self.before.cnot_count),
                str(self.after.cnot_count), str(self.before.cnot_depth),
                str(self.after.cnot_depth), str(self.swaps), f"{self.seconds * 1000:.1f}"]

    def text_report(self) -> str:
        lines = [
            f"circuit      {self.original.name or '-'} ({self.original.m} qubits)",
            f"cnot_count   {self.before.cnot_count} -> {self.after.cnot_count}",
            f"cnot_depth   {self.before.cnot_depth} -> {self.after.cnot_depth}",
            f"swaps        {self.swaps}",
            f"time_ms      {self.seconds * 1000:.1f}",
        ]
        if self.layout is not None:
            lines.append(f"layout       {' '.join(map(str, self.layout.v2p))}")
        if self.verified is not None:
            lines.append(f"verified     {'yes' if self.verified else 'NO'}")
        return "\n".join(lines)


CSV_HEADER = ["name", "m", "cnot_in", "cnot_out", "depth_in", "depth_out", "swaps", "ms"]


def verify(original: QCircuit, result: CompileResult, mode: VerifyMode, seed: int = 0) -> bool:
    """Check the compiled output against the input with the dense oracle."""
    if result.routed is not None:
        pair = compress(result.routed, original)
        a, b, perm, inputs = pair.routed, pair.original, pair.perm, pair.inputs
    else:
        a, b, perm, inputs = result.output, original, None, tuple(range(original.m))
    if mode is VerifyMode.UNITARY:
        if original.m > UNITARY_MAX_QUBITS:
            raise VerificationError(f"unitary check limited to {UNITARY_MAX_QUBITS} qubits, "
                                    f"circuit has {original.m}")
        if a.m <= UNITARY_MAX_QUBITS:
            return equivalent(a, b, perm)
        if a.m > STATEVECTOR_MAX_QUBITS:
            raise VerificationError(f"compiled circuit touches {a.m} qubits, more than "
                                    f"{STATEVECTOR_MAX_QUBITS}")
        # ancillas joined through swaps start in |0>
        return equivalent_on_inputs(a, b, inputs, perm)
    if a.m > STATEVECTOR_MAX_QUBITS:
        raise VerificationError(f"statevector check limited to {STATEVECTOR_MAX_QUBITS} "
                                f"qubits, compiled circuit touches {a.m}")
    return statevector_check(a, b, perm, trials=4, seed=seed)


def compile_circuit(c: QCircuit, G: CouplingMap | None, cfg: PipelineConfig = PipelineConfig()
                    ) -> CompileResult:
    """Run the configured passes; raises ``LayoutError`` when no chain fits."""
    start = time.perf_counter()
    stages: dict[str, QCircuit] = {}
    cur = c
    if "patterns" in cfg.passes:
        cur = stages["patterns"] = patterns(cur)
    if "cancel" in cfg.passes:
        cur = stages["cancel"] = gate_cancellation(cur)
    optimized = cur
    L = routed = None
    if "layout" in cfg.passes:
        if G is None:
            raise ValueError("layout needs a coupling map")
        L = initial_layout(chain(G, c.m, try_all_starts=cfg.try_all_starts), c.m, G.n)
    if "route" in cfg.passes:
        routed = route(optimized, L, G)
        cur = routed.circuit
    elapsed = time.perf_counter() - start
    result = CompileResult(c, optimized, cur, metrics(c), metrics(cur), L, routed,
                           elapsed, stages=stages)
    if cfg.verify_mode is not VerifyMode.OFF:
        result.verified = verify(c, result, cfg.verify_mode, cfg.seed)
    return result
