"""Pattern-driven CNOT compilation for chain-like quantum devices."""
from .ansatz import RyRzSpec, gen_ryrz
from .cancellation import cnot_cancellation, gate_cancellation
from .circuit import Gate, GateKind, Metrics, QCircuit, layers, metrics
from .layout import Chain, CouplingMap, Layout, LayoutError, chain, initial_layout
from .oracle import equivalent, statevector_check, unitary
from .patterns import CascadeMatch, check_cascade, find_cascades, nn_decompose, patterns
from .pipeline import PipelineConfig, VerifyMode, compile_circuit
from .qasm import QasmError, emit_qasm, parse_qasm
from .routing import RoutedCircuit, route

__all__ = [
    "CascadeMatch", "Chain", "CouplingMap", "Gate", "GateKind", "Layout", "LayoutError",
    "Metrics", "PipelineConfig", "QCircuit", "QasmError", "RoutedCircuit", "RyRzSpec",
    "VerifyMode", "chain", "check_cascade", "cnot_cancellation", "compile_circuit",
    "emit_qasm", "equivalent", "find_cascades", "gate_cancellation", "gen_ryrz",
    "initial_layout", "layers", "metrics", "nn_decompose", "parse_qasm", "patterns", "route",
    "statevector_check", "unitary",
]
