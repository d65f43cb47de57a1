import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qcascade.circuit import Gate, GateKind, QCircuit, cx
from qcascade.corpus import load_all

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ONE_QUBIT = [GateKind.H, GateKind.X, GateKind.S, GateKind.T, GateKind.Z]
ROTATIONS = [GateKind.RX, GateKind.RY, GateKind.RZ]


@st.composite
def circuits(draw, min_qubits=2, max_qubits=5, max_gates=30, cx_weight=0.6):
    """Random circuits biased towards CX so cascades and cancellations occur."""
    m = draw(st.integers(min_qubits, max_qubits))
    n = draw(st.integers(0, max_gates))
    gates = []
    for _ in range(n):
        r = draw(st.floats(0, 1))
        if r < cx_weight:
            a = draw(st.integers(0, m - 1))
            b = draw(st.integers(0, m - 2))
            gates.append(cx(a, b if b < a else b + 1))
        elif r < 0.9:
            gates.append(Gate(draw(st.sampled_from(ONE_QUBIT)), (draw(st.integers(0, m - 1)),)))
        else:
            theta = draw(st.floats(0, 2 * math.pi))
            gates.append(Gate(draw(st.sampled_from(ROTATIONS)),
                              (draw(st.integers(0, m - 1)),), (theta,)))
    return QCircuit(m, gates)


def random_circuit(m: int, n: int, seed: int, cx_weight: float = 0.6) -> QCircuit:
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(n):
        r = rng.random()
        if r < cx_weight:
            a, b = rng.choice(m, 2, replace=False)
            gates.append(cx(int(a), int(b)))
        elif r < 0.9:
            gates.append(Gate(ONE_QUBIT[rng.integers(len(ONE_QUBIT))], (int(rng.integers(m)),)))
        else:
            gates.append(Gate(ROTATIONS[rng.integers(3)], (int(rng.integers(m)),),
                              (float(rng.uniform(0, 2 * math.pi)),)))
    return QCircuit(m, gates, f"rand_{m}_{seed}")


@pytest.fixture(scope="session")
def corpus():
    return load_all()


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
