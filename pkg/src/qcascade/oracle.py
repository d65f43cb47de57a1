"""Dense simulation used to check rewrites and routing.

Basis convention (used everywhere in this package): qubit 0 is the least
significant bit of a computational-basis index.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .circuit import Gate, GateKind, QCircuit

UNITARY_MAX_QUBITS = 7
STATEVECTOR_MAX_QUBITS = 14

_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.T: np.diag([1, np.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
}
# two-qubit matrices indexed as [out_a, out_b, in_a, in_b] for operands (a, b)
_CX = np.zeros((2, 2, 2, 2), dtype=complex)
_SWAP = np.zeros((2, 2, 2, 2), dtype=complex)
for _a in (0, 1):
    for _b in (0, 1):
        _CX[_a, _b ^ _a, _a, _b] = 1
        _SWAP[_b, _a, _a, _b] = 1


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])


def gate_matrix(g: Gate) -> np.ndarray:
    """Matrix of a one-qubit gate, or the rank-4 tensor of a two-qubit gate."""
    k = g.kind
    if k in _FIXED:
        return _FIXED[k]
    if k is GateKind.RX:
        c, s = math.cos(g.params[0] / 2), math.sin(g.params[0] / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if k is GateKind.RY:
        c, s = math.cos(g.params[0] / 2), math.sin(g.params[0] / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if k is GateKind.RZ:
        t = g.params[0] / 2
        return np.diag([np.exp(-1j * t), np.exp(1j * t)])
    if k is GateKind.U1:
        return np.diag([1, np.exp(1j * g.params[0])])
    if k is GateKind.U2:
        return _u3(math.pi / 2, *g.params)
    if k is GateKind.U3:
        return _u3(*g.params)
    if k is GateKind.CX:
        return _CX
    if k is GateKind.SWAP:
        return _SWAP
    raise ValueError(f"no matrix for {g}")


def _apply(state: np.ndarray, g: Gate, m: int) -> np.ndarray:
    """Apply ``g`` to ``state`` of shape (2,)*m + batch; axis m-1-q is qubit q."""
    if g.kind is GateKind.BARRIER:
        return state
    if g.kind is GateKind.MEASURE:
        raise ValueError("cannot simulate a measurement as a unitary")
    mat = gate_matrix(g)
    axes = [m - 1 - q for q in g.qubits]
    if len(axes) == 1:
        out = np.tensordot(mat, state, axes=([1], axes))
        return np.moveaxis(out, 0, axes[0])
    out = np.tensordot(mat, state, axes=([2, 3], axes))
    return np.moveaxis(out, [0, 1], axes)


def _run(c: QCircuit, state: np.ndarray) -> np.ndarray:
    m = c.m
    batch = state.shape[1:]
    t = state.reshape((2,) * m + batch)
    for g in c.gates:
        t = _apply(t, g, m)
    return t.reshape((2 ** m,) + batch)


def unitary(c: QCircuit) -> np.ndarray:
    if c.m > UNITARY_MAX_QUBITS:
        raise ValueError(f"dense unitary limited to {UNITARY_MAX_QUBITS} qubits, got {c.m}")
    return _run(c, np.eye(2 ** c.m, dtype=complex))


def apply_circuit(c: QCircuit, state: np.ndarray) -> np.ndarray:
    """Apply ``c`` to a state vector (or a batch of column vectors)."""
    if c.m > STATEVECTOR_MAX_QUBITS:
        raise ValueError(f"state vectors limited to {STATEVECTOR_MAX_QUBITS} qubits, got {c.m}")
    return _run(c, np.asarray(state, dtype=complex))


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Unitary moving the content of qubit ``q`` onto qubit ``perm[q]``."""
    m = len(perm)
    if sorted(perm) != list(range(m)):
        raise ValueError(f"not a permutation: {perm}")
    dim = 2 ** m
    idx = np.arange(dim)
    dest = np.zeros(dim, dtype=np.int64)
    for q, p in enumerate(perm):
        dest |= ((idx >> q) & 1) << p
    out = np.zeros((dim, dim), dtype=complex)
    out[dest, idx] = 1
    return out


def _permute_state(state: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    m = len(perm)
    if sorted(perm) != list(range(m)):
        raise ValueError(f"not a permutation: {perm}")
    batch = state.shape[1:]
    t = state.reshape((2,) * m + batch)
    # content of qubit q (axis m-1-q) moves to qubit perm[q] (axis m-1-perm[q])
    src = [m - 1 - q for q in range(m)]
    dst = [m - 1 - perm[q] for q in range(m)]
    return np.moveaxis(t, src, dst).reshape((2 ** m,) + batch)


def _phase_aligned(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return ``b`` rotated by the global phase that matches ``a`` at its largest entry."""
    flat_a, flat_b = a.ravel(), b.ravel()
    k = int(np.argmax(np.abs(flat_a)))
    if abs(flat_b[k]) < 1e-12:
        return b
    phase = (flat_a[k] / abs(flat_a[k])) / (flat_b[k] / abs(flat_b[k]))
    return b * phase


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - _phase_aligned(a, b))) <= tol


def equivalent(a: QCircuit, b: QCircuit, perm: Sequence[int] | None = None,
               tol: float = 1e-10) -> bool:
    """True when ``P(perm) @ U(b)`` equals ``U(a)`` up to a global phase.

    Distance is the Frobenius norm after fixing the phase on the
    largest-magnitude entry of ``U(a)``.
    """
    if a.m != b.m:
        raise ValueError(f"qubit counts differ: {a.m} vs {b.m}")
    ub = unitary(b)
    if perm is not None:
        ub = permutation_matrix(perm) @ ub
    return equal_up_to_phase(unitary(a), ub, tol)


def random_product_states(m: int, trials: int, seed: int) -> np.ndarray:
    """``trials`` seeded random product states as columns of a (2**m, trials) array."""
    rng = np.random.default_rng(seed)
    cols = []
    for _ in range(trials):
        state = np.ones(1, dtype=complex)
        for _q in range(m):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            # qubit 0 least significant: later qubits are the outer factor
            state = np.kron(v, state)
        cols.append(state)
    return np.stack(cols, axis=1)


def statevector_check(a: QCircuit, b: QCircuit, perm: Sequence[int] | None = None,
                      trials: int = 4, seed: int = 0, tol: float = 1e-8) -> bool:
    """Compare ``a`` and ``perm``-relabelled ``b`` on seeded random product states."""
    if a.m != b.m:
        raise ValueError(f"qubit counts differ: {a.m} vs {b.m}")
    if a.m > STATEVECTOR_MAX_QUBITS:
        raise ValueError(f"state vectors limited to {STATEVECTOR_MAX_QUBITS} qubits, got {a.m}")
    inputs = random_product_states(a.m, trials, seed)
    out_a = apply_circuit(a, inputs)
    out_b = apply_circuit(b, inputs)
    if perm is not None:
        out_b = _permute_state(out_b, perm)
    return all(equal_up_to_phase(out_a[:, k], out_b[:, k], tol) for k in range(trials))


def equivalent_on_inputs(a: QCircuit, b: QCircuit, inputs: Sequence[int],
                         perm: Sequence[int] | None = None, tol: float = 1e-10) -> bool:
    """Exact comparison restricted to inputs where every qubit outside ``inputs`` is 0.

    Both circuits are applied to all ``2**len(inputs)`` such basis states and
    the resulting ``2**m x 2**len(inputs)`` blocks are compared up to one
    global phase. Used when routing pulls ancilla qubits into play and the
    full register exceeds the dense unitary cap.
    """
    if a.m != b.m:
        raise ValueError(f"qubit counts differ: {a.m} vs {b.m}")
    if len(inputs) > UNITARY_MAX_QUBITS:
        raise ValueError(f"at most {UNITARY_MAX_QUBITS} input qubits, got {len(inputs)}")
    k = len(inputs)
    cols = np.arange(2 ** k)
    rows = np.zeros(2 ** k, dtype=np.int64)
    for bit, q in enumerate(inputs):
        rows |= ((cols >> bit) & 1) << q
    basis = np.zeros((2 ** a.m, 2 ** k), dtype=complex)
    basis[rows, cols] = 1
    out_a = apply_circuit(a, basis)
    out_b = apply_circuit(b, basis)
    if perm is not None:
        out_b = _permute_state(out_b, perm)
    return equal_up_to_phase(out_a, out_b, tol)
