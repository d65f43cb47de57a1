import pytest
from hypothesis import given

from qcascade.cancellation import gate_cancellation
from qcascade.circuit import Gate, GateKind, QCircuit, cx, h, rz
from qcascade.oracle import equivalent
from qcascade.patterns import (CascadeMatch, Direction, cascade_replacement, check_cascade,
                               find_cascades, invert_cascade_region, nn_decompose, patterns)

from conftest import circuits


def fan_in(ctrls, t, m):
    return QCircuit(m, [cx(q, t) for q in ctrls])


def test_no_cx_passthrough():
    c = QCircuit(2, [h(0), rz(0.2, 1)])
    assert patterns(c) == c


def test_single_cx_unchanged():
    c = QCircuit(2, [cx(0, 1)])
    assert patterns(c) == c


def test_fan_in_three_controls():
    c = fan_in([0, 1, 2], 3, 4)
    out = patterns(c)
    assert list(out.gates) == [cx(0, 1), cx(1, 2), cx(2, 3), cx(1, 2), cx(0, 1)]
    assert equivalent(c, out)


def test_reversed_sweep_is_a_different_map():
    # sweeping away from the target leaves parity on q1 and q2
    wrong = QCircuit(4, [cx(2, 3), cx(1, 2), cx(0, 1), cx(1, 2), cx(2, 3)])
    assert not equivalent(fan_in([0, 1, 2], 3, 4), wrong)


def test_check_cascade_collects_shared_target():
    c = QCircuit(3, [cx(0, 2), cx(1, 2)])
    mt = check_cascade(c, 0)
    assert (mt.target, mt.ctrls, mt.skip) == (2, (0, 1), frozenset({0, 1}))


def test_check_cascade_stops_when_target_becomes_control():
    assert check_cascade(QCircuit(3, [cx(0, 2), cx(2, 1)]), 0) is None


def test_check_cascade_single_qubit_gate_goes_before():
    c = QCircuit(3, [cx(0, 2), h(1), cx(1, 2)])
    mt = check_cascade(c, 0)
    assert mt.ctrls == (0, 1)
    assert mt.before == (1,)
    assert mt.after == ()


def test_check_cascade_off_limits_qubit():
    # qubit 0 depends on the first collected CX, so CX(0,2) may not join
    c = QCircuit(4, [cx(1, 2), h(1), cx(1, 0), cx(3, 2), cx(0, 2)])
    mt = check_cascade(c, 0)
    assert mt.ctrls == (1, 3)
    assert 4 not in mt.skip


def test_check_cascade_inverted():
    c = QCircuit(4, [cx(0, 1), cx(0, 2), cx(0, 3)])
    assert check_cascade(c, 0) is None
    mt = check_cascade(c, 0, Direction.INVERTED)
    assert (mt.target, mt.ctrls, mt.inverted) == (0, (1, 2, 3), True)


def test_check_cascade_window():
    # the third CX sits beyond 2m layers from the anchor
    m = 3
    gates = [cx(0, 2)] + [h(1)] * (2 * m) + [cx(1, 2)]
    assert check_cascade(QCircuit(m, gates), 0) is None


def test_check_cascade_requires_cx_anchor():
    with pytest.raises(ValueError):
        check_cascade(QCircuit(1, [h(0)]), 0)


def test_barrier_blocks_cascade():
    c = QCircuit(3, [cx(0, 2), Gate(GateKind.BARRIER, (0, 1, 2)), cx(1, 2)])
    assert patterns(c) == c


def test_opaque_gate_is_not_matched():
    op = Gate(GateKind.OPAQUE2Q, (0, 2), label="cz")
    c = QCircuit(3, [op, cx(1, 2)])
    assert patterns(c) == c


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_nn_decompose_end_target(k):
    # k CX gates: k-1 controls below the target plus the reverse orientation
    for ctrls, t in ((list(range(k)), k), (list(range(1, k + 1)), 0)):
        mt = CascadeMatch(t, tuple(ctrls), frozenset())
        seq = nn_decompose(mt)
        assert len(seq) == 2 * len(ctrls) - 1
        assert equivalent(fan_in(ctrls, t, k + 1), QCircuit(k + 1, seq))
        order = mt.qubits
        for g in seq:
            assert abs(order.index(g.qubits[0]) - order.index(g.qubits[1])) == 1


def test_nn_decompose_examples():
    assert nn_decompose(CascadeMatch(2, (0, 1), frozenset())) == [cx(0, 1), cx(1, 2), cx(0, 1)]
    with pytest.raises(ValueError):
        nn_decompose(CascadeMatch(1, (0,), frozenset()))


@pytest.mark.parametrize("ctrls, t", [((0, 2), 1), ((0, 1, 3, 4), 2), ((0, 3, 4), 1)])
def test_nn_decompose_middle_target(ctrls, t):
    mt = CascadeMatch(t, ctrls, frozenset())
    seq = nn_decompose(mt)
    assert len(seq) == 2 * len(ctrls) - 2
    m = max(ctrls + (t,)) + 1
    assert equivalent(fan_in(ctrls, t, m), QCircuit(m, seq))


def test_nn_decompose_sparse_qubits():
    mt = CascadeMatch(5, (0, 3), frozenset())
    assert nn_decompose(mt) == [cx(0, 3), cx(3, 5), cx(0, 3)]
    assert equivalent(fan_in([0, 3], 5, 6), QCircuit(6, nn_decompose(mt)))


def test_invert_single_cx_region():
    c = QCircuit(2, [cx(0, 1)])
    mt = CascadeMatch(0, (1,), frozenset({0}), inverted=True)
    out = invert_cascade_region(c, mt)
    assert list(out.gates) == [h(0), h(1), cx(1, 0), h(0), h(1)]
    assert equivalent(c, out)


def test_invert_empty_region():
    c = QCircuit(2, [cx(0, 1)])
    assert invert_cascade_region(c, CascadeMatch(0, (1,), frozenset(), inverted=True)) == c


def test_fan_out_becomes_nn():
    c = QCircuit(4, [cx(0, 1), cx(0, 2), cx(0, 3)])
    mt = check_cascade(c, 0, Direction.INVERTED)
    inverted = invert_cascade_region(c, mt)
    assert equivalent(c, inverted)
    out = gate_cancellation(inverted)
    cxs = [g for g in out.gates if g.is_cx]
    assert len(cxs) == 5
    assert all(abs(g.control - g.target) == 1 for g in cxs)
    assert equivalent(c, out)
    assert gate_cancellation(patterns(c)) == out


def test_cascade_replacement_inverted_has_hadamard_frame():
    mt = CascadeMatch(0, (1, 2), frozenset({0, 1}), inverted=True)
    seq = cascade_replacement(mt)
    assert seq[:3] == [h(0), h(1), h(2)] and seq[-3:] == [h(0), h(1), h(2)]


def test_ties_prefer_plain():
    # CX(0,1) then CX(2,1) and CX(0,3): both directions collect two gates
    c = QCircuit(4, [cx(0, 1), cx(2, 1), cx(0, 3)])
    found = find_cascades(c)
    assert not found[0].inverted


def test_match_invariants():
    with pytest.raises(ValueError):
        CascadeMatch(1, (1, 2), frozenset())
    with pytest.raises(ValueError):
        CascadeMatch(0, (1, 1), frozenset())
    assert CascadeMatch(0, (3, 1), frozenset()).ctrls == (1, 3)


def test_consecutive_cascades_shrink_after_cancellation():
    c = QCircuit(4, [cx(i, j) for j in range(4) for i in range(j)])
    out = gate_cancellation(patterns(c))
    assert sum(g.is_cx for g in out.gates) < 6
    assert equivalent(c, out)


@given(circuits(max_qubits=5, max_gates=30, cx_weight=0.75))
def test_patterns_preserves_unitary(c):
    out = patterns(c)
    assert equivalent(c, out)
    assert patterns(c) == out


@given(circuits(max_qubits=5, max_gates=30, cx_weight=0.75))
def test_replacement_gate_counts(c):
    found = find_cascades(c)
    out = patterns(c)
    consumed = sum(mt.size for mt in found)
    added = sum(len([g for g in cascade_replacement(mt) if g.is_cx]) for mt in found)
    assert sum(g.is_cx for g in out.gates) <= sum(g.is_cx for g in c.gates) - consumed + added
    for mt in found:
        assert len(mt.ctrls) >= 2
        assert mt.target not in mt.ctrls
        k = len(mt.ctrls)
        end = mt.target in (mt.qubits[0], mt.qubits[-1])
        n_cx = sum(g.is_cx for g in nn_decompose(mt))
        assert n_cx == (2 * k - 1 if end else 2 * k - 2)


@given(circuits(max_qubits=5, max_gates=30, cx_weight=0.75))
def test_skip_sets_are_disjoint(c):
    seen = set()
    for mt in find_cascades(c):
        assert not (seen & mt.skip)
        seen |= mt.skip
