import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcascade.layout import (Chain, CouplingMap, Layout, LayoutError, chain, check_for_isolated,
                             expand_chain, initial_layout, is_path)

ALMADEN_18 = (0, 1, 2, 3, 8, 9, 14, 13, 12, 7, 6, 5, 10, 11, 16, 17, 18, 19)


def test_line_chain():
    ch = chain(CouplingMap.line(5), 5)
    assert ch.order == (0, 1, 2, 3, 4)
    assert ch.isolated == frozenset()


def test_grid_chain():
    G = CouplingMap.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert chain(G, 4).order == (0, 1, 3, 2)
    assert CouplingMap.grid(2, 2).edges == G.edges


def test_almaden_chain_leaves_two_out():
    ch = chain(CouplingMap.builtin("almaden"), 18)
    assert ch.order == ALMADEN_18
    assert ch.isolated == {4, 15}
    assert is_path(CouplingMap.builtin("almaden"), ch.order)


def test_almaden_expansion_splices():
    ch = chain(CouplingMap.builtin("almaden"), 20)
    order = list(ch.order)
    assert order[order.index(3) + 1] == 4 and order[order.index(4) + 1] == 8
    assert order[order.index(16) + 1] == 15 and order[order.index(15) + 1] == 17
    assert ch.spliced == {4, 15}
    assert ch.walk == ALMADEN_18


def test_tokyo_chain_is_long():
    G = CouplingMap.builtin("tokyo")
    ch = chain(G, 14)
    assert len(ch.walk) >= 19
    assert is_path(G, ch.walk)


def test_star_needs_expansion():
    ch = chain(CouplingMap.star(5), 5)
    assert sorted(ch.order) == [0, 1, 2, 3, 4]
    assert ch.walk == (0, 1)


def test_too_many_qubits():
    with pytest.raises(LayoutError) as err:
        chain(CouplingMap.line(3), 4)
    assert err.value.achieved == 0


def test_check_for_isolated():
    G = CouplingMap.star(4)
    E, I = {0, 1, 2, 3}, set()
    assert not check_for_isolated(G, [0, 1], E, I)
    E, I = {0, 1}, set()
    assert check_for_isolated(G, [0, 1], E, I)
    assert I == {2, 3} and E == {0, 1, 2, 3}
    # nodes 0 and 1 only touch unexplored nodes when the pass reaches them
    L = CouplingMap.line(4)
    E, I = {3}, set()
    check_for_isolated(L, [3], E, I)
    assert I == {2}
    # isolation spreads along the pass in index order
    E, I = {0}, set()
    check_for_isolated(L, [0], E, I)
    assert I == {1, 2, 3}


def test_expand_chain():
    G = CouplingMap.star(4)
    C = [0, 1]
    assert expand_chain(G, C, set(), 2) == [0, 1]
    assert expand_chain(G, C, {2, 3}, 4) == [0, 3, 2, 1]
    L = CouplingMap.line(4)
    with pytest.raises(LayoutError):
        expand_chain(L, [0, 1], {3}, 3)


def test_initial_layout():
    ch = Chain((0, 1, 3, 2))
    assert initial_layout(ch, 3, 4).v2p == (0, 1, 3)
    assert initial_layout(Chain((0, 1)), 0).v2p == ()
    with pytest.raises(LayoutError):
        initial_layout(ch, 5)


def test_layout_invariants():
    L = Layout((2, 0, 1), 4)
    assert all(L.v2p[v] == p for p, v in L.p2v.items())
    with pytest.raises(ValueError):
        Layout((1, 1), 3)


def test_distance_matrix():
    assert CouplingMap.line(3).distance_matrix()[0, 2] == 2
    assert CouplingMap.grid(2, 2).distance_matrix()[1, 2] == 2
    with pytest.raises(ValueError):
        CouplingMap.from_edges(3, [(0, 1)]).distance_matrix()


@pytest.mark.parametrize("name", ["tokyo", "almaden"])
def test_bundled_maps(name):
    G = CouplingMap.builtin(name)
    assert G.n == 20 and G.is_connected()
    D = G.distance_matrix()
    ref = dict(nx.all_pairs_shortest_path_length(nx.Graph(list(G.edges))))
    assert all(D[u, v] == ref[u][v] for u in range(20) for v in range(20))
    for u, v in G.edges:
        assert D[u, v] == 1


def test_map_file_parsing(tmp_path):
    p = tmp_path / "line5.txt"
    p.write_text("5\n0 1\n1 2\n2 3\n3 4\n1 0\n")
    G = CouplingMap.load(p)
    assert len(G.edges) == 4
    again = CouplingMap.parse(G.to_text())
    assert (again.n, again.edges) == (G.n, G.edges)
    with pytest.raises(ValueError):
        CouplingMap.parse("3\n0 0\n")
    with pytest.raises(ValueError):
        CouplingMap.parse("3\n0 5\n")


@pytest.mark.parametrize("n", range(2, 51))
def test_chain_on_lines(n):
    assert chain(CouplingMap.line(n), n).order == tuple(range(n))


def random_connected(n: int, seed: int) -> CouplingMap:
    rng = random.Random(seed)
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    for _ in range(rng.randrange(n * 2)):
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    return CouplingMap.from_edges(n, edges)


@pytest.mark.parametrize("seed", range(100))
def test_random_graph_chain(seed):
    n = random.Random(seed).randrange(2, 31)
    G = random_connected(n, seed)
    m = random.Random(seed + 1).randrange(1, n + 1)
    try:
        ch = chain(G, m)
    except LayoutError:
        return
    assert is_path(G, ch.walk)
    assert len(ch.order) >= m
    assert len(set(ch.order)) == len(ch.order)
    assert not (set(ch.order) & ch.isolated)
    assert chain(G, m) == ch


@given(st.integers(1, 8), st.integers(1, 8))
def test_grid_chains_are_paths(r, c):
    G = CouplingMap.grid(r, c)
    ch = chain(G, 1)
    assert is_path(G, ch.walk)
    assert ch.visits <= 2 * G.n


def test_all_starts_never_shorter():
    for seed in range(20):
        G = random_connected(12, seed)
        assert len(chain(G, 1, try_all_starts=True).walk) >= len(chain(G, 1).walk)
