import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bipartite_graphs, digraphs
from gms.graphcore import (
    BipartiteGraph,
    Digraph,
    automorphisms,
    bipartite_canonical_form,
    canonical_form,
    cycle_to_matching_reduction,
    digraph_classes,
    all_digraphs,
    find_cycle_by_matching,
    find_cycle_by_squaring,
    graph_report,
    is_cycle_of,
    is_isomorphism,
    isomorphic,
    max_acyclic_subgraph_size,
    max_bd_mat_ord,
    max_bd_mat_size,
    max_cover_bounded_size,
    max_cycle_cover_vertices,
    max_ind_nsc_order,
    max_induced_acyclic_order,
    max_matching,
    max_nsc_size,
    max_walk_len,
    min_line_cover,
    scc,
    vertex_strong_connectivity,
)

# independent oracles


def reach(n, arcs):
    r = np.eye(n, dtype=bool)
    for i, j in arcs:
        r[i, j] = True
    for k in range(n):
        r |= r[:, [k]] & r[[k], :]
    return r


def scc_count(n, arcs):
    r = reach(n, arcs)
    return len({tuple(r[v] & r[:, v]) for v in range(n)})


def strongly_connected(n, arcs):
    return n <= 1 or bool(reach(n, arcs).all())


def walk_len(n, arcs):
    if n == 0:
        return 0
    a = np.zeros((n, n), dtype=np.int64)
    for i, j in arcs:
        a[i, j] = 1
    p = np.eye(n, dtype=np.int64)
    for k in range(1, n + 1):
        p = np.minimum(p @ a, 1)
        if not p.any():
            return k - 1
    return math.inf


def is_acyclic(n, arcs):
    return walk_len(n, arcs) != math.inf


def cover_vertices(n, arcs):
    best = 0
    for size in range(1, n + 1):
        for vs in itertools.combinations(range(n), size):
            for perm in itertools.permutations(vs):
                if all((v, w) in arcs for v, w in zip(vs, perm)):
                    best = size
                    break
    return best


def matching_brute(edges):
    edges = sorted(edges)
    for k in range(len(edges), 0, -1):
        for sub in itertools.combinations(edges, k):
            if len({i for i, _ in sub}) == k and len({j for _, j in sub}) == k:
                return k
    return 0


def line_cover_brute(m, n, edges):
    for k in range(m + n + 1):
        for rs in range(k + 1):
            for rows in itertools.combinations(range(m), rs):
                for cols in itertools.combinations(range(n), k - rs):
                    if all(i in rows or j in cols for i, j in edges):
                        return k


# examples


def test_matching_examples():
    k33 = BipartiteGraph(3, 3, itertools.product(range(3), range(3)))
    assert max_matching(k33)[0] == 3
    assert max_matching(BipartiteGraph(3, 3))[0] == 0
    assert max_matching(BipartiteGraph(2, 2, [(0, 0), (0, 1), (1, 1)]))[0] == 2


def test_line_cover_examples():
    assert min_line_cover(BipartiteGraph(3, 3, [(i, i) for i in range(3)]))[0] == 3
    assert min_line_cover(BipartiteGraph(3, 3, itertools.product(range(3), range(3))))[0] == 3
    assert min_line_cover(BipartiteGraph(3, 3, [(0, j) for j in range(3)]))[0] == 1


def test_scc_examples():
    assert scc(Digraph(3, [(0, 1), (1, 2), (2, 0)]))[1] == 1
    assert scc(Digraph(3, [(0, 1), (1, 2)]))[1] == 3
    assert scc(Digraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)]))[1] == 2


def test_walk_and_cover_examples():
    assert max_walk_len(Digraph(3, [(0, 1), (1, 2)])) == 2
    assert max_walk_len(Digraph(1, [(0, 0)])) == math.inf
    assert max_walk_len(Digraph(3, [(0, 1), (0, 2), (2, 1)])) == 2
    c3 = [(0, 1), (1, 2), (2, 0)]
    assert max_cycle_cover_vertices(Digraph(3, c3)) == 3
    assert max_cycle_cover_vertices(Digraph(3, [(0, 1), (1, 2)])) == 0
    assert max_cycle_cover_vertices(Digraph(4, c3)) == 3


def test_acyclic_examples():
    full = Digraph(3, itertools.product(range(3), range(3)))
    assert max_acyclic_subgraph_size(full) == 3
    assert max_acyclic_subgraph_size(Digraph(2, [(0, 1), (1, 0)])) == 1
    assert max_induced_acyclic_order(Digraph(3, [(i, i) for i in range(3)]))[0] == 0
    assert max_induced_acyclic_order(Digraph(3, [(0, 1), (1, 2), (2, 0)]))[0] == 2


def test_connectivity_examples():
    c4 = Digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert max_nsc_size(c4) == 3
    k3 = Digraph(3, [(i, j) for i in range(3) for j in range(3) if i != j])
    assert max_nsc_size(k3) == 4
    assert max_ind_nsc_order(k3) == 0
    assert max_ind_nsc_order(Digraph(3, [(0, 1), (1, 2), (2, 0)])) == 2
    assert vertex_strong_connectivity(k3) == 2
    assert vertex_strong_connectivity(Digraph(3, [(0, 1)])) == 0


def test_automorphism_examples():
    assert automorphisms(Digraph(4, [(i, (i + 1) % 4) for i in range(4)]))[2]
    _, orbits, transitive = automorphisms(Digraph(3, [(0, 1), (1, 2)]))
    assert not transitive and sorted(map(sorted, orbits)) == [[0], [1], [2]]
    assert automorphisms(Digraph(3, itertools.product(range(3), range(3))))[2]


def test_isomorphism_examples():
    g = Digraph(3, [(0, 1), (1, 2)])
    assert is_isomorphism(g, g, [0, 1, 2])
    assert isomorphic(Digraph(2, [(0, 1), (1, 0)]), Digraph(2, [(0, 1)])) is None


def test_cycle_finders_examples():
    assert is_cycle_of(Digraph(3, [(0, 1), (1, 2), (2, 0)]),
                       find_cycle_by_squaring(Digraph(3, [(0, 1), (1, 2), (2, 0)])))
    assert find_cycle_by_squaring(Digraph(3, [(0, 1), (1, 2)])) is None
    assert find_cycle_by_squaring(Digraph(1, [(0, 0)])) == [0]
    assert find_cycle_by_matching(Digraph(1, [(0, 0)])) == [0]


def test_reduction_family_on_dag_has_no_perfect_matching():
    g = Digraph(3, [(0, 1), (1, 2), (0, 2)])
    gadgets, _ = cycle_to_matching_reduction(g)
    assert all(max_matching(h.graph)[0] < h.graph.m for h in gadgets)


def test_class_counts():
    # OEIS A000595 (with loops) and A000273 (loopless)
    assert [len(digraph_classes(n, True)) for n in (1, 2, 3)] == [2, 10, 104]
    assert [len(digraph_classes(n, False)) for n in (1, 2, 3)] == [1, 3, 16]
    assert sum(c for _, c in digraph_classes(3, True)) == 512


def test_graph_report_examples():
    v, _ = graph_report(Digraph(3, [(0, 1), (1, 2), (2, 0)]))
    assert v["c_of_G"] == 1 and v["max_walk_len"] == math.inf and v["transitive"]
    v, _ = graph_report(Digraph(3, [(0, 1), (1, 2)]))
    assert v["c_of_G"] == 3 and v["max_walk_len"] == 2
    v, _ = graph_report(BipartiteGraph(2, 2, itertools.product(range(2), range(2))))
    assert v["matching_number"] == 2 and v["rho"] == 2


# properties against the oracles


@settings(max_examples=80, deadline=None)
@given(bipartite_graphs())
def test_matching_and_konig(g):
    size, matching = max_matching(g)
    assert size == matching_brute(g.edges) == len(matching)
    assert set(matching) <= g.edges
    assert min_line_cover(g)[0] == size == line_cover_brute(g.m, g.n, g.edges)


@settings(max_examples=80, deadline=None)
@given(digraphs(max_n=4))
def test_scc_walk_cover(g):
    assert scc(g)[1] == scc_count(g.n, g.arcs)
    assert max_walk_len(g) == walk_len(g.n, g.arcs)
    assert max_cycle_cover_vertices(g) == cover_vertices(g.n, g.arcs)


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=3))
def test_acyclic_and_nsc_by_subsets(g):
    arcs = sorted(g.arcs)
    subsets = [set(s) for k in range(len(arcs) + 1) for s in itertools.combinations(arcs, k)]
    assert max_acyclic_subgraph_size(g) == max(len(s) for s in subsets if is_acyclic(g.n, s))
    if g.n >= 2:
        assert max_nsc_size(g) == max(len(s) for s in subsets
                                      if not strongly_connected(g.n, s))
    order, witness = max_induced_acyclic_order(g)
    sub = g.induced(witness)
    assert len(witness) == order and is_acyclic(sub.n, sub.arcs)
    want = max((len(vs) for k in range(2, g.n + 1) for vs in itertools.combinations(range(g.n), k)
                if not strongly_connected(k, g.induced(vs).arcs)), default=0)
    assert max_ind_nsc_order(g) == want


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=4), st.randoms(use_true_random=False))
def test_relabeling_recovered(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    sigma = isomorphic(g, h)
    assert sigma is not None and is_isomorphism(g, h, sigma)
    assert canonical_form(g) == canonical_form(h)


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=4))
def test_transitivity_by_brute_force(g):
    autos = [p for p in itertools.permutations(range(g.n)) if is_isomorphism(g, g, list(p))]
    orbit0 = {p[0] for p in autos}
    assert automorphisms(g)[2] == (len(orbit0) == g.n)


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=4))
def test_cycle_finders_agree(g):
    cyclic = walk_len(g.n, g.arcs) == math.inf
    for finder in (find_cycle_by_squaring, find_cycle_by_matching):
        c = finder(g)
        assert (c is not None) == cyclic
        if c is not None:
            assert is_cycle_of(g, c)


@settings(max_examples=30, deadline=None)
@given(bipartite_graphs(2, 3), st.integers(0, 2))
def test_bounded_matching_size_and_order(g, r):
    edges = sorted(g.edges)
    best = max(k for k in range(len(edges) + 1) for s in itertools.combinations(edges, k)
               if matching_brute(s) <= r)
    assert max_bd_mat_size(g, r)[0] == best
    order, (v1, v2) = max_bd_mat_ord(g, r)
    assert matching_brute([e for e in edges if e[0] in v1 and e[1] in v2]) <= r
    assert len(v1) + len(v2) == order


def test_bipartite_canonical_form_is_invariant():
    g = BipartiteGraph(2, 3, [(0, 0), (1, 2)])
    h = BipartiteGraph(2, 3, [(1, 1), (0, 0)])
    assert bipartite_canonical_form(g) == bipartite_canonical_form(h)


def test_cover_bounded_extremes():
    g = Digraph(2, itertools.product(range(2), range(2)))
    assert max_cover_bounded_size(g, 2) == 4
    assert max_cover_bounded_size(g, 0) == max_acyclic_subgraph_size(g)


def test_bad_graphs_rejected():
    with pytest.raises(ValueError):
        Digraph(2, [(0, 2)])
