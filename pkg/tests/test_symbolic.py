import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bipartite_graphs, digraphs
from gms.exactmath import Matrix, det
from gms.fields import GF, QQ
from gms.graphcore import BipartiteGraph, Digraph, max_matching, max_walk_len
from gms.matspace import MatrixSpace, graphical_space
from gms.symbolic import (
    FieldTooSmall,
    NonHomogeneousPencil,
    SymbolicMatrix,
    abp_nodes,
    abp_product_entry,
    det_abp,
    evaluate,
    graph_pencil,
    nilindex_at_most,
    pencil_det_poly,
    pencil_power_is_zero,
    sdit_random,
    sdit_to_nilindex,
    snt_random,
)

P = 2**31 - 1
FP = GF(P)
F101 = GF(101)


def pencil(g, f=FP):
    return graph_pencil(graphical_space(g, f))


def generic(n, f):
    """n x n pencil with one variable per entry."""
    mats = [Matrix.elementary(n, n, i, j, f) for i in range(n) for j in range(n)]
    return SymbolicMatrix.of_space(mats, f, n, n)


def test_evaluate_examples():
    z = SymbolicMatrix(Matrix.zeros(2, 2, QQ), [Matrix.zeros(2, 2, QQ)])
    assert evaluate(z, [7]).is_zero()
    g = Digraph(2, [(0, 1), (1, 0)])
    b = pencil(g, QQ)
    assert evaluate(b, [1, 0]) == Matrix.elementary(2, 2, 0, 1, QQ)
    x = SymbolicMatrix(Matrix.zeros(2, 2, QQ), [Matrix([[1, 0], [0, 1]], QQ),
                                                Matrix([[0, 1], [1, 0]], QQ)])
    assert evaluate(x, [1, 2]) == Matrix([[1, 2], [2, 1]], QQ)


def test_sdit_examples():
    k22 = BipartiteGraph(2, 2, itertools.product(range(2), range(2)))
    res = sdit_random(pencil(k22), trials=10, seed=7)
    assert res.verdict == "Nonzero" and res.certified
    assert det(evaluate(pencil(k22), res.witness)) != 0
    res = sdit_random(pencil(BipartiteGraph(2, 2, [(0, 0), (0, 1)])), trials=10, seed=7)
    assert res.verdict == "ProbablyZero" and res.error_bound <= 1e-6
    one = SymbolicMatrix(Matrix.zeros(1, 1, QQ), [Matrix([[1]], QQ)])
    assert sdit_random(one, seed=0).verdict == "Nonzero"


def test_snt_examples():
    e12 = pencil(Digraph(2, [(0, 1)]))
    assert snt_random(e12, seed=1).verdict == "ProbablyNil"
    assert snt_random(pencil(Digraph(2, [(0, 1), (1, 0)])), seed=1).verdict == "NotNil"
    x = Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]], FP)
    y = Matrix([[0, 0, 0], [1, 0, 0], [0, -1, 0]], FP)
    nn = SymbolicMatrix.of_space([x, y], FP, 3, 3)
    assert snt_random(nn, seed=1).verdict == "ProbablyNil"
    with pytest.raises(NonHomogeneousPencil):
        snt_random(SymbolicMatrix(Matrix.identity(2, FP), [Matrix.zeros(2, 2, FP)]))


def test_nilindex_examples():
    z = SymbolicMatrix(Matrix.zeros(2, 2, FP), [Matrix.zeros(2, 2, FP)])
    assert nilindex_at_most(z, 1, seed=0).verdict == "ProbablyYes"
    path = pencil(Digraph(3, [(0, 1), (1, 2)]))
    assert nilindex_at_most(path, 2, seed=0).verdict == "No"
    assert nilindex_at_most(path, 3, seed=0).verdict == "ProbablyYes"


def test_exact_power_examples():
    assert pencil_power_is_zero(pencil(Digraph(2, [(0, 1)]), QQ), 2)
    assert not pencil_power_is_zero(pencil(Digraph(2, [(0, 1), (1, 0)]), QQ), 2)
    path = Digraph(4, [(0, 1), (1, 2), (2, 3)])
    assert pencil_power_is_zero(pencil(path, QQ), max_walk_len(path) + 1)


def test_small_field_uses_exact_expansion():
    b = pencil(BipartiteGraph(2, 2, [(0, 0), (1, 1)]), GF(2))
    res = sdit_random(b, seed=0)
    assert res.verdict == "Nonzero" or res.detail == {"method": "exact"}
    res = sdit_random(pencil(BipartiteGraph(2, 2, [(0, 0), (0, 1)]), GF(2)), seed=0)
    assert res.verdict == "ProbablyZero" and res.detail == {"method": "exact"}
    assert res.error_bound == 0.0
    with pytest.raises(FieldTooSmall):
        sdit_random(b, field_size_hint=10**6)


def test_abp_examples():
    one = SymbolicMatrix(Matrix.zeros(1, 1, QQ), [Matrix([[1]], QQ)])
    assert abp_product_entry(det_abp(one), [5]) == 5
    assert abp_product_entry(det_abp(generic(2, QQ)), [1, 2, 3, 4]) == -2
    k33 = pencil(BipartiteGraph(3, 3, itertools.product(range(3), range(3))), F101)
    rng = np.random.default_rng(0)
    for _ in range(20):
        pt = [int(x) for x in rng.integers(0, 101, k33.m)]
        assert abp_product_entry(det_abp(k33), pt) == det(evaluate(k33, pt))
    assert len(abp_nodes(3)) == 6


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_abp_is_the_determinant(n, seed):
    b = generic(n, F101)
    rng = np.random.default_rng(seed)
    pt = [int(x) for x in rng.integers(0, 101, b.m)]
    layers = det_abp(b)
    assert len(layers) == n + 1
    assert abp_product_entry(layers, pt) == det(evaluate(b, pt))


def test_gadget_examples():
    singular = pencil(BipartiteGraph(2, 2, [(0, 0), (0, 1)]))
    t, thr = sdit_to_nilindex(singular)
    assert nilindex_at_most(t, thr, seed=3).verdict == "ProbablyYes"
    one = SymbolicMatrix(Matrix.zeros(1, 1, FP), [Matrix([[1]], FP)])
    t, thr = sdit_to_nilindex(one)
    assert nilindex_at_most(t, thr, seed=3).verdict == "No"
    assert nilindex_at_most(t, thr + 1, seed=3).verdict == "ProbablyYes"


@settings(max_examples=30, deadline=None)
@given(bipartite_graphs(3, 3).filter(lambda g: g.m == g.n))
def test_det_poly_zero_iff_no_perfect_matching(g):
    b = pencil(g, QQ)
    assert (not pencil_det_poly(b)) == (max_matching(g)[0] < g.n)


@settings(max_examples=30, deadline=None)
@given(digraphs(max_n=3), st.integers(0, 1000))
def test_randomized_tests_agree_with_expansion(g, seed):
    b = pencil(g)
    exact_nil = pencil_power_is_zero(b, max(g.n, 1))
    res = snt_random(b, trials=5, seed=seed)
    assert (res.verdict == "ProbablyNil") == exact_nil
    if res.error_bound is not None:
        assert res.error_bound <= 1e-6
    for k in range(1, g.n + 2):
        assert (nilindex_at_most(b, k, trials=5, seed=seed).verdict == "ProbablyYes") == \
            pencil_power_is_zero(b, k)


def test_outcomes_are_reproducible():
    b = pencil(BipartiteGraph(2, 2, itertools.product(range(2), range(2))))
    assert sdit_random(b, seed=11) == sdit_random(b, seed=11)
