import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import digraphs
from gms.fields import GF
from gms.graphcore import Digraph, max_acyclic_subgraph_size
from gms.matspace import burnside_algebra_dim
from gms.verify import (
    COUNTEREXAMPLE,
    EXPLORED,
    VERIFIED,
    CounterexampleFound,
    TheoremCase,
    _haar_rows,
    _run,
    enumerate_gl,
    explore_atkinson,
    explore_t110,
    explore_t111,
    explore_t15,
    induced_nil_measure,
    induced_reducible,
    reproduce_counterexamples,
    reverify,
    summarize,
    verify_theorem,
    verify_transitivity,
)


def gl_order(n, p):
    return math.prod(p**n - p**i for i in range(n))


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_gl_enumeration(n, p):
    mats, inv = enumerate_gl(n, p)
    assert len(mats) == gl_order(n, p)
    prod = np.einsum("bij,bjk->bik", mats, inv) % p
    assert (prod == np.eye(n, dtype=np.int64)).all()


def test_transitivity_examples():
    c3 = verify_transitivity(Digraph(3, [(0, 1), (1, 2), (2, 0)]), "Fp:3")
    assert c3.status == VERIFIED and c3.graph_side
    assert c3.space_side == {"conjugacy_irreducible": True, "congruence_irreducible": True}
    path = verify_transitivity(Digraph(2, [(0, 1)]), "Fp:3")
    assert path.status == VERIFIED and not path.graph_side
    assert path.space_side == {"conjugacy_irreducible": False, "congruence_irreducible": False}
    assert path.detail["conj_order"] <= 48
    loop = verify_transitivity(Digraph(1, [(0, 0)]), "Fp:3")
    assert loop.status == VERIFIED and loop.graph_side
    with pytest.raises(ValueError):
        verify_transitivity(Digraph(2), "Fp:2")


def test_counterexample_examples():
    cases = reproduce_counterexamples()
    assert [c.theorem_id for c in cases].count("EX-CONG") == 2
    assert all(c.status == VERIFIED for c in cases)
    control = cases[-1]
    assert control.detail["expected_containment"] is False
    assert control.space_side == {"conjugate_into": False}


def test_suite_examples():
    assert summarize(verify_theorem("T1.4", n_max=2, brute=True))["fail"] == 0
    cases = verify_theorem("T1.13", n_max=2)
    assert len(cases) == 256 and all(c.status == VERIFIED for c in cases)
    assert verify_theorem("T1.6", n_max=1)[0].theorem_id == "T4.2"


def test_atkinson_examples():
    cases = explore_atkinson(2)
    by_k = {}
    for c in cases:
        by_k.setdefault(c.instance["k"], []).append(c)
    for c in by_k[0]:
        g = Digraph(c.instance["graph"]["n"],
                    [(i - 1, j - 1) for i, j in c.instance["graph"]["arcs"]])
        assert c.graph_side == max_acyclic_subgraph_size(g)
    full = [c for c in cases if len(c.instance["graph"]["arcs"]) == 4 and c.instance["k"] == 1]
    assert full[0].graph_side == 2 == full[0].detail["complete_bound"]


def test_counterexample_halts_and_writes_reproduction(tmp_path):
    bad = TheoremCase("T5.1", {"graph": {"kind": "digraph", "n": 1, "arcs": []},
                               "field": "Fp:2"}, 1, 2, COUNTEREXAMPLE)
    with pytest.raises(CounterexampleFound) as err:
        _run("T5.1", [0], lambda _: bad, 1, True, str(tmp_path))
    stored = json.loads(open(err.value.path).read())
    assert stored["status"] == COUNTEREXAMPLE
    # the stored instance alone recomputes the (correct) case
    assert reverify(stored).status == VERIFIED


@pytest.mark.parametrize("tid,kw", [
    ("T1.3", {}), ("T1.4", {"brute": True}), ("T1.5", {}), ("T4.2", {}), ("T4.4", {}),
    ("T1.7", {"brute": True}), ("T5.1", {}), ("T1.9", {"brute": True}), ("T1.13", {}),
    ("T1.14", {}), ("A.1", {}), ("C1.16", {}), ("T1.11", {"samples": 20}),
    ("T1.10", {"samples": 20}), ("EX-CONG", {}), ("EX-CONJ", {}),
])
def test_every_case_reverifies_from_its_json(tid, kw):
    cases = verify_theorem(tid, n_max=2, dedup=True, **kw)
    assert cases
    for c in cases[:: max(1, len(cases) // 8)]:
        again = reverify(json.loads(json.dumps(c.to_json())))
        assert again.to_json() == c.to_json()


def test_t15_over_c_is_explored():
    cases = verify_theorem("T1.5", n_max=2, field="C64", dedup=True, samples=30)
    assert all(c.status == EXPLORED for c in cases)
    assert all(c.space_side >= c.graph_side for c in cases)


# the sampling predicates against direct computation


def word_products_vanish(t, arcs, k, tol=1e-9):
    """Every length-k product of the spanning matrices r_i r_j^* is zero."""
    mats = [np.outer(t[:, i], np.conj(t[:, j])) for i, j in arcs]
    for word in itertools.product(mats, repeat=k):
        p = word[0]
        for m in word[1:]:
            p = p @ m
        if np.abs(p).max() > tol:
            return False
    return True


@settings(max_examples=30, deadline=None)
@given(digraphs(max_n=3), st.integers(0, 2**32 - 1))
def test_nil_measure_matches_products(g, seed):
    arcs = g.sorted_arcs()
    rng = np.random.default_rng(seed)
    for k in range(1, g.n + 1):
        t = _haar_rows(rng, 2, k, g.n)
        mu = induced_nil_measure(t, arcs)
        for s in range(2):
            assert (mu[s] <= 1e-9) == word_products_vanish(t[s], arcs, k)
        coord = np.zeros((1, k, g.n), dtype=complex)
        coord[0, range(k), range(k)] = 1
        assert (induced_nil_measure(coord, arcs)[0] <= 1e-9) == \
            word_products_vanish(coord[0], arcs, k)


@settings(max_examples=30, deadline=None)
@given(digraphs(max_n=3, min_n=2), st.integers(0, 2**32 - 1))
def test_reducible_matches_burnside(g, seed):
    rng = np.random.default_rng(seed)
    for k in range(2, g.n + 1):
        ts = [_haar_rows(rng, 2, k, g.n)]
        for vs in itertools.combinations(range(g.n), k):
            c = np.zeros((1, k, g.n), dtype=complex)
            c[0, range(k), vs] = 1
            ts.append(c)
        for t in ts:
            got = induced_reducible(t, g)
            for s in range(len(t)):
                mats = [np.outer(t[s][:, i], np.conj(t[s][:, j])) for i, j in g.arcs]
                dim = burnside_algebra_dim(mats, k)[0] if mats else 1
                assert got[s] == (dim != k * k)


def test_explorers_certify_and_find_no_exceedance():
    g = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    for case in (explore_t111(g, 200), explore_t110(g, 200), explore_t15(g.as_bipartite(), 1, 200)):
        assert case.status == EXPLORED
        assert case.space_side >= case.graph_side
        assert not any(case.detail["exceedances"].values())
