import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gms.exactmath import Matrix
from gms.fields import QQi
from gms.graphcore import Digraph, UndirectedGraph, scc
from gms.matspace import MatrixSpace, graphical_space
from gms.quantum import (
    IndeterminateError,
    KrausMap,
    TransitionMatrix,
    channel_from_transition,
    channel_irreducible,
    graph_channel,
    operator_system,
    operator_system_connected,
    spectral_expansion_pair,
)


def e(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


def circulant(n, steps):
    return UndirectedGraph(n, {(i, (i + s) % n) for i in range(n) for s in steps})


def test_channel_examples():
    k = channel_from_transition(TransitionMatrix(np.eye(2)))
    assert len(k.kraus) == 2 and k.trace_preserving
    k = channel_from_transition(TransitionMatrix([[0, 1], [1, 0]]))
    got = sorted(tuple(np.argwhere(op != 0)[0]) for op in k.kraus)
    assert got == [(0, 1), (1, 0)]
    rng = np.random.default_rng(4)
    k = channel_from_transition(TransitionMatrix.random(3, rng))
    s = sum(op.conj().T @ op for op in k.kraus)
    assert np.allclose(s, np.eye(3), atol=1e-9)


def test_transition_validation():
    with pytest.raises(ValueError, match="column 1"):
        TransitionMatrix([[0.5, 0.0], [0.4, 1.0]])
    with pytest.raises(ValueError):
        TransitionMatrix([[-0.1, 0], [1.1, 1]])


def test_irreducibility_examples():
    assert not channel_irreducible(channel_from_transition(TransitionMatrix(np.eye(2))))
    assert channel_irreducible(channel_from_transition(TransitionMatrix([[0, 1], [1, 0]])))
    path = KrausMap([e(3, 0, 1), e(3, 1, 2)])
    assert not channel_irreducible(path)


def test_indeterminate_is_raised_not_guessed():
    eps = 1e-10
    with pytest.raises(IndeterminateError):
        channel_irreducible(KrausMap([e(2, 0, 0), e(2, 0, 1), eps * e(2, 1, 0)]))


def test_operator_system_examples():
    assert operator_system(UndirectedGraph(3)).dim == 3
    assert operator_system(UndirectedGraph(2, [(0, 1)])).dim == 4
    f = operator_system(UndirectedGraph(3, [(0, 1), (1, 2)]))
    assert f.dim == 7 and operator_system_connected(f)
    assert not operator_system_connected(operator_system(UndirectedGraph(2)))
    full = graphical_space(Digraph(3, itertools.product(range(3), range(3))), QQi)
    assert operator_system_connected(full)
    with pytest.raises(ValueError):
        operator_system_connected(MatrixSpace([Matrix.elementary(2, 2, 0, 1, QQi)]))


def test_spectral_examples():
    k4 = UndirectedGraph(4, itertools.combinations(range(4), 2))
    gv, cv = spectral_expansion_pair(k4)
    assert abs(gv - 1 / 3) < 1e-9 and abs(cv - 1 / 3) < 1e-9
    assert all(abs(x - 1) < 1e-9 for x in spectral_expansion_pair(circulant(4, [1])))
    assert all(abs(x - 1) < 1e-9 for x in spectral_expansion_pair(UndirectedGraph(2, [(0, 1)])))
    with pytest.raises(ValueError):
        spectral_expansion_pair(UndirectedGraph(3, [(0, 1)]))


def test_graph_channel_is_unital_and_trace_preserving():
    k = graph_channel(circulant(5, [1, 2]))
    assert k.trace_preserving and k.unital


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.floats(0.1, 0.9))
def test_channel_irreducible_iff_strongly_connected(n, seed, density):
    p = TransitionMatrix.random(n, np.random.default_rng(seed), density)
    assert channel_irreducible(channel_from_transition(p)) == (scc(p.digraph())[1] == 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_operator_system_is_self_adjoint_with_identity(n, seed):
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.5]
    g = UndirectedGraph(n, edges)
    f = operator_system(g)
    assert f.contains(Matrix.identity(n, QQi))
    assert all(f.contains(b.H) for b in f.basis)
    connected = scc(Digraph(n, g.symmetric_arcs()))[1] == 1
    assert operator_system_connected(f) == connected
