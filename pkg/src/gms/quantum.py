"""Quantum channels of transition matrices, operator systems and spectral expansion."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .exactmath import TOL, Matrix, conj_transpose
from .fields import C64, QQi
from .graphcore import Digraph, UndirectedGraph
from .matspace import MatrixSpace, burnside_algebra_dim, graphical_space

STOCHASTIC_TOL = 1e-12


class IndeterminateError(ArithmeticError):
    """A rank decision fell too close to the tolerance to be trusted."""


class KrausMap:
    """Phi(X) = sum_i E_i X E_i^*, each E_i an n' x n complex array."""

    __slots__ = ("kraus",)

    def __init__(self, kraus: Sequence):
        ops = tuple(np.array(k.to_numpy() if isinstance(k, Matrix) else k, dtype=complex)
                    for k in kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        if any(k.shape != ops[0].shape for k in ops):
            raise ValueError("Kraus operators differ in shape")
        self.kraus = ops

    @property
    def shape(self) -> tuple[int, int]:
        return self.kraus[0].shape

    @property
    def trace_preserving(self) -> bool:
        s = sum(k.conj().T @ k for k in self.kraus)
        return bool(np.allclose(s, np.eye(self.shape[1]), atol=TOL, rtol=0))

    @property
    def unital(self) -> bool:
        s = sum(k @ k.conj().T for k in self.kraus)
        return bool(np.allclose(s, np.eye(self.shape[0]), atol=TOL, rtol=0))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return sum(k @ x @ k.conj().T for k in self.kraus)

    def superoperator(self) -> np.ndarray:
        """Matrix of Phi on row-major vectorizations: sum_i E_i (x) conj(E_i)."""
        return sum(np.kron(k, k.conj()) for k in self.kraus)

    def space(self) -> MatrixSpace:
        """S_Phi, the span of the Kraus operators."""
        r, c = self.shape
        return MatrixSpace([Matrix(k.tolist(), C64) for k in self.kraus], C64, r, c)


class TransitionMatrix:
    """Column-stochastic matrix: p[i, j] is the probability of moving from j to i."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        p = np.array(entries, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("transition matrix must be square")
        if (p < 0).any():
            raise ValueError("transition matrix has a negative entry")
        sums = p.sum(axis=0)
        bad = np.flatnonzero(np.abs(sums - 1) > STOCHASTIC_TOL)
        if bad.size:
            raise ValueError(f"column {int(bad[0]) + 1} sums to {sums[bad[0]]!r}, not 1")
        self.entries = p

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def digraph(self) -> Digraph:
        """Arc j -> i for every possible move p[i, j] > 0."""
        return Digraph(self.n, [(j, i) for i, j in zip(*np.nonzero(self.entries))])

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, density: float = 0.5) -> "TransitionMatrix":
        """Random support with the given density, each column nonempty, normalized columns."""
        mask = rng.random((n, n)) < density
        for j in range(n):
            if not mask[:, j].any():
                mask[rng.integers(n), j] = True
        w = np.where(mask, rng.random((n, n)) + 0.05, 0.0)
        return cls(w / w.sum(axis=0))


def _elementary(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1
    return e


def channel_from_transition(p: TransitionMatrix) -> KrausMap:
    """Kraus operators sqrt(p_ij) E_ij over the support of P.

    The channel is trace preserving and its space equals S of the transposed
    support digraph; both facts are checked before returning.
    """
    n = p.n
    ops = [np.sqrt(p.entries[i, j]) * _elementary(n, i, j)
           for i in range(n) for j in range(n) if p.entries[i, j] != 0]
    k = KrausMap(ops)
    if not k.trace_preserving:
        raise AssertionError("channel of a column-stochastic matrix is not trace preserving")
    support = {(i, j) for i in range(n) for j in range(n) if p.entries[i, j] != 0}
    if support != p.digraph().transpose().arcs:
        raise AssertionError("Kraus span differs from the transposed support digraph")
    return k


def _algebra_is_full(ops: Sequence[np.ndarray], n: int) -> bool:
    d, ambiguous = burnside_algebra_dim(ops, n)
    if ambiguous:
        raise IndeterminateError("a residual fell within the tolerance band; refusing to guess")
    return d == n * n


def channel_irreducible(k: KrausMap) -> bool:
    """Irreducibility of S_Phi over C by the generated-algebra criterion."""
    r, c = k.shape
    if r != c:
        raise ValueError("irreducibility needs square Kraus operators")
    if r <= 1:
        return True
    return _algebra_is_full(k.kraus, r)


def _is_self_adjoint(f: MatrixSpace) -> bool:
    return all(f.contains(conj_transpose(b)) for b in f.basis)


def operator_system(g: UndirectedGraph) -> MatrixSpace:
    """F_G: span of E_ij over edges in both orientations and all loops, over Q(i)."""
    f = graphical_space(g.looped_symmetrization(), QQi)
    if not _is_self_adjoint(f):
        raise AssertionError("operator system is not closed under adjoints")
    if not f.contains(Matrix.identity(g.n, QQi)):
        raise AssertionError("operator system does not contain the identity")
    return f


def operator_system_connected(f: MatrixSpace) -> bool:
    """No nontrivial projection P with P f (I - P) = 0, decided as irreducibility of f."""
    if not f.square:
        raise ValueError("operator systems are square")
    if not _is_self_adjoint(f):
        raise ValueError("input space is not self-adjoint")
    n = f.rows
    if n <= 1:
        return True
    return _algebra_is_full([np.array(b.to_numpy(), dtype=complex) for b in f.basis], n)


def graph_channel(g: UndirectedGraph) -> KrausMap:
    """(1/d) sum over arcs of E_ij X E_ij^*, for a d-regular graph."""
    d = _regular_degree(g)
    ops = [_elementary(g.n, i, j) / np.sqrt(d) for i, j in sorted(g.symmetric_arcs())]
    return KrausMap(ops)


def _regular_degree(g: UndirectedGraph) -> int:
    degs = set(g.degrees())
    if len(degs) != 1 or 0 in degs:
        raise ValueError(f"graph is not regular of positive degree (degrees {sorted(degs)})")
    return degs.pop()


def second_modulus(eigs: np.ndarray) -> float:
    mods = np.sort(np.abs(eigs))[::-1]
    return float(mods[1]) if mods.size > 1 else 0.0


def spectral_expansion_pair(g: UndirectedGraph) -> tuple[float, float]:
    """Second-largest eigenvalue modulus of A/d and of the channel superoperator."""
    d = _regular_degree(g)
    if g.n > 16:
        raise ValueError("superoperator is n^2 x n^2; n is capped at 16")
    graph_val = second_modulus(np.linalg.eigvalsh(g.adjacency_matrix() / d))
    channel_val = second_modulus(np.linalg.eigvals(graph_channel(g).superoperator()))
    if abs(graph_val - channel_val) > TOL:
        raise AssertionError(f"spectral expansions differ: {graph_val} vs {channel_val}")
    return graph_val, channel_val

