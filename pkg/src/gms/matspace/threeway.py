"""3-way arrays and the conjugacy / congruence extraction procedures.

Public functions take T in the direct convention T S_G T^{-1} = S_H (or
T S_G T^* for congruence). The column-span criterion is naturally stated for
M with M^t S_G M^{-t} = S_H, so internally M = T^t.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..exactmath import (
    Matrix,
    ShapeError,
    SingularMatrixError,
    inverse,
    is_invertible,
    linear_combination,
    mat_mul,
    rank_rows,
    rref_rows,
)
from ..fields import Field, check_same
from ..graphcore import BipartiteGraph, is_embedding, is_isomorphism, max_matching
from .space import MatrixSpace, supporting_graph


class ThreeWayArray:
    """An l x n x m cuboid; entries[i][j][k]. Frontal slice k is the l x n matrix (i, j)."""

    __slots__ = ("dims", "entries", "field")

    def __init__(self, entries, field: Field, dims: tuple[int, int, int] | None = None):
        e = tuple(tuple(tuple(field(x) for x in tube) for tube in plane) for plane in entries)
        if dims is None:
            l = len(e)
            n = len(e[0]) if l else 0
            m = len(e[0][0]) if n else 0
        else:
            l, n, m = dims
            if len(e) != l:
                raise ShapeError("3-way array does not match its declared shape")
        if any(len(plane) != n or any(len(t) != m for t in plane) for plane in e):
            raise ShapeError("ragged 3-way array")
        self.dims = (l, n, m)
        self.entries = e
        self.field = field

    def __eq__(self, other):
        return (isinstance(other, ThreeWayArray) and self.field == other.field
                and self.dims == other.dims and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.dims, self.entries))

    def __getitem__(self, idx):
        i, j, k = idx
        return self.entries[i][j][k]

    def frontal_slices(self) -> list[Matrix]:
        return [slice_of(self, 2, k) for k in range(self.dims[2])]

    @classmethod
    def from_frontal(cls, slices: Sequence[Matrix], field: Field, l: int, n: int) -> "ThreeWayArray":
        return cls([[[s[i, j] for s in slices] for j in range(n)] for i in range(l)], field,
                   (l, n, len(slices)))


def threeway_from_space(s: MatrixSpace) -> ThreeWayArray:
    """Frontal slices are the (ordered) basis matrices."""
    return ThreeWayArray.from_frontal(s.basis, s.field, s.rows, s.cols)


def slice_of(a: ThreeWayArray, axis: int, idx: int) -> Matrix:
    """axis 0: horizontal (n x m), axis 1: vertical (l x m), axis 2: frontal (l x n)."""
    l, n, m = a.dims
    e = a.entries
    if axis == 0:
        return Matrix.raw([[e[idx][j][k] for k in range(m)] for j in range(n)], a.field, n, m)
    if axis == 1:
        return Matrix.raw([[e[i][idx][k] for k in range(m)] for i in range(l)], a.field, l, m)
    if axis == 2:
        return Matrix.raw([[e[i][j][idx] for j in range(n)] for i in range(l)], a.field, l, n)
    raise ValueError("axis must be 0, 1 or 2")


def transform(a: ThreeWayArray, p: Matrix, q: Matrix) -> ThreeWayArray:
    """Apply P . A_k . Q to every frontal slice."""
    l, n, m = a.dims
    if p.cols != l or q.rows != n:
        raise ShapeError("transform matrices do not match the array")
    slices = [mat_mul(mat_mul(p, s), q) for s in a.frontal_slices()]
    return ThreeWayArray.from_frontal(slices, a.field, p.rows, q.cols)


def recombine(a: ThreeWayArray, r: Matrix) -> ThreeWayArray:
    """A^R: frontal slice k is sum_k' r[k', k] A_k'."""
    l, n, m = a.dims
    if r.rows != m:
        raise ShapeError("recombination matrix does not match the array")
    slices = a.frontal_slices()
    out = [linear_combination(r.col(k), slices, l, n, a.field) for k in range(r.cols)]
    return ThreeWayArray.from_frontal(out, a.field, l, n)


def horizontal_to_frontal(a: ThreeWayArray) -> ThreeWayArray:
    """C(i, j, k) = A(k, i, j): the frontal slices of C are the horizontal slices of A."""
    l, n, m = a.dims
    e = a.entries
    return ThreeWayArray([[[e[k][i][j] for k in range(l)] for j in range(m)] for i in range(n)],
                         a.field, (n, m, l))


# conjugacy


@dataclass(frozen=True)
class ConjugacyCheck:
    holds: bool
    R: Matrix | None
    contained: bool
    equal: bool


def _solve(u_cols: list[list], targets: list[list], field: Field, n: int) -> list[list] | None:
    """Coefficients x with sum_j x[j][k] u_j = target_k for every k, or None."""
    s = len(u_cols)
    aug = [[u_cols[j][r] for j in range(s)] + [t[r] for t in targets] for r in range(n)]
    red, piv = rref_rows(aug, field, s + len(targets))
    if any(c >= s for c in piv):
        return None
    x = [[field.zero] * len(targets) for _ in range(s)]
    for row, c in zip(red, piv):
        for k in range(len(targets)):
            x[c][k] = row[s + k]
    return x


def _criterion_check(sg: MatrixSpace, sh: MatrixSpace, m: Matrix) -> tuple[bool, Matrix | None]:
    """Column-span criterion for M; on success the certifying R with C^M = M D R."""
    f = sg.field
    n, dim = sg.rows, sg.dim
    c_arr = horizontal_to_frontal(threeway_from_space(sg))
    d_arr = horizontal_to_frontal(threeway_from_space(sh))
    c_prime = recombine(c_arr, m).frontal_slices()
    d_slices = d_arr.frontal_slices()
    r_rows: list[list | None] = [None] * dim
    for i in range(n):
        md = mat_mul(m, d_slices[i])
        cp = c_prime[i]
        nz = [k for k in range(dim) if any(md[r, k] for r in range(n))]
        u_cols = [list(md.col(k)) for k in nz]
        sol = _solve(u_cols, [list(cp.col(k)) for k in range(dim)], f, n)
        if sol is None:
            return False, None
        for idx, k in enumerate(nz):
            r_rows[k] = sol[idx]
    for k in range(dim):
        if r_rows[k] is None:
            r_rows[k] = [f.zero] * dim
    r = Matrix.raw(r_rows, f, dim, dim)
    # certificate: M^t S_G = S_H^R M^t slice by slice, with R invertible
    mt = m.T
    lhs = transform(threeway_from_space(sg), mt, Matrix.identity(n, f))
    rhs = transform(recombine(threeway_from_space(sh), r), Matrix.identity(n, f), mt)
    if lhs != rhs or not is_invertible(r):
        return False, None
    return True, r


def _conjugate_images(sg: MatrixSpace, t: Matrix) -> list[Matrix]:
    t_inv = inverse(t)
    return [mat_mul(mat_mul(t, b), t_inv) for b in sg.basis]


def conjugacy_criterion(sg: MatrixSpace, sh: MatrixSpace, t: Matrix) -> ConjugacyCheck:
    """Test whether T S_G T^{-1} = S_H through the column-span criterion.

    holds/R come from the criterion (equal dimensions and graphical spaces
    only); contained/equal are direct subspace checks of T S_G T^{-1}
    against S_H.
    """
    check_same(sg.field, sh.field, t.field)
    if not (sg.square and sh.square and sg.rows == sh.rows == t.rows == t.cols):
        raise ShapeError("conjugacy needs square spaces of the size of T")
    images = _conjugate_images(sg, t)
    contained = all(sh.contains(x) for x in images)
    equal = contained and sg.dim == sh.dim
    if sg.dim != sh.dim or not (sg.is_graphical() and sh.is_graphical()):
        return ConjugacyCheck(False, None, contained, equal)
    holds, r = _criterion_check(sg, sh, t.T)
    if holds and not equal:
        raise AssertionError("criterion certificate disagrees with direct containment")
    return ConjugacyCheck(holds, r, contained, equal)


def conjugacy_to_permutation(sg: MatrixSpace, sh: MatrixSpace, t: Matrix) -> list[int]:
    """Turn a conjugator into a permutation sigma carrying G onto H.

    Column by column, the column of M = T^t is replaced by a standard vector
    e_i with M[i, c] != 0 that keeps M invertible; the criterion is rechecked
    after every replacement.
    """
    chk = conjugacy_criterion(sg, sh, t)
    if not (chk.holds and chk.equal):
        raise ValueError("T is not a conjugator between the two graphical spaces")
    f = sg.field
    n = sg.rows
    m = [list(r) for r in t.T.grid]
    for c in range(n):
        for i in range(n):
            if not m[i][c]:
                continue
            trial = [list(r) for r in m]
            for r in range(n):
                trial[r][c] = f.one if r == i else f.zero
            tm = Matrix.raw(trial, f, n, n)
            if not is_invertible(tm):
                continue
            if _criterion_check(sg, sh, tm)[0]:
                m = trial
                break
        else:
            raise AssertionError(f"no admissible replacement for column {c}")
    owner = [next(r for r in range(n) if m[r][c]) for c in range(n)]
    sigma = [0] * n
    for c, a in enumerate(owner):
        sigma[a] = c
    g, h = supporting_graph(sg, bipartite=False), supporting_graph(sh, bipartite=False)
    if not is_isomorphism(g, h, sigma):
        raise AssertionError("extracted permutation is not an isomorphism")
    return sigma


def congruent_images(sg: MatrixSpace, t: Matrix) -> list[Matrix]:
    th = t.H
    return [mat_mul(mat_mul(t, b), th) for b in sg.basis]


def congruence_to_isomorphism(sg: MatrixSpace, sh: MatrixSpace, t: Matrix) -> list[int]:
    """sigma with t[sigma(i), i] != 0, verified as isomorphism or embedding."""
    check_same(sg.field, sh.field, t.field)
    n = sg.rows
    if not is_invertible(t):
        raise SingularMatrixError("T must be invertible")
    if not all(sh.contains(x) for x in congruent_images(sg, t)):
        raise ValueError("T S_G T^* is not contained in S_H")
    pattern = BipartiteGraph(n, n, [(a, x) for x in range(n) for a in range(n) if t[x, a]])
    size, matching = max_matching(pattern)
    if size != n:
        raise AssertionError("invertible matrix without a transversal")
    sigma = [0] * n
    for a, x in matching:
        sigma[a] = x
    g, h = supporting_graph(sg, bipartite=False), supporting_graph(sh, bipartite=False)
    ok = is_isomorphism(g, h, sigma) if sg.dim == sh.dim else is_embedding(g, h, sigma)
    if not ok:
        raise AssertionError("extracted permutation fails the arc check")
    return sigma


def permutation_matrix(perm: Sequence[int], field: Field) -> Matrix:
    """P with P e_a = e_perm[a], so P E_ab P^{-1} = E_{perm a, perm b}."""
    n = len(perm)
    return Matrix.raw([[field.one if perm[c] == r else field.zero for c in range(n)]
                       for r in range(n)], field, n, n)
