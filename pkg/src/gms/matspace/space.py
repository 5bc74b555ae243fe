"""Matrix spaces and the per-space quantities computed by exhaustive or exact means."""
from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from ..exactmath import (
    TOL,
    Matrix,
    ShapeError,
    char_poly_rows,
    inverse,
    linear_combination,
    mat_mul,
    numerical_rank,
    rank_rows,
    right_kernel_rows,
    rref_rows,
)
from ..fields import Field, FieldError, check_same
from ..graphcore import INF, BipartiteGraph, Digraph, max_matching

ENUM_CAP = 10**7
PROJECTIVE_CAP = 10**6


class InfeasibleError(ValueError):
    """Raised when an exhaustive computation exceeds its documented cap."""


class MatrixSpace:
    """A subspace of r x c matrices, stored by a reduced basis.

    Over exact fields the basis is the reduced row echelon form of the
    row-major vectorized spanning set, so equal spaces have equal bases and
    graphical spaces get their elementary matrices in lexicographic order.
    Over machine complex a maximal independent subset (tolerance 1e-9) is kept.
    """

    __slots__ = ("rows", "cols", "field", "basis", "_vecs")

    def __init__(self, mats: Iterable[Matrix], field: Field | None = None,
                 rows: int | None = None, cols: int | None = None):
        mats = list(mats)
        if field is None or rows is None or cols is None:
            if not mats:
                raise ShapeError("empty spanning set needs field and shape")
            field = field or mats[0].field
            rows, cols = mats[0].shape if rows is None else (rows, cols)
        for m in mats:
            check_same(field, m.field)
            if m.shape != (rows, cols):
                raise ShapeError(f"basis matrix of shape {m.shape}, expected {(rows, cols)}")
        self.rows, self.cols, self.field = rows, cols, field
        vecs = [list(m.flat()) for m in mats]
        if field.exact:
            red, _ = rref_rows(vecs, field, rows * cols)
            keep = red
        else:
            keep = []
            for v in vecs:
                trial = keep + [v]
                if numerical_rank(np.array(trial, dtype=complex)) == len(trial):
                    keep.append(v)
        self._vecs = tuple(tuple(v) for v in keep)
        self.basis = tuple(Matrix.raw([v[i * cols:(i + 1) * cols] for i in range(rows)],
                                      field, rows, cols) for v in self._vecs)

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field) -> "MatrixSpace":
        return cls([], field, rows, cols)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def square(self) -> bool:
        return self.rows == self.cols

    @property
    def vectors(self) -> tuple[tuple, ...]:
        """Row-major vectorized basis."""
        return self._vecs

    def __repr__(self):
        return f"MatrixSpace(dim={self.dim}, {self.rows}x{self.cols}, {self.field.tag})"

    def __eq__(self, other):
        if not isinstance(other, MatrixSpace):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape or self.dim != other.dim:
            return False
        if self.field.exact:
            return self._vecs == other._vecs
        return self.contains_space(other) and other.contains_space(self)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self._vecs))

    def element(self, coords: Sequence) -> Matrix:
        f = self.field
        return linear_combination([f(c) for c in coords], self.basis, self.rows, self.cols, f)

    def contains(self, m: Matrix, tol: float = TOL) -> bool:
        check_same(self.field, m.field)
        if m.shape != self.shape:
            return False
        if self.field.exact:
            r = rank_rows([list(v) for v in self._vecs] + [list(m.flat())], self.field,
                          self.rows * self.cols)
            return r == self.dim
        a = np.array(list(self._vecs) + [m.flat()], dtype=complex)
        return numerical_rank(a, tol) == self.dim

    def contains_space(self, other: "MatrixSpace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def is_graphical(self) -> bool:
        return all(len(b.support()) == 1 and b.flat().count(self.field.one) == 1
                   for b in self.basis)

    def coordinate_matrix(self) -> np.ndarray:
        """dim x (rows*cols) int64 array of the basis; prime fields only."""
        if not self.field.is_prime_field:
            raise FieldError("coordinate arrays need a prime field")
        return np.array(self._vecs, dtype=np.int64).reshape(self.dim, self.rows * self.cols)


def span(mats: Iterable[Matrix], field: Field | None = None, rows: int | None = None,
         cols: int | None = None) -> MatrixSpace:
    return MatrixSpace(mats, field, rows, cols)


def graphical_space(g: Digraph | BipartiteGraph, field: Field) -> MatrixSpace:
    if isinstance(g, Digraph):
        rows = cols = g.n
        cells = g.sorted_arcs()
    else:
        rows, cols = g.m, g.n
        cells = g.sorted_edges()
    return MatrixSpace([Matrix.elementary(rows, cols, i, j, field) for i, j in cells],
                       field, rows, cols)


def supporting_graph(s: MatrixSpace, bipartite: bool | None = None) -> Digraph | BipartiteGraph:
    """Union of the supports of the basis; a digraph for square spaces by default."""
    cells = set()
    for b in s.basis:
        cells |= b.support() if s.field.exact else {
            (i, j) for i in range(s.rows) for j in range(s.cols) if abs(b[i, j]) > TOL}
    if bipartite is None:
        bipartite = not s.square
    if bipartite:
        return BipartiteGraph(s.rows, s.cols, cells)
    if not s.square:
        raise ShapeError("a digraph support needs a square space")
    return Digraph(s.rows, cells)


# element enumeration


def _require_enumerable(s: MatrixSpace, cap: int = ENUM_CAP):
    if not s.field.is_prime_field:
        raise InfeasibleError(f"exhaustive enumeration needs a prime field, not {s.field.tag}")
    if s.field.p ** s.dim > cap:
        raise InfeasibleError(f"{s.field.p}^{s.dim} elements exceed the cap {cap}")


def coordinate_vectors(d: int, p: int) -> np.ndarray:
    """All of F_p^d as a (p^d, d) array; row x has digits of x in base p, least significant first."""
    n = p ** d
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, d), dtype=np.int64)
    for i in range(d):
        out[:, i] = idx % p
        idx //= p
    return out


def element_array(s: MatrixSpace) -> np.ndarray:
    """All elements as a (p^dim, rows, cols) int64 array, in coordinate-index order."""
    _require_enumerable(s)
    p = s.field.p
    coords = coordinate_vectors(s.dim, p)
    if s.dim == 0:
        return np.zeros((1, s.rows, s.cols), dtype=np.int64)
    flat = (coords @ s.coordinate_matrix()) % p
    return flat.reshape(-1, s.rows, s.cols)


def enumerate_elements(s: MatrixSpace) -> Iterator[Matrix]:
    """Every element exactly once; coordinates vary fastest in the first basis vector."""
    _require_enumerable(s)
    f = s.field
    for coords in itertools.product(range(f.p), repeat=s.dim):
        yield s.element(coords[::-1])


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_coordinate_matrices(dim: int, d: int, p: int) -> Iterator[list[list[int]]]:
    """Each d-dimensional subspace of F_p^dim once, as its RREF basis rows."""
    for pivots in itertools.combinations(range(dim), d):
        free = [(r, c) for r in range(d) for c in range(pivots[r] + 1, dim) if c not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * dim for _ in range(d)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield rows


def enumerate_subspaces(s: MatrixSpace, d: int) -> Iterator[MatrixSpace]:
    if not s.field.is_prime_field:
        raise InfeasibleError("subspace enumeration needs a prime field")
    count = gaussian_binomial(s.dim, d, s.field.p)
    if count > ENUM_CAP:
        raise InfeasibleError(f"{count} subspaces of dimension {d} exceed the cap")
    for coords in rref_coordinate_matrices(s.dim, d, s.field.p):
        yield MatrixSpace([s.element(c) for c in coords], s.field, s.rows, s.cols)


# batched prime-field kernels


def _inverse_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        t[x] = pow(x, -1, p)
    return t


def batch_rank(arr: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices over F_p (small p), by vectorized elimination."""
    a = np.array(arr, dtype=np.int64) % p
    nb, r, c = a.shape
    inv = _inverse_table(p)
    row = np.zeros(nb, dtype=np.int64)
    ar = np.arange(r)
    for col in range(c):
        mask = (a[:, :, col] != 0) & (ar[None, :] >= row[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = mask[b].argmax(axis=1)
        rr = row[b]
        prow = a[b, piv].copy()
        a[b, piv] = a[b, rr]
        prow = prow * inv[prow[:, col]][:, None] % p
        a[b, rr] = prow
        fac = a[b, :, col].copy()
        fac[np.arange(len(b)), rr] = 0
        a[b] = (a[b] - fac[:, :, None] * prow[:, None, :]) % p
        row[b] += 1
    return row


def batch_matmul(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    return np.matmul(x, y) % p


def batch_nilpotency_index(arr: np.ndarray, p: int) -> np.ndarray:
    """Per-matrix nilpotency index as float (inf when not nilpotent)."""
    nb, n, _ = arr.shape
    out = np.full(nb, np.inf)
    zero = ~arr.reshape(nb, -1).any(axis=1)
    out[zero] = 1
    powm = arr % p
    for k in range(2, n + 1):
        powm = batch_matmul(powm, arr, p)
        z = ~powm.reshape(nb, -1).any(axis=1) & np.isinf(out)
        out[z] = k
    return out


def batch_zero_eigen_multiplicity(arr: np.ndarray, p: int) -> np.ndarray:
    """Multiplicity of eigenvalue 0 = n - rank(B^n) (Fitting decomposition)."""
    nb, n, _ = arr.shape
    if n == 0:
        return np.zeros(nb, dtype=np.int64)
    powm = arr % p
    for _ in range(n - 1):
        powm = batch_matmul(powm, arr, p)
    return n - batch_rank(powm, p)


# quantities


def _randomized_max_rank(s: MatrixSpace, trials: int = 20, seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    f = s.field
    best = 0
    for _ in range(trials):
        if f.is_prime_field:
            coords = [int(x) for x in rng.integers(0, f.p, s.dim)]
        else:
            coords = [int(x) for x in rng.integers(-10**6, 10**6, s.dim)]
        m = s.element(coords)
        best = max(best, rank_rows(m.tolist(), f, s.cols) if f.exact else numerical_rank(m))
    return best


def max_rank(s: MatrixSpace, exhaustive: bool | None = None) -> int:
    """Maximum rank over the space.

    Exhaustive over F_p when feasible. Otherwise a graphical space is settled
    by a random lower bound meeting the matching-number upper bound.
    """
    if s.dim == 0:
        return 0
    feasible = s.field.is_prime_field and s.field.p ** s.dim <= ENUM_CAP
    if exhaustive or (exhaustive is None and feasible):
        _require_enumerable(s)
        arr = element_array(s)
        return int(batch_rank(arr, s.field.p).max())
    if not s.is_graphical():
        raise InfeasibleError("max_rank needs exhaustive enumeration for non-graphical spaces")
    upper = max_matching(supporting_graph(s, bipartite=True))[0]
    lower = _randomized_max_rank(s)
    if lower != upper:
        raise InfeasibleError(f"random search reached rank {lower} below the bound {upper}")
    return upper


def nil_index(s: MatrixSpace) -> float:
    """Max over elements of the nilpotency index (inf if some element is not nilpotent)."""
    if not s.square:
        raise ShapeError("nil index needs a square space")
    if s.dim == 0:
        return 1
    arr = element_array(s)
    return float(batch_nilpotency_index(arr, s.field.p).max())


def _as_int(x: float):
    return x if x == INF else int(x)


def nilpotent_index(s: MatrixSpace) -> float:
    """Smallest k with every k-fold product zero, via W_{k+1} = span(W_k S); inf if W_n != 0."""
    if not s.square:
        raise ShapeError("nilpotent index needs a square space")
    n, f = s.rows, s.field
    w = list(s.basis)
    k = 1
    while True:
        if not w:
            return k
        if k >= n:
            return INF
        prods = [mat_mul(a, b) for a in w for b in s.basis]
        w = list(MatrixSpace(prods, f, n, n).basis)
        k += 1


def zero_eigenvalue_min(s: MatrixSpace) -> int:
    """Min over elements of the multiplicity of 0 as a root of the characteristic polynomial."""
    if not s.square:
        raise ShapeError("eigenvalues need a square space")
    _require_enumerable(s)
    f = s.field
    best = s.rows
    for m in enumerate_elements(s):
        hi = char_poly_rows(m.grid, f)
        tz = 0
        for c in reversed(hi):
            if c:
                break
            tz += 1
        best = min(best, tz)
        if best == 0:
            break
    return best


def zero_eigenvalue_min_fast(s: MatrixSpace) -> int:
    """Batched variant using n - rank(B^n); agrees with the char_poly path."""
    arr = element_array(s)
    return int(batch_zero_eigen_multiplicity(arr, s.field.p).min())


# invariant subspaces


def row_space(vectors: Iterable[Sequence], field: Field, n: int) -> list[list]:
    """RREF basis of the span of the given length-n vectors."""
    red, _ = rref_rows([list(v) for v in vectors], field, n)
    return red


def subspace_matrix(rows: Sequence[Sequence], field: Field, n: int) -> Matrix:
    return Matrix.raw([list(r) for r in rows], field, len(rows), n)


def _vec_times(v: Sequence, grid: Sequence[Sequence], field: Field) -> list:
    n = len(grid[0]) if grid else 0
    z, norm = field.zero, field.norm
    out = [z] * n
    for a, row in zip(v, grid):
        if a:
            out = [o + a * x for o, x in zip(out, row)]
    return [norm(x) for x in out]


def _closure_rows(grids: Sequence, start: Sequence[Sequence], field: Field, n: int) -> list[list]:
    u = row_space(start, field, n)
    while True:
        images = [_vec_times(v, g, field) for v in u for g in grids]
        nu = row_space(u + images, field, n)
        if len(nu) == len(u):
            return nu
        u = nu


def invariant_closure(s: MatrixSpace, v: Sequence) -> Matrix:
    """Smallest S-invariant subspace containing v, as RREF basis rows."""
    if not s.square:
        raise ShapeError("invariant subspaces need a square space")
    f = s.field
    if isinstance(v, Matrix):
        v = v.flat()
    v = [f(x) for x in v]
    if len(v) != s.rows:
        raise ShapeError("vector length does not match the space")
    if not any(v):
        raise ValueError("closure of the zero vector requested")
    rows = _closure_rows([b.grid for b in s.basis], [v], f, s.rows)
    return subspace_matrix(rows, f, s.rows)


def is_invariant(s: MatrixSpace, u: Matrix) -> bool:
    f, n = s.field, s.rows
    rows = [list(r) for r in u.grid]
    base = len(row_space(rows, f, n))
    images = [_vec_times(r, b.grid, f) for r in rows for b in s.basis]
    return len(row_space(rows + images, f, n)) == base


def projective_points(n: int, p: int) -> Iterator[list[int]]:
    """One representative per line of F_p^n: first nonzero coordinate equal to 1."""
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield [0] * lead + [1] + list(tail)


def _min_closure(grids, field: Field, n: int) -> list[list]:
    best = None
    for v in projective_points(n, field.p):
        c = _closure_rows(grids, [v], field, n)
        if best is None or len(c) < len(best):
            best = c
            if len(c) == 1:
                break
    return best


def _check_projective(n: int, field: Field):
    if not field.is_prime_field:
        raise InfeasibleError("exhaustive irreducibility needs a prime field")
    if (field.p ** n - 1) // (field.p - 1) > PROJECTIVE_CAP:
        raise InfeasibleError("too many projective points for the exhaustive closure test")


def burnside_algebra_dim(mats: Sequence[np.ndarray], n: int, tol: float = TOL) -> tuple[int, bool]:
    """Dimension of the unital algebra generated by mats, and an ambiguity flag.

    An orthonormal basis of the growing span is kept, so each rank decision
    compares the residual of a unit vector with tol. The flag is raised when
    some product norm or residual falls within three orders of magnitude of tol
    on either side.
    """
    eye = np.eye(n, dtype=complex).reshape(-1) / np.sqrt(n)
    basis = eye.reshape(1, -1)
    gens = [np.asarray(m, dtype=complex) for m in mats]
    ambiguous = False
    frontier = [eye.reshape(n, n)]
    while frontier and basis.shape[0] < n * n:
        new = []
        for x in frontier:
            for g in gens:
                v = (x @ g).reshape(-1)
                nv = np.linalg.norm(v)
                if tol * 1e-3 < nv < tol * 1e3:
                    ambiguous = True
                if nv <= tol:
                    continue
                v = v / nv
                resid = v - basis.T @ (basis.conj() @ v)
                resid = resid - basis.T @ (basis.conj() @ resid)
                r = np.linalg.norm(resid)
                if tol * 1e-3 < r < tol * 1e3:
                    ambiguous = True
                if r > tol:
                    q = resid / r
                    basis = np.vstack([basis, q])
                    new.append(q.reshape(n, n))
                    if basis.shape[0] == n * n:
                        return n * n, ambiguous
        frontier = new
    return basis.shape[0], ambiguous


def is_irreducible(s: MatrixSpace) -> tuple[bool, Matrix | None]:
    """Decide irreducibility; returns (flag, witness invariant subspace or None).

    Over F_p every projective point is closed under the action, which is sound
    and complete. Over machine complex the Burnside criterion is used: the
    generated algebra is all of M(n) iff the space is irreducible.
    """
    if not s.square:
        raise ShapeError("irreducibility needs a square space")
    n, f = s.rows, s.field
    if n <= 1:
        return True, None
    if f.kind == "C64":
        d, _ = burnside_algebra_dim([b.to_numpy() for b in s.basis], n)
        return d == n * n, None
    _check_projective(n, f)
    grids = [b.grid for b in s.basis]
    for v in projective_points(n, f.p):
        c = _closure_rows(grids, [v], f, n)
        if len(c) < n:
            return False, subspace_matrix(c, f, n)
    return True, None


def _composition_length(grids: list, n: int, field: Field) -> int:
    if n == 0:
        return 0
    u = _min_closure(grids, field, n)
    d = len(u)
    if d == n:
        return 1
    pivots = []
    for row in u:
        pivots.append(next(j for j, x in enumerate(row) if x))
    comp = [[field.one if j == c else field.zero for j in range(n)]
            for c in range(n) if c not in pivots]
    p_mat = Matrix.raw(u + comp, field, n, n)
    p_inv = inverse(p_mat)
    quotient = []
    for g in grids:
        m = mat_mul(mat_mul(p_mat, Matrix.raw(g, field, n, n)), p_inv)
        quotient.append([list(r[d:]) for r in m.grid[d:]])
    return 1 + _composition_length(quotient, n - d, field)


def composition_series_length(s: MatrixSpace) -> int:
    """c(S): length of a maximal chain of invariant subspaces."""
    if not s.square:
        raise ShapeError("composition series need a square space")
    _check_projective(s.rows, s.field)
    return _composition_length([b.grid for b in s.basis], s.rows, s.field)


# induced subspaces


def _full_row_rank(t: Matrix):
    if rank_rows(t.tolist(), t.field, t.cols) != t.rows:
        raise ValueError("spanning rows must be linearly independent")


def induced_subspace_LR(s: MatrixSpace, t_left: Matrix, t_right: Matrix) -> MatrixSpace:
    """S[L, R] = {T_L B T_R^t}, with L, R given by independent spanning rows."""
    f = s.field
    if not f.exact:
        raise FieldError("induced_subspace_LR needs an exact field")
    check_same(f, t_left.field, t_right.field)
    if t_left.cols != s.rows or t_right.cols != s.cols:
        raise ShapeError("spanning rows do not match the ambient space")
    _full_row_rank(t_left)
    _full_row_rank(t_right)
    tr_t = t_right.T
    mats = [mat_mul(mat_mul(t_left, b), tr_t) for b in s.basis]
    return MatrixSpace(mats, f, t_left.rows, t_right.rows)


def coordinate_rows(vertices: Sequence[int], n: int, field: Field) -> Matrix:
    vs = sorted(vertices)
    return Matrix.raw([[field.one if j == v else field.zero for j in range(n)] for v in vs],
                      field, len(vs), n)


def orthonormal_rows(u: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Modified Gram-Schmidt on the rows of u (complex), dropping dependent rows."""
    out = []
    for v in np.asarray(u, dtype=complex):
        w = v.copy()
        for q in out:
            w = w - np.vdot(q, w) * q
        nw = np.linalg.norm(w)
        if nw > tol:
            out.append(w / nw)
    return np.array(out, dtype=complex).reshape(len(out), u.shape[1] if np.ndim(u) == 2 else 0)


def induced_subspace_U(s: MatrixSpace, u: Matrix | np.ndarray) -> MatrixSpace:
    """S[U] = {T_U B T_U^*} with T_U an orthonormal basis of U (rows)."""
    if not s.square:
        raise ShapeError("S[U] needs a square space")
    f = s.field
    if f.kind == "C64":
        arr = u.to_numpy() if isinstance(u, Matrix) else np.asarray(u, dtype=complex)
        q = orthonormal_rows(arr)
        mats = [q @ b.to_numpy() @ q.conj().T for b in s.basis]
        k = q.shape[0]
        return MatrixSpace([Matrix(m.tolist(), f, k, k) for m in mats], f, k, k)
    if not isinstance(u, Matrix):
        u = Matrix(np.asarray(u).tolist(), f)
    verts = []
    for row in u.grid:
        nz = [j for j, x in enumerate(row) if x]
        if len(nz) != 1 or row[nz[0]] != f.one:
            raise FieldError("exact induced subspaces accept only coordinate subspaces")
        verts.append(nz[0])
    if len(set(verts)) != len(verts):
        raise ValueError("repeated coordinate vector")
    t = coordinate_rows(verts, s.rows, f)
    mats = [mat_mul(mat_mul(t, b), t.H) for b in s.basis]
    return MatrixSpace(mats, f, t.rows, t.rows)


def left_kernel_rows(rows: list[list], field: Field, ncols: int) -> list[list]:
    """Basis of {c : sum_k c_k rows[k] = 0}."""
    cols_as_rows = [list(c) for c in zip(*rows)] if rows else []
    if not rows:
        return []
    return right_kernel_rows(cols_as_rows, field, len(rows))
