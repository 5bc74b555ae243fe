"""Dense linear algebra over exact fields (and a thin machine-complex layer).

Matrices act on row vectors from the right, so kernels are left kernels:
``kernel_basis(m)`` spans ``{v : v m = 0}``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .fields import Field, FieldError, check_same


class ShapeError(ValueError):
    """Raised when matrix shapes are incompatible."""


class SingularMatrixError(ValueError):
    """Raised when an inverse is requested for a singular matrix."""


class Matrix:
    """Immutable dense matrix carrying its field tag."""

    __slots__ = ("rows", "cols", "field", "_e", "_hash")

    def __init__(self, entries: Sequence[Sequence], field: Field, rows: int | None = None,
                 cols: int | None = None):
        grid = tuple(tuple(field(x) for x in row) for row in entries)
        r = len(grid) if rows is None else rows
        c = (len(grid[0]) if grid else 0) if cols is None else cols
        if len(grid) != r or any(len(row) != c for row in grid):
            raise ShapeError("ragged or mis-sized entry grid")
        self._set(grid, field, r, c)

    def _set(self, grid, field, r, c):
        object.__setattr__(self, "_e", grid)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "cols", c)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def raw(cls, grid, field: Field, rows: int | None = None, cols: int | None = None) -> "Matrix":
        """Wrap an already-canonical grid without coercion."""
        m = cls.__new__(cls)
        g = tuple(tuple(row) for row in grid)
        r = len(g) if rows is None else rows
        c = (len(g[0]) if g else 0) if cols is None else cols
        m._set(g, field, r, c)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # construction helpers

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "Matrix":
        z = field.zero
        return cls.raw([[z] * cols for _ in range(rows)], field, rows, cols)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        z, o = field.zero, field.one
        return cls.raw([[o if i == j else z for j in range(n)] for i in range(n)], field, n, n)

    @classmethod
    def elementary(cls, rows: int, cols: int, i: int, j: int, field: Field) -> "Matrix":
        """E_{i,j} with 0-based indices."""
        z, o = field.zero, field.one
        return cls.raw([[o if (a, b) == (i, j) else z for b in range(cols)] for a in range(rows)],
                       field, rows, cols)

    @classmethod
    def from_vector(cls, vec: Sequence, field: Field) -> "Matrix":
        return cls([list(vec)], field)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._e]

    @property
    def grid(self) -> tuple[tuple, ...]:
        return self._e

    def flat(self) -> tuple:
        return tuple(x for r in self._e for x in r)

    def is_zero(self, tol: float = 0.0) -> bool:
        f = self.field
        return all(f.is_zero(x, tol) for r in self._e for x in r)

    def support(self) -> set[tuple[int, int]]:
        return {(i, j) for i, r in enumerate(self._e) for j, x in enumerate(r) if x}

    def to_numpy(self) -> np.ndarray:
        f = self.field
        if f.kind == "Fp":
            return np.array(self._e, dtype=np.int64).reshape(self.rows, self.cols)
        return np.array([[complex(x) for x in r] for r in self._e],
                        dtype=complex).reshape(self.rows, self.cols)

    # algebra

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._e == other._e

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.rows, self.cols, self._e)))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.tolist()!r}, {self.field.tag})"

    def __add__(self, other):
        return mat_add(self, other)

    def __sub__(self, other):
        return mat_add(self, scalar_mul(-self.field.one, other))

    def __neg__(self):
        return scalar_mul(-self.field.one, self)

    def __matmul__(self, other):
        return mat_mul(self, other)

    @property
    def T(self) -> "Matrix":
        return transpose(self)

    @property
    def H(self) -> "Matrix":
        return conj_transpose(self)


def _check(a: Matrix, b: Matrix) -> Field:
    return check_same(a.field, b.field)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    f = _check(a, b)
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    bt = list(zip(*b.grid)) if b.rows else [()] * b.cols
    norm = f.norm
    z = f.zero
    out = []
    for row in a.grid:
        out.append([norm(sum((x * y for x, y in zip(row, col) if x), z)) for col in bt])
    return Matrix.raw(out, f, a.rows, b.cols)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    f = _check(a, b)
    if a.shape != b.shape:
        raise ShapeError(f"cannot add {a.shape} and {b.shape}")
    norm = f.norm
    return Matrix.raw([[norm(x + y) for x, y in zip(r, s)] for r, s in zip(a.grid, b.grid)],
                      f, a.rows, a.cols)


def scalar_mul(c, a: Matrix) -> Matrix:
    f = a.field
    c = f(c)
    norm = f.norm
    return Matrix.raw([[norm(c * x) for x in r] for r in a.grid], f, a.rows, a.cols)


def transpose(a: Matrix) -> Matrix:
    return Matrix.raw(list(zip(*a.grid)) if a.rows else [], a.field, a.cols, a.rows)


def conj_transpose(a: Matrix) -> Matrix:
    conj = a.field.conj
    return Matrix.raw([[conj(x) for x in r] for r in zip(*a.grid)] if a.rows else [],
                      a.field, a.cols, a.rows)


def linear_combination(coeffs: Sequence, mats: Sequence[Matrix], rows: int, cols: int,
                       field: Field) -> Matrix:
    """Sum of c_i * M_i; returns the zero matrix for an empty list."""
    acc = [[field.zero] * cols for _ in range(rows)]
    for c, m in zip(coeffs, mats):
        if not c:
            continue
        g = m.grid
        for i in range(rows):
            ai, gi = acc[i], g[i]
            for j in range(cols):
                if gi[j]:
                    ai[j] = ai[j] + c * gi[j]
    norm = field.norm
    return Matrix.raw([[norm(x) for x in r] for r in acc], field, rows, cols)


def _require_exact(m: Matrix):
    if not m.field.exact:
        raise FieldError("exact field required (machine complex is not supported here)")


# row reduction on plain lists


def rref_rows(rows: list[list], field: Field, ncols: int) -> tuple[list[list], list[int]]:
    """Reduce a list of row lists in place; returns (nonzero rows, pivot columns)."""
    inv, norm = field.inv, field.norm
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        s = inv(pr[c])
        if s != field.one:
            pr = [norm(x * s) for x in pr]
            m[r] = pr
        for i in range(len(m)):
            if i != r:
                fac = m[i][c]
                if fac:
                    mi = m[i]
                    m[i] = [norm(a - fac * b) if b else a for a, b in zip(mi, pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_rows(rows: list[list], field: Field, ncols: int) -> int:
    """Rank by forward elimination only (cheaper than full rref)."""
    inv, norm = field.inv, field.norm
    m = [list(r) for r in rows if any(r)]
    rank = 0
    for c in range(ncols):
        if not m:
            break
        piv = None
        for i, row in enumerate(m):
            if row[c]:
                piv = i
                break
        if piv is None:
            continue
        pr = m.pop(piv)
        s = inv(pr[c])
        nm = []
        for row in m:
            fac = row[c]
            if fac:
                t = fac * s
                row = [norm(a - t * b) for a, b in zip(row, pr)]
                if not any(row):
                    continue
            nm.append(row)
        m = nm
        rank += 1
    return rank


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns (0-based)."""
    _require_exact(m)
    red, piv = rref_rows(m.tolist(), m.field, m.cols)
    z = m.field.zero
    full = red + [[z] * m.cols for _ in range(m.rows - len(red))]
    return Matrix.raw(full, m.field, m.rows, m.cols), len(piv), piv


def rank(m: Matrix) -> int:
    if not m.field.exact:
        return numerical_rank(m)
    return rank_rows(m.tolist(), m.field, m.cols)


def right_kernel_rows(rows: list[list], field: Field, ncols: int) -> list[list]:
    """Basis of {x : A x = 0} for A given by its rows."""
    red, piv = rref_rows(rows, field, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = []
    for fcol in free:
        v = [field.zero] * ncols
        v[fcol] = field.one
        for r, pc in enumerate(piv):
            v[pc] = field.norm(-red[r][fcol])
        out.append(v)
    return out


def kernel_basis(m: Matrix) -> list[Matrix]:
    """Basis of the left kernel {v : v m = 0} as 1 x rows matrices."""
    _require_exact(m)
    cols_as_rows = [list(c) for c in zip(*m.grid)] if m.rows else []
    vecs = right_kernel_rows(cols_as_rows, m.field, m.rows)
    return [Matrix.raw([v], m.field, 1, m.rows) for v in vecs]


def det(m: Matrix):
    if m.rows != m.cols:
        raise ShapeError("determinant of a non-square matrix")
    f = m.field
    if not f.exact:
        return complex(np.linalg.det(m.to_numpy()))
    a = m.tolist()
    n = m.rows
    d = f.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return f.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        pv = a[c][c]
        d = f.norm(d * pv)
        s = f.inv(pv)
        for i in range(c + 1, n):
            fac = a[i][c]
            if fac:
                t = fac * s
                a[i] = [f.norm(x - t * y) for x, y in zip(a[i], a[c])]
    return f.norm(d)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeError("inverse of a non-square matrix")
    f = m.field
    if not f.exact:
        inv_np = np.linalg.inv(m.to_numpy())
        return Matrix(inv_np.tolist(), f)
    n = m.rows
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(m.grid)]
    red, piv = rref_rows(aug, f, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise SingularMatrixError("matrix is singular")
    return Matrix.raw([r[n:] for r in red], f, n, n)


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


# characteristic polynomial


class Polynomial:
    """Univariate polynomial, coefficients low degree first, trimmed."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Iterable, field: Field):
        c = [field(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)
        self.field = field

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r}, {self.field.tag})"

    def trailing_zeros(self) -> int:
        """Multiplicity of 0 as a root; the zero polynomial reports its length 0."""
        k = 0
        for c in self.coeffs:
            if c:
                break
            k += 1
        return k

    def __call__(self, x):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.norm(acc * x + c)
        return acc

    def eval_matrix(self, m: Matrix) -> Matrix:
        """Horner evaluation at a square matrix."""
        f = self.field
        n = m.rows
        acc = Matrix.zeros(n, n, f)
        eye = Matrix.identity(n, f)
        for c in reversed(self.coeffs):
            acc = mat_add(mat_mul(acc, m), scalar_mul(c, eye))
        return acc


def char_poly_rows(a: Sequence[Sequence], field: Field) -> list:
    """Berkowitz recurrence: coefficients of det(xI - a), highest degree first.

    Division free, so it is valid over any commutative ring, in particular F_2.
    """
    n = len(a)
    if n == 0:
        return [field.one]
    norm = field.norm
    z = field.zero
    p = [field.one, norm(-a[n - 1][n - 1])]
    for k in range(n - 2, -1, -1):
        s = n - 1 - k
        rvec = a[k][k + 1:]
        v = [a[i][k] for i in range(k + 1, n)]
        col = [field.one, norm(-a[k][k])]
        sub = [a[i][k + 1:] for i in range(k + 1, n)]
        for _ in range(s):
            col.append(norm(-sum((x * y for x, y in zip(rvec, v)), z)))
            v = [norm(sum((x * y for x, y in zip(row, v)), z)) for row in sub]
        newp = []
        for i in range(s + 2):
            acc = z
            for j in range(max(0, i - 1 - s), min(i, s) + 1):
                acc = acc + col[i - j] * p[j]
            newp.append(norm(acc))
        p = newp
    return p


def char_poly(m: Matrix) -> Polynomial:
    """det(xI - m); the coefficient of x^(n-k) is (-1)^k times the sum of k x k principal minors."""
    if m.rows != m.cols:
        raise ShapeError("characteristic polynomial of a non-square matrix")
    _require_exact(m)
    hi = char_poly_rows(m.grid, m.field)
    return Polynomial(list(reversed(hi)), m.field)


def principal_minor_sum(m: Matrix, k: int):
    """E_k(m), the sum of all k x k principal minors."""
    n = m.rows
    c = char_poly(m).coeffs
    coeff = c[n - k] if n - k < len(c) else m.field.zero
    return m.field.norm(coeff if k % 2 == 0 else -coeff)


def mat_pow(m: Matrix, k: int) -> Matrix:
    if m.rows != m.cols:
        raise ShapeError("power of a non-square matrix")
    result = Matrix.identity(m.rows, m.field)
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def nilpotency_index(m: Matrix) -> float:
    """Smallest k with m^k = 0, or inf when m is not nilpotent."""
    n = m.rows
    if m.is_zero():
        return 1
    p = m
    for k in range(2, n + 1):
        p = mat_mul(p, m)
        if p.is_zero():
            return k
    return float("inf")


# machine complex


TOL = 1e-9


def numerical_rank(m: Matrix | np.ndarray, tol: float = TOL) -> int:
    a = m.to_numpy() if isinstance(m, Matrix) else np.asarray(m)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def eigenvalues(m: Matrix | np.ndarray) -> np.ndarray:
    a = m.to_numpy() if isinstance(m, Matrix) else np.asarray(m)
    return np.linalg.eigvals(a.astype(complex))
