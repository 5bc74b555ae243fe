"""Affine matrix pencils, randomized identity tests and the determinant reductions.

A pencil is B(x) = B_0 + sum_i x_i B_i over an exact field. Randomized tests
sample points from F_p (sample set = the field) or, over Q, from integers in
[-N, N]; reported error bounds use the Schwartz-Zippel lemma with the actual
sample-set size.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactmath import Matrix, ShapeError, det, linear_combination, mat_mul
from .fields import Field, FieldError, check_same

MONOMIAL_BUDGET = 10**6


class FieldTooSmall(ValueError):
    """Raised when the sample set cannot give a useful Schwartz-Zippel bound."""


class NonHomogeneousPencil(ValueError):
    pass


class SymbolicMatrix:
    """B_0 + sum x_i B_i; all components share shape and field."""

    __slots__ = ("constant", "coeffs", "field")

    def __init__(self, constant: Matrix, coeffs: Sequence[Matrix]):
        f = constant.field
        for c in coeffs:
            check_same(f, c.field)
            if c.shape != constant.shape:
                raise ShapeError("pencil components differ in shape")
        if not f.exact:
            raise FieldError("pencils need an exact field")
        self.constant = constant
        self.coeffs = tuple(coeffs)
        self.field = f

    @classmethod
    def of_space(cls, mats: Sequence[Matrix], field: Field, rows: int, cols: int) -> "SymbolicMatrix":
        """Homogeneous pencil x_1 A_1 + ... + x_m A_m."""
        return cls(Matrix.zeros(rows, cols, field), list(mats))

    @property
    def shape(self) -> tuple[int, int]:
        return self.constant.shape

    @property
    def n(self) -> int:
        return self.constant.rows

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def is_homogeneous(self) -> bool:
        return self.constant.is_zero()

    def __eq__(self, other):
        return (isinstance(other, SymbolicMatrix) and self.constant == other.constant
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"SymbolicMatrix({self.shape[0]}x{self.shape[1]}, m={self.m}, {self.field.tag})"


def evaluate(b: SymbolicMatrix, point: Sequence) -> Matrix:
    if len(point) != b.m:
        raise ValueError(f"expected {b.m} coordinates, got {len(point)}")
    f = b.field
    r, c = b.shape
    return linear_combination([f.one] + [f(x) for x in point], [b.constant, *b.coeffs], r, c, f)


def graph_pencil(space) -> SymbolicMatrix:
    """Homogeneous pencil of a matrix space (one variable per basis matrix)."""
    return SymbolicMatrix.of_space(space.basis, space.field, space.rows, space.cols)


# randomized tests


@dataclass(frozen=True)
class PitOutcome:
    """verdict is Nonzero/ProbablyZero, NotNil/ProbablyNil or No/ProbablyYes."""

    verdict: str
    witness: tuple | None
    error_bound: float | None
    seed: int
    trials: int
    sample_size: int
    detail: dict = dc_field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.witness is not None


def _sample_set(b: SymbolicMatrix, degree: int, hint: int | None) -> tuple[int, callable]:
    f = b.field
    if f.kind == "Fp":
        if hint is not None and f.p < hint:
            raise FieldTooSmall(f"F_{f.p} is smaller than the requested sample size {hint}")
        return f.p, lambda rng, k: [int(x) for x in rng.integers(0, f.p, k)]
    big = max(2 * degree * degree, 1)
    if hint is not None:
        big = max(big, (hint + 1) // 2)
    return 2 * big + 1, lambda rng, k: [Fraction(int(x)) for x in rng.integers(-big, big + 1, k)]


def _trial_rngs(seed: int, trials: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


_VERDICTS = {"sdit": ("Nonzero", "ProbablyZero"), "snt": ("NotNil", "ProbablyNil"),
             "nilindex": ("No", "ProbablyYes")}


def _exact_fallback(b, seed, trials, size, test, k) -> PitOutcome:
    """Small sample sets give no bound below 1; decide by exact expansion instead."""
    try:
        if test == "sdit":
            zero = not pencil_det_poly(b)
        else:
            zero = pencil_power_is_zero(b, k)
    except OverflowError as exc:
        raise FieldTooSmall("sample set too small for a Schwartz-Zippel bound below 1 "
                            "and the exact expansion is too large") from exc
    yes, no = _VERDICTS[test]
    return PitOutcome(no if zero else yes, None, 0.0 if zero else None, seed, trials, size,
                      {"method": "exact"})


def _bound(per_trial: float, trials: int) -> float:
    if per_trial >= 1:
        raise FieldTooSmall("sample set too small for a Schwartz-Zippel bound below 1")
    return per_trial ** trials


def sdit_random(b: SymbolicMatrix, trials: int = 10, field_size_hint: int | None = None,
                seed: int = 0) -> PitOutcome:
    """Is det(B) the zero polynomial? Nonzero is certified by a witness point."""
    if b.shape[0] != b.shape[1]:
        raise ShapeError("determinant of a non-square pencil")
    n = b.n
    size, draw = _sample_set(b, n, field_size_hint)
    per = n / size
    if per >= 1:
        return _exact_fallback(b, seed, trials, size, "sdit", n)
    for rng in _trial_rngs(seed, trials):
        pt = draw(rng, b.m)
        if det(evaluate(b, pt)):
            return PitOutcome("Nonzero", tuple(pt), None, seed, trials, size)
    return PitOutcome("ProbablyZero", None, _bound(per, trials), seed, trials, size)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p in int64 for p < 2^31, splitting b into 16-bit halves."""
    n = a.shape[-1]
    if (p - 1) ** 2 * max(n, 1) < 2**63:
        return (a @ b) % p
    lo = b & 0xFFFF
    hi = b >> 16
    return ((a @ lo) % p + ((a @ hi) % p) * 65536 % p) % p


def _power_at(b: SymbolicMatrix, pt: Sequence, k: int) -> Matrix:
    m = evaluate(b, pt)
    f = b.field
    if f.kind == "Fp":
        a = m.to_numpy()
        acc = a.copy()
        for _ in range(k - 1):
            acc = _matmul_mod(acc, a, f.p)
        return Matrix.raw(acc.tolist(), f, m.rows, m.cols)
    acc = m
    for _ in range(k - 1):
        acc = mat_mul(acc, m)
    return acc


def snt_random(b: SymbolicMatrix, trials: int = 10, field_size_hint: int | None = None,
               seed: int = 0) -> PitOutcome:
    """Is the space spanned by the pencil nil, i.e. B^n identically zero?

    The bound takes degree n per entry and a union over the n^2 entries, as
    the contract asks; it is never smaller than the single-entry bound.
    """
    if not b.is_homogeneous():
        raise NonHomogeneousPencil("nil testing needs a homogeneous pencil")
    n = b.n
    size, draw = _sample_set(b, n, field_size_hint)
    per = n * n * n / size
    if per >= 1:
        return _exact_fallback(b, seed, trials, size, "snt", n)
    for rng in _trial_rngs(seed, trials):
        pt = draw(rng, b.m)
        pw = _power_at(b, pt, n)
        if not pw.is_zero():
            i, j = min(pw.support())
            return PitOutcome("NotNil", tuple(pt), None, seed, trials, size,
                              {"entry": (i, j), "value": pw[i, j]})
    return PitOutcome("ProbablyNil", None, _bound(per, trials), seed, trials, size)


def nilindex_at_most(b: SymbolicMatrix, k: int, trials: int = 10,
                     field_size_hint: int | None = None, seed: int = 0) -> PitOutcome:
    """Is B(x)^k identically zero? No is certified by a point with a nonzero entry."""
    if b.shape[0] != b.shape[1]:
        raise ShapeError("powers of a non-square pencil")
    if k < 1:
        raise ValueError("k must be positive")
    size, draw = _sample_set(b, k, field_size_hint)
    per = k / size
    if per >= 1:
        return _exact_fallback(b, seed, trials, size, "nilindex", k)
    for rng in _trial_rngs(seed, trials):
        pt = draw(rng, b.m)
        pw = _power_at(b, pt, k)
        if not pw.is_zero():
            i, j = min(pw.support())
            return PitOutcome("No", tuple(pt), None, seed, trials, size,
                              {"entry": (i, j), "value": pw[i, j]})
    return PitOutcome("ProbablyYes", None, _bound(per, trials), seed, trials, size)


# exact expansion


def _poly_matrix(b: SymbolicMatrix) -> list[list[dict]]:
    r, c = b.shape
    m = b.m
    zero_exp = (0,) * m
    out = [[{} for _ in range(c)] for _ in range(r)]
    for i in range(r):
        for j in range(c):
            d = out[i][j]
            if b.constant[i, j]:
                d[zero_exp] = b.constant[i, j]
            for v, cm in enumerate(b.coeffs):
                if cm[i, j]:
                    e = [0] * m
                    e[v] = 1
                    d[tuple(e)] = cm[i, j]
    return out


def _poly_mat_mul(a, b, field: Field, budget: list) -> list[list[dict]]:
    n, k, c = len(a), len(b), len(b[0]) if b else 0
    norm = field.norm
    out = []
    for i in range(n):
        row = []
        for j in range(c):
            acc: dict = {}
            for t in range(k):
                pa, pb = a[i][t], b[t][j]
                if not pa or not pb:
                    continue
                for ea, ca in pa.items():
                    for eb, cb in pb.items():
                        e = tuple(x + y for x, y in zip(ea, eb))
                        acc[e] = norm(acc.get(e, field.zero) + ca * cb)
            acc = {e: v for e, v in acc.items() if v}
            budget[0] += len(acc)
            if budget[0] > MONOMIAL_BUDGET:
                raise OverflowError("symbolic expansion exceeded the monomial budget")
            row.append(acc)
        out.append(row)
    return out


def pencil_power(b: SymbolicMatrix, k: int) -> list[list[dict]]:
    """Entries of B^k as sparse maps exponent-tuple -> coefficient."""
    base = _poly_matrix(b)
    acc = base
    budget = [0]
    for _ in range(k - 1):
        acc = _poly_mat_mul(acc, base, b.field, budget)
    return acc


def pencil_power_is_zero(b: SymbolicMatrix, k: int) -> bool:
    if b.shape[0] != b.shape[1]:
        raise ShapeError("powers of a non-square pencil")
    return all(not e for row in pencil_power(b, k) for e in row)


def pencil_det_poly(b: SymbolicMatrix) -> dict:
    """det(B) as a sparse polynomial, by Leibniz expansion (small n only)."""
    import itertools

    n = b.n
    if n > 7:
        raise OverflowError("Leibniz expansion is capped at n <= 7")
    pm = _poly_matrix(b)
    f = b.field
    total: dict = {}
    budget = [0]
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = [[{(0,) * b.m: f.one if inv % 2 == 0 else f.norm(-f.one)}]]
        for i in range(n):
            term = _poly_mat_mul(term, [[pm[i][perm[i]]]], f, budget)
        for e, v in term[0][0].items():
            total[e] = f.norm(total.get(e, f.zero) + v)
    return {e: v for e, v in total.items() if v}


# determinant as an algebraic branching program


def _affine_entry(b: SymbolicMatrix, u: int, v: int, scale) -> tuple:
    f = b.field
    return (f.norm(scale * b.constant[u, v]),
            [f.norm(scale * c[u, v]) for c in b.coeffs])


def abp_nodes(n: int) -> list[tuple[int, int]]:
    """Layer nodes (h, u) with u >= h: current clow head h and current vertex u."""
    return [(h, u) for h in range(n) for u in range(h, n)]


def det_abp(b: SymbolicMatrix) -> list[SymbolicMatrix]:
    """Affine t x t matrices C_1..C_{n+1} whose product has det(B) in entry (1, 1).

    Paths through the layered graph are clow sequences: a clow with head h
    visits only vertices > h and closes back to h, heads strictly increase,
    and the total length is n. Each closed clow contributes a factor -1 and
    the source edge carries (-1)^n, which gives the clow-sequence sign
    (-1)^(n + #clows). Index 0 doubles as source and sink.
    """
    if b.shape[0] != b.shape[1]:
        raise ShapeError("determinant of a non-square pencil")
    f = b.field
    n, m = b.n, b.m
    nodes = abp_nodes(n)
    pos = {v: k for k, v in enumerate(nodes)}
    t = len(nodes)
    minus = f.norm(-f.one)
    sign_n = f.one if n % 2 == 0 else minus

    def blank():
        return [[f.zero] * t for _ in range(t)], [[[f.zero] * t for _ in range(t)] for _ in range(m)]

    def put(mats, i, j, entry):
        c0, cs = mats
        c0[i][j] = f.norm(c0[i][j] + entry[0])
        for v in range(m):
            cs[v][i][j] = f.norm(cs[v][i][j] + entry[1][v])

    def build(mats) -> SymbolicMatrix:
        c0, cs = mats
        return SymbolicMatrix(Matrix.raw(c0, f, t, t), [Matrix.raw(c, f, t, t) for c in cs])

    layers = []
    first = blank()
    for h in range(n):
        put(first, 0, pos[(h, h)], (sign_n, [f.zero] * m))
    layers.append(build(first))
    for _ in range(n - 1):
        mid = blank()
        for (h, u) in nodes:
            for v in range(h + 1, n):
                put(mid, pos[(h, u)], pos[(h, v)], _affine_entry(b, u, v, f.one))
            for h2 in range(h + 1, n):
                put(mid, pos[(h, u)], pos[(h2, h2)], _affine_entry(b, u, h, minus))
        layers.append(build(mid))
    last = blank()
    for (h, u) in nodes:
        put(last, pos[(h, u)], 0, _affine_entry(b, u, h, minus))
    layers.append(build(last))
    return layers


def abp_product_entry(layers: Sequence[SymbolicMatrix], point: Sequence) -> object:
    acc = None
    for c in layers:
        e = evaluate(c, point)
        acc = e if acc is None else mat_mul(acc, e)
    return acc[0, 0]


def sdit_to_nilindex(b: SymbolicMatrix) -> tuple[SymbolicMatrix, int]:
    """Block-superdiagonal T with blocks C_0, C_1..C_l, C_{l+1}; C_0 = C_{l+1} = E_11.

    T^(l+2) has the single block C_0 C_1 ... C_{l+1} = det(B) E_11, so
    T^(l+2) = 0 iff det(B) is the zero polynomial, while T^(l+3) = 0 always.
    """
    f = b.field
    layers = det_abp(b)
    ell = len(layers)
    t = layers[0].shape[0]
    e11 = SymbolicMatrix(Matrix.elementary(t, t, 0, 0, f), [Matrix.zeros(t, t, f)] * b.m)
    blocks = [e11, *layers, e11]
    nb = ell + 3
    size = nb * t
    c0 = [[f.zero] * size for _ in range(size)]
    cs = [[[f.zero] * size for _ in range(size)] for _ in range(b.m)]
    for k, blk in enumerate(blocks):
        r0, col0 = k * t, (k + 1) * t
        for i in range(t):
            for j in range(t):
                c0[r0 + i][col0 + j] = blk.constant[i, j]
                for v in range(b.m):
                    cs[v][r0 + i][col0 + j] = blk.coeffs[v][i, j]
    tm = SymbolicMatrix(Matrix.raw(c0, f, size, size), [Matrix.raw(c, f, size, size) for c in cs])
    return tm, ell + 2
