"""Maximum-dimension subspace searches, witnesses and constructions from nil spaces."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from ..exactmath import Matrix, mat_mul, rank_rows, right_kernel_rows, rref_rows
from ..fields import Field, check_same
from ..graphcore import BipartiteGraph, Digraph, is_acyclic, min_line_cover
from .space import (
    ENUM_CAP,
    InfeasibleError,
    MatrixSpace,
    _check_projective,
    batch_nilpotency_index,
    batch_rank,
    batch_zero_eigen_multiplicity,
    coordinate_vectors,
    element_array,
    enumerate_subspaces,
    gaussian_binomial,
    is_irreducible,
    is_invariant,
    left_kernel_rows,
    rref_coordinate_matrices,
    subspace_matrix,
)


class NotNilError(ValueError):
    """Raised when a construction that needs a nil space meets a non-nilpotent element."""


@dataclass(frozen=True)
class SubspaceWitness:
    """A certified subspace: kind is rank-bounded, nil, reducible, eigen-bounded or induced."""

    kind: str
    certified_value: int
    subspace: MatrixSpace
    data: dict = dc_field(default_factory=dict)

    def verify(self) -> bool:
        s = self.subspace
        if s.dim != self.certified_value and self.kind != "induced":
            return False
        if self.kind == "reducible":
            u = self.data.get("invariant")
            if s.rows <= 1:
                return s.dim == 0
            return u is not None and 0 < u.rows < s.rows and is_invariant(s, u)
        if s.dim == 0:
            return True
        arr = element_array(s)
        p = s.field.p
        if self.kind == "rank-bounded":
            return int(batch_rank(arr, p).max()) <= self.data["r"]
        if self.kind == "nil":
            return bool(np.isfinite(batch_nilpotency_index(arr, p)).all())
        if self.kind == "eigen-bounded":
            n = s.rows
            return int((n - batch_zero_eigen_multiplicity(arr, p)).max()) <= self.data["k"]
        return False


# generic searches for subspaces inside a set of good elements


def _max_good_subspace(d: int, p: int, good: np.ndarray) -> list[np.ndarray]:
    """Exact branch and bound for a largest subspace of F_p^d inside good | {0}.

    C(W) = {x not in W : span(W, x) is good}. Adding v gives
    C(W + <v>) = {u : u + c v in C(W) for every c in F_p}, and any subspace
    above W lies in W | C(W), which bounds its dimension by log_p(|W| + |C|).
    Returns coordinate vectors of a basis of an optimal subspace.
    """
    n_el = p ** d
    digits = coordinate_vectors(d, p)
    pw = p ** np.arange(d, dtype=np.int64)

    def add(xs: np.ndarray, y: np.ndarray) -> np.ndarray:
        return ((digits[xs] + y) % p) @ pw

    ok = good.copy()
    ok[0] = False
    for c in range(2, p):
        ok &= good[((digits * c) % p) @ pw]
    best: list = [0, []]

    def floor_log(x: int) -> int:
        t = 0
        while p ** (t + 1) <= x:
            t += 1
        return t

    def rec(in_w: np.ndarray, w_size: int, basis: list, cand: np.ndarray):
        if len(basis) > best[0]:
            best[0], best[1] = len(basis), list(basis)
        in_c = np.zeros(n_el, dtype=bool)
        in_c[cand] = True
        while len(cand):
            if floor_log(w_size + len(cand)) <= best[0]:
                return
            vd = digits[cand[0]]
            w_idx = np.nonzero(in_w)[0]
            new_w = in_w.copy()
            for c in range(1, p):
                new_w[add(w_idx, (c * vd) % p)] = True
            mask = ~new_w[cand]
            for c in range(1, p):
                mask &= in_c[add(cand, (c * vd) % p)]
            rec(new_w, w_size * p, basis + [vd.copy()], cand[mask])
            # span(W, v) minus W has been explored; drop it from later branches
            drop = new_w[cand]
            in_c[cand[drop]] = False
            cand = cand[~drop]

    start = np.zeros(n_el, dtype=bool)
    start[0] = True
    rec(start, 1, [], np.nonzero(ok)[0])
    return best[1]


def _search_basis(s: MatrixSpace, good: np.ndarray, method: str) -> list[Matrix]:
    p = s.field.p
    if method == "search":
        coords = _max_good_subspace(s.dim, p, good)
        return [s.element([int(x) for x in c]) for c in coords]
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    digits_pw = p ** np.arange(s.dim, dtype=np.int64)
    for d in range(s.dim, -1, -1):
        if gaussian_binomial(s.dim, d, p) > ENUM_CAP:
            raise InfeasibleError(f"too many {d}-dimensional subspaces")
        for rows in rref_coordinate_matrices(s.dim, d, p):
            if d == 0:
                return []
            sub = np.array(rows, dtype=np.int64)
            span_coords = (coordinate_vectors(d, p) @ sub) % p
            if good[span_coords @ digits_pw].all():
                return [s.element(r) for r in rows]
    return []


def _good_mask(s: MatrixSpace, predicate: Callable[[np.ndarray, int], np.ndarray]) -> np.ndarray:
    arr = element_array(s)
    return predicate(arr, s.field.p)


def max_bd_rank_dim(s: MatrixSpace, r: int, method: str = "search") -> SubspaceWitness:
    """Largest subspace whose every element has rank <= r."""
    good = _good_mask(s, lambda a, p: batch_rank(a, p) <= r)
    basis = _search_basis(s, good, method)
    sub = MatrixSpace(basis, s.field, s.rows, s.cols)
    return SubspaceWitness("rank-bounded", sub.dim, sub, {"r": r})


def max_nil_dim(s: MatrixSpace, method: str = "search") -> SubspaceWitness:
    """Largest nil subspace."""
    good = _good_mask(s, lambda a, p: np.isfinite(batch_nilpotency_index(a, p)))
    basis = _search_basis(s, good, method)
    sub = MatrixSpace(basis, s.field, s.rows, s.cols)
    return SubspaceWitness("nil", sub.dim, sub)


def max_eigen_bounded_dim(s: MatrixSpace, k: int, method: str = "search") -> SubspaceWitness:
    """Largest subspace whose every element has at most k nonzero eigenvalues."""
    n = s.rows
    good = _good_mask(s, lambda a, p: (n - batch_zero_eigen_multiplicity(a, p)) <= k)
    basis = _search_basis(s, good, method)
    sub = MatrixSpace(basis, s.field, s.rows, s.cols)
    return SubspaceWitness("eigen-bounded", sub.dim, sub, {"k": k})


def stabilizer_subspace(s: MatrixSpace, u_rows: list[list]) -> MatrixSpace:
    """{B in S : U B <= U} for U given by independent rows."""
    f, n = s.field, s.rows
    # columns of q span the annihilator of U, so U B <= U iff U B q = 0
    q = right_kernel_rows(u_rows, f, n)
    u = Matrix.raw(u_rows, f, len(u_rows), n)
    if not q:
        return s
    qm = Matrix.raw([list(c) for c in zip(*q)], f, n, len(q))
    rows = [list(mat_mul(mat_mul(u, b), qm).flat()) for b in s.basis]
    coeffs = left_kernel_rows(rows, f, len(u_rows) * len(q))
    mats = [s.element(c) for c in coeffs]
    return MatrixSpace(mats, f, n, n)


def proper_subspaces(n: int, p: int):
    for d in range(1, n):
        yield from rref_coordinate_matrices(n, d, p)


def max_rdc_dim(s: MatrixSpace, method: str = "stabilizer") -> SubspaceWitness:
    """Largest reducible subspace.

    Every reducible subspace lies in the stabilizer of one of its proper
    invariant subspaces U, and each stabilizer is itself reducible, so the
    maximum is max_U dim Stab_S(U) over proper nonzero U. The "enumerate"
    method walks all subspaces downward instead and serves as a cross-check.
    For n <= 1 nothing is reducible and 0 is returned by convention.
    """
    f, n = s.field, s.rows
    if not s.square:
        raise ValueError("reducibility needs a square space")
    if n <= 1:
        return SubspaceWitness("reducible", 0, MatrixSpace.zero(n, n, f), {"convention": True})
    _check_projective(n, f)
    if method == "stabilizer":
        best = None
        for rows in proper_subspaces(n, f.p):
            rows = [[f(x) for x in r] for r in rows]
            st = stabilizer_subspace(s, rows)
            if best is None or st.dim > best[0].dim:
                best = (st, rows)
                if st.dim == s.dim:
                    break
        st, rows = best
        return SubspaceWitness("reducible", st.dim, st,
                               {"invariant": subspace_matrix(rows, f, n)})
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    for d in range(s.dim, -1, -1):
        for sub in enumerate_subspaces(s, d):
            irr, wit = is_irreducible(sub)
            if not irr:
                return SubspaceWitness("reducible", d, sub, {"invariant": wit})
    raise AssertionError("the zero subspace is reducible for n >= 2")


# constructions from nil spaces


def find_adapted_vector(s: MatrixSpace) -> int:
    """Smallest j (0-based) such that no nonzero element is supported in row j alone."""
    f, n = s.field, s.rows
    for j in range(n):
        rows = []
        for b in s.basis:
            rows.append([x for i, r in enumerate(b.grid) if i != j for x in r])
        if not left_kernel_rows(rows, f, (n - 1) * s.cols):
            return j
    raise NotNilError("no adapted standard vector; the space is not nil")


def _nil_acyclic(grids: list, labels: list[int], field: Field) -> set[tuple[int, int]]:
    n = len(labels)
    if n == 0:
        return set()
    space = MatrixSpace([Matrix.raw(g, field, n, n) for g in grids], field, n, n)
    if n == 1:
        if space.dim:
            raise NotNilError("nonzero 1 x 1 element is not nilpotent")
        return set()
    j = find_adapted_vector(space)
    into_j = {(labels[i], labels[j]) for b in space.basis for i in range(n)
              if i != j and b[i, j]}
    # T = {M : column j vanishes off the diagonal}; recurse on A(T) = M minus row/col j
    rows = [[b[i, j] for i in range(n) if i != j] for b in space.basis]
    coeffs = left_kernel_rows(rows, field, n - 1)
    keep = [i for i in range(n) if i != j]
    sub = []
    for c in coeffs:
        m = space.element(c)
        sub.append([[m[a, b] for b in keep] for a in keep])
    inner = _nil_acyclic(sub, [labels[i] for i in keep], field)
    return inner | into_j


def nil_to_acyclic_subgraph(s: MatrixSpace) -> Digraph:
    """Acyclic spanning subgraph of the support with at least dim(s) arcs."""
    if not s.field.exact:
        raise ValueError("nil_to_acyclic_subgraph needs an exact field")
    arcs = _nil_acyclic([b.grid for b in s.basis], list(range(s.rows)), s.field)
    g = Digraph(s.rows, arcs)
    if not is_acyclic(g) or len(arcs) < s.dim:
        raise NotNilError("construction failed; the input is not nil")
    return g


def meshulam_witness(mats: Sequence[Matrix], budget: int = 2000, seed: int = 0
                     ) -> tuple[BipartiteGraph, int, Matrix]:
    """Lex-first-entry pattern, its line-cover number rho, and an element of rank >= rho."""
    if not mats:
        raise ValueError("empty matrix list")
    f = mats[0].field
    rows, cols = mats[0].shape
    for m in mats:
        check_same(f, m.field)
    red, piv = rref_rows([list(m.flat()) for m in mats], f, rows * cols)
    pattern = BipartiteGraph(rows, cols, [divmod(c, cols) for c in piv])
    rho = min_line_cover(pattern)[0]
    space = MatrixSpace(mats, f, rows, cols)
    if f.is_prime_field and f.p ** space.dim <= ENUM_CAP:
        arr = element_array(space)
        ranks = batch_rank(arr, f.p)
        idx = int(np.argmax(ranks >= rho))
        if ranks[idx] < rho:
            raise AssertionError("no element reaches rho; the max-rank bound fails")
        return pattern, rho, Matrix.raw(arr[idx].tolist(), f, rows, cols)
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        if f.is_prime_field:
            coords = [int(x) for x in rng.integers(0, f.p, space.dim)]
        else:
            coords = [int(x) for x in rng.integers(-1000, 1001, space.dim)]
        m = space.element(coords)
        if rank_rows(m.tolist(), f, cols) >= rho:
            return pattern, rho, m
    raise InfeasibleError(f"no element of rank >= {rho} found within {budget} random trials")


def max_bd_rank_ord(s: MatrixSpace, r: int) -> tuple[int, tuple[list, list]]:
    """Largest dim L + dim R with every element of S[L, R] of rank <= r.

    Exhaustive over all pairs of subspaces of F_p^rows and F_p^cols, visited by
    decreasing order; the first pair found is optimal. Returns the order and
    the RREF spanning rows of L and R.
    """
    f = s.field
    if not f.is_prime_field:
        raise InfeasibleError("order search needs a prime field")
    p, m, n = f.p, s.rows, s.cols
    if sum(gaussian_binomial(m, a, p) for a in range(m + 1)) * \
            sum(gaussian_binomial(n, b, p) for b in range(n + 1)) > ENUM_CAP:
        raise InfeasibleError("too many subspace pairs")
    elems = element_array(s)
    for order in range(m + n, -1, -1):
        for a in range(max(0, order - n), min(m, order) + 1):
            b = order - a
            if a == 0 or b == 0 or min(a, b) <= r:
                left = next(rref_coordinate_matrices(m, a, p))
                right = next(rref_coordinate_matrices(n, b, p))
                return order, (left, right)
            for left in rref_coordinate_matrices(m, a, p):
                tl = np.array(left, dtype=np.int64)
                part = np.matmul(tl[None], elems) % p
                for right in rref_coordinate_matrices(n, b, p):
                    tr = np.array(right, dtype=np.int64)
                    img = np.matmul(part, tr.T[None]) % p
                    if int(batch_rank(img, p).max()) <= r:
                        return order, (left, right)
    raise AssertionError("the zero pair always qualifies")
