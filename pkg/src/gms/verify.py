"""Theorem-by-theorem verification harness.

Each check computes the graph side and the matrix-space side of one
correspondence on one instance and records both values. A case is
"verified" when both sides come from exact, complete procedures and agree,
"explored-lower-bound" when the space side is a certified lower bound plus
random exploration, and "counterexample" otherwise. A counterexample halts
the run and writes a standalone reproduction file.
"""
from __future__ import annotations

import functools
import itertools
import json
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactmath import Matrix, mat_mul
from .fields import QQ, Field, parse_field
from .graphcore import (
    BipartiteGraph,
    Digraph,
    all_bipartite,
    all_digraphs,
    automorphisms,
    bipartite_canonical_form,
    digraph_classes,
    find_cycle_by_matching,
    find_cycle_by_squaring,
    is_cycle_of,
    is_embedding,
    is_strongly_connected,
    isomorphic,
    max_acyclic_subgraph_brute,
    max_acyclic_subgraph_size,
    max_bd_mat_ord,
    max_bd_mat_size,
    max_cover_bounded_size,
    max_cycle_cover_vertices,
    max_ind_nsc_order,
    max_induced_acyclic_order,
    max_matching,
    max_nsc_size,
    max_nsc_size_brute,
    max_walk_len,
    min_line_cover,
    scc,
)
from .io import graph_from_json, graph_to_json, jsonable
from .matspace import (
    MatrixSpace,
    composition_series_length,
    coordinate_rows,
    graphical_space,
    induced_subspace_LR,
    induced_subspace_U,
    is_invariant,
    is_irreducible,
    max_bd_rank_dim,
    max_bd_rank_ord,
    max_eigen_bounded_dim,
    max_nil_dim,
    max_rank,
    max_rdc_dim,
    nil_index,
    nil_to_acyclic_subgraph,
    nilpotent_index,
    supporting_graph,
    zero_eigenvalue_min,
)

VERIFIED = "verified"
EXPLORED = "explored-lower-bound"
COUNTEREXAMPLE = "counterexample"

ALIASES = {"T1.6": "T4.2", "T1.8": "T5.1"}
GL_CAP = 2 * 10**6
EXPLORE_TOL = 1e-6


class CounterexampleFound(AssertionError):
    def __init__(self, case: "TheoremCase", path: str | None):
        super().__init__(f"counterexample to {case.theorem_id}; reproduction written to {path}")
        self.case = case
        self.path = path


@dataclass(frozen=True)
class TheoremCase:
    theorem_id: str
    instance: dict
    graph_side: object
    space_side: object
    status: str
    detail: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"theorem_id": self.theorem_id, "instance": jsonable(self.instance),
                "graph_side": jsonable(self.graph_side), "space_side": jsonable(self.space_side),
                "status": self.status, "detail": jsonable(self.detail)}

    @classmethod
    def from_json(cls, d: dict) -> "TheoremCase":
        return cls(d["theorem_id"], d["instance"], d["graph_side"], d["space_side"],
                   d["status"], d.get("detail", {}))


def _case(tid, instance, graph_side, space_side, agree: bool, detail=None, explored=False):
    status = COUNTEREXAMPLE if not agree else (EXPLORED if explored else VERIFIED)
    return TheoremCase(tid, instance, graph_side, space_side, status, detail or {})


def _inst(g, field: Field | None = None, **extra) -> dict:
    d = {"graph": graph_to_json(g)}
    if field is not None:
        d["field"] = field.tag
    d.update(extra)
    return d


# exhaustive general linear groups over small prime fields


def _batch_det(a: np.ndarray, p: int) -> np.ndarray:
    """Leibniz determinant of a stack of small matrices, mod p."""
    nb, n, _ = a.shape
    out = np.zeros(nb, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = np.ones(nb, dtype=np.int64)
        for i in range(n):
            term = term * a[:, i, perm[i]] % p
        out = (out + (term if inv % 2 == 0 else -term)) % p
    return out


def enumerate_gl(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """All of GL(n, F_p) and the matching inverses, as int64 stacks."""
    if p ** (n * n) > GL_CAP:
        raise ValueError(f"GL({n}, {p}) enumeration exceeds the cap")
    idx = np.arange(p ** (n * n), dtype=np.int64)
    digits = np.empty((idx.size, n * n), dtype=np.int64)
    for k in range(n * n):
        digits[:, k] = idx % p
        idx //= p
    mats = digits.reshape(-1, n, n)
    d = _batch_det(mats, p)
    keep = d != 0
    mats, d = mats[keep], d[keep]
    dinv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)[d]
    adj = np.empty_like(mats)
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(n) if c != j]
            minor = mats[:, rows][:, :, cols] if n > 1 else np.ones((len(mats), 0, 0), np.int64)
            md = _batch_det(minor, p) if n > 1 else np.ones(len(mats), dtype=np.int64)
            adj[:, j, i] = md * (1 if (i + j) % 2 == 0 else -1) % p
    inv = adj * dinv[:, None, None] % p
    return mats, inv


def _image_masks(arcs: Iterable[tuple[int, int]], left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Union of supports of outer(left[:, :, i], right[:, j, :]) over the arcs, as bool (N, n, n)."""
    nb, n, _ = left.shape
    out = np.zeros((nb, n, n), dtype=bool)
    for i, j in arcs:
        out |= (left[:, :, i] != 0)[:, :, None] & (right[:, j, :] != 0)[:, None, :]
    return out


def _arc_mask(g: Digraph) -> np.ndarray:
    m = np.zeros((g.n, g.n), dtype=bool)
    for i, j in g.arcs:
        m[i, j] = True
    return m


def conjugation_images(g: Digraph, gl: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Support of T S_G T^{-1} for every T."""
    t, tinv = gl
    return _image_masks(g.arcs, t, tinv)


def congruence_images(g: Digraph, gl: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Support of T S_G T^t for every T."""
    t, _ = gl
    return _image_masks(g.arcs, t, np.transpose(t, (0, 2, 1)))


def _contained(images: np.ndarray, h: Digraph) -> np.ndarray:
    hm = _arc_mask(h)
    return ~(images & ~hm[None]).reshape(len(images), -1).any(axis=1)


# per-theorem checks


def check_t13(g: BipartiteGraph, field: Field) -> TheoremCase:
    s = graphical_space(g, field)
    gs = max_matching(g)[0]
    ss = max_rank(s, exhaustive=True)
    return _case("T1.3", _inst(g, field), gs, ss, gs == ss)


def check_t14(g: BipartiteGraph, field: Field, r: int, brute: bool = False) -> TheoremCase:
    s = graphical_space(g, field)
    gs = max_bd_mat_size(g, r)[0]
    w = max_bd_rank_dim(s, r)
    detail = {"witness_verified": w.verify()}
    ok = gs == w.certified_value and detail["witness_verified"]
    if brute:
        detail["enumerate"] = max_bd_rank_dim(s, r, method="enumerate").certified_value
        ok = ok and detail["enumerate"] == gs
    return _case("T1.4", _inst(g, field, r=r), gs, w.certified_value, ok, detail)


def check_t15(g: BipartiteGraph, field: Field, r: int) -> TheoremCase:
    s = graphical_space(g, field)
    gs = max_bd_mat_ord(g, r)[0]
    ss, (left, right) = max_bd_rank_ord(s, r)
    return _case("T1.5", _inst(g, field, r=r), gs, ss, gs == ss,
                 {"L": left, "R": right})


def check_t42(g: Digraph, field: Field) -> TheoremCase:
    s = graphical_space(g, field)
    gs = max_walk_len(g) + 1
    ni, npi = nil_index(s), nilpotent_index(s)
    return _case("T4.2", _inst(g, field), gs, {"nil_index": ni, "nilpotent_index": npi},
                 gs == ni == npi)


def check_t44(g: Digraph, field: Field) -> TheoremCase:
    """Largest r with G r-acyclic against the least zero-eigenvalue multiplicity."""
    s = graphical_space(g, field)
    gs = g.n - max_cycle_cover_vertices(g)
    ss = zero_eigenvalue_min(s)
    return _case("T4.4", _inst(g, field), gs, ss, gs == ss)


def check_t17(g: Digraph, field: Field, brute: bool = False) -> TheoremCase:
    s = graphical_space(g, field)
    gs = max_acyclic_subgraph_size(g)
    w = max_nil_dim(s)
    sub = nil_to_acyclic_subgraph(w.subspace) if w.certified_value else Digraph(g.n)
    construction_ok = (len(sub.arcs) >= w.certified_value and sub.arcs <= g.arcs
                       and max_walk_len(sub) != math.inf)
    detail = {"witness_verified": w.verify(), "acyclic_from_witness": len(sub.arcs),
              "construction_ok": construction_ok}
    ok = gs == w.certified_value and detail["witness_verified"] and construction_ok
    if brute:
        detail["graph_brute"] = max_acyclic_subgraph_brute(g)[0]
        detail["space_enumerate"] = max_nil_dim(s, method="enumerate").certified_value
        ok = ok and detail["graph_brute"] == gs == detail["space_enumerate"]
    return _case("T1.7", _inst(g, field), gs, w.certified_value, ok, detail)


def check_t51(g: Digraph, field: Field) -> TheoremCase:
    s = graphical_space(g, field)
    gs = scc(g)[1]
    ss = composition_series_length(s)
    return _case("T5.1", _inst(g, field), gs, ss, gs == ss)


def check_t19(g: Digraph, field: Field, brute: bool = False) -> TheoremCase:
    s = graphical_space(g, field)
    gs = max_nsc_size(g)
    w = max_rdc_dim(s)
    detail = {"witness_verified": w.verify()}
    ok = gs == w.certified_value and detail["witness_verified"]
    if brute:
        detail["graph_brute"] = max_nsc_size_brute(g)
        detail["space_enumerate"] = max_rdc_dim(s, method="enumerate").certified_value
        ok = ok and detail["graph_brute"] == gs == detail["space_enumerate"]
    return _case("T1.9", _inst(g, field), gs, w.certified_value, ok, detail)


def check_t113(g: Digraph, h: Digraph, field: Field, gl=None) -> TheoremCase:
    """Isomorphic, conjugate and congruent must agree, by exhaustive GL(n, F_p).

    The embedding form for congruence (G embeds in H iff S_G is congruent to
    a subspace of S_H) is checked alongside.
    """
    if not field.is_prime_field:
        raise ValueError("exhaustive GL needs a prime field")
    gl = gl or enumerate_gl(g.n, field.p)
    same = len(g.arcs) == len(h.arcs)
    conj_in = _contained(conjugation_images(g, gl), h)
    cong_in = _contained(congruence_images(g, gl), h)
    iso = isomorphic(g, h) is not None
    conj = bool(same and conj_in.any())
    cong = bool(same and cong_in.any())
    embeds = any(is_embedding(g, h, list(p)) for p in itertools.permutations(range(g.n)))
    cong_sub = bool(cong_in.any())
    inst = {"g": graph_to_json(g), "h": graph_to_json(h), "field": field.tag}
    detail = {"embeds": embeds, "congruent_into": cong_sub}
    return _case("T1.13", inst, iso, {"conjugate": conj, "congruent": cong},
                 iso == conj == cong and embeds == cong_sub, detail)


def _span_mod_p(mats: np.ndarray, p: int, n: int) -> list[list[int]]:
    """Row space of the flattened stack, by elimination over F_p."""
    a = mats.reshape(len(mats), -1) % p
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    for col in range(n * n):
        if not len(a):
            break
        nz = np.nonzero(a[:, col])[0]
        if not len(nz):
            continue
        row = a[nz[0]] * pow(int(a[nz[0], col]), -1, p) % p
        a = (a - a[:, col:col + 1] * row[None]) % p
        a = a[a.any(axis=1)]
        for k, b in enumerate(basis):
            basis[k] = (b - b[col] * row) % p
        basis.append(row)
        pivots.append(col)
    return [list(map(int, b)) for b in basis]


def _group_space(mats: np.ndarray, field: Field, n: int) -> MatrixSpace:
    rows = _span_mod_p(mats, field.p, n)
    return MatrixSpace([Matrix([r[i * n:(i + 1) * n] for i in range(n)], field) for r in rows],
                       field, n, n)


def verify_transitivity(g: Digraph, field: Field | str = "Fp:3") -> TheoremCase:
    """Vertex transitivity against conjugacy and congruence irreducibility.

    The invertible monomial matrices built from automorphisms lie in both
    stabilizers and generate an irreducible group iff Aut(G) is transitive,
    which settles the forward direction for every n. When GL(n, F_p) is small
    enough, both stabilizers are enumerated in full and tested directly.
    """
    field = parse_field(field)
    if not field.is_prime_field or field.p < 3:
        raise ValueError("transitivity needs a prime field of order > 2")
    if g.n > 10:
        raise ValueError("orbit computation is capped at n <= 10")
    n, f = g.n, field
    gens, orbits, transitive = automorphisms(g)
    mono = [Matrix.elementary(n, n, i, i, f) for i in range(n)]
    for perm in gens:
        mono.append(Matrix([[f.one if perm[c] == r else f.zero for c in range(n)]
                            for r in range(n)], f, n, n))
    mono_irr = is_irreducible(MatrixSpace(mono, f, n, n))[0] if n else True
    detail = {"orbits": [[v + 1 for v in o] for o in orbits], "monomial_irreducible": mono_irr}
    inst = _inst(g, f)
    if n and f.p ** (n * n) <= GL_CAP // 10:
        gl = enumerate_gl(n, f.p)
        em = _arc_mask(g)
        conj = gl[0][_contained(conjugation_images(g, gl), g)]
        cong = gl[0][_contained(congruence_images(g, gl), g)]
        conj_irr = is_irreducible(_group_space(conj, f, n))[0]
        cong_irr = is_irreducible(_group_space(cong, f, n))[0]
        detail.update({"conj_order": len(conj), "cong_order": len(cong), "exhaustive": True,
                       "arc_count": int(em.sum())})
        return _case("T1.14", inst, transitive, {"conjugacy_irreducible": conj_irr,
                                                 "congruence_irreducible": cong_irr},
                     transitive == conj_irr == cong_irr == mono_irr, detail)
    detail["exhaustive"] = False
    space = {"conjugacy_irreducible": True if mono_irr else None,
             "congruence_irreducible": True if mono_irr else None}
    # without the full stabilizers only the forward direction is certified
    return _case("T1.14", inst, transitive, space, transitive == mono_irr, detail,
                 explored=not transitive)


def check_a1(g: Digraph) -> TheoremCase:
    by_square = find_cycle_by_squaring(g)
    by_match = find_cycle_by_matching(g)
    valid = (by_match is None or is_cycle_of(g, by_match)) and \
            (by_square is None or is_cycle_of(g, by_square))
    return _case("A.1", _inst(g), by_square is not None, by_match is not None,
                 valid and (by_square is None) == (by_match is None),
                 {"squaring_cycle": [v + 1 for v in by_square] if by_square else None,
                  "matching_cycle": [v + 1 for v in by_match] if by_match else None})


# conjecture explorer


def explore_atkinson(n_max: int = 3, field: Field | str = "Fp:2", n_min: int | None = None,
                     loops: bool = True, dedup: bool = False, workers: int = 1,
                     halt: bool = True, repro_dir: str | None = None) -> list[TheoremCase]:
    """Cycle-cover bounded subgraphs against eigenvalue bounded subspaces, every k.

    Evidence only: agreement on small cases does not settle the conjecture.
    """
    field = parse_field(field)
    graphs = _digraphs(n_max, n_min, loops, dedup)
    jobs = [(g, k) for g in graphs for k in range(g.n + 1)]
    return _run("C1.16", jobs, lambda job: check_c116(job[0], field, job[1]), workers, halt,
                repro_dir)


def check_c116(g: Digraph, field: Field, k: int) -> TheoremCase:
    gs = max_cover_bounded_size(g, k)
    w = max_eigen_bounded_dim(graphical_space(g, field), k)
    n = g.n
    detail = {"witness_verified": w.verify()}
    ok = gs == w.certified_value and detail["witness_verified"]
    if len(g.arcs) == n * n:
        bound = n * k + math.comb(n - k, 2)
        detail["complete_bound"] = bound
        ok = ok and gs == bound
    return _case("C1.16", _inst(g, field, k=k), gs, w.certified_value, ok, detail)


# the two examples from the isomorphism section


def _ex_cong(field: Field) -> TheoremCase:
    g = Digraph(2, [(0, 1), (1, 0)])
    h = Digraph(2, [(0, 1)])
    # every nonempty subgraph of G contains a copy of H
    subgraphs = [Digraph(2, sub) for size in (1, 2)
                 for sub in itertools.combinations(sorted(g.arcs), size)]
    graph_side = 0 if all(any(is_embedding(h, sg, list(p))
                              for p in itertools.permutations(range(2))) for sg in subgraphs) \
        else None
    # the symmetric line <[[0,x],[x,0]]> holds no congruent copy of S_H
    t, _ = enumerate_gl(2, field.p)
    images = np.einsum("ni,nj->nij", t[:, :, 0], t[:, :, 1]) % field.p
    sym = np.array([[0, 1], [1, 0]])
    in_line = np.zeros(len(t), dtype=bool)
    for c in range(1, field.p):
        in_line |= (images == c * sym % field.p).reshape(len(t), -1).all(axis=1)
    space_side = 1 if not in_line.any() else 0
    return _case("EX-CONG", {"g": graph_to_json(g), "h": graph_to_json(h), "field": field.tag},
                 graph_side, space_side, graph_side == 0 and space_side == 1,
                 {"gl_order": len(t)})


EX_CONJ_T = [[1, 0, 1], [1, 1, 1], [0, 1, 1]]


def _ex_conj(field: Field, t_rows=EX_CONJ_T, expect_containment: bool = True) -> TheoremCase:
    from .exactmath import inverse

    g = Digraph(3, [(0, 0), (1, 1)])
    h = Digraph(3, [(i, j) for i in range(3) for j in range(3) if (i, j) not in ((0, 0), (2, 2))])
    sg, sh = graphical_space(g, field), graphical_space(h, field)
    t = Matrix(t_rows, field)
    ti = inverse(t)
    contained = all(sh.contains(mat_mul(mat_mul(t, b), ti)) for b in sg.basis)
    embeds = any(is_embedding(g, h, list(p)) for p in itertools.permutations(range(3)))
    ok = (contained == expect_containment) and not embeds
    return _case("EX-CONJ", {"g": graph_to_json(g), "h": graph_to_json(h), "field": field.tag,
                             "T": t_rows},
                 {"embeds": embeds}, {"conjugate_into": contained}, ok,
                 {"expected_containment": expect_containment})


def reproduce_counterexamples() -> list[TheoremCase]:
    return [_ex_cong(parse_field("Fp:2")), _ex_cong(parse_field("Fp:3")),
            _ex_conj(QQ), _ex_conj(parse_field("Fp:3")),
            _ex_conj(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], expect_containment=False)]


# induced correspondences over C: certified witnesses plus random exploration


def _haar_rows(rng: np.random.Generator, size: int, k: int, n: int) -> np.ndarray:
    """size x k x n stacks with orthonormal rows spanning Haar-random k-subspaces."""
    z = rng.standard_normal((size, n, k)) + 1j * rng.standard_normal((size, n, k))
    q, _ = np.linalg.qr(z)
    return np.conj(np.transpose(q, (0, 2, 1)))


def induced_nil_measure(t: np.ndarray, arcs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Largest norm of a length-k product of basis elements of S_G[U], per sample.

    S_G[U] is spanned by r_i r_j^* (r_i = column i of T_U), so a product along
    arcs a_1..a_k equals r_{i_1} r_{j_k}^* times the inner products
    <r_{j_t}, r_{i_{t+1}}>, and the space is nilpotent (hence nil) iff every
    such product vanishes. A max-times recursion over arcs gives the maximum.
    """
    nb, k, n = t.shape
    if not arcs:
        return np.zeros(nb)
    gram = np.abs(np.einsum("sxj,sxi->sji", np.conj(t), t))
    norms = np.linalg.norm(t, axis=1)
    src = np.array([i for i, _ in arcs])
    dst = np.array([j for _, j in arcs])
    w = norms[:, src]
    step = gram[:, dst][:, :, src]
    for _ in range(k - 1):
        w = (w[:, :, None] * step).max(axis=1)
    return (w * norms[:, dst]).max(axis=1)


def _orthonormalize(a: np.ndarray, tol: float) -> np.ndarray:
    """Batched modified Gram-Schmidt on columns; dependent columns come back as zero."""
    q = np.zeros_like(a)
    for c in range(a.shape[2]):
        w = a[:, :, c].copy()
        for d in range(c):
            w -= np.einsum("sx,sx->s", np.conj(q[:, :, d]), w)[:, None] * q[:, :, d]
        nw = np.linalg.norm(w, axis=1)
        keep = nw > tol
        q[keep, :, c] = w[keep] / nw[keep, None]
    return q


def _column_rank(q: np.ndarray) -> np.ndarray:
    return (np.linalg.norm(q, axis=1) > 0.5).sum(axis=1)


def induced_reducible(t: np.ndarray, g: Digraph, tol: float = EXPLORE_TOL) -> np.ndarray:
    """Exact reducibility test of S_G[U] for spaces spanned by r_i r_j^*, up to tol.

    V is invariant iff r_l^* lies in V for every arc (i, l) with V r_i != 0.
    For a proper invariant V, W = span{r_l^* : l out of some i with V r_i != 0}
    is invariant and lies in V; W = 0 forces V orthogonal to every r_i with an
    out-arc. So S_G[U] is reducible iff those r_i fail to span C^k, or some
    nonempty vertex set J gives a proper nonzero invariant span{r_j^* : j in J}.
    """
    nb, k, n = t.shape
    out = np.zeros(nb, dtype=bool)
    if k <= 1:
        return out
    succ = g.out_neighbors()
    movers = [i for i in range(n) if succ[i]]
    if len(movers) < k:
        out[:] = True
        return out
    out |= _column_rank(_orthonormalize(t[:, :, movers], tol)) < k
    arcs = g.sorted_arcs()
    for size in range(1, n + 1):
        for js in itertools.combinations(range(n), size):
            q = _orthonormalize(t[:, :, list(js)], tol)
            rank = _column_rank(q)
            proj = np.einsum("sxa,sxi->sai", np.conj(q), t)
            touched = np.linalg.norm(proj, axis=1) > tol
            resid = np.linalg.norm(t - np.einsum("sxa,sai->sxi", q, proj), axis=1)
            inside = resid <= tol
            bad = np.zeros(nb, dtype=bool)
            for i, l in arcs:
                bad |= touched[:, i] & ~inside[:, l]
            out |= (rank > 0) & (rank < k) & ~bad
    return out


def induced_rank_profile(g: BipartiteGraph, s: int, t: int, rng, samples: int,
                         tol: float = EXPLORE_TOL, elements: int = 2) -> np.ndarray:
    """Largest numerical rank seen in S_G[L, R] per sample, for random L, R of dims s, t."""
    tl = _haar_rows(rng, samples, s, g.m)
    tr = _haar_rows(rng, samples, t, g.n)
    worst = np.zeros(samples, dtype=np.int64)
    edges = g.sorted_edges()
    for _ in range(elements):
        c = np.zeros((samples, g.m, g.n), dtype=complex)
        for i, j in edges:
            c[:, i, j] = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
        x = tl @ c @ np.transpose(tr, (0, 2, 1))
        sv = np.linalg.svd(x, compute_uv=False)
        worst = np.maximum(worst, (sv > tol).sum(axis=1))
    return worst


@functools.lru_cache(maxsize=1024)
def _rank_profile(key: str, a: int, b: int, samples: int, seed: int, tol: float) -> np.ndarray:
    rng = np.random.default_rng(_instance_seed(seed, f"{key}|{a}|{b}"))
    return induced_rank_profile(graph_from_json(json.loads(key)), a, b, rng, samples, tol)


def _instance_seed(seed: int, key: str) -> int:
    return (seed * 1_000_003 + zlib.crc32(key.encode())) % 2**63


def _ind_nsc_witness(g: Digraph) -> set[int] | None:
    for size in range(g.n, 1, -1):
        for subset in itertools.combinations(range(g.n), size):
            if not is_strongly_connected(g.induced(subset)):
                return set(subset)
    return None


def explore_t111(g: Digraph, samples: int = 1000, seed: int = 0,
                 tol: float = EXPLORE_TOL) -> TheoremCase:
    """Induced acyclic order against induced nil dimension over C."""
    order, witness = max_induced_acyclic_order(g)
    s = graphical_space(g, QQ)
    sub = induced_subspace_U(s, coordinate_rows(sorted(witness), g.n, QQ)) if witness else None
    certified = order if (sub is None or nilpotent_index(sub) != math.inf) else -1
    rng = np.random.default_rng(_instance_seed(seed, json.dumps(_inst(g), sort_keys=True)))
    arcs = g.sorted_arcs()
    exceed = {}
    for k in range(order + 1, g.n + 1):
        t = _haar_rows(rng, samples, k, g.n)
        exceed[k] = int((induced_nil_measure(t, arcs) <= tol).sum())
    ok = certified == order and not any(exceed.values())
    return _case("T1.11", _inst(g, None, samples=samples, seed=seed), order, certified, ok,
                 {"witness": [v + 1 for v in sorted(witness)], "exceedances": exceed},
                 explored=True)


def explore_t110(g: Digraph, samples: int = 1000, seed: int = 0,
                 tol: float = EXPLORE_TOL) -> TheoremCase:
    """Induced non-strongly-connected order against induced reducible dimension over C."""
    order = max_ind_nsc_order(g)
    witness = _ind_nsc_witness(g)
    certified = 0
    if witness:
        vs = sorted(witness)
        s = graphical_space(g, QQ)
        sub = induced_subspace_U(s, coordinate_rows(vs, g.n, QQ))
        comps, _ = scc(g.induced(vs))
        # the last component in topological order is closed under successors
        sink = comps[-1]
        u = Matrix([[QQ.one if c == v else QQ.zero for c in range(len(vs))] for v in sink],
                   QQ, len(sink), len(vs))
        if 0 < u.rows < sub.rows and is_invariant(sub, u):
            certified = len(vs)
    rng = np.random.default_rng(_instance_seed(seed, json.dumps(_inst(g), sort_keys=True)))
    exceed = {}
    for k in range(max(order + 1, 2), g.n + 1):
        t = _haar_rows(rng, samples, k, g.n)
        exceed[k] = int(induced_reducible(t, g, tol).sum())
    ok = certified == order and not any(exceed.values())
    return _case("T1.10", _inst(g, None, samples=samples, seed=seed), order, certified, ok,
                 {"witness": [v + 1 for v in sorted(witness or ())], "exceedances": exceed},
                 explored=True)


def explore_t15(g: BipartiteGraph, r: int, samples: int = 1000, seed: int = 0,
                tol: float = EXPLORE_TOL) -> TheoremCase:
    """Induced bounded matching order against induced bounded rank order over C."""
    order, (v1, v2) = max_bd_mat_ord(g, r)
    s = graphical_space(g, QQ)
    certified = -1
    if not v1 or not v2:
        certified = order
    else:
        sub = induced_subspace_LR(s, coordinate_rows(sorted(v1), g.m, QQ),
                                  coordinate_rows(sorted(v2), g.n, QQ))
        support = supporting_graph(sub, bipartite=True)
        # every element lives on at most rho lines, so its rank is at most rho
        if sub.is_graphical() and min_line_cover(support)[0] <= r:
            certified = order
    # samples depend on (graph, a, b) only, so every r reuses them
    key = json.dumps(graph_to_json(g), sort_keys=True)
    exceed = {}
    for a in range(1, g.m + 1):
        for b in range(1, g.n + 1):
            if a + b > order:
                w = _rank_profile(key, a, b, samples, seed, tol)
                exceed[f"{a}+{b}"] = int((w <= r).sum())
    ok = certified == order and not any(exceed.values())
    return _case("T1.5", _inst(g, None, r=r, samples=samples, seed=seed), order, certified, ok,
                 {"witness": [[v + 1 for v in sorted(v1)], [v + 1 for v in sorted(v2)]],
                  "exceedances": exceed}, explored=True)


# drivers


def _digraphs(n_max: int, n_min: int | None, loops: bool, dedup: bool) -> list[Digraph]:
    lo = n_max if n_min is None else n_min
    out = []
    for n in range(lo, n_max + 1):
        if dedup:
            out.extend(g for g, _ in digraph_classes(n, loops))
        else:
            out.extend(all_digraphs(n, loops))
    return out


def _bipartites(n_max: int, n_min: int | None, dedup: bool) -> list[BipartiteGraph]:
    lo = n_max if n_min is None else n_min
    out = []
    for n in range(lo, n_max + 1):
        seen = set()
        for g in all_bipartite(n, n):
            if dedup:
                key = bipartite_canonical_form(g)
                if key in seen:
                    continue
                seen.add(key)
            out.append(g)
    return out


def write_reproduction(case: TheoremCase, directory: str | None = None) -> str:
    directory = directory or os.environ.get("GMS_REPRO_DIR") or os.getcwd()
    os.makedirs(directory, exist_ok=True)
    key = zlib.crc32(json.dumps(case.to_json(), sort_keys=True).encode())
    path = os.path.join(directory, f"counterexample-{case.theorem_id}-{key:08x}.json")
    with open(path, "w") as fh:
        json.dump(case.to_json(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


def _run(tid: str, jobs: list, fn: Callable, workers: int, halt: bool,
         repro_dir: str | None) -> list[TheoremCase]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            cases = list(ex.map(fn, jobs))
    else:
        cases = [fn(j) for j in jobs]
    for c in cases:
        if c.status == COUNTEREXAMPLE:
            path = write_reproduction(c, repro_dir)
            if halt:
                raise CounterexampleFound(c, path)
    return cases


THEOREMS = ("T1.3", "T1.4", "T1.5", "T4.2", "T4.4", "T1.7", "T1.11", "T5.1", "T1.9", "T1.10",
            "T1.13", "T1.14", "C1.16", "EX-CONG", "EX-CONJ", "A.1")


def verify_theorem(theorem_id: str, graphs: Sequence | None = None, n_max: int = 2,
                   field: Field | str | None = None, n_min: int | None = None, loops: bool = True,
                   dedup: bool = False, brute: bool = False, samples: int = 1000,
                   seed: int = 0, workers: int = 1, halt: bool = True,
                   repro_dir: str | None = None) -> list[TheoremCase]:
    """Run one theorem over explicit graphs or all graphs with n_min <= n <= n_max.

    n_min defaults to n_max. The field defaults to F_2, or F_3 for T1.14. Bipartite theorems use m = n. Induced
    correspondences over C (T1.10, T1.11) are explored with `samples` random
    subspaces per tested dimension; T1.5 is exhaustive over F_p and explored
    the same way over C64.
    """
    tid = ALIASES.get(theorem_id, theorem_id)
    if tid not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    f = parse_field(field or ("Fp:3" if tid == "T1.14" else "Fp:2"))
    if tid in ("EX-CONG", "EX-CONJ"):
        return [c for c in reproduce_counterexamples() if c.theorem_id == tid]
    if tid == "C1.16":
        if graphs is None:
            return explore_atkinson(n_max, f, n_min, loops, dedup, workers, halt, repro_dir)
        jobs = [(g, k) for g in graphs for k in range(g.n + 1)]
        return _run(tid, jobs, lambda j: check_c116(j[0], f, j[1]), workers, halt, repro_dir)
    if tid in ("T1.3", "T1.4", "T1.5"):
        gs = list(graphs) if graphs is not None else _bipartites(n_max, n_min, dedup)
        if tid == "T1.3":
            return _run(tid, gs, lambda g: check_t13(g, f), workers, halt, repro_dir)
        jobs = [(g, r) for g in gs for r in range(min(g.m, g.n) + 1)]
        if tid == "T1.4":
            fn = lambda j: check_t14(j[0], f, j[1], brute)  # noqa: E731
        elif f.kind == "C64":
            fn = lambda j: explore_t15(j[0], j[1], samples, seed)  # noqa: E731
        else:
            fn = lambda j: check_t15(j[0], f, j[1])  # noqa: E731
        return _run(tid, jobs, fn, workers, halt, repro_dir)
    gs = list(graphs) if graphs is not None else _digraphs(n_max, n_min, loops, dedup)
    if tid == "T1.13":
        gls = {}

        def pair(job):
            g, h = job
            if g.n not in gls:
                gls[g.n] = enumerate_gl(g.n, f.p)
            return check_t113(g, h, f, gls[g.n])

        if gs:
            gls[gs[0].n] = enumerate_gl(gs[0].n, f.p)
        jobs = [(g, h) for g in gs for h in gs if g.n == h.n]
        return _run(tid, jobs, pair, workers, halt, repro_dir)
    fns = {
        "T4.2": lambda g: check_t42(g, f),
        "T4.4": lambda g: check_t44(g, f),
        "T1.7": lambda g: check_t17(g, f, brute),
        "T5.1": lambda g: check_t51(g, f),
        "T1.9": lambda g: check_t19(g, f, brute),
        "T1.14": lambda g: verify_transitivity(g, f),
        "A.1": check_a1,
        "T1.11": lambda g: explore_t111(g, samples, seed),
        "T1.10": lambda g: explore_t110(g, samples, seed),
    }
    return _run(tid, gs, fns[tid], workers, halt, repro_dir)


def reverify(case: TheoremCase | dict) -> TheoremCase:
    """Recompute a case from its stored instance alone (a case or its JSON form)."""
    if isinstance(case, dict):
        case = TheoremCase.from_json(case)
    inst = case.instance
    tid = case.theorem_id
    if tid in ("EX-CONG", "EX-CONJ"):
        f = parse_field(inst["field"])
        if tid == "EX-CONG":
            return _ex_cong(f)
        expect = case.detail.get("expected_containment", True)
        return _ex_conj(f, inst["T"], expect)
    if tid == "T1.13":
        return check_t113(graph_from_json(inst["g"]), graph_from_json(inst["h"]),
                          parse_field(inst["field"]))
    g = graph_from_json(inst["graph"])
    f = parse_field(inst["field"]) if "field" in inst else None
    if tid == "T1.3":
        return check_t13(g, f)
    if tid == "T1.4":
        return check_t14(g, f, inst["r"], "enumerate" in case.detail)
    if tid == "T1.5":
        if "samples" in inst:
            return explore_t15(g, inst["r"], inst["samples"], inst["seed"])
        return check_t15(g, f, inst["r"])
    if tid == "C1.16":
        return check_c116(g, f, inst["k"])
    simple = {"T4.2": check_t42, "T4.4": check_t44, "T5.1": check_t51}
    if tid in simple:
        return simple[tid](g, f)
    if tid == "T1.7":
        return check_t17(g, f, "graph_brute" in case.detail)
    if tid == "T1.9":
        return check_t19(g, f, "graph_brute" in case.detail)
    if tid == "T1.14":
        return verify_transitivity(g, f)
    if tid == "A.1":
        return check_a1(g)
    if tid == "T1.11":
        return explore_t111(g, inst["samples"], inst["seed"])
    if tid == "T1.10":
        return explore_t110(g, inst["samples"], inst["seed"])
    raise ValueError(f"unknown theorem id {tid!r}")


def summarize(cases: Sequence[TheoremCase]) -> dict:
    counts = {VERIFIED: 0, EXPLORED: 0, COUNTEREXAMPLE: 0}
    for c in cases:
        counts[c.status] += 1
    return {"pass": counts[VERIFIED], "explored": counts[EXPLORED],
            "fail": counts[COUNTEREXAMPLE], "total": len(cases)}
