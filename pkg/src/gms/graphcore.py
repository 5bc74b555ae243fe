"""Digraphs, bipartite graphs and the graph-side quantities of the correspondences.

Vertices are 0-based internally. Exponential quantities are exact brute force
with explicit size caps; they act as oracles, so no heuristics are used.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Iterator, Sequence

INF = float("inf")


class GraphTooLarge(ValueError):
    """Raised when an exact brute-force routine exceeds its size cap."""


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset = dc_field(default_factory=frozenset)

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        arcs = frozenset((int(i), int(j)) for i, j in arcs)
        for i, j in arcs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"arc ({i},{j}) out of range for n={n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "arcs", arcs)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def out_neighbors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for i, j in sorted(self.arcs):
            adj[i].append(j)
        return adj

    def in_neighbors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for i, j in sorted(self.arcs):
            adj[j].append(i)
        return adj

    def induced(self, vertices: Iterable[int]) -> "Digraph":
        """G[S], relabeled to 0..|S|-1 in increasing order of S."""
        vs = sorted(set(vertices))
        pos = {v: k for k, v in enumerate(vs)}
        return Digraph(len(vs), [(pos[i], pos[j]) for i, j in self.arcs if i in pos and j in pos])

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Image under vertex map i -> perm[i]."""
        return Digraph(self.n, [(perm[i], perm[j]) for i, j in self.arcs])

    def transpose(self) -> "Digraph":
        return Digraph(self.n, [(j, i) for i, j in self.arcs])

    def as_bipartite(self) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.n, self.arcs)

    def has_loops(self) -> bool:
        return any(i == j for i, j in self.arcs)

    def to_mask(self) -> int:
        return sum(1 << (i * self.n + j) for i, j in self.arcs)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Digraph":
        return cls(n, [(k // n, k % n) for k in range(n * n) if mask >> k & 1])


@dataclass(frozen=True)
class BipartiteGraph:
    m: int
    n: int
    edges: frozenset = dc_field(default_factory=frozenset)

    def __init__(self, m: int, n: int, edges: Iterable[tuple[int, int]] = ()):
        edges = frozenset((int(i), int(j)) for i, j in edges)
        for i, j in edges:
            if not (0 <= i < m and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for {m}x{n}")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.m)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
        return adj

    def induced(self, left: Iterable[int], right: Iterable[int]) -> "BipartiteGraph":
        ls, rs = sorted(set(left)), sorted(set(right))
        lp = {v: k for k, v in enumerate(ls)}
        rp = {v: k for k, v in enumerate(rs)}
        return BipartiteGraph(len(ls), len(rs),
                              [(lp[i], rp[j]) for i, j in self.edges if i in lp and j in rp])


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph; edges stored as sorted pairs, no loops."""

    n: int
    edges: frozenset = dc_field(default_factory=frozenset)

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        es = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError("simple graphs carry no loops")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for n={n}")
            es.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(es))

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def degrees(self) -> list[int]:
        d = [0] * self.n
        for i, j in self.edges:
            d[i] += 1
            d[j] += 1
        return d

    def symmetric_arcs(self) -> set[tuple[int, int]]:
        return {(i, j) for i, j in self.edges} | {(j, i) for i, j in self.edges}

    def looped_symmetrization(self) -> Digraph:
        """G-hat: both orientations of every edge plus a loop at every vertex."""
        return Digraph(self.n, self.symmetric_arcs() | {(i, i) for i in range(self.n)})


# matchings


def max_matching(g: BipartiteGraph) -> tuple[int, list[tuple[int, int]]]:
    """Hopcroft-Karp maximum matching; neighbors scanned in increasing order."""
    adj = g.adjacency()
    match_l = [-1] * g.m
    match_r = [-1] * g.n
    dist = [0] * g.m

    def bfs() -> bool:
        q = deque()
        found = False
        for u in range(g.m):
            if match_l[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = -1
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == -1:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative augmenting-path search along the BFS layering
        stack = [(root, iter(adj[root]))]
        path = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                w = match_r[v]
                if w == -1:
                    path.append((u, v))
                    for a, b in path:
                        match_l[a] = b
                        match_r[b] = a
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = -1
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(g.m):
            if match_l[u] == -1:
                dfs(u)
    matching = [(u, match_l[u]) for u in range(g.m) if match_l[u] != -1]
    return len(matching), matching


def has_perfect_matching(g: BipartiteGraph) -> bool:
    return g.m == g.n and max_matching(g)[0] == g.m


def min_line_cover(pattern: BipartiteGraph) -> tuple[int, set[int], set[int]]:
    """Minimum set of rows and columns covering every edge (Koenig construction)."""
    _, matching = max_matching(pattern)
    match_l = {u: v for u, v in matching}
    match_r = {v: u for u, v in matching}
    adj = pattern.adjacency()
    seen_l = {u for u in range(pattern.m) if u not in match_l}
    seen_r: set[int] = set()
    q = deque(sorted(seen_l))
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v in seen_r:
                continue
            seen_r.add(v)
            w = match_r.get(v)
            if w is not None and w not in seen_l:
                seen_l.add(w)
                q.append(w)
    rows = set(range(pattern.m)) - seen_l
    cols = seen_r
    return len(rows) + len(cols), rows, cols


# strong connectivity


def scc(g: Digraph) -> tuple[list[list[int]], int]:
    """Tarjan's algorithm; components listed so that arcs only go to later components."""
    n = g.n
    adj = g.out_neighbors()
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while k < len(adj[v]):
                w = adj[v][k]
                k += 1
                if index[w] == -1:
                    work.append((v, k))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    comps.reverse()
    return comps, len(comps)


def is_strongly_connected(g: Digraph) -> bool:
    """0- and 1-vertex graphs count as strongly connected."""
    if g.n <= 1:
        return True
    return scc(g)[1] == 1


def is_acyclic(g: Digraph) -> bool:
    if g.has_loops():
        return False
    return all(len(c) == 1 for c in scc(g)[0])


def topological_order(g: Digraph) -> list[int] | None:
    indeg = [0] * g.n
    adj = g.out_neighbors()
    for i, j in g.arcs:
        indeg[j] += 1
    ready = [v for v in range(g.n) if indeg[v] == 0]
    order = []
    while ready:
        v = min(ready)
        ready.remove(v)
        order.append(v)
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order if len(order) == g.n else None


def max_walk_len(g: Digraph) -> float:
    """Longest walk length; inf when g has a cycle or loop."""
    order = topological_order(g)
    if order is None:
        return INF
    best = [0] * g.n
    adj = g.out_neighbors()
    for v in reversed(order):
        for w in adj[v]:
            best[v] = max(best[v], best[w] + 1)
    return max(best, default=0)


def max_cycle_cover_vertices(g: Digraph) -> int:
    """Most vertices coverable by vertex-disjoint cycles (loops count as cycles)."""
    n = g.n
    if n > 16:
        raise GraphTooLarge("max_cycle_cover_vertices is capped at n <= 16")
    adj = g.out_neighbors()
    for size in range(n, 0, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            pos = {v: k for k, v in enumerate(subset)}
            b = BipartiteGraph(size, size, [(pos[i], pos[j]) for i in subset for j in adj[i] if j in s])
            if has_perfect_matching(b):
                return size
    return 0


def max_acyclic_subgraph_size(g: Digraph) -> int:
    """Largest acyclic arc subset, by dynamic programming over vertex orders.

    An acyclic subgraph is exactly the set of forward arcs of some linear order
    (loops never survive), so the optimum is a max over orders, computed over
    subsets in O(2^n n).
    """
    n = g.n
    if n > 20:
        raise GraphTooLarge("max_acyclic_subgraph_size is capped at n <= 20")
    in_mask = [0] * n
    for i, j in g.arcs:
        if i != j:
            in_mask[j] |= 1 << i
    best = [0] * (1 << n)
    for s in range(1, 1 << n):
        b = 0
        t = s
        while t:
            low = t & -t
            v = low.bit_length() - 1
            prev = s ^ low
            cand = best[prev] + bin(in_mask[v] & prev).count("1")
            if cand > b:
                b = cand
            t ^= low
        best[s] = b
    return best[(1 << n) - 1]


def max_acyclic_subgraph_brute(g: Digraph) -> tuple[int, set]:
    """Arc-subset enumeration oracle for small instances."""
    arcs = g.sorted_arcs()
    if len(arcs) > 24:
        raise GraphTooLarge("arc-subset enumeration is capped at 24 arcs")
    for size in range(len(arcs), -1, -1):
        for sub in itertools.combinations(arcs, size):
            if is_acyclic(Digraph(g.n, sub)):
                return size, set(sub)
    return 0, set()


def _acyclic_subsets(g: Digraph) -> list[bool]:
    n = g.n
    out_mask = [0] * n
    for i, j in g.arcs:
        out_mask[i] |= 1 << j
    ok = [False] * (1 << n)
    ok[0] = True
    for s in range(1, 1 << n):
        t = s
        while t:
            low = t & -t
            v = low.bit_length() - 1
            # v is a sink of G[s] (no loop, no arc into s) and s - v is acyclic
            if not (out_mask[v] & s) and ok[s ^ low]:
                ok[s] = True
                break
            t ^= low
    return ok


def max_induced_acyclic_order(g: Digraph) -> tuple[int, set[int]]:
    n = g.n
    if n > 20:
        raise GraphTooLarge("max_induced_acyclic_order is capped at n <= 20")
    ok = _acyclic_subsets(g)
    best, witness = 0, 0
    for s in range(1 << n):
        if ok[s]:
            c = bin(s).count("1")
            if c > best or (c == best and _lex_before(s, witness, n)):
                best, witness = c, s
    return best, {v for v in range(n) if witness >> v & 1}


def _lex_before(a: int, b: int, n: int) -> bool:
    return sorted(v for v in range(n) if a >> v & 1) < sorted(v for v in range(n) if b >> v & 1)


def _max_flow_unit(n: int, arcs: Iterable[tuple[int, int]], s: int, t: int) -> int:
    """Unit-capacity max flow by BFS augmenting paths (parallel arcs impossible)."""
    cap: dict[tuple[int, int], int] = {}
    adj = [set() for _ in range(n)]
    for i, j in arcs:
        if i == j:
            continue
        cap[(i, j)] = cap.get((i, j), 0) + 1
        cap.setdefault((j, i), 0)
        adj[i].add(j)
        adj[j].add(i)
    flow = 0
    while True:
        parent = {s: None}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for v in sorted(adj[u]):
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    q.append(v)
        if t not in parent:
            return flow
        v = t
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


def arc_strong_connectivity(g: Digraph) -> int:
    """lambda(G): min over ordered vertex pairs of the unit-capacity max flow."""
    if g.n <= 1:
        raise ValueError("arc-strong connectivity needs at least two vertices")
    return min(_max_flow_unit(g.n, g.arcs, u, v)
               for u in range(g.n) for v in range(g.n) if u != v)


def max_nsc_size(g: Digraph) -> int:
    """Most arcs in a spanning subgraph that is not strongly connected.

    For n <= 1 every spanning subgraph is strongly connected; 0 is returned by
    convention, mirroring the matrix side.
    """
    if g.n <= 1:
        return 0
    if not is_strongly_connected(g):
        return len(g.arcs)
    return len(g.arcs) - arc_strong_connectivity(g)


def max_nsc_size_brute(g: Digraph) -> int:
    arcs = g.sorted_arcs()
    if len(arcs) > 24:
        raise GraphTooLarge("arc-subset enumeration is capped at 24 arcs")
    if g.n <= 1:
        return 0
    for size in range(len(arcs), -1, -1):
        for sub in itertools.combinations(arcs, size):
            if not is_strongly_connected(Digraph(g.n, sub)):
                return size
    return 0


def max_ind_nsc_order(g: Digraph) -> int:
    """Largest |S| with G[S] not strongly connected, 0 when none exists."""
    n = g.n
    if n > 20:
        raise GraphTooLarge("max_ind_nsc_order is capped at n <= 20")
    for size in range(n, 1, -1):
        for subset in itertools.combinations(range(n), size):
            if not is_strongly_connected(g.induced(subset)):
                return size
    return 0


# automorphisms and isomorphism


def _iso_search(g: Digraph, h: Digraph, fixed: dict[int, int] | None = None,
                first_only: bool = True) -> Iterator[list[int]]:
    n = g.n
    g_out = [set(x) for x in g.out_neighbors()]
    h_out = [set(x) for x in h.out_neighbors()]
    g_in = [set(x) for x in g.in_neighbors()]
    h_in = [set(x) for x in h.in_neighbors()]

    def sig(out, inn, v):
        return (len(out[v] - {v}), len(inn[v] - {v}), v in out[v])

    g_sig = [sig(g_out, g_in, v) for v in range(n)]
    h_sig = [sig(h_out, h_in, v) for v in range(n)]
    if sorted(g_sig) != sorted(h_sig):
        return
    mapping = [-1] * n
    used = [False] * n
    fixed = fixed or {}
    for a, b in fixed.items():
        if g_sig[a] != h_sig[b]:
            return
    order = sorted(range(n), key=lambda v: (v not in fixed, -len(g_out[v]) - len(g_in[v]), v))

    def consistent(v, w) -> bool:
        if g_sig[v] != h_sig[w]:
            return False
        for u in range(n):
            x = mapping[u]
            if x == -1:
                continue
            if (u in g_out[v]) != (x in h_out[w]) or (v in g_out[u]) != (w in h_out[x]):
                return False
        return True

    def rec(k):
        if k == n:
            yield list(mapping)
            return
        v = order[k]
        cands = [fixed[v]] if v in fixed else range(n)
        for w in cands:
            if used[w] or not consistent(v, w):
                continue
            mapping[v] = w
            used[w] = True
            yield from rec(k + 1)
            mapping[v] = -1
            used[w] = False

    yield from rec(0)


def is_isomorphism(g: Digraph, h: Digraph, perm: Sequence[int]) -> bool:
    """Arc-exact check that i -> perm[i] carries g onto h."""
    if g.n != h.n or sorted(perm) != list(range(g.n)):
        return False
    return {(perm[i], perm[j]) for i, j in g.arcs} == set(h.arcs)


def is_embedding(g: Digraph, h: Digraph, perm: Sequence[int]) -> bool:
    """Check that i -> perm[i] maps every arc of g to an arc of h."""
    if g.n != h.n or sorted(perm) != list(range(g.n)):
        return False
    return {(perm[i], perm[j]) for i, j in g.arcs} <= set(h.arcs)


def isomorphic(g: Digraph, h: Digraph) -> list[int] | None:
    if g.n != h.n:
        raise ValueError("isomorphism test needs equal vertex counts")
    if g.n > 10:
        raise GraphTooLarge("isomorphism search is capped at n <= 10")
    if len(g.arcs) != len(h.arcs):
        return None
    return next(_iso_search(g, h), None)


def automorphisms(g: Digraph) -> tuple[list[list[int]], list[list[int]], bool]:
    """Generators found by orbit search, the orbit partition and transitivity."""
    n = g.n
    if n > 10:
        raise GraphTooLarge("automorphism search is capped at n <= 10")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    gens: list[list[int]] = []
    for v in range(n):
        for w in range(v + 1, n):
            if find(v) == find(w) or find(v) != v:
                continue
            auto = next(_iso_search(g, g, fixed={v: w}), None)
            if auto is None:
                continue
            gens.append(auto)
            # close orbits under every generator found so far
            changed = True
            while changed:
                changed = False
                for a in gens:
                    for x in range(n):
                        rx, ry = find(x), find(a[x])
                        if rx != ry:
                            parent[max(rx, ry)] = min(rx, ry)
                            changed = True
    orbits: dict[int, list[int]] = {}
    for x in range(n):
        orbits.setdefault(find(x), []).append(x)
    parts = sorted(orbits.values())
    return gens, parts, len(parts) <= 1


# cycles


def find_cycle_by_squaring(g: Digraph) -> list[int] | None:
    """Detect a cycle via walks of length 2^k >= n, built by repeated squaring.

    Entry (i, j) of the k-th table stores one walk i -> j of length 2^k if any
    exists. A walk of length >= n repeats a vertex, and the repeated segment is
    a closed walk from which a simple cycle is cut.
    """
    n = g.n
    if n == 0:
        return None
    walks: dict[tuple[int, int], list[int]] = {(i, j): [i, j] for i, j in sorted(g.arcs)}
    length = 1
    while length < n:
        nxt: dict[tuple[int, int], list[int]] = {}
        by_start: dict[int, list[tuple[int, list[int]]]] = {}
        for (m, j), w in sorted(walks.items()):
            by_start.setdefault(m, []).append((j, w))
        for (i, m), w1 in sorted(walks.items()):
            for j, w2 in by_start.get(m, []):
                if (i, j) not in nxt:
                    nxt[(i, j)] = w1 + w2[1:]
        walks = nxt
        length *= 2
    if not walks:
        return None
    walk = walks[min(walks)]
    first_seen: dict[int, int] = {}
    for pos, v in enumerate(walk):
        if v in first_seen:
            return _shortest_rotation(walk[first_seen[v]:pos])
        first_seen[v] = pos
    raise AssertionError("a walk of length >= n must repeat a vertex")


def _shortest_rotation(cycle: list[int]) -> list[int]:
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def is_cycle_of(g: Digraph, cycle: Sequence[int]) -> bool:
    """cycle = [v0, ..., vk-1] with arcs v_t -> v_{t+1} and vk-1 -> v0, no repeats."""
    if not cycle or len(set(cycle)) != len(cycle):
        return False
    k = len(cycle)
    return all((cycle[t], cycle[(t + 1) % k]) in g.arcs for t in range(k))


@dataclass(frozen=True)
class MatchingGadget:
    """Bipartite gadget for one removed path P_r (or none, r = None).

    Left labels are ("L1", i) / ("L2", i), right labels ("R1", i) / ("R2", i).
    """

    removed: int | None
    graph: BipartiteGraph
    left: tuple
    right: tuple


def matching_gadget(g: Digraph, removed: int | None = None) -> MatchingGadget:
    """H with arcs i_L1 - j_R1 and paths i_L1 - i_R2 - i_L2 - i_R1.

    Removing P_r also deletes its private vertices r_L2, r_R2, which forces
    r_L1 and r_R1 to be matched through arcs of g, so r lies on a cycle.
    """
    n = g.n
    left = [("L1", i) for i in range(n)] + [("L2", i) for i in range(n) if i != removed]
    right = [("R1", i) for i in range(n)] + [("R2", i) for i in range(n) if i != removed]
    lpos = {v: k for k, v in enumerate(left)}
    rpos = {v: k for k, v in enumerate(right)}
    edges = [(lpos[("L1", i)], rpos[("R1", j)]) for i, j in g.arcs]
    for i in range(n):
        if i == removed:
            continue
        edges += [(lpos[("L1", i)], rpos[("R2", i)]), (lpos[("L2", i)], rpos[("R2", i)]),
                  (lpos[("L2", i)], rpos[("R1", i)])]
    return MatchingGadget(removed, BipartiteGraph(len(left), len(right), edges),
                          tuple(left), tuple(right))


def decode_gadget_matching(g: Digraph, gadget: MatchingGadget,
                           matching: Iterable[tuple[int, int]]) -> list[int] | None:
    """Cycle of g read from a perfect matching of a gadget, None if S is empty.

    S = {i : (i_L2, i_R2) in M}; on S the matching pairs every i_L1 with some
    j_R1, so those edges form vertex-disjoint cycles of g. The cycle through
    the removed vertex (or the smallest vertex of S) is returned.
    """
    succ: dict[int, int] = {}
    for a, b in matching:
        la, rb = gadget.left[a], gadget.right[b]
        if la[0] == "L1" and rb[0] == "R1":
            succ[la[1]] = rb[1]
    if not succ:
        return None
    if sorted(succ) != sorted(succ.values()):
        raise ValueError("matching does not induce a cycle cover on S")
    start = gadget.removed if gadget.removed is not None else min(succ)
    cycle = [start]
    v = succ[start]
    while v != start:
        cycle.append(v)
        v = succ[v]
    cycle = _shortest_rotation(cycle)
    if not is_cycle_of(g, cycle):
        raise ValueError("decoded walk is not a cycle of g")
    return cycle


def cycle_to_matching_reduction(g: Digraph) -> tuple[list[MatchingGadget], Callable]:
    """Gadgets H_r (one per removed path P_r) and a decoder matching -> cycle.

    g is cyclic iff some H_r has a perfect matching.
    """
    gadgets = [matching_gadget(g, r) for r in range(g.n)]

    def decode(gadget: MatchingGadget, matching) -> list[int] | None:
        return decode_gadget_matching(g, gadget, matching)

    return gadgets, decode


def find_cycle_by_matching(g: Digraph) -> list[int] | None:
    gadgets, decode = cycle_to_matching_reduction(g)
    for gad in gadgets:
        size, matching = max_matching(gad.graph)
        if size == gad.graph.m == gad.graph.n:
            return decode(gad, matching)
    return None


# enumeration


def all_digraphs(n: int, loops: bool = True) -> Iterator[Digraph]:
    """Every digraph on n labeled vertices, in arc-bitmask order."""
    cells = [(i, j) for i in range(n) for j in range(n) if loops or i != j]
    for mask in range(1 << len(cells)):
        yield Digraph(n, [cells[k] for k in range(len(cells)) if mask >> k & 1])


def all_bipartite(m: int, n: int) -> Iterator[BipartiteGraph]:
    cells = [(i, j) for i in range(m) for j in range(n)]
    for mask in range(1 << len(cells)):
        yield BipartiteGraph(m, n, [cells[k] for k in range(len(cells)) if mask >> k & 1])


def canonical_form(g: Digraph) -> tuple:
    """Lexicographically least sorted arc list over all relabelings (n <= 8)."""
    if g.n > 8:
        raise GraphTooLarge("canonical_form is capped at n <= 8")
    best = None
    for perm in itertools.permutations(range(g.n)):
        key = tuple(sorted((perm[i], perm[j]) for i, j in g.arcs))
        if best is None or key < best:
            best = key
    return best


def digraph_classes(n: int, loops: bool = True) -> list[tuple[Digraph, int]]:
    """Isomorphism-class representatives with class sizes."""
    seen: dict[tuple, list] = {}
    for g in all_digraphs(n, loops):
        key = canonical_form(g)
        if key in seen:
            seen[key][1] += 1
        else:
            seen[key] = [g, 1]
    return [(g, c) for g, c in seen.values()]


def bipartite_canonical_form(g: BipartiteGraph) -> tuple:
    best = None
    for pl in itertools.permutations(range(g.m)):
        for pr in itertools.permutations(range(g.n)):
            key = tuple(sorted((pl[i], pr[j]) for i, j in g.edges))
            if best is None or key < best:
                best = key
    return best


def max_bd_mat_size(g: BipartiteGraph, r: int) -> tuple[int, set]:
    """Most edges in a subgraph with matching number <= r (edge-subset brute force)."""
    edges = g.sorted_edges()
    if len(edges) > 24:
        raise GraphTooLarge("edge-subset enumeration is capped at 24 edges")
    for size in range(len(edges), -1, -1):
        for sub in itertools.combinations(edges, size):
            if max_matching(BipartiteGraph(g.m, g.n, sub))[0] <= r:
                return size, set(sub)
    return 0, set()


def max_bd_mat_ord(g: BipartiteGraph, r: int) -> tuple[int, tuple[set, set]]:
    """Largest |V1|+|V2| with G[V1 u V2] of matching number <= r."""
    best, wit = -1, (set(), set())
    for lm in range(1 << g.m):
        ls = [i for i in range(g.m) if lm >> i & 1]
        for rm in range(1 << g.n):
            rs = [j for j in range(g.n) if rm >> j & 1]
            if len(ls) + len(rs) <= best:
                continue
            if max_matching(g.induced(ls, rs))[0] <= r:
                best, wit = len(ls) + len(rs), (set(ls), set(rs))
    return best, wit


def max_cover_bounded_size(g: Digraph, k: int) -> int:
    """Most arcs in a subgraph whose vertex-disjoint cycle families cover <= k vertices."""
    arcs = g.sorted_arcs()
    if len(arcs) > 24:
        raise GraphTooLarge("arc-subset enumeration is capped at 24 arcs")
    for size in range(len(arcs), -1, -1):
        for sub in itertools.combinations(arcs, size):
            if max_cycle_cover_vertices(Digraph(g.n, sub)) <= k:
                return size
    return 0


def vertex_strong_connectivity(g: Digraph) -> int:
    """kappa(G): fewest vertices whose removal leaves a non-strongly-connected graph.

    Complete digraphs have no such set; they get the usual n - 1.
    """
    if g.n <= 1:
        raise ValueError("vertex-strong connectivity needs at least two vertices")
    order = max_ind_nsc_order(g)
    return g.n - order if order else g.n - 1


def graph_report(g) -> tuple[dict, dict]:
    """Graph-side quantities by name, plus the quantities skipped by a size cap and why."""
    values: dict = {}
    skipped: dict = {}

    def put(name, fn):
        try:
            values[name] = fn()
        except (GraphTooLarge, ValueError) as exc:
            skipped[name] = str(exc)

    if isinstance(g, BipartiteGraph):
        values["m"], values["n"], values["edges"] = g.m, g.n, len(g.edges)
        put("matching_number", lambda: max_matching(g)[0])
        put("rho", lambda: min_line_cover(g)[0])
        return values, skipped
    if isinstance(g, UndirectedGraph):
        d = Digraph(g.n, g.symmetric_arcs())
        values["n"], values["edges"] = g.n, len(g.edges)
        values["connected"] = scc(d)[1] <= 1
        degs = set(g.degrees())
        values["regular_degree"] = degs.pop() if len(degs) == 1 else None
        return values, skipped
    values["n"], values["arcs"] = g.n, len(g.arcs)
    values["c_of_G"] = scc(g)[1]
    values["max_walk_len"] = max_walk_len(g)
    cover = max_cycle_cover_vertices(g)
    values["max_cycle_cover_vertices"] = cover
    values["r_acyclic"] = g.n - cover
    put("max_acyclic_size", lambda: max_acyclic_subgraph_size(g))
    put("max_induced_acyclic_order", lambda: max_induced_acyclic_order(g)[0])
    put("max_nsc_size", lambda: max_nsc_size(g))
    put("lambda", lambda: arc_strong_connectivity(g))
    put("max_ind_nsc_order", lambda: max_ind_nsc_order(g))
    put("kappa", lambda: vertex_strong_connectivity(g))
    put("transitive", lambda: automorphisms(g)[2])
    return values, skipped
