import itertools

from hypothesis import strategies as st

from gms.graphcore import BipartiteGraph, Digraph


@st.composite
def digraphs(draw, max_n=4, loops=True, min_n=1):
    n = draw(st.integers(min_n, max_n))
    cells = [(i, j) for i in range(n) for j in range(n) if loops or i != j]
    arcs = draw(st.sets(st.sampled_from(cells), max_size=len(cells))) if cells else set()
    return Digraph(n, arcs)


@st.composite
def bipartite_graphs(draw, max_m=3, max_n=3):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    cells = list(itertools.product(range(m), range(n)))
    return BipartiteGraph(m, n, draw(st.sets(st.sampled_from(cells))))


def permutations_of(n):
    return st.permutations(list(range(n)))


# one PASS/FAIL line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
