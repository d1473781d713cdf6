"""Shared fixtures: named complexes, random instances, regular-graph census."""

import itertools

import pytest

from hdx.complexes import SimplicialComplex
from hdx.models import ModelSpec, gen_linial_meshulam


def cycle_graph(n):
    return SimplicialComplex.graph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return SimplicialComplex.graph(10, outer + inner + spokes)


def two_disjoint_edges():
    return SimplicialComplex.graph(4, [(0, 1), (2, 3)])


def random_lm(n, d, p, seed):
    return gen_linial_meshulam(ModelSpec(model="lm", n=n, d=d, p=p, seed=seed))


@pytest.fixture(scope="session")
def named_suite():
    """Small named complexes used across the property tests."""
    suite = {
        "K2": SimplicialComplex.complete(2, 1),
        "K3": SimplicialComplex.complete(3, 1),
        "K4": SimplicialComplex.complete(4, 1),
        "K5": SimplicialComplex.complete(5, 1),
        "C4": cycle_graph(4),
        "C5": cycle_graph(5),
        "P3": SimplicialComplex.graph(3, [(0, 1), (1, 2)]),
        "two_edges": two_disjoint_edges(),
        "triangle2": SimplicialComplex.complete(3, 2),
        "full2_4": SimplicialComplex.complete(4, 2),
        "full2_5": SimplicialComplex.complete(5, 2),
        "full3_5": SimplicialComplex.complete(5, 3),
        "petersen": petersen_graph(),
    }
    return suite


@pytest.fixture(scope="session")
def random_suite():
    """Seeded random skeleton-model instances, mixed dimension."""
    out = []
    seed = 0
    for d in (1, 2, 3):
        for n in (5, 7, 9):
            for p in (0.35, 0.7):
                out.append(random_lm(n, d, p, seed=1000 + seed))
                seed += 1
    return out


def _regular_graphs(n, k):
    """All labelled simple k-regular graphs on n vertices, by backtracking.

    Edges are decided at their smaller endpoint, so each graph appears once.
    """
    if (n * k) % 2 or k >= n:
        return
    remaining = [k] * n
    edges = []

    def extend(v):
        if v == n:
            yield tuple(edges)
            return
        need = remaining[v]
        if need == 0:
            yield from extend(v + 1)
            return
        candidates = [u for u in range(v + 1, n) if remaining[u] > 0]
        if len(candidates) < need:
            return
        for chosen in itertools.combinations(candidates, need):
            for u in chosen:
                remaining[u] -= 1
            remaining[v] = 0
            edges.extend((v, u) for u in chosen)
            yield from extend(v + 1)
            del edges[-need:]
            remaining[v] = need
            for u in chosen:
                remaining[u] += 1

    yield from extend(0)


def _connected(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in range(n)}) == 1


@pytest.fixture(scope="session")
def regular_graph_census():
    """Every connected k-regular graph on at most 8 vertices (labelled)."""
    census = []
    for n in range(2, 9):
        for k in range(1, n):
            for edges in _regular_graphs(n, k):
                if _connected(n, edges):
                    census.append((n, k, edges))
    return census
