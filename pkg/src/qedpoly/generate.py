"""Graph corpora for the identity sweeps."""

from __future__ import annotations

import random
from itertools import permutations, product

from .graph import FERMION, PHOTON, Edge, Graph, validate_qed


def _canonical(n: int, pairs: list) -> tuple:
    """Smallest sorted edge list over all vertex relabelings."""
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in pairs))
        if best is None or key < best:
            best = key
    return (n, best)


def connected_multigraphs(max_edges: int) -> list[Graph]:
    """Every connected multigraph (loops allowed) with 1..max_edges edges, one per
    isomorphism class.

    Grown one edge at a time: each connected graph arises from a smaller one
    by adding a chord, a loop or a pendant edge.  Edges point from the lower
    to the higher vertex.
    """
    level = {(1, ())}
    out = []
    for _ in range(max_edges):
        nxt = set()
        for n, pairs in level:
            cands = [(u, v) for u in range(n) for v in range(u, n)]
            cands += [(u, n) for u in range(n)] if n else []
            for u, v in cands:
                m = max(n, v + 1)
                nxt.add(_canonical(m, list(pairs) + [(u, v)]))
        level = nxt
        for n, pairs in sorted(level):
            out.append(_to_graph(n, pairs))
    return out


def _to_graph(n: int, pairs) -> Graph:
    edges = [(i + 1, u + 1, v + 1) for i, (u, v) in enumerate(pairs)]
    return Graph.from_edges(edges, range(1, n + 1))


def _prufer_tree(rng: random.Random, n: int) -> list:
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def random_connected_multigraph(rng: random.Random, max_edges: int) -> Graph:
    """Uniform random labeled tree plus random extra edges, random directions."""
    m = rng.randint(1, max_edges)
    n = rng.randint(1, m + 1)
    pairs = _prufer_tree(rng, n)
    while len(pairs) < m:
        pairs.append((rng.randrange(n), rng.randrange(n)))
    rng.shuffle(pairs)
    edges = []
    for i, (u, v) in enumerate(pairs):
        if rng.random() < 0.5:
            u, v = v, u
        edges.append((i + 1, u + 1, v + 1))
    return Graph.from_edges(edges, range(1, n + 1))


def random_corpus(samples: int, max_edges: int, seed: int) -> list[Graph]:
    rng = random.Random(seed)
    return [random_connected_multigraph(rng, max_edges) for _ in range(samples)]


def qed_decorations(G: Graph, limit: int | None = None) -> list[Graph]:
    """Ways to type G's edges as fermions and photons (fermions in either
    direction) so every vertex obeys the QED rule once externals fill the
    open slots.  Graphs without photons are skipped.
    """
    base = G.edges
    out = []
    seen = set()
    for kinds in product((FERMION, PHOTON), repeat=len(base)):
        if PHOTON not in kinds:
            continue
        # a cheap necessary check before trying orientations
        ph = {}
        bad = False
        for e, k in zip(base, kinds):
            if k == PHOTON:
                for v in (e.source, e.target):
                    ph[v] = ph.get(v, 0) + 1
                    bad |= ph[v] > 1
        if bad:
            continue
        flips = [(False, True) if k == FERMION and not e.is_self_loop else (False,)
                 for e, k in zip(base, kinds)]
        for choice in product(*flips):
            edges = tuple(Edge(e.id, e.target, e.source, k) if f else Edge(e.id, e.source, e.target, k)
                          for e, k, f in zip(base, kinds, choice))
            H = Graph(G.vertices, edges, _fill_externals(G.vertices, edges))
            if H.edges in seen or validate_qed(H):
                continue
            seen.add(H.edges)
            out.append(H)
            if limit is not None and len(out) >= limit:
                return out
    return out


def _fill_externals(vertices, edges) -> tuple:
    ext = []
    k = 1
    for v in vertices:
        fin = sum(1 for e in edges if e.kind == FERMION and e.target == v)
        fout = sum(1 for e in edges if e.kind == FERMION and e.source == v)
        ph = sum((e.source == v) + (e.target == v) for e in edges if e.kind == PHOTON)
        for _ in range(max(0, 1 - fin) + max(0, 1 - fout) + max(0, 1 - ph)):
            ext.append((v, f"q{k}"))
            k += 1
    return tuple(ext)


def qed_corpus(max_edges: int) -> list[Graph]:
    """One QED decoration for each connected multigraph that admits one."""
    out = []
    for G in connected_multigraphs(max_edges):
        if any(sum((e.source == v) + (e.target == v) for e in G.edges) > 3 for v in G.vertices):
            continue
        found = qed_decorations(G, limit=1)
        out.extend(found)
    return out


__all__ = ["connected_multigraphs", "random_connected_multigraph", "random_corpus",
           "qed_decorations", "qed_corpus"]
