"""Directed multigraphs with typed edges, and the subgraph enumerators.

Edge subsets are handled internally as bitmasks over the edges in ascending
id order; every enumerator returns its results sorted by that mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import Disconnected, TadpoleContraction

FERMION = "fermion"
PHOTON = "photon"
SCALAR = "scalar"
EDGE_KINDS = (FERMION, PHOTON, SCALAR)


@dataclass(frozen=True)
class Edge:
    id: int
    source: int
    target: int
    kind: str = SCALAR

    @property
    def is_self_loop(self) -> bool:
        return self.source == self.target

    def reversed(self) -> "Edge":
        return Edge(self.id, self.target, self.source, self.kind)

    def other(self, v: int) -> int:
        return self.target if v == self.source else self.source


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple
    externals: tuple = ()

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        ext = tuple((int(v), str(q)) for v, q in self.externals)
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate edge ids in {ids}")
        vs = set(verts)
        for e in edges:
            if e.source not in vs or e.target not in vs:
                raise ValueError(f"edge {e.id} has an undeclared endpoint")
            if e.kind not in EDGE_KINDS:
                raise ValueError(f"edge {e.id} has unknown kind {e.kind!r}")
        for v, _ in ext:
            if v not in vs:
                raise ValueError(f"external at undeclared vertex {v}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "externals", ext)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], vertices: Iterable[int] | None = None,
                   externals: Iterable[tuple[int, str]] = ()) -> "Graph":
        """Build from ``(id, source, target[, kind])`` tuples."""
        es = [Edge(*t) for t in edges]
        vs = set(vertices or ())
        for e in es:
            vs.update((e.source, e.target))
        return cls(tuple(vs), tuple(es), tuple(externals))

    # -- basic structure ----------------------------------------------------

    @cached_property
    def shape(self) -> tuple:
        """Hashable key ignoring edge kinds and externals."""
        return (self.vertices, tuple((e.id, e.source, e.target) for e in self.edges))

    @cached_property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    @cached_property
    def _by_id(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def bit(self) -> dict:
        return {e.id: i for i, e in enumerate(self.edges)}

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise KeyError(f"no edge {eid}") from None

    def has_edge(self, eid: int) -> bool:
        return eid in self._by_id

    def mask(self, ids: Iterable[int]) -> int:
        m = 0
        for i in ids:
            m |= 1 << self.bit[i]
        return m

    def ids_of(self, mask: int) -> frozenset:
        return frozenset(e.id for i, e in enumerate(self.edges) if mask >> i & 1)

    def edges_of_kind(self, kind: str) -> tuple:
        return tuple(e.id for e in self.edges if e.kind == kind)

    def incident(self, v: int) -> list:
        return [e for e in self.edges if e.source == v or e.target == v]

    @cached_property
    def components(self) -> tuple:
        """Vertex sets of the connected components, ordered by smallest vertex."""
        return tuple(_components(self.vertices, [(e.source, e.target) for e in self.edges]))

    @property
    def h0(self) -> int:
        return len(self.components)

    @property
    def h1(self) -> int:
        return len(self.edges) - len(self.vertices) + self.h0

    def is_connected(self) -> bool:
        return self.h0 == 1

    def is_self_loop(self, eid: int) -> bool:
        return self.edge(eid).is_self_loop

    def is_bridge(self, eid: int) -> bool:
        e = self.edge(eid)
        if e.is_self_loop:
            return False
        rest = [(f.source, f.target) for f in self.edges if f.id != eid]
        return len(_components(self.vertices, rest)) > self.h0

    def reverse(self, eid: int) -> "Graph":
        es = tuple(e.reversed() if e.id == eid else e for e in self.edges)
        return Graph(self.vertices, es, self.externals)

    def subgraph_on(self, vertices: Iterable[int]) -> "Graph":
        vs = set(vertices)
        es = tuple(e for e in self.edges if e.source in vs and e.target in vs)
        return Graph(tuple(vs), es, tuple(x for x in self.externals if x[0] in vs))

    def component_graphs(self) -> list:
        return [self.subgraph_on(c) for c in self.components]


def _components(vertices, pairs) -> list:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(groups[k]) for k in sorted(groups)]


# -- oriented subgraphs -----------------------------------------------------


@dataclass(frozen=True)
class OrientedCycle:
    edges: frozenset
    orientation: tuple  # ((edge-id, +1/-1), ...) sorted by id
    vertices: tuple = field(default=(), compare=False)

    @property
    def signs(self) -> dict:
        return dict(self.orientation)

    def sign(self, eid: int) -> int:
        return self.signs.get(eid, 0)

    def flipped(self) -> "OrientedCycle":
        return OrientedCycle(self.edges, tuple((e, -s) for e, s in self.orientation), self.vertices)


@dataclass(frozen=True)
class OrientedBond:
    edges: frozenset
    orientation: tuple  # ((edge-id, +1/-1), ...) sorted by id
    side: frozenset = field(default=frozenset(), compare=False)  # component edges point into

    @property
    def signs(self) -> dict:
        return dict(self.orientation)

    def sign(self, eid: int) -> int:
        return self.signs.get(eid, 0)


def check_cycle(G: Graph, c: OrientedCycle) -> bool:
    """Re-verify that c is a simple cycle of G traversed consistently with its signs."""
    es = [G.edge(i) for i in c.edges]
    if not es:
        return False
    if len(es) == 1:
        return es[0].is_self_loop
    if any(e.is_self_loop for e in es):
        return False
    signs = c.signs
    if set(signs) != set(c.edges) or any(s not in (1, -1) for s in signs.values()):
        return False
    # walk: each edge leaves its tail (by orientation) and enters its head
    out = {}
    for e in es:
        tail, head = (e.source, e.target) if signs[e.id] == 1 else (e.target, e.source)
        if tail in out:
            return False
        out[tail] = (head, e.id)
    start = next(iter(out))
    v, seen = start, set()
    for _ in range(len(es)):
        if v not in out or v in seen:
            return False
        seen.add(v)
        v = out[v][0]
    return v == start and len(seen) == len(es)


def check_bond(G: Graph, b: OrientedBond) -> bool:
    rest = [(e.source, e.target) for e in G.edges if e.id not in b.edges]
    if len(_components(G.vertices, rest)) != 2:
        return False
    for eid in b.edges:
        e = G.edge(eid)
        back = rest + [(e.source, e.target)]
        if len(_components(G.vertices, back)) != 1:
            return False
    comps = _components(G.vertices, rest)
    side = b.side or comps[0]
    for eid, s in b.orientation:
        e = G.edge(eid)
        into = e.target in side and e.source not in side
        if s != (1 if into else -1):
            return False
    return True


# -- Feynman graph checks ---------------------------------------------------


def validate_qed(G: Graph) -> list:
    """List QED vertex-rule violations; empty when every vertex is a QED vertex.

    External half-edges carry no kind in the file format, so each external at a
    vertex fills one of its missing slots (fermion in, fermion out, photon).
    """
    problems = []
    n_ext = {v: 0 for v in G.vertices}
    for v, _ in G.externals:
        n_ext[v] += 1
    for v in G.vertices:
        fin = fout = ph = 0
        for e in G.edges:
            if e.kind == SCALAR and v in (e.source, e.target):
                problems.append(f"vertex {v}: scalar edge {e.id} is not a QED edge")
            elif e.kind == FERMION:
                fin += e.target == v
                fout += e.source == v
            elif e.kind == PHOTON:
                ph += (e.source == v) + (e.target == v)
        if fin > 1:
            problems.append(f"vertex {v}: {fin} incoming fermions")
        if fout > 1:
            problems.append(f"vertex {v}: {fout} outgoing fermions")
        if ph > 1:
            problems.append(f"vertex {v}: {ph} photon incidences")
        missing = max(0, 1 - fin) + max(0, 1 - fout) + max(0, 1 - ph)
        if fin <= 1 and fout <= 1 and ph <= 1 and n_ext[v] != missing:
            problems.append(f"vertex {v}: {n_ext[v]} external half-edges for {missing} open slots")
    # a vertex reported twice for the same scalar edge is noise
    return list(dict.fromkeys(problems))


def photon_edge_at(G: Graph, v: int) -> int | None:
    for e in G.edges:
        if e.kind == PHOTON and v in (e.source, e.target):
            return e.id
    return None


# -- minors -----------------------------------------------------------------


def contract(G: Graph, S: Iterable[int]) -> Graph:
    """Identify the endpoints of every edge in S and drop those edges."""
    S = set(S)
    for eid in S:
        if G.edge(eid).is_self_loop:
            raise TadpoleContraction(f"edge {eid} is a self-loop")
    return _contract(G, S)


def _contract(G: Graph, S: set) -> Graph:
    # self-loops in S are simply removed (contracting a tadpole deletes it)
    parent = {v: v for v in G.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in S:
        e = G.edge(eid)
        a, b = find(e.source), find(e.target)
        if a != b:
            parent[max(a, b)] = min(a, b)
    rep = {v: find(v) for v in G.vertices}
    es = tuple(Edge(e.id, rep[e.source], rep[e.target], e.kind) for e in G.edges if e.id not in S)
    ext = tuple((rep[v], q) for v, q in G.externals)
    return Graph(tuple(set(rep.values())), es, ext)


def contract_cycle(G: Graph, C: Iterable[int]) -> Graph:
    """G//C for a cycle C; a one-edge cycle (tadpole) is deleted."""
    return _contract(G, set(C))


def delete(G: Graph, S: Iterable[int]) -> Graph:
    S = set(S)
    for eid in S:
        G.edge(eid)
    return Graph(G.vertices, tuple(e for e in G.edges if e.id not in S), G.externals)


# -- enumeration ------------------------------------------------------------


def _require_connected(G: Graph):
    if not G.is_connected():
        raise Disconnected(f"graph has {G.h0} components")


def spanning_tree_masks(G: Graph) -> list:
    _require_connected(G)
    n = len(G.vertices)
    if n == 1:
        return [0]
    cand = [(i, e.source, e.target) for i, e in enumerate(G.edges) if not e.is_self_loop]
    out = []
    for combo in combinations(cand, n - 1):
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        ok = True
        for _, a, b in combo:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            m = 0
            for i, _, _ in combo:
                m |= 1 << i
            out.append(m)
    out.sort()
    return out


def spanning_trees(G: Graph) -> list:
    """All spanning trees as edge-id sets, in ascending bitset order."""
    return [G.ids_of(m) for m in spanning_tree_masks(G)]


def bonds(G: Graph) -> list:
    """All bonds, oriented into the side containing the smallest vertex id."""
    _require_connected(G)
    verts = G.vertices
    v0, rest = verts[0], verts[1:]
    found = {}
    for k in range(1 << len(rest)):
        side = {v0} | {v for i, v in enumerate(rest) if k >> i & 1}
        if len(side) == len(verts):
            continue
        other = set(verts) - side
        inner = [(e.source, e.target) for e in G.edges if e.source in side and e.target in side]
        if len(_components(side, inner)) != 1:
            continue
        outer = [(e.source, e.target) for e in G.edges if e.source in other and e.target in other]
        if len(_components(other, outer)) != 1:
            continue
        cross = [e for e in G.edges if (e.source in side) != (e.target in side)]
        m = G.mask(e.id for e in cross)
        if m in found:
            continue
        orient = tuple((e.id, 1 if e.target in side else -1) for e in cross)
        found[m] = OrientedBond(frozenset(e.id for e in cross), orient, frozenset(side))
    return [found[m] for m in sorted(found)]


def simple_cycles(G: Graph) -> list:
    """All simple cycles, each traversed starting along its lowest-id edge."""
    adj: dict = {v: [] for v in G.vertices}
    for i, e in enumerate(G.edges):
        if e.is_self_loop:
            continue
        adj[e.source].append((i, e, e.target, 1))
        adj[e.target].append((i, e, e.source, -1))
    found = {}
    for si, s in enumerate(G.edges):
        if s.is_self_loop:
            found[1 << si] = OrientedCycle(frozenset([s.id]), ((s.id, 1),), (s.source,))
            continue
        goal = s.source
        path = [(s.id, 1)]
        visited = [s.source, s.target]

        def dfs(v, mask):
            for i, e, w, sign in adj[v]:
                if i <= si or mask >> i & 1:
                    continue
                if w == goal:
                    m = mask | 1 << i
                    orient = tuple(sorted(path + [(e.id, sign)]))
                    found[m] = OrientedCycle(frozenset(x for x, _ in orient), orient, tuple(visited))
                elif w not in visited:
                    path.append((e.id, sign))
                    visited.append(w)
                    dfs(w, mask | 1 << i)
                    path.pop()
                    visited.pop()

        dfs(s.target, 1 << si)
    return [found[m] for m in sorted(found)]


def matrix_tree_count(G: Graph) -> int:
    """Number of spanning trees from a reduced Laplacian determinant (Bareiss)."""
    verts = list(G.vertices)
    if not G.is_connected():
        return 0
    n = len(verts)
    if n == 1:
        return 1
    idx = {v: i for i, v in enumerate(verts)}
    L = [[0] * n for _ in range(n)]
    for e in G.edges:
        if e.is_self_loop:
            continue
        a, b = idx[e.source], idx[e.target]
        L[a][a] += 1
        L[b][b] += 1
        L[a][b] -= 1
        L[b][a] -= 1
    M = [row[1:] for row in L[1:]]
    return _bareiss_det(M)


def _bareiss_det(M) -> int:
    M = [list(r) for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1
