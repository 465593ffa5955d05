"""Finite directed graphs and separated graphs.

Conventions: an edge ``e`` runs from ``source[e]`` to ``range[e]``, and a
path ``e1 e2 ... en`` is composable when ``source(e_i) == range(e_{i+1})``.
A *source* is a vertex receiving no edge.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    BadParameter,
    DanglingEndpoint,
    DuplicateId,
    InvalidPath,
    SchemaError,
    UnknownVertex,
)

Vertex = str
Edge = str


@dataclass(frozen=True, eq=True)
class DirectedGraph:
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    range: Mapping[Edge, Vertex] = field(compare=True)
    source: Mapping[Edge, Vertex] = field(compare=True)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise DuplicateId(f"duplicate vertex in {self.vertices!r}")
        if len(set(self.edges)) != len(self.edges):
            raise DuplicateId(f"duplicate edge in {self.edges!r}")
        known = set(self.vertices)
        for e in self.edges:
            if e not in self.range or e not in self.source:
                raise DanglingEndpoint(f"edge {e!r} lacks an endpoint")
            for end in (self.range[e], self.source[e]):
                if end not in known:
                    raise DanglingEndpoint(f"edge {e!r} uses unknown vertex {end!r}")

    def __hash__(self):
        return hash((self.vertices, self.edges,
                     tuple(self.range[e] for e in self.edges),
                     tuple(self.source[e] for e in self.edges)))

    @cached_property
    def _incidence(self):
        into = {v: [] for v in self.vertices}
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            into[self.range[e]].append(e)
            out[self.source[e]].append(e)
        return ({v: tuple(es) for v, es in into.items()},
                {v: tuple(es) for v, es in out.items()})

    def range_inverse(self, v: Vertex) -> Tuple[Edge, ...]:
        """Edges ending at ``v``, in edge order."""
        return self._incidence[0].get(v, ())

    def source_inverse(self, v: Vertex) -> Tuple[Edge, ...]:
        return self._incidence[1].get(v, ())

    def sources(self) -> Tuple[Vertex, ...]:
        targets = {self.range[e] for e in self.edges}
        return tuple(v for v in self.vertices if v not in targets)

    def sinks(self) -> Tuple[Vertex, ...]:
        emitters = {self.source[e] for e in self.edges}
        return tuple(v for v in self.vertices if v not in emitters)

    def vertex_index(self) -> Dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass(frozen=True)
class SeparatedGraph:
    graph: DirectedGraph
    separation: Mapping[Vertex, Tuple[Tuple[Edge, ...], ...]]

    def __post_init__(self):
        g = self.graph
        for v in self.separation:
            if v not in g.vertex_index():
                raise UnknownVertex(f"separation names unknown vertex {v!r}")
        for v in g.vertices:
            classes = self.separation.get(v, ())
            incoming = g.range_inverse(v)
            seen: Dict[Edge, int] = {}
            for k, cls in enumerate(classes):
                if not cls:
                    raise SchemaError(f"empty separation class at vertex {v!r}")
                for e in cls:
                    if e in seen:
                        raise SchemaError(f"edge {e!r} appears in two classes at vertex {v!r}")
                    if e not in g.range or g.range[e] != v:
                        raise SchemaError(f"edge {e!r} does not end at vertex {v!r}")
                    seen[e] = k
            if set(seen) != set(incoming):
                missing = [e for e in incoming if e not in seen]
                raise SchemaError(f"classes at {v!r} miss edges {missing!r}")

    def __hash__(self):
        return hash((self.graph, tuple((v, self.classes(v)) for v in self.graph.vertices)))

    def classes(self, v: Vertex) -> Tuple[Tuple[Edge, ...], ...]:
        return tuple(self.separation.get(v, ()))

    @property
    def vertices(self):
        return self.graph.vertices

    @property
    def edges(self):
        return self.graph.edges


@dataclass(frozen=True)
class Path:
    """A finite path; trivial paths carry only a vertex."""

    edges: Tuple[Edge, ...]
    vertex: Optional[Vertex] = None

    def __len__(self):
        return len(self.edges)


def make_path(g: DirectedGraph, edges: Sequence[Edge], vertex: Optional[Vertex] = None) -> Path:
    edges = tuple(edges)
    if not edges:
        if vertex is None or vertex not in g.vertex_index():
            raise InvalidPath("trivial path needs a known vertex")
        return Path((), vertex)
    for e in edges:
        if e not in g.range:
            raise InvalidPath(f"unknown edge {e!r}")
    for a, b in zip(edges, edges[1:]):
        if g.source[a] != g.range[b]:
            raise InvalidPath(f"edges {a!r}, {b!r} do not compose")
    return Path(edges)


def path_range(g: DirectedGraph, p: Path) -> Vertex:
    return g.range[p.edges[0]] if p.edges else p.vertex


def path_source(g: DirectedGraph, p: Path) -> Vertex:
    return g.source[p.edges[-1]] if p.edges else p.vertex


def trivially_separated(g: DirectedGraph) -> SeparatedGraph:
    sep = {}
    for v in g.vertices:
        incoming = g.range_inverse(v)
        if incoming:
            sep[v] = (incoming,)
    return SeparatedGraph(g, sep)


# ----------------------------------------------------------------- construction

def build_graph(spec: Mapping) -> DirectedGraph | SeparatedGraph:
    """Build a graph from a GraphSpec mapping.

    ``spec`` has ``vertices`` (list of names) and ``edges`` (list of
    ``{"name", "src", "rng"}``). When a ``separation`` key is present a
    :class:`SeparatedGraph` is returned; vertices missing from it get the
    trivial separation.
    """
    try:
        vertices = [str(v) for v in spec["vertices"]]
        raw_edges = list(spec.get("edges", []))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"graph spec needs 'vertices' and 'edges': {exc}") from None
    names, rng, src = [], {}, {}
    known = set()
    for v in vertices:
        if v in known:
            raise DuplicateId(f"duplicate vertex {v!r}")
        known.add(v)
    for item in raw_edges:
        try:
            name, s, r = str(item["name"]), str(item["src"]), str(item["rng"])
        except (KeyError, TypeError):
            raise SchemaError(f"edge entry {item!r} needs name, src and rng") from None
        if name in rng:
            raise DuplicateId(f"duplicate edge {name!r}")
        for end in (s, r):
            if end not in known:
                raise DanglingEndpoint(f"edge {name!r} uses unknown vertex {end!r}")
        names.append(name)
        rng[name] = r
        src[name] = s
    g = DirectedGraph(tuple(vertices), tuple(names), rng, src)
    if "separation" not in spec or spec["separation"] is None:
        return g
    raw_sep = spec["separation"]
    if not isinstance(raw_sep, Mapping):
        raise SchemaError("separation must map vertices to lists of edge lists")
    sep = {}
    for v in g.vertices:
        if v in raw_sep:
            sep[v] = tuple(tuple(str(e) for e in cls) for cls in raw_sep[v])
        elif g.range_inverse(v):
            sep[v] = (g.range_inverse(v),)
    for v in raw_sep:
        if str(v) not in known:
            raise SchemaError(f"separation names unknown vertex {v!r}")
    # drop explicit empty families at sources so the invariant check sees ()
    sep = {v: cls for v, cls in sep.items() if cls}
    return SeparatedGraph(g, sep)


def graph_to_spec(g: DirectedGraph | SeparatedGraph) -> dict:
    sg = g if isinstance(g, SeparatedGraph) else None
    base = sg.graph if sg else g
    out = {
        "vertices": list(base.vertices),
        "edges": [{"name": e, "src": base.source[e], "rng": base.range[e]} for e in base.edges],
    }
    if sg is not None:
        out["separation"] = {v: [list(c) for c in sg.classes(v)] for v in base.vertices if sg.classes(v)}
    return out


def _graph(vertices, edge_triples) -> DirectedGraph:
    return DirectedGraph(
        tuple(vertices),
        tuple(name for name, _, _ in edge_triples),
        {name: r for name, _, r in edge_triples},
        {name: s for name, s, _ in edge_triples},
    )


def rose(n: int) -> DirectedGraph:
    if n < 1:
        raise BadParameter("rose needs n >= 1")
    return _graph(["v"], [(f"x{i}", "v", "v") for i in range(1, n + 1)])


def line(n: int) -> DirectedGraph:
    """v_{i+1} --e_i--> v_i, so v_n is the unique source."""
    if n < 1:
        raise BadParameter("line needs n >= 1")
    vs = [f"v{i}" for i in range(1, n + 1)]
    return _graph(vs, [(f"e{i}", f"v{i + 1}", f"v{i}") for i in range(1, n)])


def toeplitz() -> DirectedGraph:
    return _graph(["u", "v"], [("e", "u", "u"), ("f", "v", "u")])


def emn(m: int, n: int) -> SeparatedGraph:
    if not 1 <= m <= n:
        raise BadParameter("emn requires 1 <= m <= n")
    alphas = [f"alpha{i}" for i in range(1, n + 1)]
    betas = [f"beta{j}" for j in range(1, m + 1)]
    g = _graph(["v", "w"], [(e, "w", "v") for e in alphas + betas])
    return SeparatedGraph(g, {"v": (tuple(alphas), tuple(betas))})


def partial_isometry() -> SeparatedGraph:
    g = _graph(
        ["v", "w1", "w2", "w3"],
        [("alpha1", "w1", "v"), ("alpha2", "w2", "v"), ("beta1", "w1", "v"), ("beta2", "w3", "v")],
    )
    return SeparatedGraph(g, {"v": (("alpha1", "alpha2"), ("beta1", "beta2"))})


def fullshift() -> SeparatedGraph:
    """Blue class B0 = {alpha0, alpha1}, red class R0 = {beta0, beta1}."""
    g = _graph(
        ["v", "0", "1"],
        [("alpha0", "0", "v"), ("alpha1", "1", "v"), ("beta0", "0", "v"), ("beta1", "1", "v")],
    )
    return SeparatedGraph(g, {"v": (("alpha0", "alpha1"), ("beta0", "beta1"))})


STANDARD_NAMES = ("rose", "line", "toeplitz", "emn", "partial_isometry", "fullshift")


def standard_graph(name: str, n: Optional[int] = None, m: Optional[int] = None):
    if name == "rose":
        return rose(_need(n, "n"))
    if name == "line":
        return line(_need(n, "n"))
    if name == "toeplitz":
        return toeplitz()
    if name == "emn":
        return emn(_need(m, "m"), _need(n, "n"))
    if name == "partial_isometry":
        return partial_isometry()
    if name == "fullshift":
        return fullshift()
    raise BadParameter(f"unknown standard graph {name!r}")


def _need(value, label):
    if value is None:
        raise BadParameter(f"parameter {label} is required")
    if value < 1:
        raise BadParameter(f"parameter {label} must be positive")
    return value


# ----------------------------------------------------------------- matrices

def adjacency_matrix(g: DirectedGraph) -> List[List[int]]:
    """A[v][w] = number of edges with range v and source w."""
    idx = g.vertex_index()
    a = [[0] * len(g.vertices) for _ in g.vertices]
    for e in g.edges:
        a[idx[g.range[e]]][idx[g.source[e]]] += 1
    return a


def reduced_adjacency(g: DirectedGraph) -> Tuple[List[Vertex], List[List[int]]]:
    """Adjacency rows of non-source vertices, with the row labels."""
    a = adjacency_matrix(g)
    srcs = set(g.sources())
    keep = [i for i, v in enumerate(g.vertices) if v not in srcs]
    return [g.vertices[i] for i in keep], [a[i] for i in keep]


# ----------------------------------------------------------------- predicates

def reachable_set(g: DirectedGraph, v: Vertex) -> frozenset:
    """All w with a path whose source is v and range is w (v included)."""
    if v not in g.vertex_index():
        raise UnknownVertex(v)
    out_edges: Dict[Vertex, List[Vertex]] = {x: [] for x in g.vertices}
    for e in g.edges:
        out_edges[g.source[e]].append(g.range[e])
    seen = {v}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in out_edges[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def _cyclic_vertices(g: DirectedGraph) -> set:
    """Vertices lying on some closed path."""
    result = set()
    for e in g.edges:
        # the edge lies on a cycle iff its source is reachable from its range
        if g.source[e] in reachable_set(g, g.range[e]):
            result.add(g.source[e])
            result.add(g.range[e])
    return result


def every_cycle_has_entry(g: DirectedGraph) -> bool:
    # an entryless cycle lives inside the in-degree-1 subgraph, where each
    # vertex has a unique predecessor; look for a cycle by pointer chasing
    pred = {}
    for v in g.vertices:
        incoming = g.range_inverse(v)
        if len(incoming) == 1:
            pred[v] = g.source[incoming[0]]
    state: Dict[Vertex, int] = {}
    for start in pred:
        trail = []
        v = start
        while v in pred and v not in state:
            state[v] = 1
            trail.append(v)
            v = pred[v]
        if v in state and state[v] == 1:
            return False
        for t in trail:
            state[t] = 2
    return True


def is_cofinal(g: DirectedGraph) -> bool:
    """Finite-graph cofinality: cycles and sources must reach every vertex."""
    everything = frozenset(g.vertices)
    for v in _cyclic_vertices(g):
        if reachable_set(g, v) != everything:
            return False
    for u in g.sources():
        if reachable_set(g, u) != everything:
            return False
    return True


def is_simple_graph_algebra(g: DirectedGraph) -> bool:
    return every_cycle_has_entry(g) and is_cofinal(g)


@dataclass(frozen=True)
class BipartiteCheck:
    bipartite: bool
    range_part: Tuple[Vertex, ...] = ()
    source_part: Tuple[Vertex, ...] = ()

    def __bool__(self):
        return self.bipartite


def is_bipartite(sg: SeparatedGraph | DirectedGraph) -> BipartiteCheck:
    """Check that s(E^1) and r(E^1) split the vertex set.

    On success ``range_part`` is E^{0,0} and ``source_part`` is E^{0,1}.
    """
    g = sg.graph if isinstance(sg, SeparatedGraph) else sg
    rng = {g.range[e] for e in g.edges}
    src = {g.source[e] for e in g.edges}
    if rng & src or rng | src != set(g.vertices):
        return BipartiteCheck(False)
    return BipartiteCheck(
        True,
        tuple(v for v in g.vertices if v in rng),
        tuple(v for v in g.vertices if v in src),
    )


def satisfies_three_twos(sg: SeparatedGraph) -> bool:
    check = is_bipartite(sg)
    if not check:
        return False
    g = sg.graph
    if any(len(sg.classes(v)) < 2 for v in check.range_part):
        return False
    if any(len(cls) < 2 for v in g.vertices for cls in sg.classes(v)):
        return False
    return all(len(g.source_inverse(w)) >= 2 for w in check.source_part)


def bipartite_double(sg: SeparatedGraph | DirectedGraph) -> SeparatedGraph:
    """Bipartite separated graph with two copies v_0, v_1 of each vertex."""
    if isinstance(sg, DirectedGraph):
        sg = trivially_separated(sg)
    g = sg.graph
    v0 = {v: f"{v}_0" for v in g.vertices}
    v1 = {v: f"{v}_1" for v in g.vertices}
    triples = [(f"h_{v}", v1[v], v0[v]) for v in g.vertices]
    triples += [(f"{e}_0", v1[g.source[e]], v0[g.range[e]]) for e in g.edges]
    new = _graph([v0[v] for v in g.vertices] + [v1[v] for v in g.vertices], triples)
    sep = {}
    for v in g.vertices:
        incoming = g.range_inverse(v)
        classes = []
        if incoming:
            classes.append(tuple(f"{e}_0" for e in incoming))
        classes.append((f"h_{v}",))
        sep[v0[v]] = tuple(classes)
    return SeparatedGraph(new, sep)


# ----------------------------------------------------------------- misc

def are_isomorphic(g1: DirectedGraph, g2: DirectedGraph) -> bool:
    """Multigraph isomorphism by adjacency-matrix comparison (small graphs)."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    a1, a2 = adjacency_matrix(g1), adjacency_matrix(g2)
    n = len(a1)

    def signature(a, i):
        return (sorted(a[i]), sorted(row[i] for row in a), a[i][i])

    sig1 = [signature(a1, i) for i in range(n)]
    sig2 = [signature(a2, i) for i in range(n)]
    if sorted(map(repr, sig1)) != sorted(map(repr, sig2)):
        return False
    candidates = [[j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)]
    assignment: List[int] = []
    used = set()

    def extend(i):
        if i == n:
            return True
        for j in candidates[i]:
            if j in used:
                continue
            ok = all(a1[i][k] == a2[j][assignment[k]] and a1[k][i] == a2[assignment[k]][j]
                     for k in range(i))
            if ok and a1[i][i] == a2[j][j]:
                assignment.append(j)
                used.add(j)
                if extend(i + 1):
                    return True
                used.discard(j)
                assignment.pop()
        return False

    return extend(0)


_COLORS = ("blue", "red", "darkgreen", "orange", "purple", "brown", "magenta", "gray")


def to_dot(g: DirectedGraph | SeparatedGraph, name: str = "E") -> str:
    """DOT text; separation classes become edge colors (class index order)."""
    sg = g if isinstance(g, SeparatedGraph) else trivially_separated(g)
    base = sg.graph
    color = {}
    for v in base.vertices:
        for k, cls in enumerate(sg.classes(v)):
            for e in cls:
                color[e] = _COLORS[k % len(_COLORS)]
    lines = [f'digraph "{name}" {{']
    for v in base.vertices:
        lines.append(f'  "{v}";')
    for e in base.edges:
        lines.append(f'  "{base.source[e]}" -> "{base.range[e]}" [label="{e}", color={color.get(e, "black")}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def iter_paths(g: DirectedGraph, length: int) -> Iterable[Tuple[Edge, ...]]:
    """All composable edge sequences of exactly ``length`` edges, in edge order."""
    if length == 0:
        yield ()
        return
    for p in iter_paths(g, length - 1):
        for f in g.edges:
            if not p or g.range[f] == g.source[p[-1]]:
                yield p + (f,)
