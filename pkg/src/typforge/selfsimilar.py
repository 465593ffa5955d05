"""Self-similar actions of groups on finite graphs.

Three concrete group models are supported: the integers acting through a
Katsura pair (A, B), groups generated by an invertible Mealy automaton acting
on a rose, and finite groups given by generator permutation tables (the
trivial group is the special case with no generators).

All group elements act on the left.  A product ``g*h`` means "apply h, then
g", so the cocycle identity reads phi(gh, e) = phi(g, h.e) phi(h, e).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    BadParameter,
    InvalidPath,
    NonComputableOrbits,
    NonInvertibleState,
    SchemaError,
    SpecViolation,
)
from .graphs import DirectedGraph, _graph, build_graph, iter_paths, rose, SeparatedGraph
from .monoids import Presentation, SearchBudget, cancellation_report, graph_monoid, is_stably_finite
from .monoids.properties import graph_stably_finite

GroupElement = Hashable


class SelfSimilarAction:
    """Interface shared by the concrete group models."""

    graph: DirectedGraph
    finite_group = False

    # group structure -------------------------------------------------------
    def identity(self) -> GroupElement:
        raise NotImplementedError

    def mul(self, g, h) -> GroupElement:
        raise NotImplementedError

    def inv(self, g) -> GroupElement:
        raise NotImplementedError

    def equal(self, g, h) -> bool:
        return g == h

    def is_identity(self, g) -> bool:
        return self.equal(g, self.identity())

    def generators(self) -> List[GroupElement]:
        raise NotImplementedError

    def elements(self, bound: int) -> List[GroupElement]:
        """A deterministic finite sample of group elements of size ~ bound."""
        raise NotImplementedError

    # action ----------------------------------------------------------------
    def act_vertex(self, g, v):
        raise NotImplementedError

    def act_edge(self, g, e):
        raise NotImplementedError

    def cocycle(self, g, e) -> GroupElement:
        raise NotImplementedError

    # presentation ----------------------------------------------------------
    def format(self, g) -> str:
        return str(g)

    def parse(self, text: str) -> GroupElement:
        raise NotImplementedError


# ----------------------------------------------------------------- Katsura

@dataclass(frozen=True)
class KatsuraSpec:
    A: Tuple[Tuple[int, ...], ...]
    B: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.A)
        if n == 0:
            raise SpecViolation("A must be a nonempty square matrix")
        for M, name in ((self.A, "A"), (self.B, "B")):
            if len(M) != n or any(len(row) != n for row in M):
                raise SpecViolation(f"{name} must be {n}x{n}")
        for i, row in enumerate(self.A):
            if any(a < 0 for a in row):
                raise SpecViolation("A must be nonnegative")
            if not any(row):
                raise SpecViolation(f"A has a zero row at index {i + 1}")
            for j, a in enumerate(row):
                if a == 0 and self.B[i][j] != 0:
                    raise SpecViolation(f"A[{i + 1}][{j + 1}] = 0 but B[{i + 1}][{j + 1}] != 0")

    @classmethod
    def from_json(cls, data: Mapping) -> "KatsuraSpec":
        try:
            A = tuple(tuple(int(x) for x in row) for row in data["A"])
            B = tuple(tuple(int(x) for x in row) for row in data["B"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError("Katsura spec needs integer matrices 'A' and 'B'") from None
        return cls(A, B)

    def to_json(self):
        return {"A": [list(r) for r in self.A], "B": [list(r) for r in self.B]}

    @property
    def size(self) -> int:
        return len(self.A)


def katsura_edge(i: int, j: int, n: int) -> str:
    return f"e_{i}_{j}_{n}"


class KatsuraAction(SelfSimilarAction):
    """The integers acting on the (A, B) graph; vertices are fixed."""

    def __init__(self, spec: KatsuraSpec):
        self.spec = spec
        N = spec.size
        vertices = [str(i) for i in range(1, N + 1)]
        triples = []
        self._edge = {}
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                for n in range(spec.A[i - 1][j - 1]):
                    name = katsura_edge(i, j, n)
                    triples.append((name, str(j), str(i)))
                    self._edge[name] = (i, j, n)
        self.graph = _graph(vertices, triples)

    def identity(self):
        return 0

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def generators(self):
        return [1]

    def elements(self, bound):
        return [0] + [s * m for m in range(1, bound + 1) for s in (1, -1)]

    def act_vertex(self, g, v):
        return v

    def _divide(self, m, e):
        i, j, n = self._edge[e]
        a, b = self.spec.A[i - 1][j - 1], self.spec.B[i - 1][j - 1]
        k_hat, n_hat = divmod(n + m * b, a)  # floor division keeps 0 <= n_hat < a
        return katsura_edge(i, j, n_hat), k_hat

    def act_edge(self, g, e):
        return self._divide(g, e)[0]

    def cocycle(self, g, e):
        return self._divide(g, e)[1]

    def parse(self, text):
        try:
            return int(text)
        except ValueError:
            raise SchemaError(f"integer group element expected, got {text!r}") from None


def katsura_action(spec: KatsuraSpec | Mapping) -> KatsuraAction:
    if not isinstance(spec, KatsuraSpec):
        spec = KatsuraSpec.from_json(spec)
    return KatsuraAction(spec)


def katsura_pseudo_free(spec: KatsuraSpec) -> bool:
    return all(b != 0 for row_a, row_b in zip(spec.A, spec.B) for a, b in zip(row_a, row_b) if a)


# ----------------------------------------------------------------- automata

@dataclass(frozen=True)
class MealySpec:
    alphabet: int
    names: Tuple[str, ...]
    out: Tuple[Tuple[int, ...], ...]
    next: Tuple[Tuple[str, ...], ...]

    @classmethod
    def from_json(cls, data: Mapping) -> "MealySpec":
        try:
            n = int(data["alphabet"])
            states = list(data["states"])
            names = tuple(str(s["name"]) for s in states)
            out = tuple(tuple(int(x) for x in s["out"]) for s in states)
            nxt = tuple(tuple(str(x) for x in s["next"]) for s in states)
        except (KeyError, TypeError, ValueError):
            raise SchemaError("automaton needs 'alphabet' and states with name/out/next") from None
        return cls(n, names, out, nxt)

    def to_json(self):
        return {"alphabet": self.alphabet,
                "states": [{"name": s, "out": list(o), "next": list(x)}
                           for s, o, x in zip(self.names, self.out, self.next)]}


LAMPLIGHTER = MealySpec(2, ("a", "b"), ((0, 1), (1, 0)), (("a", "b"), ("b", "a")))

Word = Tuple[Tuple[str, int], ...]


def _reduce(word: Iterable[Tuple[str, int]]) -> Word:
    out: List[Tuple[str, int]] = []
    for s, d in word:
        if out and out[-1] == (s, -d):
            out.pop()
        else:
            out.append((s, d))
    return tuple(out)


class AutomatonAction(SelfSimilarAction):
    """Group generated by the states of an invertible Mealy machine.

    Letter ``k`` is the loop ``x{k+1}`` of the rose.  Elements are freely
    reduced words of (state, +-1); the word (s1, ..., sk) applies sk first.
    Equality is syntactic after reduction, falling back to comparing the
    action on all words up to ``check_length`` letters.
    """

    def __init__(self, machine: MealySpec, check_length: int = 6):
        self.machine = machine
        self.check_length = check_length
        n = machine.alphabet
        if n < 1:
            raise BadParameter("alphabet must be nonempty")
        if len(set(machine.names)) != len(machine.names):
            raise SchemaError("duplicate state name")
        self._index = {s: k for k, s in enumerate(machine.names)}
        self._inverse_out = []
        for name, out, nxt in zip(machine.names, machine.out, machine.next):
            if len(out) != n or len(nxt) != n:
                raise SchemaError(f"state {name!r} needs {n} outputs and {n} next states")
            if sorted(out) != list(range(n)):
                raise NonInvertibleState(f"state {name!r} does not permute the alphabet")
            for t in nxt:
                if t not in self._index:
                    raise SchemaError(f"state {name!r} moves to unknown state {t!r}")
            inv = [0] * n
            for x, y in enumerate(out):
                inv[y] = x
            self._inverse_out.append(tuple(inv))
        self.graph = rose(n)
        self._letter = {f"x{k + 1}": k for k in range(n)}

    def identity(self):
        return ()

    def mul(self, g, h):
        return _reduce(tuple(g) + tuple(h))

    def inv(self, g):
        return tuple((s, -d) for s, d in reversed(g))

    def generators(self):
        return [((s, 1),) for s in self.machine.names]

    def elements(self, bound):
        gens = [(s, d) for s in self.machine.names for d in (1, -1)]
        seen = {(): None}
        layer = [()]
        for _ in range(bound):
            nxt = []
            for w in layer:
                for letter in gens:
                    r = _reduce(w + (letter,))
                    if len(r) == len(w) + 1 and r not in seen:
                        seen[r] = None
                        nxt.append(r)
            layer = nxt
        return list(seen)

    def _letter_step(self, g: Word, x: int) -> Tuple[int, Word]:
        restrictions: List[Tuple[str, int]] = []
        for s, d in reversed(g):
            k = self._index[s]
            if d > 0:
                y = self.machine.out[k][x]
                restrictions.append((self.machine.next[k][x], 1))
            else:
                y = self._inverse_out[k][x]
                restrictions.append((self.machine.next[k][y], -1))
            x = y
        restrictions.reverse()
        return x, _reduce(restrictions)

    def act_word(self, g: Word, letters: Sequence[int]) -> Tuple[int, ...]:
        out = []
        for x in letters:
            y, g = self._letter_step(g, x)
            out.append(y)
        return tuple(out)

    def equal(self, g, h):
        g, h = _reduce(g), _reduce(h)
        if g == h:
            return True
        diff = self.mul(self.inv(h), g)
        n = self.machine.alphabet
        for length in range(1, self.check_length + 1):
            for w in itertools.product(range(n), repeat=length):
                if self.act_word(diff, w) != w:
                    return False
        return True

    def act_vertex(self, g, v):
        return v

    def act_edge(self, g, e):
        return f"x{self._letter_step(g, self._letter[e])[0] + 1}"

    def cocycle(self, g, e):
        return self._letter_step(g, self._letter[e])[1]

    def format(self, g):
        if not g:
            return "1"
        return " ".join(s if d > 0 else f"{s}^-1" for s, d in g)

    def parse(self, text):
        text = text.replace("*", " ").strip()
        if text in ("", "1"):
            return ()
        word = []
        for tok in text.split():
            if tok.endswith("^-1"):
                s, d = tok[:-3], -1
            else:
                s, d = tok, 1
            if s not in self._index:
                raise SchemaError(f"unknown state {s!r}")
            word.append((s, d))
        return _reduce(word)


def automaton_action(machine: MealySpec | Mapping, graph: Optional[DirectedGraph] = None) -> AutomatonAction:
    if not isinstance(machine, MealySpec):
        machine = MealySpec.from_json(machine)
    act = AutomatonAction(machine)
    if graph is not None and graph != act.graph:
        raise BadParameter(f"an automaton over {machine.alphabet} letters acts on rose({machine.alphabet})")
    return act


# ----------------------------------------------------------------- finite groups

class PermutationAction(SelfSimilarAction):
    """A finite group generated by permutation tables on vertices and edges.

    Each generator also lists its cocycle values as words in the generators.
    Elements are the induced permutations of vertices followed by edges;
    cocycles of general elements are evaluated along a shortest generator
    word, so an inconsistent table surfaces as a cocycle violation.
    """

    finite_group = True

    def __init__(self, graph: DirectedGraph, generators: Sequence[Mapping]):
        self.graph = graph
        self._points = list(graph.vertices) + list(graph.edges)
        self._pos = {p: i for i, p in enumerate(self._points)}
        self._gen_names = []
        self._gen_perm = []
        self._gen_cocycle = []
        for gen in generators:
            name = str(gen["name"])
            vmap = {str(k): str(v) for k, v in gen.get("vertices", {}).items()}
            emap = {str(k): str(v) for k, v in gen.get("edges", {}).items()}
            perm = []
            for v in graph.vertices:
                perm.append(self._pos[vmap.get(v, v)] if vmap.get(v, v) in self._pos else _bad(v))
            for e in graph.edges:
                perm.append(self._pos[emap.get(e, e)] if emap.get(e, e) in self._pos else _bad(e))
            if sorted(perm) != list(range(len(perm))):
                raise SchemaError(f"generator {name!r} is not a permutation")
            self._gen_names.append(name)
            self._gen_perm.append(tuple(perm))
            self._gen_cocycle.append({str(e): [str(t) for t in w] for e, w in gen.get("cocycle", {}).items()})
        for table in self._gen_cocycle:
            for word in table.values():
                for t in word:
                    if t not in self._gen_names:
                        raise SchemaError(f"cocycle uses unknown generator {t!r}")
        self._words = self._closure()

    def _closure(self) -> Dict[tuple, Tuple[int, ...]]:
        ident = tuple(range(len(self._points)))
        words = {ident: ()}
        layer = [ident]
        while layer:
            nxt = []
            for g in layer:
                for k, perm in enumerate(self._gen_perm):
                    h = self.mul(perm, g)
                    if h not in words:
                        words[h] = (k,) + words[g]
                        nxt.append(h)
            layer = nxt
        return words

    def identity(self):
        return tuple(range(len(self._points)))

    def mul(self, g, h):
        return tuple(g[h[i]] for i in range(len(h)))

    def inv(self, g):
        out = [0] * len(g)
        for i, j in enumerate(g):
            out[j] = i
        return tuple(out)

    def generators(self):
        return list(self._gen_perm)

    def elements(self, bound=0):
        return list(self._words)

    def act_vertex(self, g, v):
        return self._points[g[self._pos[v]]]

    def act_edge(self, g, e):
        return self._points[g[self._pos[e]]]

    def _gen_restrict(self, k, e):
        word = self._gen_cocycle[k].get(e)
        if word is None:
            return self.identity()
        out = self.identity()
        for t in word:
            out = self.mul(out, self._gen_perm[self._gen_names.index(t)])
        return out

    def cocycle(self, g, e):
        word = self._words.get(g)
        if word is None:
            raise NonComputableOrbits("element outside the generated group")
        # g = g_{k1} g_{k2} ... ; phi(g1 h, e) = phi(g1, h.e) phi(h, e)
        result = self.identity()
        current = e
        for k in reversed(word):
            result = self.mul(self._gen_restrict(k, current), result)
            current = self.act_edge(self._gen_perm[k], current)
        return result

    def format(self, g):
        word = self._words.get(g)
        if word is None:
            return repr(g)
        return " ".join(self._gen_names[k] for k in word) or "1"

    def parse(self, text):
        out = self.identity()
        for tok in text.replace("*", " ").split():
            if tok == "1":
                continue
            if tok not in self._gen_names:
                raise SchemaError(f"unknown generator {tok!r}")
            out = self.mul(out, self._gen_perm[self._gen_names.index(tok)])
        return out


def _bad(x):
    raise SchemaError(f"permutation table maps {x!r} outside the graph")


def trivial_action(graph: DirectedGraph | SeparatedGraph) -> PermutationAction:
    if isinstance(graph, SeparatedGraph):
        graph = graph.graph
    return PermutationAction(graph, [])


def swap_example() -> PermutationAction:
    """Z/2 exchanging two vertices, each carrying one loop."""
    g = _graph(["u", "v"], [("loop_u", "u", "u"), ("loop_v", "v", "v")])
    t = {"name": "t", "vertices": {"u": "v", "v": "u"},
         "edges": {"loop_u": "loop_v", "loop_v": "loop_u"},
         "cocycle": {"loop_u": ["t"], "loop_v": ["t"]}}
    return PermutationAction(g, [t])


def action_from_json(data: Mapping) -> SelfSimilarAction:
    """Dispatch on the bundle shape: Katsura, automaton or permutation tables."""
    if "A" in data and "B" in data:
        return katsura_action(data)
    if "alphabet" in data:
        return automaton_action(data)
    if "graph" in data:
        g = build_graph(data["graph"])
        if isinstance(g, SeparatedGraph):
            g = g.graph
        return PermutationAction(g, data.get("generators", []))
    raise SchemaError("unrecognized action bundle")


# ----------------------------------------------------------------- paths

def _check_path(act: SelfSimilarAction, path: Sequence[str]):
    g = act.graph
    for e in path:
        if e not in g.range:
            raise InvalidPath(f"unknown edge {e!r}")
    for a, b in zip(path, path[1:]):
        if g.source[a] != g.range[b]:
            raise InvalidPath(f"edges {a!r}, {b!r} do not compose")


def _edges_of(path):
    return tuple(path.edges) if hasattr(path, "edges") else tuple(path)


def act_path(act: SelfSimilarAction, g, path) -> Tuple[str, ...]:
    """g.(e1 e2 ... en), evaluated letter by letter."""
    edges = _edges_of(path)
    _check_path(act, edges)
    out = []
    for e in edges:
        out.append(act.act_edge(g, e))
        g = act.cocycle(g, e)
    return tuple(out)


def restrict_path(act: SelfSimilarAction, g, path):
    """The restriction g|_path."""
    edges = _edges_of(path)
    _check_path(act, edges)
    for e in edges:
        g = act.cocycle(g, e)
    return g


# ----------------------------------------------------------------- verification

@dataclass
class CocycleReport:
    elements: List[str]
    max_path_length: int
    checks: int = 0
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"ok": self.ok, "checks": self.checks, "sampled_elements": self.elements,
                "max_path_length": self.max_path_length, "violations": self.violations}


def verify_cocycle(act: SelfSimilarAction, elements: Optional[Sequence] = None,
                   max_path_length: int = 2, bound: int = 2) -> CocycleReport:
    """Check the self-similarity axioms on a sample of elements and paths.

    Elements default to ``act.elements(bound)``; paths are all paths of
    length at most ``max_path_length``.
    """
    if elements is None:
        elements = act.elements(bound)
    elements = list(elements)
    report = CocycleReport([act.format(g) for g in elements], max_path_length)
    graph = act.graph
    one = act.identity()

    def fail(kind, **data):
        report.violations.append({"check": kind, **{k: str(v) for k, v in data.items()}})

    for e in graph.edges:
        report.checks += 1
        if act.act_edge(one, e) != e or not act.is_identity(act.cocycle(one, e)):
            fail("identity", e=e)
    for g in elements:
        for v in graph.vertices:
            report.checks += 1
            if act.act_vertex(g, v) not in graph.vertices:
                fail("vertex_action", g=act.format(g), v=v)
        for e in graph.edges:
            report.checks += 2
            ge = act.act_edge(g, e)
            if (graph.source[ge] != act.act_vertex(g, graph.source[e])
                    or graph.range[ge] != act.act_vertex(g, graph.range[e])):
                fail("automorphism", g=act.format(g), e=e)
            phi = act.cocycle(g, e)
            if act.act_vertex(phi, graph.source[e]) != act.act_vertex(g, graph.source[e]):
                fail("source_condition", g=act.format(g), e=e)
    for g in elements:
        for h in elements:
            gh = act.mul(g, h)
            for e in graph.edges:
                report.checks += 2
                if act.act_edge(gh, e) != act.act_edge(g, act.act_edge(h, e)):
                    fail("action", g=act.format(g), h=act.format(h), e=e)
                lhs = act.cocycle(gh, e)
                rhs = act.mul(act.cocycle(g, act.act_edge(h, e)), act.cocycle(h, e))
                if not act.equal(lhs, rhs):
                    fail("cocycle", g=act.format(g), h=act.format(h), e=e)
    paths = [p for n in range(1, max_path_length + 1) for p in iter_paths(graph, n)]
    for g in elements:
        for p in paths:
            for cut in range(1, len(p)):
                alpha, beta = p[:cut], p[cut:]
                report.checks += 2
                g_alpha = restrict_path(act, g, alpha)
                if act_path(act, g, p) != act_path(act, g, alpha) + act_path(act, g_alpha, beta):
                    fail("path_action", g=act.format(g), alpha=alpha, beta=beta)
                if not act.equal(restrict_path(act, g, p), restrict_path(act, g_alpha, beta)):
                    fail("path_restriction", g=act.format(g), alpha=alpha, beta=beta)
    return report


# ----------------------------------------------------------------- pseudo-freeness

@dataclass
class PseudoFreeResult:
    verdict: str  # "Yes" | "No" | "Unknown"
    witness: Optional[Tuple[str, str]] = None
    bound: Optional[int] = None
    method: str = "search"

    def to_json(self):
        out = {"verdict": self.verdict, "method": self.method}
        if self.witness is not None:
            out["g"], out["e"] = self.witness
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def pseudo_free_search(act: SelfSimilarAction, bound: int = 8):
    """First (g, e) with g != 1, g.e = e and phi(g, e) = 1 among sampled g."""
    for g in act.elements(bound):
        if act.is_identity(g):
            continue
        for e in act.graph.edges:
            if act.act_edge(g, e) == e and act.is_identity(act.cocycle(g, e)):
                return g, e
    return None


def is_pseudo_free(act: SelfSimilarAction, bound: int = 8) -> PseudoFreeResult:
    if isinstance(act, KatsuraAction):
        found = pseudo_free_search(act, bound)
        if katsura_pseudo_free(act.spec):
            return PseudoFreeResult("Yes", bound=bound, method="katsura")
        if found is None:  # the witness m = A_ij always lies in range for small specs
            found = _katsura_witness(act)
        return PseudoFreeResult("No", (act.format(found[0]), found[1]), bound, "katsura")
    found = pseudo_free_search(act, bound)
    if found is not None:
        return PseudoFreeResult("No", (act.format(found[0]), found[1]), bound)
    if act.finite_group:
        return PseudoFreeResult("Yes", bound=bound, method="exhaustive")
    return PseudoFreeResult("Unknown", bound=bound)


def _katsura_witness(act: KatsuraAction):
    for e, (i, j, n) in act._edge.items():
        if act.spec.B[i - 1][j - 1] == 0:
            return 1, e
    raise AssertionError("unreachable")


# ----------------------------------------------------------------- quotient

def vertex_orbits(act: SelfSimilarAction) -> List[List[str]]:
    """Vertex orbits in order of their least-indexed member."""
    g = act.graph
    index = g.vertex_index()
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for gen in act.generators():
        for v in g.vertices:
            w = act.act_vertex(gen, v)
            if w not in index:
                raise NonComputableOrbits(f"vertex image {w!r} is not a vertex")
            a, b = find(v), find(w)
            if a != b:
                if index[a] < index[b]:
                    parent[b] = a
                else:
                    parent[a] = b
    orbits: Dict[str, List[str]] = {}
    for v in g.vertices:
        orbits.setdefault(find(v), []).append(v)
    return sorted(orbits.values(), key=lambda o: index[o[0]])


def quotient_graph(act: SelfSimilarAction, representatives: Optional[Mapping[int, str]] = None) -> DirectedGraph:
    """E_G: one vertex per orbit, edges r^{-1}(v) for v in a representative set.

    By default the least-indexed vertex of each orbit represents it;
    ``representatives`` maps an orbit position to a different choice.
    """
    g = act.graph
    orbits = vertex_orbits(act)
    reps = []
    for k, orbit in enumerate(orbits):
        choice = (representatives or {}).get(k, orbit[0])
        if choice not in orbit:
            raise BadParameter(f"{choice!r} does not lie in orbit {orbit!r}")
        reps.append(choice)
    label = {}
    for orbit in orbits:
        for v in orbit:
            label[v] = orbit[0]
    chosen = set(reps)
    triples = [(e, label[g.source[e]], label[g.range[e]]) for e in g.edges if g.range[e] in chosen]
    return _graph([o[0] for o in orbits], triples)


def type_monoid_selfsimilar(act: SelfSimilarAction) -> Presentation:
    return graph_monoid(quotient_graph(act))


def dichotomy_report(act: SelfSimilarAction, budget: SearchBudget = SearchBudget(depth=10, frontier=20_000),
                     max_degree: int = 3) -> dict:
    """Monoid-side half of the stably finite / purely infinite dichotomy."""
    eg = quotient_graph(act)
    p = graph_monoid(eg)
    sf = is_stably_finite(p, budget)
    fast = graph_stably_finite(eg)
    report = {
        "quotient_vertices": list(eg.vertices),
        "quotient_edges": list(eg.edges),
        "stably_finite": sf.to_json(),
        "graph_stably_finite": fast,
        "consistent": sf.verdict == "Unknown" or (sf.verdict == "Yes") == fast,
        "cancellation": {k: v.to_json() for k, v in cancellation_report(p, max_degree, budget).items()},
    }
    if fast:
        report["implied"] = "type semigroup stably finite; the algebra is then stably finite (not computed here)"
    else:
        report["implied"] = "type semigroup not stably finite; the algebra is then purely infinite (not computed here)"
    return report
