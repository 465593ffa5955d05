"""Canonical resolution of finite bipartite separated graphs.

Level n+1 of a tower is the one-step resolution of level n.  Its bottom
layer E^{0,1}_{n+1} consists of tuple vertices v(x1,...,xk), one per choice
of an edge in each class at some u in E^{0,0}_n; its top layer is the bottom
layer of level n.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import LevelOutOfRange, NotBipartite, SizeCapExceeded, WellDefinednessUnproved
from .graphs import SeparatedGraph, _graph, is_bipartite
from .limits import DEFAULT_LEVEL_CAP, size_cap
from .monoids import (
    DEFAULT_BUDGET,
    Equal,
    Presentation,
    RewritePath,
    SearchBudget,
    Unknown,
    decide_equal,
    decide_leq,
    separated_monoid,
)
from .monoids.certificates import check_equal
from .monoids.presentation import Element, apply_step


def _vertex_name(choice: Sequence[str]) -> str:
    return f"v({','.join(choice)})"


def _edge_name(x: str, rest: Sequence[str]) -> str:
    return f"a^{{{x}}}({','.join(rest)})"


def one_step_resolution(sg: SeparatedGraph) -> SeparatedGraph:
    check = is_bipartite(sg)
    if not check:
        raise NotBipartite("the one-step resolution needs a bipartite separated graph")
    g = sg.graph
    vertices = list(check.source_part)
    triples = []
    cls_of: Dict[str, List[str]] = {}  # edge x of E -> members of X(x)
    for u in check.range_part:
        classes = sg.classes(u)
        for choice in itertools.product(*classes):
            vertices.append(_vertex_name(choice))
        for i, X in enumerate(classes):
            others = classes[:i] + classes[i + 1:]
            for x in X:
                members = []
                for rest in itertools.product(*others):
                    choice = rest[:i] + (x,) + rest[i:]
                    name = _edge_name(x, rest)
                    triples.append((name, _vertex_name(choice), g.source[x]))
                    members.append(name)
                cls_of[x] = members
    new = _graph(vertices, triples)
    sep = {}
    for v in check.source_part:
        sep[v] = tuple(tuple(cls_of[x]) for x in g.source_inverse(v))
    return SeparatedGraph(new, sep)


def predicted_sizes(sg: SeparatedGraph) -> Tuple[int, int]:
    """(|E_1^{0,1}|, |E_1^1|) from the product formulas."""
    check = is_bipartite(sg)
    if not check:
        raise NotBipartite("graph is not bipartite")
    verts = edges = 0
    for u in check.range_part:
        sizes = [len(X) for X in sg.classes(u)]
        verts += prod(sizes)
        edges += len(sizes) * prod(sizes)
    return verts, edges


# ----------------------------------------------------------------- tower

@dataclass(frozen=True)
class TypElement:
    level: int
    element: Element


@dataclass
class TransitionReport:
    level: int
    images: Dict[str, Dict[str, int]]
    proofs: List[dict] = field(default_factory=list)

    def to_json(self):
        return {"level": self.level, "images": self.images,
                "well_defined": True, "proofs": self.proofs}


class ResolutionTower:
    def __init__(self, base: SeparatedGraph, depth: int, cap: Optional[int] = None):
        if depth < 0:
            raise LevelOutOfRange("depth must be nonnegative")
        if not is_bipartite(base):
            raise NotBipartite("tower base must be bipartite")
        self.cap = size_cap(DEFAULT_LEVEL_CAP) if cap is None else cap
        self.levels: List[SeparatedGraph] = [base]
        for _ in range(depth):
            verts, edges = predicted_sizes(self.levels[-1])
            top = len(is_bipartite(self.levels[-1]).source_part)
            if verts + top > self.cap or edges > self.cap:
                raise SizeCapExceeded(
                    f"level {len(self.levels)} would have {verts + top} vertices and {edges} edges "
                    f"(cap {self.cap})")
            self.levels.append(one_step_resolution(self.levels[-1]))
        self._monoids: Dict[int, Presentation] = {}
        self._maps: Dict[int, Tuple[List[Element], TransitionReport]] = {}

    def __len__(self):
        return len(self.levels)

    def _level(self, n):
        if not 0 <= n < len(self.levels):
            raise LevelOutOfRange(f"level {n} outside 0..{len(self.levels) - 1}")
        return self.levels[n]

    def bottom(self, n) -> Tuple[str, ...]:
        """E_n^{0,0}."""
        return is_bipartite(self._level(n)).range_part

    def top(self, n) -> Tuple[str, ...]:
        """E_n^{0,1}."""
        return is_bipartite(self._level(n)).source_part

    def monoid(self, n) -> Presentation:
        if n not in self._monoids:
            self._monoids[n] = separated_monoid(self._level(n))
        return self._monoids[n]

    def element(self, n, expr) -> TypElement:
        return TypElement(n, self.monoid(n).element(expr))

    # transition maps ---------------------------------------------------------
    def transition(self, n) -> Tuple[List[Element], TransitionReport]:
        """Images of the level-n generators at level n+1, with proofs.

        Every class sum at each u is rewritten forward to the sum over all
        tuple vertices above u; the rewrite paths certify that the image of
        a_u does not depend on the class used.
        """
        if n in self._maps:
            return self._maps[n]
        if not 0 <= n < len(self.levels) - 1:
            raise LevelOutOfRange(f"no transition map out of level {n}")
        sg, nxt = self.levels[n], self.levels[n + 1]
        p, q = self.monoid(n), self.monoid(n + 1)
        rel_index = {tag: i for i, tag in enumerate(q.tags)}
        images: List[Element] = []
        report = TransitionReport(n, {})
        for gen in p.generators:
            classes = sg.classes(gen)
            if not classes:
                img = q.unit(gen)
            else:
                sums = [self._class_sum(sg, q, X) for X in classes]
                img = sums[0]
                paths = [self._expand(sg, nxt, q, rel_index, X, s) for X, s in zip(classes, sums)]
                for k in range(1, len(classes)):
                    cert = RewritePath(paths[0], paths[k])
                    if not check_equal(q, sums[0], sums[k], cert):
                        raise WellDefinednessUnproved(
                            f"class sums at {gen!r} not shown equal at level {n + 1}",
                            failing_pair=(q.format(sums[0]), q.format(sums[k])))
                    report.proofs.append({"vertex": gen, "classes": [0, k], "proof": {
                        "claim": "equal", "presentation": q.to_json(), "x": list(sums[0]),
                        "y": list(sums[k]), "certificate": cert.to_json()}})
            images.append(img)
            report.images[gen] = {g: c for g, c in zip(q.generators, img) if c}
        self._maps[n] = (images, report)
        return self._maps[n]

    @staticmethod
    def _class_sum(sg, q, X) -> Element:
        vec = [0] * q.rank
        for e in X:
            vec[q.index(sg.graph.source[e])] += 1
        return tuple(vec)

    @staticmethod
    def _expand(sg, nxt, q, rel_index, X, start) -> Tuple[Tuple[int, int], ...]:
        """Forward steps rewriting each a_{s(x)}, x in X, by the class X(x)."""
        steps = []
        x_state = start
        for x in X:
            w = sg.graph.source[x]
            k = sg.graph.source_inverse(w).index(x)
            step = (rel_index[(w, k)], 1)
            x_state = apply_step(q, x_state, step)
            if x_state is None:
                raise WellDefinednessUnproved(f"cannot expand a_{w}", failing_pair=(x, w))
            steps.append(step)
        return tuple(steps)

    def apply_map(self, n, x: Element) -> Element:
        images, _ = self.transition(n)
        q = self.monoid(n + 1)
        out = [0] * q.rank
        for c, img in zip(x, images):
            if c:
                for i, v in enumerate(img):
                    out[i] += c * v
        return tuple(out)

    def promote(self, x: TypElement, target: int) -> TypElement:
        if not x.level <= target < len(self.levels):
            raise LevelOutOfRange(f"cannot promote level {x.level} to {target}")
        el = x.element
        for n in range(x.level, target):
            el = self.apply_map(n, el)
        return TypElement(target, el)

    # limit queries -----------------------------------------------------------
    def _query(self, x: TypElement, y: TypElement, fn, budget, level):
        L = max(x.level, y.level) if level is None else level
        last = None
        while L < len(self.levels):
            px, py = self.promote(x, L), self.promote(y, L)
            res = fn(self.monoid(L), px.element, py.element, budget)
            last = (L, px.element, py.element, res)
            if not isinstance(res, Unknown):
                break
            L += 1
        return last

    def typ_equal(self, x: TypElement, y: TypElement, budget: SearchBudget = DEFAULT_BUDGET,
                  level: Optional[int] = None):
        """(level, x, y, verdict): decided at the lowest common level, moving
        up the tower while the verdict is Unknown."""
        return self._query(x, y, decide_equal, budget, level)

    def typ_leq(self, x: TypElement, y: TypElement, budget: SearchBudget = DEFAULT_BUDGET,
                level: Optional[int] = None):
        return self._query(x, y, decide_leq, budget, level)


def resolve_tower(sg: SeparatedGraph, depth: int, cap: Optional[int] = None) -> ResolutionTower:
    return ResolutionTower(sg, depth, cap)


def transition_map(t: ResolutionTower, n: int):
    return t.transition(n)


def promote(t: ResolutionTower, x: TypElement, target: int) -> TypElement:
    return t.promote(x, target)


def typ_equal(t: ResolutionTower, x: TypElement, y: TypElement, budget: SearchBudget = DEFAULT_BUDGET):
    return t.typ_equal(x, y, budget)


def typ_leq(t: ResolutionTower, x: TypElement, y: TypElement, budget: SearchBudget = DEFAULT_BUDGET):
    return t.typ_leq(x, y, budget)


# ----------------------------------------------------------------- full shift

def binary_words(n: int) -> List[str]:
    return ["".join(w) for w in itertools.product("01", repeat=n)]


def fullshift_monoid(n: int) -> Presentation:
    """M_n: generators {0,1}^n, relations a0 + a1 = 0a + 1a for a in {0,1}^(n-1)."""
    if n < 1:
        raise LevelOutOfRange("fullshift_monoid needs n >= 1")
    gens = binary_words(n)
    idx = {w: i for i, w in enumerate(gens)}
    rels = []
    for a in binary_words(n - 1):
        lhs, rhs = [0] * len(gens), [0] * len(gens)
        lhs[idx[a + "0"]] += 1
        lhs[idx[a + "1"]] += 1
        rhs[idx["0" + a]] += 1
        rhs[idx["1" + a]] += 1
        rels.append((tuple(lhs), tuple(rhs)))
    return Presentation(tuple(gens), tuple(rels))


def fullshift_phi(n: int, x: Element) -> Element:
    """phi_n: M_n -> M_{n+1}, b -> 0b + 1b."""
    src = binary_words(n)
    tgt = {w: i for i, w in enumerate(binary_words(n + 1))}
    out = [0] * len(tgt)
    for w, c in zip(src, x):
        out[tgt["0" + w]] += c
        out[tgt["1" + w]] += c
    return tuple(out)


def bottom_monoid(t: ResolutionTower, n: int) -> Presentation:
    """M(E_n, C^n) with the E^{0,0} generators eliminated.

    Each u contributes the relations sum(X_1) = sum(X_j) for j >= 2; the
    generators are the vertices of E_n^{0,1}.
    """
    sg = t.levels[n]
    gens = t.top(n)
    idx = {v: i for i, v in enumerate(gens)}
    rels = []
    for u in t.bottom(n):
        sums = []
        for X in sg.classes(u):
            vec = [0] * len(gens)
            for e in X:
                vec[idx[sg.graph.source[e]]] += 1
            sums.append(tuple(vec))
        rels.extend((sums[0], s) for s in sums[1:])
    return Presentation(tuple(gens), tuple(rels))


def _normalized_relations(p: Presentation):
    out = set()
    for l, r in p.relations:
        if l != r:
            out.add(frozenset((l, r)))
    return sorted(out, key=lambda s: sorted(s))


def _encode(p: Presentation) -> nx.Graph:
    g = nx.Graph()
    for i in range(p.rank):
        g.add_node(("g", i), kind="gen")
    for k, rel in enumerate(_normalized_relations(p)):
        g.add_node(("r", k), kind="rel")
        for s, side in enumerate(sorted(rel)):
            g.add_node(("s", k, s), kind="side")
            g.add_edge(("r", k), ("s", k, s), weight=0)
            for i, c in enumerate(side):
                if c:
                    g.add_edge(("s", k, s), ("g", i), weight=c)
    return g


def presentation_isomorphism(p: Presentation, q: Presentation) -> Optional[Dict[str, str]]:
    """A generator bijection carrying the relations of p onto those of q.

    Trivial and duplicate relations are ignored and relation sides are
    unordered.  Returns None when no bijection exists.
    """
    if p.rank != q.rank:
        return None
    gp, gq = _encode(p), _encode(q)
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        gp, gq,
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["weight"] == b["weight"])
    for mapping in matcher.isomorphisms_iter():
        return {p.generators[a[1]]: q.generators[b[1]] for a, b in sorted(mapping.items()) if a[0] == "g"}
    return None


# ----------------------------------------------------------------- export

def export_bratteli(t: ResolutionTower) -> dict:
    """Layered diagram: layer j holds F^{0,j}; edges of level j run from layer j+1 to j."""
    layers = [list(t.bottom(0))] + [list(t.top(n)) for n in range(len(t.levels))]
    edges = []
    for n, sg in enumerate(t.levels):
        g = sg.graph
        for v in t.bottom(n):
            for k, X in enumerate(sg.classes(v)):
                for e in X:
                    edges.append({"name": e, "level": n, "src": g.source[e], "rng": g.range[e], "class": k})
    return {"layers": layers, "edges": edges}


_PALETTE = ("blue", "red", "darkgreen", "orange", "purple", "brown", "gray")


def bratteli_dot(t: ResolutionTower) -> str:
    data = export_bratteli(t)
    lines = ["digraph bratteli {", "  rankdir=BT;"]
    for j, layer in enumerate(data["layers"]):
        names = " ".join(f'"{j}:{v}";' for v in layer)
        lines.append(f"  {{ rank=same; {names} }}")
        for v in layer:
            lines.append(f'  "{j}:{v}" [label="{v}"];')
    for e in data["edges"]:
        color = _PALETTE[e["class"] % len(_PALETTE)]
        lines.append(f'  "{e["level"] + 1}:{e["src"]}" -> "{e["level"]}:{e["rng"]}" '
                     f'[label="{e["name"]}", color={color}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
