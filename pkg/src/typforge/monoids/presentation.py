"""Finitely presented commutative monoids and one-step rewriting.

Elements are plain tuples of nonnegative ints indexed by the generator list;
the zero tuple is the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..errors import BadParameter, DimensionMismatch, SchemaError
from ..graphs import DirectedGraph, SeparatedGraph, trivially_separated

Element = Tuple[int, ...]
Step = Tuple[int, int]  # (relation index, +1 for lhs->rhs / -1 for rhs->lhs)


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relations: Tuple[Tuple[Element, Element], ...]
    # optional per-relation tags, e.g. (vertex, class index) for separated graphs
    tags: Tuple = field(default=(), compare=False)

    def __post_init__(self):
        k = len(self.generators)
        if len(set(self.generators)) != k:
            raise SchemaError("duplicate generator")
        for lhs, rhs in self.relations:
            if len(lhs) != k or len(rhs) != k:
                raise DimensionMismatch("relation vector has wrong length")
            if any(c < 0 for c in lhs + rhs):
                raise SchemaError("relation vectors must be nonnegative")
            if not any(lhs) and not any(rhs):
                raise SchemaError("relation with two zero sides")

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def graded(self) -> bool:
        return all(sum(l) == sum(r) for l, r in self.relations)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def unit(self, gen: str | int) -> Element:
        i = gen if isinstance(gen, int) else self.index(gen)
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def index(self, gen: str) -> int:
        try:
            return self.generators.index(gen)
        except ValueError:
            raise SchemaError(f"unknown generator {gen!r}") from None

    def element(self, value) -> Element:
        """Coerce a mapping, sequence or expression string to an element."""
        if isinstance(value, str):
            return parse_expression(self, value)
        if isinstance(value, Mapping):
            vec = [0] * self.rank
            for gen, count in value.items():
                vec[self.index(str(gen))] += int(count)
            return self.check(tuple(vec))
        return self.check(tuple(int(c) for c in value))

    def check(self, x: Sequence[int]) -> Element:
        x = tuple(x)
        if len(x) != self.rank:
            raise DimensionMismatch(f"element of length {len(x)} for {self.rank} generators")
        if any(c < 0 for c in x):
            raise DimensionMismatch("elements are nonnegative")
        return x

    def format(self, x: Element) -> str:
        terms = []
        for g, c in zip(self.generators, x):
            if c == 1:
                terms.append(g)
            elif c:
                terms.append(f"{c}*{g}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [
                {"lhs": _sparse(self.generators, l), "rhs": _sparse(self.generators, r)}
                for l, r in self.relations
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Presentation":
        try:
            gens = tuple(str(g) for g in data["generators"])
            raw = data.get("relations", [])
        except (KeyError, TypeError):
            raise SchemaError("presentation needs 'generators' and 'relations'") from None
        index = {g: i for i, g in enumerate(gens)}
        rels = []
        for item in raw:
            sides = []
            for key in ("lhs", "rhs"):
                vec = [0] * len(gens)
                side = item.get(key, {}) if isinstance(item, Mapping) else None
                if not isinstance(side, Mapping):
                    raise SchemaError(f"relation {item!r} needs lhs/rhs mappings")
                for g, c in side.items():
                    if g not in index:
                        raise SchemaError(f"relation uses unknown generator {g!r}")
                    vec[index[g]] += int(c)
                sides.append(tuple(vec))
            rels.append((sides[0], sides[1]))
        return cls(gens, tuple(rels))


def _sparse(gens, vec) -> Dict[str, int]:
    return {g: c for g, c in zip(gens, vec) if c}


_TERM = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?(.+?)\s*$")


def _split_top_level(expr: str) -> List[str]:
    parts, depth, current = [], 0, []
    for ch in expr:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_expression(p: Presentation, expr: str) -> Element:
    """Parse ``"2*w + v"`` style linear combinations of generator labels."""
    vec = [0] * p.rank
    stripped = expr.strip()
    if stripped in ("", "0"):
        return tuple(vec)
    for part in _split_top_level(stripped):
        m = _TERM.match(part)
        if not m or not m.group(2):
            raise SchemaError(f"cannot parse term {part!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        name = m.group(2)
        if name not in p.generators and name.startswith("a_") and name[2:] in p.generators:
            name = name[2:]
        vec[p.index(name)] += coeff
    return tuple(vec)


# ----------------------------------------------------------------- vector ops

def add(x: Element, y: Element) -> Element:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Element, y: Element) -> Element:
    return tuple(a - b for a, b in zip(x, y))


def scale(k: int, x: Element) -> Element:
    return tuple(k * a for a in x)


def dominates(x: Element, y: Element) -> bool:
    """True when x >= y coordinatewise."""
    return all(a >= b for a, b in zip(x, y))


def meet(x: Element, y: Element) -> Element:
    return tuple(min(a, b) for a, b in zip(x, y))


def degree(x: Element) -> int:
    return sum(x)


def elements_of_degree(rank: int, d: int) -> Iterable[Element]:
    """All vectors of the given coordinate sum, in lexicographically decreasing order."""
    if rank == 0:
        if d == 0:
            yield ()
        return
    if rank == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in elements_of_degree(rank - 1, d - first):
            yield (first,) + rest


# ----------------------------------------------------------------- rewriting

def apply_step(p: Presentation, x: Element, step: Step) -> Optional[Element]:
    rel, direction = step
    lhs, rhs = p.relations[rel]
    old, new = (lhs, rhs) if direction > 0 else (rhs, lhs)
    if not dominates(x, old):
        return None
    return tuple(a - b + c for a, b, c in zip(x, old, new))


def moves(p: Presentation, x: Element, direction: str = "both") -> List[Tuple[Step, Element]]:
    """One-step rewrites of x, ordered by relation index, forward first."""
    out = []
    for i in range(len(p.relations)):
        dirs = {"forward": (1,), "backward": (-1,), "both": (1, -1)}[direction]
        for d in dirs:
            y = apply_step(p, x, (i, d))
            if y is not None and y != x:
                out.append(((i, d), y))
    return out


def rewrite_neighbors(p: Presentation, x: Element, direction: str = "both") -> set:
    if direction not in ("forward", "backward", "both"):
        raise BadParameter(f"direction must be forward, backward or both, not {direction!r}")
    return {y for _, y in moves(p, p.check(x), direction)}


def replay(p: Presentation, x: Element, steps: Sequence[Step]) -> Optional[Element]:
    """Apply the steps in order; None if some step does not apply."""
    for step in steps:
        if not (0 <= step[0] < len(p.relations)) or step[1] not in (1, -1):
            return None
        x = apply_step(p, x, step)
        if x is None:
            return None
    return x


# ----------------------------------------------------------------- constructors

def graph_monoid(g: DirectedGraph) -> Presentation:
    """One generator per vertex, one relation a_v = sum a_s(e) per non-source v."""
    if isinstance(g, SeparatedGraph):
        g = g.graph
    return separated_monoid(trivially_separated(g))


def separated_monoid(sg: SeparatedGraph | DirectedGraph) -> Presentation:
    if isinstance(sg, DirectedGraph):
        sg = trivially_separated(sg)
    g = sg.graph
    idx = g.vertex_index()
    rels, tags = [], []
    for v in g.vertices:
        for k, cls in enumerate(sg.classes(v)):
            lhs = [0] * len(g.vertices)
            lhs[idx[v]] = 1
            rhs = [0] * len(g.vertices)
            for e in cls:
                rhs[idx[g.source[e]]] += 1
            rels.append((tuple(lhs), tuple(rhs)))
            tags.append((v, k))
    return Presentation(tuple(g.vertices), tuple(rels), tuple(tags))


def cyclic_monoid(p: int, q: int) -> Presentation:
    """<a | p a = q a> with 1 <= p < q."""
    if not (isinstance(p, int) and isinstance(q, int)) or p < 1 or q <= p:
        raise BadParameter("cyclic monoid needs 1 <= p < q")
    return Presentation(("a",), (((p,), (q,)),))


def free_monoid(generators: Sequence[str]) -> Presentation:
    return Presentation(tuple(generators), ())
