"""Finite truncations of the configuration space of a bipartite separated graph.

A configuration of radius n is a set of freely reduced words over the edges
and their inverses.  Every word shorter than n carries a complete local
configuration; words of length exactly n sit on the boundary sphere and are
unconstrained.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import NotBipartite, OutOfDomain, SchemaError, SizeCapExceeded, WordNotInConfiguration
from .graphs import SeparatedGraph, is_bipartite
from .limits import DEFAULT_ENUMERATION_CAP, size_cap

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


def reduce_word(letters: Iterable[Letter]) -> Word:
    out: List[Letter] = []
    for e, d in letters:
        if out and out[-1] == (e, -d):
            out.pop()
        else:
            out.append((e, d))
    return tuple(out)


def inverse(word: Word) -> Word:
    return tuple((e, -d) for e, d in reversed(word))


def multiply(a: Word, b: Word) -> Word:
    return reduce_word(a + b)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(e if d > 0 else f"{e}^-1" for e, d in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    for tok in text.replace("*", " ").split():
        if tok.endswith("^-1"):
            letters.append((tok[:-3], -1))
        else:
            letters.append((tok, 1))
    return reduce_word(letters)


@dataclass(frozen=True)
class FiniteConfiguration:
    words: FrozenSet[Word]
    radius: int
    base: str

    def key(self) -> Tuple[Word, ...]:
        return tuple(sorted(self.words, key=lambda w: (len(w), w)))

    def to_json(self):
        return {"base": self.base, "radius": self.radius,
                "words": [format_word(w) for w in self.key()]}


@dataclass(frozen=True)
class LocalConfiguration:
    letters: FrozenSet[Letter]
    form: str  # "c.1" | "c.2" | "Boundary" | "invalid"
    vertex: Optional[str] = None


class _Context:
    def __init__(self, sg: SeparatedGraph):
        check = is_bipartite(sg)
        if not check:
            raise NotBipartite("configuration spaces need a bipartite separated graph")
        self.sg = sg
        self.g = sg.graph
        self.bottom = set(check.range_part)
        self.top = set(check.source_part)
        self.class_of: Dict[str, int] = {}
        for v in check.range_part:
            for k, X in enumerate(sg.classes(v)):
                for e in X:
                    self.class_of[e] = k

    def vertex_at(self, word: Word, base: str) -> str:
        if not word:
            return base
        e, d = word[-1]
        return self.g.source[e] if d > 0 else self.g.range[e]

    def options(self, word: Word, base: str) -> List[Tuple[Letter, ...]]:
        """Possible sets of new child letters at ``word``."""
        if not word:
            if base in self.top:
                return [tuple((e, -1) for e in self.g.source_inverse(base))]
            if base in self.bottom:
                return [tuple((e, 1) for e in choice) for choice in itertools.product(*self.sg.classes(base))]
            raise SchemaError(f"base {base!r} is not a vertex of the graph")
        e, d = word[-1]
        if d > 0:
            w = self.g.source[e]
            return [tuple((f, -1) for f in self.g.source_inverse(w) if f != e)]
        v = self.g.range[e]
        fixed = self.class_of[e]
        free = [X for k, X in enumerate(self.sg.classes(v)) if k != fixed]
        return [tuple((f, 1) for f in choice) for choice in itertools.product(*free)]


def enumerate_balls(sg: SeparatedGraph, radius: int, base: str,
                    cap: Optional[int] = None) -> List[FiniteConfiguration]:
    """All radius-n truncations based at ``base``, in deterministic order."""
    if radius < 0:
        raise SchemaError("radius must be nonnegative")
    ctx = _Context(sg)
    if base not in ctx.top and base not in ctx.bottom:
        raise SchemaError(f"unknown base vertex {base!r}")
    cap = size_cap(DEFAULT_ENUMERATION_CAP) if cap is None else cap
    configs: List[FrozenSet[Word]] = [frozenset({()})]
    frontier: List[List[Word]] = [[()]]  # per config: words of the current length
    for _ in range(radius):
        new_configs, new_frontier = [], []
        for words, open_words in zip(configs, frontier):
            per_word = [ctx.options(w, base) for w in open_words]
            for pick in itertools.product(*per_word):
                children = [w + (letter,) for w, letters in zip(open_words, pick) for letter in letters]
                new_configs.append(words | frozenset(children))
                new_frontier.append(sorted(children))
                if len(new_configs) > cap:
                    raise SizeCapExceeded(f"more than {cap} configurations")
        configs, frontier = new_configs, new_frontier
    return [FiniteConfiguration(c, radius, base) for c in configs]


def count_balls(sg: SeparatedGraph, radius: int, base: str) -> int:
    return len(enumerate_balls(sg, radius, base))


def local_config(sg: SeparatedGraph, c: FiniteConfiguration, alpha: Word) -> LocalConfiguration:
    alpha = reduce_word(alpha)
    if alpha not in c.words:
        raise WordNotInConfiguration(f"{format_word(alpha)} is not in the configuration")
    letters = frozenset(
        (e, d) for e in sg.graph.edges for d in (1, -1) if multiply(alpha, ((e, d),)) in c.words)
    if len(alpha) >= c.radius:
        return LocalConfiguration(letters, "Boundary")
    form, vertex = _classify(_Context(sg), letters)
    return LocalConfiguration(letters, form, vertex)


def _classify(ctx: _Context, letters: FrozenSet[Letter]):
    if letters and all(d < 0 for _, d in letters):
        ws = {ctx.g.source[e] for e, _ in letters}
        if len(ws) == 1:
            w = ws.pop()
            if w in ctx.top and {e for e, _ in letters} == set(ctx.g.source_inverse(w)):
                return "c.1", w
    if letters and all(d > 0 for _, d in letters):
        vs = {ctx.g.range[e] for e, _ in letters}
        if len(vs) == 1:
            v = vs.pop()
            classes = ctx.sg.classes(v)
            hit = sorted(ctx.class_of[e] for e, _ in letters)
            if v in ctx.bottom and hit == list(range(len(classes))):
                return "c.2", v
    return "invalid", None


def validate(sg: SeparatedGraph, c: FiniteConfiguration) -> List[str]:
    """Problems with ``c``; empty when every invariant holds."""
    ctx = _Context(sg)
    problems = []
    if () not in c.words:
        problems.append("missing the empty word")
    for w in c.words:
        if reduce_word(w) != w:
            problems.append(f"{format_word(w)} is not reduced")
        if len(w) > c.radius:
            problems.append(f"{format_word(w)} exceeds the radius")
        if w and w[:-1] not in c.words:
            problems.append(f"{format_word(w)} has a missing prefix")
    for w in c.words:
        if len(w) >= c.radius:
            continue
        loc = local_config(sg, c, w)
        if loc.form == "invalid":
            problems.append(f"local configuration at {format_word(w)} has neither form")
        elif not w:
            expected = "c.1" if c.base in ctx.top else "c.2"
            if loc.form != expected or loc.vertex != c.base:
                problems.append("root does not match the base vertex")
    return problems


def translate(sg: SeparatedGraph, c: FiniteConfiguration, g: Word) -> FiniteConfiguration:
    """theta_g on a truncation: the ball of radius (radius - |g|) of g.c."""
    g = reduce_word(g)
    if inverse(g) not in c.words:
        raise OutOfDomain(f"{format_word(inverse(g))} is not in the configuration")
    new_radius = c.radius - len(g)
    if new_radius < 0:
        raise OutOfDomain("translation leaves the truncated ball")
    words = frozenset(w for w in (multiply(g, b) for b in c.words) if len(w) <= new_radius)
    base = _Context(sg).vertex_at(inverse(g), c.base)
    return FiniteConfiguration(words, new_radius, base)


def truncate(c: FiniteConfiguration, radius: int) -> FiniteConfiguration:
    return FiniteConfiguration(frozenset(w for w in c.words if len(w) <= radius), radius, c.base)


def crosscheck_counts(sg: SeparatedGraph, max_radius: int, bases: Optional[Sequence[str]] = None,
                      max_layer: Optional[int] = None) -> dict:
    """Ball counts next to per-layer descendant counts of the resolution tower.

    For a base vertex v, the descendant count of layer j is the number of
    layer-j vertices of the Bratteli diagram joined to v by a downward path.
    Each radius is matched with every layer whose descendant count equals the
    ball count; radii without a match are flagged.
    """
    from .resolution import resolve_tower  # local import: resolution is heavier

    check = is_bipartite(sg)
    if not check:
        raise NotBipartite("crosscheck needs a bipartite separated graph")
    if bases is None:
        bases = list(check.range_part)
    if max_layer is None:
        max_layer = 2 * max_radius + 1
    tower, depth = None, max(max_layer - 1, 0)
    while tower is None:
        try:
            tower = resolve_tower(sg, depth)
        except SizeCapExceeded:
            if depth == 0:
                raise
            depth -= 1
    layers = [list(tower.bottom(0))] + [list(tower.top(n)) for n in range(len(tower.levels))]
    rows = []
    for base in bases:
        desc = _descendant_counts(tower, base, layers)
        counts = [count_balls(sg, r, base) for r in range(max_radius + 1)]
        matches = {r: [j for j, d in enumerate(desc) if d == counts[r]] for r in range(max_radius + 1)}
        flagged = [r for r, js in matches.items() if not js]
        chosen, consistent, last = {}, not flagged, -1
        for r in range(max_radius + 1):
            later = [j for j in matches[r] if j >= last]
            if later:
                chosen[r] = later[0]
                last = chosen[r]
            else:
                consistent = False
        rows.append({"base": base, "ball_counts": counts, "layer_counts": desc,
                     "matches": {str(r): js for r, js in matches.items()},
                     "correspondence": {str(r): j for r, j in chosen.items()},
                     "flagged": flagged, "consistent": consistent})
    return {"layer_sizes": [len(layer) for layer in layers], "rows": rows}


def _descendant_counts(tower, base: str, layers) -> List[int]:
    start = next((j for j, layer in enumerate(layers) if base in layer), None)
    if start is None:
        raise SchemaError(f"{base!r} is not a vertex of the diagram")
    counts = [0] * start + [1]
    current = {base}
    for j in range(start, len(layers) - 1):
        g = tower.levels[j].graph
        current = {g.source[e] for v in current for e in g.range_inverse(v)}
        counts.append(len(current))
    return counts
