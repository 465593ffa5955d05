"""Paradoxicality, stable finiteness and cancellation checks built on the
certified equality/order decisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..errors import ZeroElement
from ..graphs import DirectedGraph, _cyclic_vertices
from .certificates import (
    Distinct,
    Equal,
    Leq,
    NotLeq,
    RationalWeights,
    RewritePath,
    Unknown,
    verdict_json,
)
from .cone import cone_rays, positive_weights
from .decide import (
    DEFAULT_BOUNDS,
    DEFAULT_BUDGET,
    CyclicBounds,
    SearchBudget,
    _Search,
    decide_equal,
    decide_leq,
)
from .presentation import (
    Element,
    Presentation,
    add,
    dominates,
    elements_of_degree,
    meet,
    moves,
    scale,
    sub,
)


# ----------------------------------------------------------------- cyclic type

@dataclass(frozen=True)
class Free:
    checked_up_to: int
    verdict = "Free"


@dataclass(frozen=True)
class LeavittType:
    m: int
    n: int
    verdict = "LeavittType"


@dataclass
class CyclicTypeResult:
    outcome: object
    evidence: List[dict] = field(default_factory=list)

    def to_json(self):
        out = {"verdict": self.outcome.verdict}
        if isinstance(self.outcome, LeavittType):
            out["m"], out["n"] = self.outcome.m, self.outcome.n
        elif isinstance(self.outcome, Free):
            out["checked_up_to"] = self.outcome.checked_up_to
        out["evidence"] = self.evidence
        return out


def cyclic_type(p: Presentation, x, budget: SearchBudget = DEFAULT_BUDGET, max_n: int = 8,
                bounds: CyclicBounds = DEFAULT_BOUNDS) -> CyclicTypeResult:
    """Leavitt type (m, n) of the submonoid generated by x.

    Pairs (m, n) are scanned by increasing n, then m; the first Equal pair
    is returned provided every earlier pair was certified Distinct.
    """
    x = p.check(x)
    evidence = []
    for n in range(2, max_n + 1):
        for m in range(1, n):
            mx, nx = scale(m, x), scale(n, x)
            res = decide_equal(p, mx, nx, budget, bounds)
            evidence.append({"m": m, "n": n, **verdict_json(p, mx, nx, res)})
            if isinstance(res, Equal):
                return CyclicTypeResult(LeavittType(m, n), evidence)
            if isinstance(res, Unknown):
                return CyclicTypeResult(Unknown(f"pair ({m},{n}) undecided"), evidence)
    return CyclicTypeResult(Free(max_n), evidence)


# ----------------------------------------------------------------- stable finiteness

@dataclass
class StablyFiniteResult:
    verdict: str  # "Yes" | "No" | "Unknown"
    weights: Optional[Tuple[int, ...]] = None
    witness: Optional[Tuple[Element, Element]] = None
    proof: Optional[dict] = None

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.weights is not None:
            out["weights"] = list(self.weights)
        if self.witness is not None:
            out["x"], out["b"] = list(self.witness[0]), list(self.witness[1])
        if self.proof is not None:
            out["proof"] = self.proof
        return out


def is_stably_finite(p: Presentation, budget: SearchBudget = DEFAULT_BUDGET,
                     max_degree: int = 3) -> StablyFiniteResult:
    """Faithful invariant weights prove stable finiteness; otherwise look for
    x + b ~ x with b not congruent to 0 among small x."""
    w = positive_weights(p)
    if w is not None:
        proof = {"claim": "stably_finite", "presentation": p.to_json(),
                 "certificate": RationalWeights(tuple(Fraction(c) for c in w)).to_json()}
        return StablyFiniteResult("Yes", weights=tuple(w), proof=proof)
    small = SearchBudget(depth=min(budget.depth, 8), frontier=min(budget.frontier, 20_000),
                         timeout_ms=budget.timeout_ms)
    for d in range(1, max_degree + 1):
        for x in elements_of_degree(p.rank, d):
            search = _Search(p, x)
            while not search.complete and search.level < small.depth:
                fresh = search.expand(small.frontier)
                bigger = [z for z in fresh if dominates(z, x) and z != x]
                if bigger:
                    z = bigger[0]
                    b = sub(z, x)
                    nonzero = decide_equal(p, b, p.zero, budget)
                    if isinstance(nonzero, Distinct):
                        eq = Equal(RewritePath(search.path_to(z), ()))
                        proof = {"claim": "conjunction", "parts": [
                            verdict_json(p, x, z, eq)["proof"],
                            verdict_json(p, b, p.zero, nonzero)["proof"],
                        ]}
                        return StablyFiniteResult("No", witness=(x, b), proof=proof)
                if len(search.parent) > small.frontier:
                    break
    return StablyFiniteResult("Unknown")


def graph_stably_finite(g: DirectedGraph) -> bool:
    """No cycle has an entry: every vertex on a cycle receives exactly one edge."""
    return all(len(g.range_inverse(v)) == 1 for v in _cyclic_vertices(g))


# ----------------------------------------------------------------- tarski

@dataclass
class TarskiResult:
    verdict: str  # "Measure" | "Paradox" | "Unknown"
    infinite: Tuple[str, ...] = ()
    weights: Optional[Tuple[Fraction, ...]] = None
    n: Optional[int] = None
    proof: Optional[dict] = None

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.verdict == "Measure":
            out["infinite"] = list(self.infinite)
            out["weights"] = [str(w) for w in self.weights]
        if self.n is not None:
            out["n"] = self.n
        if self.proof is not None:
            out["proof"] = self.proof
        return out


def _infinite_closure(p: Presentation, seed: set) -> Optional[set]:
    """Smallest generator set containing ``seed`` on which every relation is
    infinite on both sides or on neither; None if a zero side blocks it."""
    inf = set(seed)
    changed = True
    while changed:
        changed = False
        for l, r in p.relations:
            lt = any(l[i] for i in inf)
            rt = any(r[i] for i in inf)
            if lt == rt:
                continue
            other = r if lt else l
            support = {i for i, c in enumerate(other) if c}
            if not support:
                return None
            inf |= support
            changed = True
    return inf


def _finite_measure(p: Presentation, e: Element, inf: set):
    finite = [i for i in range(p.rank) if i not in inf]
    constraints = []
    for l, r in p.relations:
        if any(l[i] for i in inf) or any(r[i] for i in inf):
            continue
        constraints.append(tuple(l[i] - r[i] for i in finite))
    for ray in cone_rays(len(finite), constraints):
        value = sum(ray[k] * e[i] for k, i in enumerate(finite))
        if value > 0:
            weights = [Fraction(0)] * p.rank
            for k, i in enumerate(finite):
                weights[i] = Fraction(ray[k], value)
            return tuple(weights)
    return None


def tarski_measure(p: Presentation, e, budget: SearchBudget = DEFAULT_BUDGET,
                   max_n: int = 6) -> TarskiResult:
    """A [0, inf]-valued measure normalizing e, or a compression (n+1)e <= ne."""
    e = p.check(e)
    if not any(e):
        raise ZeroElement("the normalized element must be nonzero")
    support_e = {i for i, c in enumerate(e) if c}
    candidates = [set()]
    for g in range(p.rank):
        closure = _infinite_closure(p, {g})
        if closure is not None and closure not in candidates:
            candidates.append(closure)
    for inf in candidates:
        if inf & support_e:
            continue
        weights = _finite_measure(p, e, inf)
        if weights is not None:
            names = tuple(p.generators[i] for i in sorted(inf))
            proof = {"claim": "measure", "presentation": p.to_json(), "e": list(e),
                     "infinite": list(names), "weights": [str(w) for w in weights]}
            return TarskiResult("Measure", infinite=names, weights=weights, proof=proof)
    for n in range(1, max_n + 1):
        res = decide_leq(p, scale(n + 1, e), scale(n, e), budget)
        if isinstance(res, Leq):
            proof = verdict_json(p, scale(n + 1, e), scale(n, e), res)["proof"]
            return TarskiResult("Paradox", n=n, proof=proof)
    return TarskiResult("Unknown")


# ----------------------------------------------------------------- cancellation

PROPERTIES = ("cancellative", "separative", "strongly_separative", "unperforated",
              "plain_paradoxes", "refinement")


@dataclass
class PropertyVerdict:
    verdict: str  # "CounterexampleFound" | "NoCounterexampleWithinScope"
    data: dict = field(default_factory=dict)

    def to_json(self):
        return {"verdict": self.verdict, **self.data}


class _Classes:
    """Congruence classes restricted to elements of bounded degree.

    Moves leaving the degree window are ignored, so a shared class proves
    congruence (with a rewrite path) but a split does not prove distinctness.
    For graded presentations the window is closed under moves and the classes
    are exact.
    """

    def __init__(self, p: Presentation, max_degree: int):
        self.p = p
        self.max_degree = max_degree
        self.elements: List[Element] = []
        for d in range(max_degree + 1):
            self.elements.extend(elements_of_degree(p.rank, d))
        self.root: Dict[Element, Element] = {}
        self.parent = {}
        for x in self.elements:
            if x in self.root:
                continue
            self.parent[x] = (None, None)
            self.root[x] = x
            queue = [x]
            for z in queue:
                for step, y in moves(p, z):
                    if sum(y) > max_degree or y in self.root:
                        continue
                    self.root[y] = x
                    self.parent[y] = (z, step)
                    queue.append(y)
        self.members: Dict[Element, List[Element]] = {}
        for x in self.elements:
            self.members.setdefault(self.root[x], []).append(x)

    def same(self, x, y) -> bool:
        return x in self.root and y in self.root and self.root[x] == self.root[y]

    def _to_root(self, z):
        steps = []
        while self.parent[z][0] is not None:
            prev, (i, d) = self.parent[z]
            steps.append((i, -d))
            z = prev
        return steps

    def proof(self, x, y) -> RewritePath:
        return RewritePath(tuple(self._to_root(x)), tuple(self._to_root(y)))


def _eq_claim(p, cls: _Classes, x, y):
    return verdict_json(p, x, y, Equal(cls.proof(x, y)))["proof"]


def _leq_from_classes(p, cls: _Classes, x, y):
    """x <= y using the bounded classes; returns a Leq verdict or None."""
    if dominates(y, x):
        return Leq(sub(y, x), RewritePath((), ()))
    for z in cls.members.get(cls.root.get(y), []):
        if dominates(z, x):
            return Leq(sub(z, x), cls.proof(y, z))
    return None


def cancellation_report(p: Presentation, max_degree: int = 4,
                        budget: SearchBudget = SearchBudget(depth=10, frontier=20_000),
                        properties=PROPERTIES) -> Dict[str, PropertyVerdict]:
    """Bounded counterexample search for the cancellation-type properties.

    Only elements of coordinate sum at most ``max_degree`` are examined.
    Every reported counterexample ships certificates for each asserted
    equality, inequality and distinctness.
    """
    cls = _Classes(p, max_degree)
    checks = {
        "cancellative": _check_cancellative,
        "separative": _check_separative,
        "strongly_separative": _check_strongly_separative,
        "unperforated": _check_unperforated,
        "plain_paradoxes": _check_plain_paradoxes,
        "refinement": _check_refinement,
    }
    report = {}
    for name in properties:
        found, undecided = checks[name](p, cls, max_degree, budget)
        if found is not None:
            report[name] = PropertyVerdict("CounterexampleFound", found)
        else:
            report[name] = PropertyVerdict("NoCounterexampleWithinScope",
                                           {"max_degree": max_degree, "undecided": undecided})
    return report


def _check_cancellative(p, cls, D, budget):
    undecided = 0
    for root, members in cls.members.items():
        for u, v in _pairs(members):
            z = meet(u, v)
            x, y = sub(u, z), sub(v, z)
            if not any(z) or cls.same(x, y):
                continue
            res = decide_equal(p, x, y, budget)
            if isinstance(res, Distinct):
                return {"x": p.format(x), "y": p.format(y), "z": p.format(z),
                        "proof": {"claim": "conjunction", "parts": [
                            _eq_claim(p, cls, u, v),
                            verdict_json(p, x, y, res)["proof"]]}}, undecided
            if isinstance(res, Unknown):
                undecided += 1
    return None, undecided


def _small(p, D):
    for d in range(1, D // 2 + 1):
        yield from elements_of_degree(p.rank, d)


def _check_separative(p, cls, D, budget):
    undecided = 0
    smalls = list(_small(p, D))
    for x in smalls:
        for y in smalls:
            if x >= y:
                continue
            xx, xy, yy = scale(2, x), add(x, y), scale(2, y)
            if not (cls.same(xx, xy) and cls.same(xy, yy)) or cls.same(x, y):
                continue
            res = decide_equal(p, x, y, budget)
            if isinstance(res, Distinct):
                return {"x": p.format(x), "y": p.format(y), "proof": {"claim": "conjunction", "parts": [
                    _eq_claim(p, cls, xx, xy), _eq_claim(p, cls, xy, yy),
                    verdict_json(p, x, y, res)["proof"]]}}, undecided
            if isinstance(res, Unknown):
                undecided += 1
    return None, undecided


def _check_strongly_separative(p, cls, D, budget):
    undecided = 0
    smalls = list(_small(p, D))
    for x in smalls:
        for y in smalls:
            if x == y:
                continue
            xx, xy = scale(2, x), add(x, y)
            if not cls.same(xx, xy) or cls.same(x, y):
                continue
            res = decide_equal(p, x, y, budget)
            if isinstance(res, Distinct):
                return {"x": p.format(x), "y": p.format(y), "proof": {"claim": "conjunction", "parts": [
                    _eq_claim(p, cls, xx, xy), verdict_json(p, x, y, res)["proof"]]}}, undecided
            if isinstance(res, Unknown):
                undecided += 1
    return None, undecided


def _check_unperforated(p, cls, D, budget):
    undecided = 0
    for n in range(2, D + 1):
        pool = [x for d in range(0, D // n + 1) for x in elements_of_degree(p.rank, d)]
        for a in pool:
            for b in pool:
                if a == b:
                    continue
                big = _leq_from_classes(p, cls, scale(n, a), scale(n, b))
                if big is None or _leq_from_classes(p, cls, a, b) is not None:
                    continue
                res = decide_leq(p, a, b, budget)
                if isinstance(res, NotLeq):
                    return {"n": n, "a": p.format(a), "b": p.format(b), "proof": {"claim": "conjunction", "parts": [
                        verdict_json(p, scale(n, a), scale(n, b), big)["proof"],
                        verdict_json(p, a, b, res)["proof"]]}}, undecided
                if isinstance(res, Unknown):
                    undecided += 1
    return None, undecided


def _check_plain_paradoxes(p, cls, D, budget):
    undecided = 0
    for d in range(1, D + 1):
        for x in elements_of_degree(p.rank, d):
            for n in range(1, D + 1):
                big = decide_leq(p, scale(n + 1, x), scale(n, x), budget)
                if not isinstance(big, Leq):
                    continue
                res = decide_leq(p, scale(2, x), x, budget)
                if isinstance(res, NotLeq):
                    return {"x": p.format(x), "n": n, "proof": {"claim": "conjunction", "parts": [
                        verdict_json(p, scale(n + 1, x), scale(n, x), big)["proof"],
                        verdict_json(p, scale(2, x), x, res)["proof"]]}}, undecided
                if isinstance(res, Unknown):
                    undecided += 1
                break
    return None, undecided


def refinement_for(p: Presentation, a, b, c, d, cap: int = 300, _cache=None):
    """Search a refinement matrix for a + b = c + d.

    Looks for class representatives a', b', c', d' with a'+b' = c'+d' as
    vectors; the free monoid then refines coordinatewise.
    """
    cache = {} if _cache is None else _cache

    def reps(x):
        if x not in cache:
            search = _Search(p, x)
            while not search.complete and len(search.parent) <= cap:
                search.expand(cap)
            cache[x] = search
        return cache[x]

    sa, sb, sc, sd = reps(a), reps(b), reps(c), reps(d)
    sums = {}
    for a1 in sa.parent:
        for b1 in sb.parent:
            sums.setdefault(add(a1, b1), (a1, b1))
    for c1 in sc.parent:
        for d1 in sd.parent:
            hit = sums.get(add(c1, d1))
            if hit is not None:
                a1, b1 = hit
                z11 = meet(a1, c1)
                z12 = sub(a1, z11)
                z21 = sub(c1, z11)
                z22 = sub(b1, z21)
                return (z11, z12, z21, z22), (a1, b1, c1, d1)
    return None


def _check_refinement(p, cls, D, budget):
    undecided = 0
    cache = {}
    for root, members in cls.members.items():
        for u, v in _pairs(members):
            for a in _splits(u):
                b = sub(u, a)
                for c in _splits(v):
                    dd = sub(v, c)
                    if refinement_for(p, a, b, c, dd, _cache=cache) is None:
                        undecided += 1
                        if p.graded:
                            return {"a": p.format(a), "b": p.format(b), "c": p.format(c),
                                    "d": p.format(dd), "proof": _eq_claim(p, cls, u, v)}, undecided
    return None, undecided


def _splits(u):
    ranges = [range(c + 1) for c in u]

    def rec(i):
        if i == len(u):
            yield ()
            return
        for val in ranges[i]:
            for rest in rec(i + 1):
                yield (val,) + rest

    yield from rec(0)


def _pairs(members):
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            yield members[i], members[j]
