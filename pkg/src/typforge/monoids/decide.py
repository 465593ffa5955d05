"""Certified equality and order decisions in finitely presented monoids."""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..errors import BadParameter, DimensionMismatch
from .certificates import (
    CyclicHom,
    Distinct,
    Equal,
    ExhaustedClass,
    Leq,
    NotLeq,
    RationalWeights,
    RewritePath,
    Unknown,
    cyclic_equal,
    cyclic_leq,
)
from .cone import rational_invariant_cone
from .presentation import Element, Presentation, Step, dominates, moves, sub


@dataclass(frozen=True)
class SearchBudget:
    depth: int = 12
    frontier: int = 100_000
    timeout_ms: Optional[int] = None

    def deadline(self) -> Optional[float]:
        if self.timeout_ms is None:
            return None
        return time.monotonic() + self.timeout_ms / 1000.0


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class CyclicBounds:
    max_p: int = 4
    max_q: int = 6
    max_val: int = 5
    max_nodes: int = 50_000


DEFAULT_BOUNDS = CyclicBounds()


class _Search:
    """Breadth-first exploration of one congruence class."""

    def __init__(self, p: Presentation, start: Element, direction: str = "both"):
        self.p = p
        self.direction = direction
        self.parent: Dict[Element, Tuple[Optional[Element], Optional[Step]]] = {start: (None, None)}
        self.frontier: List[Element] = [start]
        self.level = 0
        self.complete = False

    def expand(self, cap: int) -> List[Element]:
        """Grow one BFS level; returns the newly discovered states."""
        fresh = []
        for x in self.frontier:
            for step, y in moves(self.p, x, self.direction):
                if y not in self.parent:
                    self.parent[y] = (x, step)
                    fresh.append(y)
                    if len(self.parent) > cap:
                        self.frontier = fresh
                        self.level += 1
                        return fresh
        self.frontier = fresh
        self.level += 1
        if not fresh:
            self.complete = True
        return fresh

    def path_to(self, z: Element) -> Tuple[Step, ...]:
        """Steps leading from the start to z."""
        steps = []
        while True:
            prev, step = self.parent[z]
            if prev is None:
                break
            steps.append(step)
            z = prev
        steps.reverse()
        return tuple(steps)


def _check_dims(p: Presentation, *elements):
    for x in elements:
        if len(x) != p.rank:
            raise DimensionMismatch(f"element {x!r} does not match {p.rank} generators")
        if any(c < 0 for c in x):
            raise DimensionMismatch(f"element {x!r} has negative entries")


def _weights_distinct(p: Presentation, x: Element, y: Element, strict_greater=False):
    if p.graded:
        rays = [(1,) * p.rank]
    else:
        rays = rational_invariant_cone(p)
    for w in rays:
        wx = sum(a * b for a, b in zip(w, x))
        wy = sum(a * b for a, b in zip(w, y))
        if (wx > wy) if strict_greater else (wx != wy):
            return RationalWeights(tuple(Fraction(c) for c in w))
    return None


def _exhaust(p: Presentation, start: Element, budget: SearchBudget):
    """Enumerate the class of ``start``; returns the finished search or None."""
    search = _Search(p, start)
    deadline = budget.deadline()
    while not search.complete:
        search.expand(budget.frontier)
        if len(search.parent) > budget.frontier:
            return None
        if deadline is not None and time.monotonic() > deadline:
            return None
    return search


def decide_equal(p: Presentation, x, y, budget: SearchBudget = DEFAULT_BUDGET,
                 bounds: CyclicBounds = DEFAULT_BOUNDS):
    """Decide whether x and y are congruent.

    Graded presentations are decided by enumerating the class of x inside its
    degree slice.  Otherwise a bidirectional breadth-first search looks for a
    common element and, failing that, separating homomorphisms are sought.
    """
    x, y = tuple(x), tuple(y)
    _check_dims(p, x, y)
    if x == y:
        return Equal(RewritePath((), ()))
    if p.graded:
        if sum(x) != sum(y):
            return Distinct(RationalWeights((Fraction(1),) * p.rank))
        search = _exhaust(p, x, budget)
        if search is not None:
            if y in search.parent:
                return Equal(RewritePath(search.path_to(y), ()))
            return Distinct(ExhaustedClass(x, len(search.parent)))
        # slice too large for the budget; fall through to the general route
    found = _meet(p, x, y, budget)
    if isinstance(found, Equal):
        return found
    exhausted = found
    cert = _weights_distinct(p, x, y)
    if cert is not None:
        return Distinct(cert)
    hom = cyclic_invariant_search(p, x, y, bounds, mode="equal")
    if hom is not None:
        return Distinct(hom)
    if exhausted is not None:
        return Distinct(exhausted)
    return Unknown()


def _meet(p: Presentation, x: Element, y: Element, budget: SearchBudget):
    """Bidirectional search; Equal on success, else an ExhaustedClass or None."""
    left, right = _Search(p, x), _Search(p, y)
    deadline = budget.deadline()
    levels = 0
    while levels < budget.depth:
        if left.complete and right.complete:
            break
        side = left if (not left.complete and (right.complete or len(left.frontier) <= len(right.frontier))) else right
        other = right if side is left else left
        fresh = side.expand(budget.frontier)
        levels += 1
        hits = [z for z in fresh if z in other.parent]
        if hits:
            z = min(hits)
            return Equal(RewritePath(left.path_to(z), right.path_to(z)))
        if len(left.parent) + len(right.parent) > budget.frontier:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
    if left.complete:
        return ExhaustedClass(x, len(left.parent))
    if right.complete:
        return ExhaustedClass(y, len(right.parent))
    return None


def decide_leq(p: Presentation, x, y, budget: SearchBudget = DEFAULT_BUDGET,
               bounds: CyclicBounds = DEFAULT_BOUNDS):
    """Decide x <= y in the algebraic preorder (y = x + z for some z)."""
    x, y = tuple(x), tuple(y)
    _check_dims(p, x, y)
    if dominates(y, x):
        return Leq(sub(y, x), RewritePath((), ()))
    if p.graded and sum(x) > sum(y):
        return NotLeq(RationalWeights((Fraction(1),) * p.rank))
    search = _Search(p, y)
    deadline = budget.deadline()
    found = None
    while not search.complete and search.level < budget.depth and found is None:
        fresh = search.expand(budget.frontier)
        for z in fresh:
            if dominates(z, x):
                found = z
                break
        if len(search.parent) > budget.frontier:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
    if found is None and p.graded and not search.complete:
        exhausted = _exhaust(p, y, budget)
        if exhausted is not None:
            search = exhausted
            hits = [z for z in search.parent if dominates(z, x)]
            if hits:
                found = min(hits, key=lambda z: (len(search.path_to(z)), z))
    if found is not None:
        return Leq(sub(found, x), RewritePath(search.path_to(found), ()))
    cert = _weights_distinct(p, x, y, strict_greater=True)
    if cert is not None:
        return NotLeq(cert)
    hom = cyclic_invariant_search(p, x, y, bounds, mode="leq")
    if hom is not None:
        return NotLeq(hom)
    if search.complete:
        return NotLeq(ExhaustedClass(y, len(search.parent)))
    return Unknown()


def cyclic_invariant_search(p: Presentation, x, y, bounds: CyclicBounds = DEFAULT_BOUNDS,
                            mode: str = "equal") -> Optional[CyclicHom]:
    """Search homomorphisms into <a | p a = q a> separating x from y.

    ``mode="equal"`` wants distinct images; ``mode="leq"`` wants the image of
    x not below the image of y.  Targets are tried in order of q, then p, and
    generator values lexicographically, so the first hit is reproducible.
    """
    if mode not in ("equal", "leq"):
        raise BadParameter(f"mode must be 'equal' or 'leq', not {mode!r}")
    if min(bounds.max_p, bounds.max_q, bounds.max_val) < 1:
        raise BadParameter("cyclic search bounds must be positive")
    x, y = tuple(x), tuple(y)
    if x == y:
        return None
    k = p.rank
    # a relation is checked once its highest-index generator is assigned
    ready: List[List[int]] = [[] for _ in range(k)]
    for i, (l, r) in enumerate(p.relations):
        support = [j for j in range(k) if l[j] or r[j]]
        ready[max(support)].append(i)
    nodes = 0
    for q in range(2, bounds.max_q + 1):
        for pp in range(1, min(bounds.max_p, q - 1) + 1):
            top = min(bounds.max_val, q - 1)
            values = [0] * k

            def separated():
                ix = sum(v * c for v, c in zip(values, x))
                iy = sum(v * c for v, c in zip(values, y))
                if mode == "equal":
                    return not cyclic_equal(ix, iy, pp, q)
                return not cyclic_leq(ix, iy, pp, q)

            def assign(j):
                nonlocal nodes
                if j == k:
                    return separated()
                for val in range(top + 1):
                    nodes += 1
                    if nodes > bounds.max_nodes:
                        return False
                    values[j] = val
                    if all(_rel_holds(p.relations[i], values, pp, q) for i in ready[j]):
                        if assign(j + 1):
                            return True
                values[j] = 0
                return False

            if assign(0):
                return CyclicHom(pp, q, tuple(values))
            if nodes > bounds.max_nodes:
                return None
    return None


def _rel_holds(rel, values, p, q) -> bool:
    l, r = rel
    il = sum(v * c for v, c in zip(values, l))
    ir = sum(v * c for v, c in zip(values, r))
    return cyclic_equal(il, ir, p, q)
