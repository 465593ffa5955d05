"""Nonnegative invariant weights of a presentation.

The cone {w >= 0 : w.lhs = w.rhs for every relation} is pointed, so its
extreme rays are exactly the solutions of minimal support.  We run a double
description sweep over the equality constraints without adjacency tests and
prune to minimal supports after every constraint.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Sequence, Tuple

from .presentation import Element, Presentation

Ray = Tuple[int, ...]


def _primitive(v: Sequence[int]) -> Ray:
    g = reduce(gcd, (abs(c) for c in v), 0)
    if g == 0:
        return tuple(v)
    return tuple(c // g for c in v)


def _support(v: Sequence[int]) -> frozenset:
    return frozenset(i for i, c in enumerate(v) if c)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _minimal(rays: List[Ray]) -> List[Ray]:
    supports = [_support(r) for r in rays]
    keep, seen = [], set()
    for r, s in zip(rays, supports):
        if not s or s in seen:
            continue
        if any(t < s for t in supports):
            continue
        seen.add(s)
        keep.append(r)
    return keep


def cone_rays(rank: int, constraints: Sequence[Sequence[int]]) -> List[Ray]:
    rays: List[Ray] = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    for d in constraints:
        if not any(d):
            continue
        zero, pos, neg = [], [], []
        for r in rays:
            val = _dot(d, r)
            (zero if val == 0 else pos if val > 0 else neg).append((r, val))
        new = [r for r, _ in zero]
        for rp, vp in pos:
            for rn, vn in neg:
                new.append(_primitive(tuple(vp * b - vn * a for a, b in zip(rp, rn))))
        rays = _minimal(new)
    return sorted(rays, key=lambda r: (sorted(_support(r)), r))


def rational_invariant_cone(p: Presentation) -> List[Ray]:
    """Primitive integer generators of the cone of invariant weights.

    Returns [] when the cone is {0}.
    """
    constraints = [tuple(a - b for a, b in zip(l, r)) for l, r in p.relations]
    return cone_rays(p.rank, constraints)


def is_invariant(p: Presentation, weights: Sequence) -> bool:
    return all(_dot(weights, l) == _dot(weights, r) for l, r in p.relations)


def positive_weights(p: Presentation):
    """A strictly positive invariant integer weight vector, or None.

    Unit weights are preferred when the presentation is graded.
    """
    if p.rank == 0:
        return ()
    if p.graded:
        return (1,) * p.rank
    rays = rational_invariant_cone(p)
    covered = set()
    for r in rays:
        covered |= _support(r)
    if len(covered) < p.rank:
        return None
    total = [0] * p.rank
    for r in rays:
        total = [a + b for a, b in zip(total, r)]
    return _primitive(total)


def weight_value(weights: Sequence, x: Element) -> Fraction:
    return Fraction(_dot(weights, x))
