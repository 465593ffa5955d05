"""Verdicts, certificates, and the offline certificate checker.

Every positive verdict carries a replayable rewrite path; every negative one
carries a homomorphism (rational weights or a cyclic Leavitt-type target) or
a record that a congruence class was enumerated to exhaustion.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from ..errors import CertificateError
from .cone import is_invariant
from .presentation import Element, Presentation, Step, add, dominates, moves, replay

EXHAUSTION_CAP = 1_000_000


# ----------------------------------------------------------------- cyclic targets

def cyclic_canon(n: int, p: int, q: int) -> int:
    """Normal form of n*a in <a | p a = q a>."""
    if n < q:
        return n
    return p + (n - p) % (q - p)


def cyclic_equal(n: int, m: int, p: int, q: int) -> bool:
    return cyclic_canon(n, p, q) == cyclic_canon(m, p, q)


def cyclic_leq(n: int, m: int, p: int, q: int) -> bool:
    a, b = cyclic_canon(n, p, q), cyclic_canon(m, p, q)
    return b >= min(a, p)


# ----------------------------------------------------------------- certificates

@dataclass(frozen=True)
class RewritePath:
    """Paths from the two endpoints of a claim to a common element."""

    left: Tuple[Step, ...]
    right: Tuple[Step, ...] = ()

    def to_json(self):
        return {"kind": "RewritePath", "left": [list(s) for s in self.left],
                "right": [list(s) for s in self.right]}


@dataclass(frozen=True)
class RationalWeights:
    weights: Tuple[Fraction, ...]

    def to_json(self):
        return {"kind": "RationalWeights", "weights": [str(Fraction(w)) for w in self.weights]}

    def value(self, x: Element) -> Fraction:
        return sum((Fraction(w) * c for w, c in zip(self.weights, x)), Fraction(0))


@dataclass(frozen=True)
class CyclicHom:
    p: int
    q: int
    values: Tuple[int, ...]

    def to_json(self):
        return {"kind": "CyclicHom", "p": self.p, "q": self.q, "values": list(self.values)}

    def image(self, x: Element) -> int:
        return sum(v * c for v, c in zip(self.values, x))


@dataclass(frozen=True)
class ExhaustedClass:
    """The congruence class of ``start`` is finite and has ``size`` elements."""

    start: Element
    size: int

    def to_json(self):
        return {"kind": "ExhaustedClass", "start": list(self.start), "size": self.size}


Certificate = RewritePath | RationalWeights | CyclicHom | ExhaustedClass


def certificate_from_json(data: Mapping):
    kind = data.get("kind")
    if kind == "RewritePath":
        return RewritePath(tuple(tuple(s) for s in data.get("left", [])),
                           tuple(tuple(s) for s in data.get("right", [])))
    if kind == "RationalWeights":
        return RationalWeights(tuple(Fraction(w) for w in data["weights"]))
    if kind == "CyclicHom":
        return CyclicHom(int(data["p"]), int(data["q"]), tuple(int(v) for v in data["values"]))
    if kind == "ExhaustedClass":
        return ExhaustedClass(tuple(data["start"]), int(data["size"]))
    raise CertificateError(f"unknown certificate kind {kind!r}")


# ----------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Equal:
    certificate: RewritePath
    verdict = "Equal"


@dataclass(frozen=True)
class Distinct:
    certificate: Certificate
    verdict = "Distinct"


@dataclass(frozen=True)
class Leq:
    witness: Element
    certificate: RewritePath
    verdict = "Leq"


@dataclass(frozen=True)
class NotLeq:
    certificate: Certificate
    verdict = "NotLeq"


@dataclass(frozen=True)
class Unknown:
    reason: str = "budget exhausted"
    verdict = "Unknown"


def verdict_json(p: Presentation, x: Element, y: Element, result) -> dict:
    """Self-contained JSON for a decide_equal / decide_leq verdict."""
    out = {"verdict": result.verdict, "x": p.format(x), "y": p.format(y)}
    if isinstance(result, Unknown):
        out["reason"] = result.reason
        return out
    claim = {Equal: "equal", Distinct: "distinct", Leq: "leq", NotLeq: "notleq"}[type(result)]
    body = {"claim": claim, "presentation": p.to_json(), "x": list(x), "y": list(y),
            "certificate": result.certificate.to_json()}
    if isinstance(result, Leq):
        body["witness"] = list(result.witness)
        out["witness"] = p.format(result.witness)
    out["proof"] = body
    return out


# ----------------------------------------------------------------- checking

def hom_respects(p: Presentation, cert: CyclicHom) -> bool:
    if cert.p < 1 or cert.q <= cert.p or len(cert.values) != p.rank:
        return False
    if any(v < 0 for v in cert.values):
        return False
    return all(cyclic_equal(cert.image(l), cert.image(r), cert.p, cert.q) for l, r in p.relations)


def weights_ok(p: Presentation, cert: RationalWeights) -> bool:
    return (len(cert.weights) == p.rank and all(w >= 0 for w in cert.weights)
            and is_invariant(p, [Fraction(w) for w in cert.weights]))


def congruence_class(p: Presentation, start: Element, cap: int = EXHAUSTION_CAP) -> Optional[set]:
    """The full congruence class of ``start``, or None if larger than ``cap``."""
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for _, y in moves(p, x):
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    return None
                queue.append(y)
    return seen


def check_equal(p: Presentation, x: Element, y: Element, cert) -> bool:
    if not isinstance(cert, RewritePath):
        return False
    zx = replay(p, tuple(x), cert.left)
    zy = replay(p, tuple(y), cert.right)
    return zx is not None and zx == zy


def check_distinct(p: Presentation, x: Element, y: Element, cert) -> bool:
    x, y = tuple(x), tuple(y)
    if isinstance(cert, RationalWeights):
        return weights_ok(p, cert) and cert.value(x) != cert.value(y)
    if isinstance(cert, CyclicHom):
        return hom_respects(p, cert) and not cyclic_equal(cert.image(x), cert.image(y), cert.p, cert.q)
    if isinstance(cert, ExhaustedClass):
        if cert.start not in (x, y):
            return False
        cls = congruence_class(p, cert.start)
        other = y if cert.start == x else x
        return cls is not None and len(cls) == cert.size and other not in cls
    return False


def check_leq(p: Presentation, x: Element, y: Element, witness: Sequence[int], cert) -> bool:
    if any(c < 0 for c in witness) or len(witness) != p.rank:
        return False
    return check_equal(p, tuple(y), add(tuple(x), tuple(witness)), cert)


def check_notleq(p: Presentation, x: Element, y: Element, cert) -> bool:
    x, y = tuple(x), tuple(y)
    if isinstance(cert, RationalWeights):
        return weights_ok(p, cert) and cert.value(x) > cert.value(y)
    if isinstance(cert, CyclicHom):
        return hom_respects(p, cert) and not cyclic_leq(cert.image(x), cert.image(y), cert.p, cert.q)
    if isinstance(cert, ExhaustedClass):
        if cert.start != y:
            return False
        cls = congruence_class(p, y)
        return (cls is not None and len(cls) == cert.size
                and not any(dominates(z, x) for z in cls))
    return False


def check_claim(claim: Mapping) -> bool:
    """Verify one serialized claim (as produced by the decision procedures)."""
    kind = claim.get("claim")
    if kind in ("equal", "distinct", "leq", "notleq"):
        p = Presentation.from_json(claim["presentation"])
        x, y = tuple(claim["x"]), tuple(claim["y"])
        cert = certificate_from_json(claim["certificate"])
        if kind == "equal":
            return check_equal(p, x, y, cert)
        if kind == "distinct":
            return check_distinct(p, x, y, cert)
        if kind == "leq":
            return check_leq(p, x, y, tuple(claim["witness"]), cert)
        return check_notleq(p, x, y, cert)
    if kind == "stably_finite":
        p = Presentation.from_json(claim["presentation"])
        cert = certificate_from_json(claim["certificate"])
        return (isinstance(cert, RationalWeights) and weights_ok(p, cert)
                and all(w > 0 for w in cert.weights))
    if kind == "measure":
        p = Presentation.from_json(claim["presentation"])
        return check_measure(p, tuple(claim["e"]), set(claim["infinite"]),
                             [Fraction(w) for w in claim["weights"]])
    if kind == "conjunction":
        return all(check_claim(c) for c in claim["parts"])
    raise CertificateError(f"unknown claim kind {kind!r}")


def check_measure(p: Presentation, e: Element, infinite: set, weights: Sequence[Fraction]) -> bool:
    """A [0, inf]-valued homomorphism: generators in ``infinite`` map to inf."""
    if len(weights) != p.rank or any(w < 0 for w in weights):
        return False
    inf_idx = {p.index(g) for g in infinite}

    def value(x):
        if any(x[i] for i in inf_idx):
            return None  # stands for infinity
        return sum((weights[i] * c for i, c in enumerate(x)), Fraction(0))

    for l, r in p.relations:
        if value(l) != value(r):
            return False
    return value(e) == 1


def iter_claims(obj):
    """Yield every embedded claim dict in a report, depth first."""
    if isinstance(obj, Mapping):
        if "claim" in obj and ("certificate" in obj or obj.get("claim") in ("measure", "conjunction")):
            yield obj
            if obj.get("claim") == "conjunction":
                return
        for value in obj.values():
            yield from iter_claims(value)
    elif isinstance(obj, (list, tuple)):
        for value in obj:
            yield from iter_claims(value)
