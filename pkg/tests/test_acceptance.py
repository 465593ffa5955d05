"""Acceptance criteria 1-8, one PASS/FAIL line each.

Each test gathers named checks, prints a summary line with the measured
runtime against its limit, then asserts every check.
"""
import io
import itertools
import json
import random
import time
from contextlib import contextmanager

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from typforge.cli import main
from typforge.configspace import count_balls, crosscheck_counts
from typforge.graphs import are_isomorphic, emn, fullshift, is_simple_graph_algebra, line, rose, toeplitz
from typforge.ktheory import AbelianGroup, graph_k_theory, katsura_k_theory, matmul, smith_normal_form
from typforge.monoids import (
    CyclicHom, Distinct, Equal, LeavittType, NotLeq, cancellation_report, check_claim, cyclic_type,
    decide_equal, is_stably_finite, separated_monoid, tarski_measure, verdict_json,
)
from typforge.monoids.certificates import check_notleq
from typforge.resolution import bottom_monoid, fullshift_monoid, presentation_isomorphism, resolve_tower
from typforge.selfsimilar import (
    LAMPLIGHTER, KatsuraSpec, automaton_action, katsura_action, katsura_pseudo_free,
    pseudo_free_search, quotient_graph, verify_cocycle,
)


class Criterion:
    def __init__(self, number, limit):
        self.number, self.limit = number, limit
        self.checks = []

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))


@contextmanager
def criterion(number, limit, capsys, tag=""):
    c = Criterion(number, limit)
    start = time.perf_counter()
    yield c
    elapsed = time.perf_counter() - start
    c.check(f"runtime < {limit} s", elapsed < limit, f"{elapsed:.2f} s")
    failed = [f"{n} ({d})" if d else n for n, ok, d in c.checks if not ok]
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {number}{tag}: {status} [{len(c.checks) - len(failed)}/{len(c.checks)} checks, {elapsed:.2f} s]"
    if failed:
        line += " failing: " + "; ".join(failed)
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


def test_criterion_1_simplicity(capsys):
    with criterion(1, 1, capsys) as c:
        for n in range(2, 7):
            c.check(f"rose({n}) simple", is_simple_graph_algebra(rose(n)) is True)
        for n in range(1, 7):
            c.check(f"line({n}) simple", is_simple_graph_algebra(line(n)) is True)
        c.check("rose(1) not simple", is_simple_graph_algebra(rose(1)) is False)
        c.check("toeplitz not simple", is_simple_graph_algebra(toeplitz()) is False)


def test_criterion_2_k_theory(capsys):
    with criterion(2, 5, capsys) as c:
        for n in range(2, 13):
            k0, k1 = graph_k_theory(rose(n))
            want = AbelianGroup(0, (n - 1,) if n > 2 else ())
            c.check(f"rose({n})", (k0, k1) == (want, AbelianGroup(0)), f"{k0}, {k1}")
        hand = [
            ({"A": [[2]], "B": [[1]]}, AbelianGroup(1), AbelianGroup(1)),
            ({"A": [[3]], "B": [[3]]}, AbelianGroup(0, (2,)), AbelianGroup(0, (2,))),
            ({"A": [[4]], "B": [[0]]}, AbelianGroup(0, (3,)), AbelianGroup(0)),
            ({"A": [[2, 1], [0, 3]], "B": [[1, 1], [0, 2]]}, AbelianGroup(1, (2,)), AbelianGroup(1)),
            ({"A": [[2, 0], [0, 2]], "B": [[1, 0], [0, 1]]}, AbelianGroup(2), AbelianGroup(2)),
        ]
        for spec, k0, k1 in hand:
            got = katsura_k_theory(spec)
            c.check(f"katsura {spec}", got == (k0, k1), f"{got[0]}, {got[1]}")
        rng = random.Random(7)
        violations = 0
        for _ in range(100):
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            snf = smith_normal_form(M)
            ref = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
            ok = (matmul(matmul(snf.U, M), snf.V) == snf.D
                  and [abs(x) for x in snf.diagonal] == [abs(int(ref[i, i])) for i in range(min(m, n))])
            violations += not ok
        c.check("SNF oracle on 100 matrices", violations == 0, f"{violations} violations")


def test_criterion_3_fullshift_monoids(capsys):
    with criterion(3, 30, capsys) as c:
        p = fullshift_monoid(2)
        res = decide_equal(p, p.element("00 + 01"), p.element("00 + 10"))
        c.check("00+01 = 00+10", isinstance(res, Equal), res.verdict)
        res = decide_equal(p, p.element("01"), p.element("10"))
        c.check("01 != 10", isinstance(res, Distinct), res.verdict)
        for n in range(1, 5):
            sf = is_stably_finite(fullshift_monoid(n))
            c.check(f"M_{n} stably finite with unit weights",
                    sf.verdict == "Yes" and set(sf.weights) == {1}, sf.verdict)
        rep = cancellation_report(p, max_degree=6)
        c.check("non-cancellativity witness", rep["cancellative"].verdict == "CounterexampleFound")
        for prop in ("separative", "strongly_separative"):
            c.check(f"no {prop} counterexample to degree 6",
                    rep[prop].verdict == "NoCounterexampleWithinScope", rep[prop].verdict)


def test_criterion_4_tower(capsys):
    with criterion(4, 60, capsys) as c:
        t = resolve_tower(fullshift(), 6)
        counts = [len(t.bottom(n)) for n in range(7)]
        c.check("bottom counts 2^n", counts == [2 ** n for n in range(7)], str(counts))
        for n in range(1, 5):
            iso = presentation_isomorphism(fullshift_monoid(n), bottom_monoid(t, n - 1))
            c.check(f"M_{n} isomorphic to level {n - 1}", iso is not None)
        proofs = 0
        for n in range(6):
            _, report = t.transition(n)
            for item in report.proofs:
                proofs += 1
                c.check(f"transition {n} at {item['vertex']}", check_claim(item["proof"]))
        c.check("class-sum proofs present", proofs > 0, str(proofs))


@pytest.mark.parametrize("m, n", [(2, 3), (2, 4), (3, 5)])
def test_criterion_5_paradoxical(m, n, capsys):
    with criterion(5, 30, capsys, f" E({m},{n})") as c:
        sg = emn(m, n)
        p = separated_monoid(sg)
        w = p.element("w")
        ct = cyclic_type(p, w)
        c.check(f"E({m},{n}) cyclic type", ct.outcome == LeavittType(m, n), str(ct.outcome))
        t = resolve_tower(sg, 1)
        level, x, y, res = t.typ_leq(t.element(0, "2*w"), t.element(0, "w"))
        ok = isinstance(res, NotLeq) and isinstance(res.certificate, CyclicHom)
        c.check("2w not <= w with cyclic certificate", ok, res.verdict)
        if ok:
            c.check("certificate verifies", check_notleq(t.monoid(level), x, y, res.certificate)
                    and check_claim(verdict_json(t.monoid(level), x, y, res)["proof"]))
        tm = tarski_measure(p, w)
        c.check("Tarski paradox for a_w", tm.verdict == "Paradox" and check_claim(tm.proof), tm.verdict)


def _katsura_specs():
    specs = [KatsuraSpec(((a,),), ((b,),)) for a in range(1, 5) for b in range(-2, 3)]
    specs += [KatsuraSpec(((1, 1), (0, 2)), ((1, 0), (0, 1))), KatsuraSpec(((2, 1), (1, 2)), ((1, 1), (1, 1)))]
    return specs


def test_criterion_6_selfsimilar(capsys):
    with criterion(6, 60, capsys) as c:
        five = [KatsuraSpec(((2,),), ((1,),)), KatsuraSpec(((3,),), ((2,),)), KatsuraSpec(((2,),), ((0,),)),
                KatsuraSpec(((2, 1), (0, 3)), ((1, 1), (0, 2))), KatsuraSpec(((1, 2), (1, 1)), ((0, 1), (1, 0)))]
        for spec in five:
            rep = verify_cocycle(katsura_action(spec), max_path_length=2, bound=3)
            c.check(f"cocycle {spec.to_json()}", rep.ok, f"{len(rep.violations)} violations")
        lamp = automaton_action(LAMPLIGHTER)
        rep = verify_cocycle(lamp, max_path_length=4, bound=2)
        c.check("lamplighter cocycle", rep.ok, f"{len(rep.violations)} violations")
        specs = _katsura_specs()
        agree = sum(katsura_pseudo_free(s) == (pseudo_free_search(katsura_action(s), 8) is None) for s in specs)
        c.check(f"pseudo-free agreement on {len(specs)} specs", agree == len(specs) >= 20, f"{agree}")
        for spec in five:
            act = katsura_action(spec)
            c.check(f"quotient {spec.to_json()}", are_isomorphic(quotient_graph(act), act.graph))
        s = lamp.parse("a^-1 b")
        s2 = lamp.mul(s, s)
        ok = all(lamp.act_word(s2, wd) == wd for k in range(9) for wd in itertools.product(range(2), repeat=k))
        c.check("(a^-1 b)^2 trivial on words of length <= 8", ok)


def test_criterion_7_configspace(capsys):
    with criterion(7, 30, capsys) as c:
        sg = fullshift()
        counts = [count_balls(sg, r, "v") for r in range(3)]
        c.check("fullshift ball counts 1, 4, 16", counts == [1, 4, 16], f"observed {counts}")
        table = crosscheck_counts(sg, 2, ["v"])
        row = table["rows"][0]
        c.check("consistent radius-level correspondence", row["consistent"], json.dumps(row["correspondence"]))
        tower = table["layer_sizes"]
        c.check("layer sizes match criterion 4", tower == [2 ** j for j in range(len(tower))], str(tower))
        c.check("emn(2,3) radius 1 at v", count_balls(emn(2, 3), 1, "v") == 6)


# ----------------------------------------------------------------- criterion 8

def _cli(argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def _cli_runs(tmp_path):
    m2 = tmp_path / "m2.json"
    m2.write_text(json.dumps(fullshift_monoid(2).to_json()))
    spec = tmp_path / "katsura.json"
    spec.write_text(json.dumps({"A": [[2]], "B": [[1]]}))
    runs = [
        ["graph", "simple", "--name", "rose", "--n", "1"],
        ["graph", "simple", "--name", "toeplitz"],
        ["ktheory", "graph", "--name", "rose", "--n", "5"],
        ["ktheory", "katsura", "--spec", str(spec)],
        ["monoid", "eq", "--presentation", str(m2), "--x", "00 + 01", "--y", "00 + 10"],
        ["monoid", "eq", "--presentation", str(m2), "--x", "01", "--y", "10"],
        ["monoid", "stablyfinite", "--presentation", str(m2)],
        ["monoid", "cancellation", "--presentation", str(m2), "--max-degree", "6"],
        ["resolve", "--name", "fullshift", "--depth", "4"],
        ["selfsim", "check", "--spec", str(spec)],
        ["selfsim", "pseudofree", "--spec", str(spec)],
        ["selfsim", "check", "--builtin", "lamplighter", "--path-length", "3"],
        ["configspace", "count", "--name", "fullshift", "--radius", "2", "--base", "v", "--crosscheck"],
        ["configspace", "count", "--name", "emn", "--m", "2", "--n", "3", "--radius", "1", "--base", "v"],
    ]
    for m, n in [(2, 3), (2, 4), (3, 5)]:
        g = ["--name", "emn", "--m", str(m), "--n", str(n)]
        runs += [["typ", "le", *g, "--x", "2*w", "--y", "w"],
                 ["monoid", "type", *g, "--x", "w"],
                 ["monoid", "tarski", *g, "--e", "w"]]
    return runs


def test_criterion_8_certificates(tmp_path, capsys):
    with criterion(8, 120, capsys) as c:
        total_claims = 0
        for k, argv in enumerate(_cli_runs(tmp_path)):
            label = " ".join(a for a in argv if not a.startswith(str(tmp_path)))
            code1, out1 = _cli(argv + ["--threads", "1"])
            code4, out4 = _cli(argv + ["--threads", "4"])
            c.check(f"byte-identical: {label}", (code1, out1) == (code4, out4))
            c.check(f"verdict exit code: {label}", code1 == 0, str(code1))
            path = tmp_path / f"report{k}.json"
            path.write_text(out1)
            code, text = _cli(["verify-cert", str(path)])
            rep = json.loads(text)["result"]
            total_claims += rep["claims"]
            c.check(f"verify-cert: {label}", code == 0 and rep["verdict"] == "Verified",
                    f"{rep['verified']}/{rep['claims']}")
        c.check("certificates were emitted", total_claims > 0, str(total_claims))
