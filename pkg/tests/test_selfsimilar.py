import itertools

import pytest
from hypothesis import given, strategies as st

from typforge.errors import SchemaError, SpecViolation
from typforge.graphs import DirectedGraph, are_isomorphic, emn, line
from typforge.selfsimilar import (
    LAMPLIGHTER, KatsuraSpec, PermutationAction, act_path, action_from_json, automaton_action,
    dichotomy_report, is_pseudo_free, katsura_action, katsura_edge, katsura_pseudo_free,
    pseudo_free_search, quotient_graph, restrict_path, swap_example, trivial_action,
    type_monoid_selfsimilar, verify_cocycle, vertex_orbits,
)


@st.composite
def katsura_specs(draw):
    n = draw(st.integers(1, 2))
    A, B = [], []
    for _ in range(n):
        row_a = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n).filter(any))
        row_b = [draw(st.integers(-3, 3)) if a else 0 for a in row_a]
        A.append(tuple(row_a))
        B.append(tuple(row_b))
    return KatsuraSpec(tuple(A), tuple(B))


def test_odometer_example():
    act = katsura_action({"A": [[2]], "B": [[1]]})
    e0, e1 = katsura_edge(1, 1, 0), katsura_edge(1, 1, 1)
    assert act.act_edge(1, e0) == e1 and act.cocycle(1, e0) == 0
    assert act.act_edge(1, e1) == e0 and act.cocycle(1, e1) == 1
    # adding one to 11 carries: the path e1 e1 goes to e0 e0 with restriction 1
    assert act_path(act, 1, (e1, e1)) == (e0, e0)
    assert restrict_path(act, 1, (e1, e1)) == 1


def test_spec_validation():
    with pytest.raises(SpecViolation):
        KatsuraSpec(((0,),), ((0,),))
    with pytest.raises(SpecViolation):
        KatsuraSpec(((1, 0), (0, 1)), ((0, 1), (0, 0)))
    with pytest.raises(SchemaError):
        KatsuraSpec.from_json({"A": [[1]]})


@given(katsura_specs(), st.integers(-6, 6), st.integers(-6, 6))
def test_katsura_division_identity(spec, m, h):
    """n + m B = k A + n' with 0 <= n' < A, and the cocycle identity."""
    act = katsura_action(spec)
    for e in act.graph.edges:
        _, i, j, n = e.split("_")
        i, j, n = int(i), int(j), int(n)
        a, b = spec.A[i - 1][j - 1], spec.B[i - 1][j - 1]
        n_hat = int(act.act_edge(m, e).split("_")[3])
        assert n + m * b == act.cocycle(m, e) * a + n_hat and 0 <= n_hat < a
        assert act.cocycle(m + h, e) == act.cocycle(m, act.act_edge(h, e)) + act.cocycle(h, e)


@given(katsura_specs())
def test_katsura_axioms(spec):
    report = verify_cocycle(katsura_action(spec), max_path_length=2, bound=2)
    assert report.ok, report.violations


def test_lamplighter_axioms():
    act = automaton_action(LAMPLIGHTER)
    report = verify_cocycle(act, max_path_length=3, bound=2)
    assert report.ok and report.checks > 0


def test_lamplighter_relation():
    act = automaton_action(LAMPLIGHTER)
    s = act.parse("a^-1 b")
    s2 = act.mul(s, s)
    for n in range(0, 7):
        for word in itertools.product(range(2), repeat=n):
            assert act.act_word(s2, word) == word
    assert not act.is_identity(s)


def test_broken_cocycle_is_reported():
    g = DirectedGraph(("u",), ("x", "y"), {"x": "u", "y": "u"}, {"x": "u", "y": "u"})
    bad = {"name": "t", "vertices": {}, "edges": {"x": "y", "y": "x"}, "cocycle": {"x": [], "y": []}}
    act = PermutationAction(g, [bad])
    assert verify_cocycle(act).ok  # trivial cocycle is consistent for an involution
    worse = dict(bad, cocycle={"x": ["t"], "y": []})
    report = verify_cocycle(PermutationAction(g, [worse]))
    assert not report.ok


@given(katsura_specs())
def test_pseudo_freeness_fast_path_matches_search(spec):
    act = katsura_action(spec)
    assert katsura_pseudo_free(spec) == (pseudo_free_search(act, 8) is None)


def test_pseudo_free_on_many_specs():
    specs = []
    for a, b in itertools.product(range(1, 5), range(-2, 3)):
        specs.append(KatsuraSpec(((a,),), ((b,),)))
    specs.append(KatsuraSpec(((1, 1), (0, 2)), ((1, 0), (0, 1))))
    assert len(specs) >= 20
    for spec in specs:
        act = katsura_action(spec)
        assert katsura_pseudo_free(spec) == (pseudo_free_search(act, 8) is None)
        assert is_pseudo_free(act).verdict == ("Yes" if katsura_pseudo_free(spec) else "No")


def test_pseudo_free_other_actions():
    assert is_pseudo_free(swap_example()).verdict == "Yes"
    assert is_pseudo_free(trivial_action(line(2))).verdict == "Yes"
    assert is_pseudo_free(automaton_action(LAMPLIGHTER)).verdict in ("Unknown", "No")


def test_quotients():
    spec = KatsuraSpec(((2, 1), (0, 3)), ((1, 1), (0, 2)))
    act = katsura_action(spec)
    assert are_isomorphic(quotient_graph(act), act.graph)
    q = quotient_graph(swap_example())
    assert len(q.vertices) == 1 and len(q.edges) == 1
    assert vertex_orbits(swap_example()) == [["u", "v"]]


def test_type_monoid_of_odometer():
    p = type_monoid_selfsimilar(katsura_action({"A": [[2]], "B": [[1]]}))
    assert p.generators == ("1",)
    assert p.relations == (((1,), (2,)),)


def test_dichotomy():
    rep = dichotomy_report(katsura_action({"A": [[2]], "B": [[1]]}))
    assert rep["stably_finite"]["verdict"] == "No" and rep["consistent"]
    rep = dichotomy_report(trivial_action(line(3)))
    assert rep["stably_finite"]["verdict"] == "Yes" and rep["graph_stably_finite"]


def test_action_bundles():
    assert isinstance(action_from_json({"A": [[2]], "B": [[1]]}).spec, KatsuraSpec)
    act = action_from_json(LAMPLIGHTER.to_json())
    assert act.format(act.parse("a b^-1")) == "a b^-1"
    with pytest.raises(SchemaError):
        action_from_json({"nothing": 1})
    assert trivial_action(emn(2, 3)).graph.vertices == ("v", "w")
