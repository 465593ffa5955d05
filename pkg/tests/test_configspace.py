import itertools
from math import prod

import pytest
from hypothesis import given, strategies as st

from typforge.configspace import (
    FiniteConfiguration, count_balls, crosscheck_counts, enumerate_balls, format_word, inverse,
    local_config, multiply, parse_word, reduce_word, translate, truncate, validate,
)
from typforge.errors import NotBipartite, OutOfDomain, WordNotInConfiguration
from typforge.graphs import emn, fullshift, is_bipartite, partial_isometry, rose, trivially_separated

CORPUS = [fullshift(), emn(2, 3), emn(1, 2), emn(3, 3), partial_isometry()]


# ----------------------------------------------------------------- oracle

def _local_forms(sg):
    """Every admissible local configuration, written straight from (c.1)/(c.2)."""
    g, check = sg.graph, is_bipartite(sg)
    forms = {}
    for w in check.source_part:
        forms[w] = [frozenset((e, -1) for e in g.source_inverse(w))]
    for v in check.range_part:
        forms[v] = [frozenset((e, 1) for e in pick) for pick in itertools.product(*sg.classes(v))]
    return forms


def oracle_count(sg, radius, base):
    """Distinct radius-truncations of configurations whose root sits at ``base``."""
    forms = _local_forms(sg)
    results = set()

    def grow(words, open_words, depth):
        if depth == radius:
            results.add(frozenset(words))
            return
        choices = []
        for alpha in open_words:
            back = inverse(alpha[-1:]) if alpha else ()
            options = []
            for vertex_forms in forms.values():
                for S in vertex_forms:
                    if back and back[0] not in S:
                        continue
                    if not alpha and S not in forms[base]:
                        continue
                    options.append(S)
            choices.append(options)
        for pick in itertools.product(*choices):
            new = []
            for alpha, S in zip(open_words, pick):
                for letter in S:
                    word = multiply(alpha, (letter,))
                    if len(word) > len(alpha):
                        new.append(word)
            grow(words | set(new), new, depth + 1)

    grow({()}, [()], 0)
    return len(results)


@pytest.mark.parametrize("sg", CORPUS, ids=lambda s: "-".join(s.vertices))
def test_counts_match_definition_oracle(sg):
    check = is_bipartite(sg)
    for base in check.range_part[:1] + check.source_part[:1]:
        for r in range(0, 4):
            if count_balls(sg, r, base) > 5000:  # keeps the oracle fast
                break
            assert count_balls(sg, r, base) == oracle_count(sg, r, base), (base, r)


@pytest.mark.parametrize("sg", CORPUS, ids=lambda s: "-".join(s.vertices))
def test_radius_one_product_formula(sg):
    for v in is_bipartite(sg).range_part:
        assert count_balls(sg, 1, v) == prod(len(X) for X in sg.classes(v))


def test_small_examples():
    sg = fullshift()
    assert [count_balls(sg, r, "v") for r in range(4)] == [1, 4, 4, 16]
    (only,) = enumerate_balls(sg, 1, "0")
    assert set(only.words) == {(), (("alpha0", -1),), (("beta0", -1),)}
    assert count_balls(emn(2, 3), 1, "v") == 6
    assert count_balls(emn(2, 3), 0, "w") == 1


@pytest.mark.parametrize("sg", CORPUS, ids=lambda s: "-".join(s.vertices))
def test_enumerated_configurations_validate(sg):
    v = is_bipartite(sg).range_part[0]
    radius = 3 if count_balls(sg, 3, v) <= 5000 else 2
    configs = enumerate_balls(sg, radius, v)
    assert len({c.key() for c in configs}) == len(configs)
    for c in configs:
        assert validate(sg, c) == []


def test_validation_catches_problems():
    sg = fullshift()
    good = enumerate_balls(sg, 2, "v")[0]
    missing = FiniteConfiguration(good.words - {(("alpha0", 1),), (("alpha1", 1),)}, 2, "v")
    assert validate(sg, missing)
    gapped = FiniteConfiguration(frozenset({(), (("alpha0", 1), ("beta0", -1))}), 2, "v")
    assert validate(sg, gapped)


def test_local_configurations():
    sg = fullshift()
    c = enumerate_balls(sg, 2, "v")[0]
    root = local_config(sg, c, ())
    assert root.form == "c.2" and root.vertex == "v"
    first = sorted(w for w in c.words if len(w) == 1)[0]
    assert local_config(sg, c, first).form == "c.1"
    edge = max(c.words, key=len)
    assert local_config(sg, c, edge).form == "Boundary"
    with pytest.raises(WordNotInConfiguration):
        local_config(sg, c, (("alpha0", -1),))


@pytest.mark.parametrize("sg", CORPUS[:3], ids=lambda s: "-".join(s.vertices))
def test_translation_coherence(sg):
    v = is_bipartite(sg).range_part[0]
    for c in enumerate_balls(sg, 4, v)[:8]:
        for g in (w for w in c.words if 0 < len(w) <= 2):
            g = inverse(g)
            moved = translate(sg, c, g)
            assert validate(sg, moved) == []
            back = translate(sg, moved, inverse(g))
            assert back == truncate(c, c.radius - 2 * len(g))


def test_translation_errors():
    sg = fullshift()
    c = enumerate_balls(sg, 1, "v")[0]
    with pytest.raises(OutOfDomain):
        translate(sg, c, (("alpha0", 1), ("beta0", -1)))


def test_non_bipartite_rejected():
    with pytest.raises(NotBipartite):
        enumerate_balls(trivially_separated(rose(2)), 1, "v")


letters = st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))


@given(st.lists(letters, max_size=8), st.lists(letters, max_size=8))
def test_word_algebra(x, y):
    a, b = reduce_word(x), reduce_word(y)
    assert multiply(a, inverse(a)) == ()
    assert inverse(multiply(a, b)) == multiply(inverse(b), inverse(a))
    assert parse_word(format_word(a)) == a


def test_crosscheck_reports_correspondence():
    table = crosscheck_counts(fullshift(), 3, ["v"])
    row = table["rows"][0]
    assert row["ball_counts"] == [1, 4, 4, 16]
    assert row["consistent"] and not row["flagged"]
    assert row["correspondence"] == {"0": 0, "1": 2, "2": 2, "3": 4}
