import random

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from typforge.errors import SpecViolation
from typforge.graphs import emn, line, rose, toeplitz
from typforge.ktheory import (
    AbelianGroup, canonical_group, cokernel, determinant, graph_k_theory, katsura_k_theory,
    kernel_rank, matmul, smith_normal_form,
)

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


def _check_decomposition(M):
    snf = smith_normal_form(M)
    assert matmul(matmul(snf.U, M), snf.V) == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    d = snf.diagonal
    for i, row in enumerate(snf.D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nonzero = [x for x in d if x]
    assert all(x > 0 for x in nonzero)
    assert d[:len(nonzero)] == nonzero  # zeros come last
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    return snf


@given(matrices)
def test_snf_invariants(M):
    _check_decomposition(M)


def test_snf_random_oracle():
    """Invariant factors agree with an independent implementation on 100 matrices."""
    rng = random.Random(20261018)
    violations = 0
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        ours = [abs(x) for x in _check_decomposition(M).diagonal]
        ref = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
        theirs = [abs(int(ref[i, i])) for i in range(min(m, n))]
        violations += ours != theirs
    assert violations == 0


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_sympy(M):
    assert determinant(M) == sympy.Matrix(M).det()


def test_snf_example():
    snf = smith_normal_form([[2, 0], [0, 3]])
    assert snf.diagonal == [1, 6]


def test_group_helpers():
    assert canonical_group(0, [2, 3]) == AbelianGroup(0, (6,))
    assert str(canonical_group(1, [2, 2])) == "Z/2 + Z/2 + Z"
    assert str(AbelianGroup(0)) == "0"
    assert cokernel([[2], [0]], 2) == AbelianGroup(1, (2,))
    assert kernel_rank([[1, 1]], 2) == 1


@pytest.mark.parametrize("n", range(2, 13))
def test_rose_k_theory(n):
    k0, k1 = graph_k_theory(rose(n))
    assert k0 == AbelianGroup(0, (n - 1,) if n > 2 else ())
    assert k1 == AbelianGroup(0)


def test_other_graphs():
    assert graph_k_theory(rose(1)) == (AbelianGroup(1), AbelianGroup(1))
    assert graph_k_theory(line(4)) == (AbelianGroup(1), AbelianGroup(0))
    assert graph_k_theory(toeplitz()) == (AbelianGroup(1), AbelianGroup(0))
    # one non-source column (1, -5): Z^2 / <(1, -5)> is free of rank one
    assert graph_k_theory(emn(2, 3)) == (AbelianGroup(1), AbelianGroup(0))


@pytest.mark.parametrize("spec, k0, k1", [
    ({"A": [[2]], "B": [[1]]}, AbelianGroup(1), AbelianGroup(1)),
    ({"A": [[3]], "B": [[3]]}, AbelianGroup(0, (2,)), AbelianGroup(0, (2,))),
    ({"A": [[4]], "B": [[0]]}, AbelianGroup(0, (3,)), AbelianGroup(0)),
    ({"A": [[2, 1], [0, 3]], "B": [[1, 1], [0, 2]]}, AbelianGroup(1, (2,)), AbelianGroup(1)),
    ({"A": [[2, 0], [0, 2]], "B": [[1, 0], [0, 1]]}, AbelianGroup(2), AbelianGroup(2)),
])
def test_katsura_k_theory(spec, k0, k1):
    assert katsura_k_theory(spec) == (k0, k1)


def test_katsura_rejects_bad_spec():
    with pytest.raises(SpecViolation):
        katsura_k_theory({"A": [[0]], "B": [[1]]})
