import math
from fractions import Fraction

import pytest

from schrodinger_appell import diffreal as dr
from schrodinger_appell.diffreal import DX, X, DiffOp, apply_diffop, bracket, poly
from schrodinger_appell.series import MultiSeries, TruncationError, substitute


def test_realization_examples():
    ops = dr.realization(1)
    for n in range(1, 6):
        psi = poly(8, {n: Fraction(1, math.factorial(n))})
        assert apply_diffop(DX, psi) == poly(8, {n - 1: Fraction(1, math.factorial(n - 1))})
    assert apply_diffop(ops["D"], poly(4, {0: 1})) == poly(4, {0: Fraction(1, 2)})


@pytest.mark.parametrize("m", [1, 2, Fraction(1, 3), Fraction(-5, 2)])
def test_realization_satisfies_table(m):
    assert dr.realization_failures(m) == []


def test_canonical_pair():
    assert bracket(DX, X) == DiffOp.scalar(1)
    assert bracket(X * DX, DX) == DX.scale(-1)


def test_exp_diffop_pure_shift():
    f = poly(15, {0: 1, 2: 3, 5: -1})
    B2 = Fraction(2, 3)
    got = dr.exp_diffop(0, B2, 1, 5, f, degree=5)
    x = MultiSeries.var(1, 15, 0)
    shifted = substitute(f, [(0, x + B2)], polynomial=True).with_cap(5)
    assert got == shifted


def test_exp_diffop_single_second_derivative():
    f = poly(4, {2: 1})
    B1, m = Fraction(3, 7), 2
    assert dr.exp_diffop(B1, 0, m, 1, f, degree=2) == poly(2, {2: 1, 0: B1 / m})


def test_exp_diffop_needs_room():
    with pytest.raises(TruncationError):
        dr.exp_diffop(1, 1, 1, 3, poly(4, {1: 1}), degree=2)


@pytest.mark.parametrize("m", [1, 2])
def test_partial_group_law(m):
    rep = dr.verify_partial_group_law(m, N=6, M=3)
    assert rep["mismatches"] == []
    assert rep["coefficients_compared"] > 0
    assert rep["b1_free_slice_matches_shift"]
    assert rep["coords_consistency_error"] < 1e-10


def test_partial_group_law_higher_order():
    rep = dr.verify_partial_group_law(Fraction(1, 2), N=4, M=5, samples=5)
    assert rep["mismatches"] == []


def test_symmetry_instances():
    assert dr.symmetry_instance_checks(6)["failures"] == []
    # Λ for x d/dx is -1, and the derived algebra commutes with V.
    Y = bracket(DX, X * DX + Fraction(1, 2))
    assert bracket(Y, DX).is_zero()
