import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from schrodinger_appell import fock
from schrodinger_appell._ordering import weyl_mode_product
from schrodinger_appell.fock import (
    FockOperator,
    FockVector,
    Params,
    R1,
    R2,
    V1,
    V2,
    WeightOverflowError,
)
from conftest import frac

P = Params(1, Fraction(3, 4))
PARAM_SETS = [P, Params(2, Fraction(1, 2)), Params(Fraction(1, 3), Fraction(5, 2))]
W = 8


def ket(j, k, cutoff=W):
    return FockVector.basis(j, k, cutoff)


def op(name, p=P):
    return fock.realize(name, p)


def test_weyl_mode_product_against_derivatives():
    # V^b R^c r^n = d^b/dr^b r^(c+n); compare with sum mult R^(c-k) V^(b-k) r^n.
    for b in range(5):
        for c in range(5):
            for n in range(4):
                direct = math.perm(c + n, b) if c + n >= b else 0
                expanded = {}
                for rp, vp, mult in weyl_mode_product(b, c):
                    if n >= vp:
                        deg = n - vp + rp
                        expanded[deg] = expanded.get(deg, 0) + mult * math.perm(n, vp)
                want = {c + n - b: direct} if direct else {}
                assert {d: v for d, v in expanded.items() if v} == want


def test_vacuum_actions():
    assert fock.apply(op("D"), ket(0, 0)) == ket(0, 0).scale(P.c)
    assert fock.apply(op("Px"), ket(0, 1)) == ket(0, 0).scale(P.m)
    assert fock.apply(op("Pt"), ket(1, 0)) == ket(0, 0).scale(P.c)
    assert fock.apply(op("Pt"), ket(0, 0)).is_zero()
    assert fock.apply(op("Px"), ket(0, 0)).is_zero()
    assert fock.apply(op("M"), ket(2, 1)) == ket(2, 1).scale(P.m)


def test_commutator_examples():
    lhs = fock.commutator(op("Pt"), op("K"))
    assert fock.apply(lhs, ket(0, 0)) == ket(0, 0).scale(P.c)
    br = fock.commutator(op("Px"), op("G"))
    for j, k in fock.interior_states(W):
        assert fock.apply(br, ket(j, k)) == ket(j, k).scale(P.m)


@pytest.mark.parametrize("p", PARAM_SETS, ids=str)
def test_bracket_table_realized(p):
    assert fock.commutator_check(p, W) == []
    assert fock.grading_failures(p, W) == []


def test_weight_overflow():
    with pytest.raises(WeightOverflowError):
        fock.apply(op("K"), ket(4, 0))
    assert fock.apply(op("K"), ket(4, 0), strict=False).is_zero()
    assert op("K").weight_delta == 2 and op("Pt").weight_delta == -2


def test_params_validation():
    with pytest.raises(ValueError):
        Params(0, 1)
    with pytest.raises(TypeError):
        Params(1.0, 1)
    assert Params(2, Fraction(3, 4)).cdot == Fraction(1, 4)


def test_standard_form():
    L0, R0, rho0 = fock.standard_form(P)
    assert fock.apply(rho0, ket(0, 0)) == ket(0, 0).scale(P.cdot)
    assert fock.commutator(L0, op("G")).is_zero()
    s = ket(1, 0)
    got = fock.apply(L0, fock.apply(R0, s)) - fock.apply(R0, fock.apply(L0, s))
    assert got == fock.apply(rho0, s)
    assert fock.commutator(L0, R0) == rho0
    assert fock.commutator(rho0, R0) == R0.scale(2)
    for name in ("Px", "G", "M"):
        for x in (L0, R0, rho0):
            assert fock.commutator(op(name), x).is_zero()


def test_schrodinger_operator_normal_form():
    S = fock.schrodinger_operator(P)
    m = P.m
    want = V1.scale(P.cdot) + R1 * V1 * V1 - (R2 * R2 * V1 * V1).scale(1 / (2 * m))
    assert S == want == fock.schrodinger_operator_reduced(P)
    assert fock.apply(S, ket(1, 0)) == ket(0, 0).scale(P.cdot)


def test_tilted_observables():
    p = Params(2, Fraction(3, 4), Fraction(1, 3))
    X1, X2 = fock.tilted_observables(p)
    assert fock.vacuum_expectation(X1, 4) == p.beta * p.c
    assert fock.vacuum_expectation(X2 * X2, 4) == p.m * p.beta
    br = fock.commutator(X1, X2)
    for j, k in fock.interior_states(W):
        assert fock.apply(br, ket(j, k)).is_zero()


def test_vacuum_moments_match_oracle(frozen):
    p = Params(frac(frozen["params"]["m"]), frac(frozen["params"]["c"]), frac(frozen["params"]["beta"]))
    got = fock.vacuum_moments(p, 4)
    for key, value in frozen["moments"].items():
        j, k = map(int, key.split(","))
        assert got[(j, k)] == frac(value)


def test_ab_state():
    m = P.m
    assert fock.ab_state(1, 0, P, 4) == ket(1, 0, 4) - ket(0, 2, 4).scale(1 / (2 * m))
    assert fock.ab_state(0, 3, P, 4) == ket(0, 3, 4)


words = st.builds(
    lambda r1, r2, v1, v2, c: FockOperator.word(r1, r2, v1, v2, c),
    st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
    st.fractions(-3, 3, max_denominator=4),
)
operators = st.lists(words, min_size=1, max_size=3).map(lambda ws: sum(ws[1:], ws[0]))


@given(operators, operators, st.sampled_from(fock.basis_states(4)))
def test_product_acts_as_composition(a, b, s):
    v = ket(*s, 20)
    assert fock.apply(a * b, v) == fock.apply(a, fock.apply(b, v))


@given(operators, operators, operators)
def test_product_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(operators, operators)
def test_commutator_is_antisymmetric(a, b):
    assert fock.commutator(a, b) == -fock.commutator(b, a)


def test_canonical_pairs():
    one = fock.IDENTITY
    assert fock.commutator(V1, R1) == one
    assert fock.commutator(V2, R2) == one
    assert fock.commutator(V1, R2).is_zero()
