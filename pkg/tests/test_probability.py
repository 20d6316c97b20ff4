import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schrodinger_appell import appell, probability as pr
from schrodinger_appell.probability import DensityParams, DomainError
from conftest import frac

BASE = DensityParams(1, 1, Fraction(3, 2))
PARAM_SETS = [BASE, DensityParams(2, Fraction(1, 3), Fraction(3, 4)), DensityParams(Fraction(1, 2), 2, 3)]

positive = st.fractions(Fraction(1, 4), 3, max_denominator=4)
params = st.builds(DensityParams, positive, positive, st.fractions(Fraction(1, 2), 4, max_denominator=4))


def test_domain():
    with pytest.raises(DomainError):
        DensityParams(0, 1, 1)
    with pytest.raises(DomainError):
        DensityParams(1, -1, 1)
    with pytest.raises(DomainError):
        DensityParams(1, 1, Fraction(1, 4))
    delta = DensityParams(1, 1, Fraction(1, 2))
    with pytest.raises(DomainError):
        pr.density(delta, 1, 0)
    with pytest.raises(DomainError):
        pr.quadrature_check(delta)


def test_density_examples(frozen):
    assert pr.density(BASE, 0.1, 1.0) == 0.0
    for x1, x2 in [(0.5, 0.0), (2.0, 1.0), (3.0, -1.5)]:
        want = math.exp(-x1) / math.sqrt(2 * math.pi) if x1 > x2 * x2 / 2 else 0.0
        assert pr.density(BASE, x1, x2) == pytest.approx(want, rel=1e-14)
    for row in frozen["density"]:
        p = DensityParams(frac(row["m"]), frac(row["beta"]), frac(row["c"]))
        got = pr.density(p, float(frac(row["x1"])), float(frac(row["x2"])))
        assert got == pytest.approx(row["value"], rel=1e-12, abs=1e-300)


def test_moment_examples():
    p = DensityParams(Fraction(3, 2), Fraction(2, 5), Fraction(7, 4))
    assert pr.exact_moment(p, 1, 0) == p.c * p.beta
    assert pr.exact_moment(p, 0, 2) == p.m * p.beta
    assert pr.exact_moment(p, 0, 1) == 0
    assert pr.exact_moment(p, 0, 0) == 1
    t = pr.mgf_moments(p, 4)
    assert t[(0, 0)] == 1
    assert t[(1, 2)] == pr.exact_moment(p, 1, 2)
    assert t[(0, 4)] == 3 * (p.m * p.beta) ** 2


def test_moments_match_density_oracle(frozen):
    d = frozen["params"]
    p = DensityParams(frac(d["m"]), frac(d["beta"]), frac(d["c"]))
    for key, v in frozen["moments"].items():
        j, k = map(int, key.split(","))
        assert pr.exact_moment(p, j, k) == frac(v)


@pytest.mark.parametrize("p", PARAM_SETS, ids=lambda p: f"{p.m},{p.beta},{p.c}")
def test_exact_equals_mgf(p):
    assert pr.exact_moments(p, 6).entries == pr.mgf_moments(p, 6).entries


@given(params)
def test_exact_equals_mgf_property(p):
    assert pr.exact_moments(p, 4).entries == pr.mgf_moments(p, 4).entries


@given(params)
def test_marginals(p):
    for j in range(6):
        assert pr.exact_moment(p, j, 0) == p.beta**j * _rising(p.c, j)
    for k in range(0, 8, 2):
        assert pr.exact_moment(p, 0, k) == (p.m * p.beta) ** (k // 2) * _odd_double_factorial(k - 1)
        assert pr.exact_moment(p, 3, k + 1) == 0


@pytest.mark.parametrize("p", PARAM_SETS, ids=lambda p: f"{p.m},{p.beta},{p.c}")
def test_gram_route_at_unit_beta(p):
    q = DensityParams(p.m, 1, p.c)
    assert appell.vacuum_moments_from_gram(q.to_params(), 4) == pr.exact_moments(q, 4).entries


def test_sampler_support_and_determinism():
    xs = pr.sample(BASE, 5000, 3)
    assert xs.shape == (5000, 2)
    assert np.all(xs[:, 0] >= xs[:, 1] ** 2 / 2)
    assert np.array_equal(xs, pr.sample(BASE, 5000, 3))
    assert not np.array_equal(xs, pr.sample(BASE, 5000, 4))
    delta = pr.sample(DensityParams(2, 1, Fraction(1, 2)), 1000, 0)
    assert np.all(delta[:, 0] == delta[:, 1] ** 2 / 4)
    with pytest.raises(ValueError):
        pr.sample(BASE, 0, 0)


def test_sampler_accepts_generator():
    rng = np.random.default_rng(11)
    assert np.array_equal(pr.sample(BASE, 10, rng), pr.sample(BASE, 10, np.random.default_rng(11)))


def test_monte_carlo_small():
    rows = pr.monte_carlo_check(PARAM_SETS[1], [(1, 0), (0, 2)], n=200_000, seed=5)
    assert all(r["ok"] for r in rows)


@pytest.mark.parametrize("p", PARAM_SETS, ids=lambda p: f"{p.m},{p.beta},{p.c}")
def test_quadrature(p):
    rep = pr.quadrature_check(p, moments=((1, 0), (0, 2), (1, 2)))
    assert rep["failures"] == []
    assert rep["normalization_error"] < 1e-6


def test_quadrature_examples():
    rep = pr.quadrature_check(BASE)
    assert rep["normalization"] == pytest.approx(1, abs=1e-6)
    values = {(r["j"], r["k"]): r["value"] for r in rep["moments"]}
    assert values[(1, 0)] == pytest.approx(1.5, abs=1e-5)
    assert values[(0, 2)] == pytest.approx(1.0, abs=1e-5)


def _rising(x, n):
    out = Fraction(1)
    for i in range(n):
        out *= x + i
    return out


def _odd_double_factorial(n):
    return math.prod(range(n, 0, -2)) if n > 0 else 1
