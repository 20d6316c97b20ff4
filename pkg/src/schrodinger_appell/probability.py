"""Joint gamma-Gaussian law of the tilted observables (X1, X2).

X2 ~ Normal(0, mβ) and, independently, U ~ Gamma(shape ċ, scale β);
X1 = U + X2²/(2m).  All moment arithmetic is exact; floats appear only in
the density, the sampler and the quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .evolution import double_factorial
from .fock import Params
from .series import (
    MultiSeries,
    as_rational,
    binom_series,
    exp_series,
    format_rational,
    invert_unit,
    rising_factorial,
    substitute,
)


class DomainError(ValueError):
    """Parameters outside the region where an operation is defined."""


@dataclass(frozen=True)
class DensityParams:
    m: Fraction
    beta: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("m", "beta", "c"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.m <= 0 or self.beta <= 0:
            raise DomainError("m and beta must be positive")
        if self.c < Fraction(1, 2):
            raise DomainError("c must be at least 1/2")

    @property
    def cdot(self) -> Fraction:
        return self.c - Fraction(1, 2)

    @property
    def degenerate(self) -> bool:
        return self.cdot == 0

    def to_params(self) -> Params:
        return Params(self.m, self.c, self.beta)


@dataclass
class MomentTable:
    params: DensityParams
    order: int
    entries: dict

    def __getitem__(self, jk) -> Fraction:
        return self.entries[jk]

    def to_records(self) -> list:
        return [
            {"j": j, "k": k, "value": format_rational(v), "decimal": float(v)}
            for (j, k), v in sorted(self.entries.items())
        ]


def _require_density(p: DensityParams):
    if p.degenerate:
        raise DomainError("c = 1/2: the law is concentrated on the parabola x1 = x2²/(2m) and has no density")


def density(p: DensityParams, x1: float, x2: float) -> float:
    _require_density(p)
    m, beta, cd = float(p.m), float(p.beta), float(p.cdot)
    u = x1 - x2 * x2 / (2 * m)
    if u <= 0:
        return 0.0
    return (
        math.exp(-x1 / beta)
        * u ** (cd - 1)
        * beta ** (-cd)
        / (math.gamma(cd) * math.sqrt(2 * math.pi * m * beta))
    )


def exact_moment(p: DensityParams, j: int, k: int) -> Fraction:
    if j < 0 or k < 0:
        raise ValueError("moment orders must be nonnegative")
    if k % 2:
        return Fraction(0)
    var = p.m * p.beta
    total = Fraction(0)
    for i in range(j + 1):
        gamma_part = p.beta ** (j - i) * rising_factorial(p.cdot, j - i)
        gauss_part = var ** (i + k // 2) * double_factorial(2 * i + k - 1) / (2 * p.m) ** i
        total += math.comb(j, i) * gamma_part * gauss_part
    return total


def exact_moments(p: DensityParams, order: int) -> MomentTable:
    return MomentTable(
        p, order, {(j, k): exact_moment(p, j, k) for j in range(order + 1) for k in range(order + 1 - j)}
    )


def mgf_series(p: DensityParams, order: int) -> MultiSeries:
    """(1 - βz1)^(-c) exp((m/2) β z2² / (1 - βz1)) in (z1, z2)."""
    z1, z2 = MultiSeries.var(2, order, 0), MultiSeries.var(2, order, 1)
    gamma = substitute(binom_series(2, order, 0, p.c), [(0, z1.scale(p.beta))])
    gauss = exp_series((z2 * z2).scale(p.m * p.beta / 2) * invert_unit(1 - z1.scale(p.beta)))
    return gamma * gauss


def mgf_moments(p: DensityParams, order: int) -> MomentTable:
    if order < 1:
        raise ValueError("order must be at least 1")
    s = mgf_series(p, order)
    f = math.factorial
    return MomentTable(
        p,
        order,
        {(j, k): f(j) * f(k) * s.coeff((j, k)) for j in range(order + 1) for k in range(order + 1 - j)},
    )


def sample(p: DensityParams, n: int, seed: int | np.random.Generator) -> np.ndarray:
    """n draws of (x1, x2) as an (n, 2) array."""
    if n < 1:
        raise ValueError("sample size must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m, beta = float(p.m), float(p.beta)
    x2 = rng.normal(0.0, math.sqrt(m * beta), size=n)
    u = np.zeros(n) if p.degenerate else rng.gamma(float(p.cdot), beta, size=n)
    return np.column_stack((u + x2 * x2 / (2 * m), x2))


def monte_carlo_check(p: DensityParams, pairs, n: int = 10**6, seed: int = 0, z: float = 5.0) -> list:
    xs = sample(p, n, seed)
    rows = []
    for j, k in pairs:
        vals = xs[:, 0] ** j * xs[:, 1] ** k
        exact = exact_moment(p, j, k)
        se = math.sqrt(float(exact_moment(p, 2 * j, 2 * k) - exact**2) / n)
        err = abs(vals.mean() - float(exact))
        rows.append(
            {"j": j, "k": k, "exact": format_rational(exact), "empirical": float(vals.mean()),
             "standard_errors": float(err / se) if se else 0.0, "ok": bool(err <= z * se)}
        )
    return rows


def quadrature_check(p: DensityParams, moments=((1, 0), (0, 2)), norm_tol=1e-6, moment_tol=1e-5) -> dict:
    """Integrate the density numerically and compare with the exact moments.

    For fixed x2 the x1-integral starts on the parabola a = x2²/(2m), where
    the density behaves like (x1 - a)^(ċ-1).  That factor is handed to
    QUADPACK's algebraic weight on [a, a + span]; the tail is plain.
    """
    _require_density(p)
    m, beta, cd = float(p.m), float(p.beta), float(p.cdot)
    span = 10 * beta * max(1.0, cd)
    opts = {"epsabs": 1e-12, "epsrel": 1e-10, "limit": 200}

    def integral(j, k):
        def inner(x2):
            a = x2 * x2 / (2 * m)
            g = lambda x1: density(p, x1, x2) * x1**j * x2**k
            # Nodes closer to a than one ulp would round onto the parabola.
            floor = np.nextafter(a, np.inf)

            def smooth(x1):
                x1 = max(x1, floor)
                return g(x1) / (x1 - a) ** (cd - 1)

            head, _ = integrate.quad(smooth, a, a + span, weight="alg", wvar=(cd - 1, 0), **opts)
            tail, _ = integrate.quad(g, a + span, np.inf, **opts)
            return head + tail

        if k % 2:
            return 0.0
        # Even in x2.
        val, _ = integrate.quad(inner, 0, np.inf, **opts)
        return 2 * val

    norm = integral(0, 0)
    report = {"normalization": norm, "normalization_error": abs(norm - 1), "moments": [], "failures": []}
    if abs(norm - 1) > norm_tol:
        report["failures"].append(f"normalization off by {abs(norm - 1):.3e}")
    for j, k in moments:
        val = integral(j, k)
        err = abs(val - float(exact_moment(p, j, k)))
        report["moments"].append({"j": j, "k": k, "value": val, "error": err})
        if err > moment_tol:
            report["failures"].append(f"E[X1^{j} X2^{k}] off by {err:.3e}")
    return report
