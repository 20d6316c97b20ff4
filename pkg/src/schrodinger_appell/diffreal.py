"""One-variable differential realization and the partial group law.

G = m x, Px = d/dx, Pt = (1/2m) d²/dx², K = m x²/2, D = x d/dx + 1/2.

Differential operators are normal-ordered sums of x^a (d/dx)^n; univariate
truncated series play the role of functions of x.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Mapping

from ._ordering import weyl_mode_product
from .lie_core import BASIS, LieElement, commutator as lie_commutator, leibniz_commute
from .series import (
    MultiSeries,
    TruncationError,
    as_rational,
    binom_series,
    exp_series,
    format_rational,
    invert_unit,
    substitute,
)


def poly(cap: int, coeffs: Mapping[int, object]) -> MultiSeries:
    """Univariate series sum coeffs[d] x^d."""
    return MultiSeries(1, cap, {(d,): c for d, c in coeffs.items()})


class DiffOp:
    """Finite sum of x^a (d/dx)^n with Fraction coefficients; keys are (a, n)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for (a, n), v in (terms or {}).items():
            v = as_rational(v)
            if v:
                clean[(a, n)] = clean.get((a, n), 0) + v
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def scalar(cls, v) -> "DiffOp":
        return cls({(0, 0): v})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other):
        other = other if isinstance(other, DiffOp) else DiffOp.scalar(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, DiffOp) else DiffOp.scalar(other)
        return self + (-other)

    def scale(self, s) -> "DiffOp":
        s = as_rational(s)
        return DiffOp({k: v * s for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffOp):
            return self.scale(other)
        out: dict = {}
        for (a, n), x in self._terms.items():
            for (b, k), y in other._terms.items():
                for xb, dn, mult in weyl_mode_product(n, b):
                    key = (a + xb, dn + k)
                    out[key] = out.get(key, 0) + x * y * mult
        return DiffOp(out)

    __rmul__ = scale

    def __repr__(self):
        parts = []
        for (a, n), v in sorted(self._terms.items()):
            s = format_rational(v)
            if a:
                s += f"*x^{a}"
            if n:
                s += f"*d^{n}"
            parts.append(s)
        return "DiffOp(" + (" + ".join(parts) or "0") + ")"


def bracket(a: DiffOp, b: DiffOp) -> DiffOp:
    return a * b - b * a


X = DiffOp({(1, 0): 1})
DX = DiffOp({(0, 1): 1})


def apply_diffop(op: DiffOp, f: MultiSeries) -> MultiSeries:
    """Exact action on a univariate series; output keeps ``f.cap``.

    Degrees above ``f.cap - max(n - a)`` depend on unretained input
    coefficients; callers compare only below that bound.
    """
    if f.nvars != 1:
        raise ValueError("apply_diffop acts on univariate series")
    out: dict = {}
    for (d,), c in f.items():
        for (a, n), v in op._terms.items():
            if d < n:
                continue
            e = d - n + a
            out[(e,)] = out.get((e,), 0) + c * v * math.perm(d, n)
    return MultiSeries(1, f.cap, out)


def realization(m) -> dict:
    m = as_rational(m)
    return {
        "M": DiffOp.scalar(m),
        "K": DiffOp({(2, 0): m / 2}),
        "G": DiffOp({(1, 0): m}),
        "D": DiffOp({(1, 1): 1, (0, 0): Fraction(1, 2)}),
        "Px": DX,
        "Pt": DiffOp({(0, 2): 1 / (2 * m)}),
    }


def realization_failures(m) -> list:
    ops = realization(m)
    bad = []
    for x in BASIS:
        for y in BASIS:
            rhs_el = lie_commutator(LieElement.basis(x), LieElement.basis(y))
            rhs = DiffOp()
            for name, a in zip(BASIS, rhs_el.coeffs):
                if a:
                    rhs = rhs + ops[name].scale(a)
            if bracket(ops[x], ops[y]) != rhs:
                bad.append((x, y))
    return bad


# -- partial group law ------------------------------------------------------


def exp_diffop(B1, B2, m, order: int, f: MultiSeries, degree: int | None = None):
    """exp(B1/(2m) d² + B2 d) f, expanded to total B-order ``order``.

    B1, B2 are rationals.  The result is truncated at x-degree ``degree``
    (default ``f.cap - 2*order``), which is where it is exact.
    """
    B1, B2, m = as_rational(B1), as_rational(B2), as_rational(m)
    if f.nvars != 1:
        raise ValueError("exp_diffop acts on univariate series")
    if degree is None:
        degree = f.cap - 2 * order
    if degree < 0 or f.cap < degree + 2 * order:
        raise TruncationError(
            f"input cap {f.cap} too small for degree {degree} at order {order}"
        )
    total = MultiSeries.zero(1, degree)
    for p in range(order + 1):
        for q in range(order + 1 - p):
            w = (B1 / (2 * m)) ** p * B2**q / (math.factorial(p) * math.factorial(q))
            if not w:
                continue
            g = f.derivative(0, 2 * p + q)
            total = total + g.with_cap(degree).scale(w)
    return total


# Variable slots for the formal identity.
X_, B1_, B2_, V1_, V2_ = range(5)


def _keep(N: int, M: int):
    return lambda e: e[X_] <= N and sum(e[1:]) <= M


def group_law_lhs(m, N: int, M: int) -> MultiSeries:
    """exp(B1/2m d² + B2 d) exp(V1 m x²/2 + V2 m x) with formal B, V."""
    m = as_rational(m)
    cap = N + 3 * M
    v = lambda i: MultiSeries.var(5, cap, i)
    x = v(X_)
    f = exp_series((v(V1_) * x * x).scale(m / 2) + (v(V2_) * x).scale(m))
    total = MultiSeries.zero(5, cap)
    for p in range(M + 1):
        for q in range(M + 1 - p):
            w = (1 / (2 * m)) ** p / (math.factorial(p) * math.factorial(q))
            mono = MultiSeries.monomial(5, cap, (0, p, q, 0, 0), w)
            total = total + mono * f.derivative(X_, 2 * p + q)
    return total.select(_keep(N, M))


def group_law_rhs(m, N: int, M: int) -> MultiSeries:
    """The closed form, expanded with exact series arithmetic."""
    m = as_rational(m)
    cap = N + M
    v = lambda i: MultiSeries.var(5, cap, i)
    x, B1, B2, V1, V2 = (v(i) for i in range(5))
    inv = invert_unit(1 - B1 * V1)
    quad = (V1 * inv * x * x).scale(m / 2) + ((V1 * B2 + V2) * inv * x).scale(m)
    pre = substitute(binom_series(5, cap, B1_, Fraction(1, 2)), [(B1_, B1 * V1)])
    tail = ((B1 * V2 * V2 + (B2 * V2).scale(2) + B2 * B2 * V1) * inv).scale(m / 2)
    return (exp_series(quad) * pre * exp_series(tail)).select(_keep(N, M))


def group_law_shift_oracle(m, N: int, M: int) -> MultiSeries:
    """B1 = 0 slice by completing the square: f(x + B2)."""
    m = as_rational(m)
    cap = N + M
    v = lambda i: MultiSeries.var(5, cap, i)
    x, B2, V1, V2 = v(X_), v(B2_), v(V1_), v(V2_)
    f = exp_series((V1 * x * x).scale(m / 2) + (V2 * x).scale(m))
    return substitute(f, [(X_, x + B2)]).select(_keep(N, M))


def _closed_form_value(m: float, B1, B2, V1, V2, x) -> float:
    d = 1 - B1 * V1
    return (
        math.exp(V1 / d * m * x * x / 2 + (V1 * B2 + V2) / d * m * x)
        * d**-0.5
        * math.exp(m / 2 * (B1 * V2 * V2 + 2 * B2 * V2 + B2 * B2 * V1) / d)
    )


def _coords_value(m: float, B1, B2, V1, V2, x) -> float:
    A = leibniz_commute(B1, B2, V1, V2)
    return math.exp(A.A1 * m + A.A2 * m * x * x / 2 + A.A3 * m * x + A.A4 / 2)


def verify_partial_group_law(m, N: int = 6, M: int = 3, samples: int = 20, seed: int = 0):
    """Two-route check of the partial group law; returns a dict report."""
    lhs = group_law_lhs(m, N, M)
    rhs = group_law_rhs(m, N, M)
    keys = set(lhs.terms) | set(rhs.terms)
    mismatched = sorted(k for k in keys if lhs.terms.get(k, 0) != rhs.terms.get(k, 0))
    shift = group_law_shift_oracle(m, N, M)
    lhs_b1_free = lhs.select(lambda e: e[B1_] == 0)
    shift_ok = lhs_b1_free.terms == shift.terms
    rng = random.Random(seed)
    mf = float(as_rational(m))
    worst = 0.0
    for _ in range(samples):
        B1, B2, V1, V2, x = (rng.uniform(-0.7, 0.7) for _ in range(5))
        a = _closed_form_value(mf, B1, B2, V1, V2, x)
        b = _coords_value(mf, B1, B2, V1, V2, x)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return {
        "m": format_rational(m),
        "x_degree": N,
        "order": M,
        "coefficients_compared": len(keys),
        "mismatches": mismatched,
        "b1_free_slice_matches_shift": shift_ok,
        "coords_consistency_error": worst,
    }


# -- symmetry instances -----------------------------------------------------


def _powers_basis(n: int, cap: int) -> list:
    return [poly(cap, {i: 1}) for i in range(n + 1)]


def _kills(op_power: DiffOp, f: MultiSeries) -> bool:
    return apply_diffop(op_power, f).is_zero()


def symmetry_instance_checks(N: int) -> dict:
    """Instance checks of the symmetry-algebra statements for V = d/dx.

    Family: x d/dx + 1/2 (Λ = -1), d/dx (Λ = 0), 1 (Λ = 0).
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    V = DX
    family = {
        "x d/dx + 1/2": (X * DX + Fraction(1, 2), Fraction(-1)),
        "d/dx": (DX, Fraction(0)),
        "1": (DiffOp.scalar(1), Fraction(0)),
    }
    failures = []
    cap = N
    for name, (op, lam) in family.items():
        if bracket(op, V) != V.scale(lam):
            failures.append(f"[{name}, V] != {lam} V as operators")
        for f in _powers_basis(N, cap):
            lhs = apply_diffop(bracket(op, V), f)
            if lhs != apply_diffop(V, f).scale(lam):
                failures.append(f"[{name}, V] differs on {f}")
        for n in range(N + 1):
            Vn1 = _dpow(n + 1)
            for f in _powers_basis(n, cap):
                g = apply_diffop(op, f)
                if not _kills(Vn1, g):
                    failures.append(f"{name} maps Z_{n} outside itself")
    names = list(family)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            Y = bracket(family[a][0], family[b][0])
            if not bracket(Y, V).is_zero():
                failures.append(f"[[{a}, {b}], V] != 0")
    # Appell axioms for psi_n = x^n/n!.
    for n in range(N + 1):
        psi = poly(cap, {n: Fraction(1, math.factorial(n))})
        if not _kills(_dpow(n + 1), psi):
            failures.append(f"psi_{n} not in Z_{n}")
        if n and apply_diffop(V, psi) != poly(cap, {n - 1: Fraction(1, math.factorial(n - 1))}):
            failures.append(f"V psi_{n} != psi_{n - 1}")
    return {"degree": N, "failures": failures}


def _dpow(n: int) -> DiffOp:
    return DiffOp({(0, n): 1})
