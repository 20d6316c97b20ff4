"""Heat-type evolution u_τ = H u on the Fock space and its Appell systems.

Two independent routes to h_ab(τ) = exp(τH)|ab>:

* averaging: expand the abelian-subgroup generating function in
  (w1, w2, v0, v2) and replace w-monomials by moments of the driving
  process;
* exponential: sum τ^n H^n |ab> / n! directly, which terminates because
  H strictly lowers the weight 2j + k.

The process couples w1 to Pt and w2 to Px.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import fock
from .fock import FockOperator, FockVector, Params, basis_states
from .series import (
    MultiSeries,
    as_rational,
    binom_series,
    exp_series,
    format_rational,
    invert_unit,
    substitute,
)

# Variable slots of the generating function.
W1, W2, V0, V2, R, G = range(6)


def double_factorial(n: int) -> int:
    """(n)!! with the convention (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@dataclass(frozen=True)
class LevySpec:
    """Moments of (w1(τ), w2(τ)) as polynomials in τ.

    ``gaussian``: independent centred normals with variance scale*τ.
    ``drift``: deterministic w_i = d_i τ.
    A custom ``moment_map(p, q) -> {tau_power: coefficient} | None`` can be
    supplied with ``kind="custom"``.
    """

    kind: str = "gaussian"
    params: tuple = (Fraction(1), Fraction(1))
    moment_map: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("gaussian", "drift", "custom"):
            raise ValueError(f"unknown process kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(as_rational(x) for x in self.params))

    @classmethod
    def gaussian(cls, s1=1, s2=1) -> "LevySpec":
        return cls("gaussian", (s1, s2))

    @classmethod
    def drift(cls, d1, d2) -> "LevySpec":
        return cls("drift", (d1, d2))

    def moment(self, p: int, q: int) -> dict | None:
        if self.kind == "gaussian":
            if p % 2 or q % 2:
                return {}
            s1, s2 = self.params
            c = s1 ** (p // 2) * s2 ** (q // 2) * double_factorial(p - 1) * double_factorial(q - 1)
            return {(p + q) // 2: c}
        if self.kind == "drift":
            d1, d2 = self.params
            c = d1**p * d2**q
            return {p + q: c} if c else {}
        return self.moment_map(p, q)

    def generator(self, params: Params) -> FockOperator:
        """H(Pt, Px) generating this process."""
        Pt, Px = fock.realize("Pt", params), fock.realize("Px", params)
        a, b = self.params
        if self.kind == "gaussian":
            return (Pt * Pt).scale(a / 2) + (Px * Px).scale(b / 2)
        if self.kind == "drift":
            return Pt.scale(a) + Px.scale(b)
        raise ValueError("custom processes have no built-in generator")


def evolution_generating(p: Params, cap: int) -> MultiSeries:
    """exp(v0 R0/(1-v0 w1)) (1-v0 w1)^(-ċ) exp(v2(G + m w2) + m w1 v2²/2).

    Variables (w1, w2, v0, v2, r, g); ``r`` and ``g`` stand for the
    commuting operators R0 and G acting on Ω.
    """
    var = lambda i: MultiSeries.var(6, cap, i)
    w1, w2, v0, v2, r, g = (var(i) for i in range(6))
    inv = invert_unit(1 - v0 * w1)
    sl2 = exp_series(v0 * r * inv) * substitute(
        binom_series(6, cap, V0, p.cdot), [(V0, v0 * w1)]
    )
    hw = exp_series(v2 * g + (v2 * w2).scale(p.m) + (w1 * v2 * v2).scale(p.m / 2))
    return sl2 * hw


def average(series: MultiSeries, spec: LevySpec, w_slots: Sequence[int] = (W1, W2), tau=None):
    """Replace w-monomials by their expectations.

    The result drops the w slots and prepends a τ slot, so a series in
    (w1, w2, v0, v2, r, g) becomes one in (τ, v0, v2, r, g).  With a
    numeric ``tau`` the τ slot is evaluated away.
    """
    i1, i2 = w_slots
    keep = [i for i in range(series.nvars) if i not in (i1, i2)]
    out: dict = {}
    cache: dict = {}
    for e, c in series.items():
        pq = (e[i1], e[i2])
        if pq not in cache:
            mom = spec.moment(*pq)
            if mom is None:
                raise ValueError(f"process has no moment E[w1^{pq[0]} w2^{pq[1]}]")
            cache[pq] = mom
        rest = tuple(e[i] for i in keep)
        for s, val in cache[pq].items():
            key = (s,) + rest
            out[key] = out.get(key, 0) + c * val
    avg = MultiSeries(len(keep) + 1, series.cap, out)
    if tau is None:
        return avg
    tau = as_rational(tau)
    flat: dict = {}
    for e, c in avg.items():
        flat[e[1:]] = flat.get(e[1:], 0) + c * tau ** e[0]
    return MultiSeries(len(keep), series.cap, flat)


@dataclass
class HeatAppell:
    """h_ab(τ) = sum_n τ^n coeffs[n], with |jk>-basis vector coefficients."""

    a: int
    b: int
    coeffs: list

    @property
    def degree(self) -> int:
        return max((n for n, v in enumerate(self.coeffs) if not v.is_zero()), default=0)

    def __eq__(self, other):
        if not isinstance(other, HeatAppell):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        pad = lambda cs: list(cs) + [FockVector(0)] * (n - len(cs))
        return (self.a, self.b) == (other.a, other.b) and all(
            x == y for x, y in zip(pad(self.coeffs), pad(other.coeffs))
        )

    def at(self, tau) -> FockVector:
        tau = as_rational(tau)
        out = FockVector(self.coeffs[0].cutoff if self.coeffs else 0)
        for n, v in enumerate(self.coeffs):
            out = out + v.scale(tau**n)
        return out

    def derivative(self) -> list:
        return [v.scale(n) for n, v in enumerate(self.coeffs)][1:]

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "tau_coefficients": [
                {
                    "power": n,
                    "state": [
                        {"j": j, "k": k, "value": format_rational(c)}
                        for (j, k), c in sorted(v.items())
                    ],
                }
                for n, v in enumerate(self.coeffs)
            ],
        }


def _trim(coeffs: list) -> list:
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def heat_by_exponential(p: Params, a: int, b: int, spec: LevySpec | None = None) -> HeatAppell:
    spec = spec or LevySpec.gaussian()
    H = spec.generator(p)
    cutoff = 2 * a + b
    v = fock.ab_state(a, b, p, cutoff)
    coeffs = []
    n = 0
    while not v.is_zero():
        coeffs.append(v.scale(Fraction(1, math.factorial(n))))
        v = fock.apply(H, v)
        n += 1
    return HeatAppell(a, b, _trim(coeffs or [FockVector(cutoff)]))


class AveragingRoute:
    """Reusable averaged generating function for many (a, b) lookups."""

    def __init__(self, p: Params, max_weight: int, spec: LevySpec | None = None):
        self.p = p
        self.spec = spec or LevySpec.gaussian()
        self.max_weight = max_weight
        gen = evolution_generating(p, 2 * max_weight)
        self.averaged = average(gen, self.spec)  # (τ, v0, v2, r, g)
        self._states: dict = {}

    def _state(self, i: int, j: int) -> FockVector:
        if (i, j) not in self._states:
            self._states[(i, j)] = fock.ab_state(i, j, self.p, self.max_weight)
        return self._states[(i, j)]

    def heat(self, a: int, b: int) -> HeatAppell:
        if 2 * a + b > self.max_weight:
            raise fock.WeightOverflowError(f"|{a}{b}> exceeds weight {self.max_weight}")
        scale = math.factorial(a) * math.factorial(b)
        coeffs: dict = {}
        for (s, e0, e2, i, j), c in self.averaged.items():
            if (e0, e2) != (a, b):
                continue
            vec = self._state(i, j).scale(c * scale)
            coeffs[s] = coeffs.get(s, FockVector(self.max_weight)) + vec
        top = max(coeffs, default=0)
        out = [coeffs.get(n, FockVector(self.max_weight)) for n in range(top + 1)]
        return HeatAppell(a, b, _trim(out))


def heat_appell(p: Params, a: int, b: int, spec: LevySpec | None = None, route: str = "averaging") -> HeatAppell:
    if route == "averaging":
        return AveragingRoute(p, 2 * a + b, spec).heat(a, b)
    if route == "exponential":
        return heat_by_exponential(p, a, b, spec)
    raise ValueError(f"unknown route {route!r}")


def nilpotency_bound(a: int, b: int, spec: LevySpec) -> int:
    """Largest n with H^n|ab> possibly nonzero: each factor lowers weight by 2 (gaussian) or 1."""
    w = 2 * a + b
    return math.ceil(w / 2) if spec.kind == "gaussian" else w


def verify_heat_equation(p: Params, cutoff: int, spec: LevySpec | None = None) -> dict:
    """Route equality, u_τ = H u and the nilpotency bound for 2a+b <= cutoff-4."""
    if cutoff < 4:
        raise ValueError("cutoff must be at least 4")
    spec = spec or LevySpec.gaussian()
    W = cutoff - 4
    H = spec.generator(p)
    route = AveragingRoute(p, W, spec)
    failures = []
    checked = 0
    for a, b in basis_states(W):
        h1 = route.heat(a, b)
        h2 = heat_by_exponential(p, a, b, spec)
        checked += 1
        if h1 != h2:
            failures.append(f"routes differ for |{a}{b}>")
        lhs = h1.derivative()
        rhs = [fock.apply(H, v) for v in h1.coeffs]
        n = max(len(lhs), len(rhs))
        zero = FockVector(W)
        lhs += [zero] * (n - len(lhs))
        rhs += [zero] * (n - len(rhs))
        if any(x != y for x, y in zip(lhs, rhs)):
            failures.append(f"d/dτ h != H h for |{a}{b}>")
        bound = nilpotency_bound(a, b, spec)
        if h2.degree > bound:
            failures.append(f"|{a}{b}>: τ-degree {h2.degree} > {bound}")
        if h1.coeffs[0] != fock.ab_state(a, b, p, W):
            failures.append(f"h_{a}{b}(0) != |{a}{b}>")
    return {"params": str(p), "cutoff": cutoff, "checked": checked, "failures": failures}


# -- Leibniz sub-formulas on the Fock realization --------------------------


def sl2_leibniz_check(p: Params, order: int, b_max: int = 3) -> list:
    """exp(w1 L0) exp(v0 R0) G^b Ω against the closed form, to joint order."""
    L0, R0, _ = fock.standard_form(p)
    failures = []
    cap = 2 * order
    var = lambda i: MultiSeries.var(2, cap, i)
    w1, v0 = var(0), var(1)
    # R0 stays symbolic: sum over i of (v0/(1-v0 w1))^i / i! R0^i.
    base = v0 * invert_unit(1 - v0 * w1)
    pre = substitute(binom_series(2, cap, 1, p.cdot), [(1, v0 * w1)])
    powers = [MultiSeries.one(2, cap)]
    for _ in range(order):
        powers.append(powers[-1] * base)
    for bb in range(b_max + 1):
        cutoff = 2 * order + bb
        for n in range(order + 1):
            for a in range(order + 1 - n):
                # LHS coefficient of w1^n v0^a: L0^n R0^a G^b Ω / (n! a!).
                v = fock.ab_state(a, bb, p, cutoff)
                for _ in range(n):
                    v = fock.apply(L0, v)
                lhs = v.scale(Fraction(1, math.factorial(n) * math.factorial(a)))
                rhs = FockVector(cutoff)
                for i in range(a + 1):
                    c = (powers[i] * pre).coeff((n, a)) / math.factorial(i)
                    if c:
                        rhs = rhs + fock.ab_state(i, bb, p, cutoff).scale(c)
                if lhs != rhs:
                    failures.append(f"sl(2) Leibniz at w1^{n} v0^{a} on G^{bb}Ω")
    return failures


def hw_leibniz_check(p: Params, order: int, cutoff: int = 6) -> list:
    """exp(w2 Px) exp(v2 G) = exp(m w2 v2) exp(v2 G) exp(w2 Px) on basis states."""
    Px, Gop = fock.realize("Px", p), fock.realize("G", p)
    f = math.factorial
    big = cutoff + order
    failures = []
    for j, k in basis_states(cutoff):
        s = FockVector.basis(j, k, big)
        for q in range(order + 1):
            for t in range(order + 1 - q):
                lhs = s
                for _ in range(t):
                    lhs = fock.apply(Gop, lhs)
                for _ in range(q):
                    lhs = fock.apply(Px, lhs)
                lhs = lhs.scale(Fraction(1, f(q) * f(t)))
                rhs = FockVector(big)
                for l in range(min(q, t) + 1):
                    v = s
                    for _ in range(q - l):
                        v = fock.apply(Px, v)
                    for _ in range(t - l):
                        v = fock.apply(Gop, v)
                    w = p.m**l / (f(l) * f(q - l) * f(t - l))
                    rhs = rhs + v.scale(w)
                if lhs != rhs:
                    failures.append(f"HW Leibniz at w2^{q} v2^{t} on |{j}{k}>")
    return failures
