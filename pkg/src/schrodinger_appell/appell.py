"""Leibniz function, Gram matrices and canonical Appell systems.

Conventions:

* ``<jk|j'k'>`` is read off the Leibniz function as
  ``j! k! j'! k'! * [B1^j B2^k V1^j' V2^k'] Υ``.
* ``psi[j, k]`` is the plain coefficient of ``v1^j v2^k`` in the generating
  function, so the lowering operators shift indices without factorials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import fock
from .fock import FockVector, Params, basis_states, weight
from .series import (
    MultiSeries,
    TruncationError,
    as_rational,
    binom_series,
    exp_series,
    format_rational,
    invert_unit,
    rising_factorial,
    substitute,
)

B1, B2, V1, V2 = range(4)


def leibniz_series(p: Params, cap: int) -> MultiSeries:
    """Υ = (1 - B1 V1)^(-c) exp((m/2)(B1 V2² + 2 B2 V2 + B2² V1)/(1 - B1 V1))."""
    if cap < 2:
        raise ValueError("cap must be at least 2")
    var = lambda i: MultiSeries.var(4, cap, i)
    b1, b2, v1, v2 = (var(i) for i in range(4))
    inv = invert_unit(1 - b1 * v1)
    arg = ((b1 * v2 * v2 + (b2 * v2).scale(2) + b2 * b2 * v1) * inv).scale(p.m / 2)
    pre = substitute(binom_series(4, cap, B1, p.c), [(B1, b1 * v1)])
    return pre * exp_series(arg)


def exchange_symmetric(ups: MultiSeries) -> bool:
    """Invariance under (B1, B2) <-> (V1, V2)."""
    return all(
        ups.terms.get((e[2], e[3], e[0], e[1]), 0) == c for e, c in ups.items()
    )


@dataclass
class GramMatrix:
    """Bilinear form on a finite set of basis labels."""

    flavor: str
    cutoff: int
    states: list
    entries: dict

    def __getitem__(self, pair) -> Fraction:
        s, t = pair
        return self.entries.get((tuple(s), tuple(t)), Fraction(0))

    def is_symmetric(self) -> bool:
        return all(self[t, s] == v for (s, t), v in self.entries.items())

    def off_diagonal(self) -> dict:
        return {k: v for k, v in self.entries.items() if k[0] != k[1] and v}

    def diagonal(self) -> dict:
        return {s: self[s, s] for s in self.states}

    def pair(self, u: FockVector, v: FockVector) -> Fraction:
        """<u, v> for vectors expanded in the |jk> basis (jk flavor only)."""
        if self.flavor != "jk":
            raise ValueError("pairing of Fock vectors needs the jk-flavored Gram")
        total = Fraction(0)
        for s, a in u.items():
            for t, b in v.items():
                if (s, t) not in self.entries and (
                    weight(*s) > self.cutoff or weight(*t) > self.cutoff
                ):
                    raise TruncationError(f"<{s}|{t}> lies outside the Gram block")
                total += a * b * self[s, t]
        return total

    def rows(self) -> list:
        return [[self[s, t] for t in self.states] for s in self.states]

    def to_records(self) -> list:
        return [
            {"row": list(s), "col": list(t), "value": format_rational(self[s, t])}
            for s in self.states
            for t in self.states
        ]


def gram_jk(p: Params, cutoff: int, cap: int | None = None) -> GramMatrix:
    if cap is None:
        cap = 2 * cutoff
    if cap < 2 * cutoff:
        raise TruncationError(f"cap {cap} < 2*cutoff {2 * cutoff}")
    ups = leibniz_series(p, max(cap, 2))
    states = basis_states(cutoff)
    f = math.factorial
    entries = {}
    for s in states:
        for t in states:
            c = ups.coeff((s[0], s[1], t[0], t[1]))
            if c:
                entries[(s, t)] = c * f(s[0]) * f(s[1]) * f(t[0]) * f(t[1])
    return GramMatrix("jk", cutoff, states, entries)


def ab_transform(p: Params, cutoff: int) -> dict:
    """(a, b) -> FockVector of R0^a G^b Ω in the |jk> basis."""
    return {(a, b): fock.ab_state(a, b, p, cutoff) for a, b in basis_states(cutoff)}


def expected_ab_norm(p: Params, a: int, b: int) -> Fraction:
    return rising_factorial(p.cdot, a) * math.factorial(a) * math.factorial(b) * p.m**b


def gram_ab(p: Params, cutoff: int) -> GramMatrix:
    """Gram matrix of |ab> = R0^a G^b Ω obtained by change of basis."""
    G = gram_jk(p, cutoff)
    T = ab_transform(p, cutoff)
    states = basis_states(cutoff)
    entries = {}
    for s in states:
        for t in states:
            # Only equal weights can pair.
            if weight(*s) != weight(*t):
                continue
            v = G.pair(T[s], T[t])
            if v:
                entries[(s, t)] = v
    return GramMatrix("ab", cutoff, states, entries)


def gram_ab_report(p: Params, cutoff: int) -> dict:
    G = gram_ab(p, cutoff)
    wrong_diag = {
        s: (G[s, s], expected_ab_norm(p, *s))
        for s in G.states
        if G[s, s] != expected_ab_norm(p, *s)
    }
    zero_norms = [s for s in G.states if G[s, s] == 0]
    return {
        "params": str(p),
        "cutoff": cutoff,
        "off_diagonal": G.off_diagonal(),
        "diagonal_mismatches": wrong_diag,
        "degenerate": p.cdot <= 0,
        "zero_norm_states": zero_norms,
        "gram": G,
    }


def adjointness_check(p: Params, cutoff: int) -> list:
    """<Pt u, v> = <u, K v>, <Px u, v> = <u, G v>; X1, X2 symmetric.

    Uses the β = 1 inner product (K* = Pt, G* = Px).
    """
    G = gram_jk(p, cutoff)
    ops = {n: fock.realize(n, p) for n in ("K", "G", "D", "Px", "Pt")}
    X1 = ops["Pt"] + ops["D"] + ops["K"]
    X2 = ops["G"] + ops["Px"]
    vec = lambda s: FockVector.basis(*s, cutoff)
    app = fock.apply
    failures = []
    states = basis_states(cutoff)
    pairs = [
        ("Pt", "K", 2, 0),
        ("Px", "G", 1, 0),
        ("X1", "X1", 2, 2),
        ("X2", "X2", 1, 1),
    ]
    named = dict(ops, X1=X1, X2=X2)
    for left, right, v_room, u_room in pairs:
        for u in states:
            if weight(*u) + u_room > cutoff:
                continue
            for v in states:
                if weight(*v) + v_room > cutoff:
                    continue
                lhs = G.pair(app(named[left], vec(u)), vec(v))
                rhs = G.pair(vec(u), app(named[right], vec(v)))
                if lhs != rhs:
                    failures.append(f"<{left} {u}, {v}> != <{u}, {right} {v}>")
    return failures


# -- canonical Appell polynomials ------------------------------------------

V1_, V2_, X1_, X2_ = range(4)


def appell_generating(p: Params, order: int) -> MultiSeries:
    """Generating function in (v1, v2, x1, x2), exact for v-degree <= order."""
    cap = 2 * order
    var = lambda i: MultiSeries.var(4, cap, i)
    v1, v2, x1, x2 = (var(i) for i in range(4))
    b, m = p.beta, p.m
    inv = invert_unit(1 + v1.scale(b))
    arg = (x1 * v1 + x2 * v2 - (v2 * v2).scale(m * b / 2)) * inv
    pre = substitute(binom_series(4, cap, V1_, p.c), [(V1_, v1.scale(-b))])
    return pre * exp_series(arg)


def _split_by_v(gen: MultiSeries, order: int, slots=(0, 1), xslots=(2, 3)) -> dict:
    out: dict = {}
    for e, c in gen.items():
        j, k = e[slots[0]], e[slots[1]]
        if j + k > order:
            continue
        out.setdefault((j, k), {})[(e[xslots[0]], e[xslots[1]])] = c
    return {
        (j, k): MultiSeries(2, order, out.get((j, k), {}))
        for j in range(order + 1)
        for k in range(order + 1 - j)
    }


def appell_polynomials(p: Params, order: int) -> dict:
    """psi[(j, k)] as exact bivariate polynomials in (x1, x2), j + k <= order."""
    return _split_by_v(appell_generating(p, order), order)


def resolvent(f: MultiSeries, beta, var: int, res_var: int = 0) -> MultiSeries:
    """(1 - beta d_{res_var})^(-1) d_var f on an exact polynomial."""
    beta = as_rational(beta)
    g = f.derivative(var)
    out = MultiSeries.zero(f.nvars, f.cap)
    term = g
    while not term.is_zero():
        out = out + term
        term = term.derivative(res_var).scale(beta)
    return out


def lowering_1(f, beta):
    return resolvent(f, beta, 0, 0)


def lowering_2(f, beta):
    return resolvent(f, beta, 1, 0)


def lowering_2_literal(f, beta):
    """Resolvent in d/dx2, the form displayed in the source text."""
    return resolvent(f, beta, 1, 1)


def lowering_check(p: Params, order: int) -> dict:
    if order < 2:
        raise ValueError("order must be at least 2")
    psi = appell_polynomials(p, order)
    b = p.beta
    fails = []
    literal_fails = []
    zero = MultiSeries.zero(2, order)
    for (j, k), f in psi.items():
        down1 = psi.get((j - 1, k), zero) if j else zero
        down2 = psi.get((j, k - 1), zero) if k else zero
        if lowering_1(f, b) != down1:
            fails.append(f"V1 psi_{j}{k}")
        if lowering_2(f, b) != down2:
            fails.append(f"V2 psi_{j}{k}")
        if lowering_2_literal(f, b) != down2:
            literal_fails.append(f"V2(d/dx2 resolvent) psi_{j}{k}")
        g = f
        for _ in range(j + 1):
            g = lowering_1(g, b)
        if not g.is_zero():
            fails.append(f"psi_{j}{k} not in Z^(1)_{j}")
        g = f
        for _ in range(k + 1):
            g = lowering_2(g, b)
        if not g.is_zero():
            fails.append(f"psi_{j}{k} not in Z^(2)_{k}")
        top = {e: c for e, c in f.items() if sum(e) == j + k}
        if psi[(0, 0)] != MultiSeries.one(2, order):
            fails.append("psi_00 != 1")
        if top != {(j, k): Fraction(1, math.factorial(j) * math.factorial(k))}:
            fails.append(f"leading part of psi_{j}{k}")
    return {
        "params": str(p),
        "order": order,
        "failures": fails,
        "literal_failures": literal_fails,
    }


def eigen_relation_check(p: Params, order: int) -> list:
    """V_i applied to the generating function multiplies it by v_i."""
    gen = appell_generating(p, order)
    b = p.beta
    # Work inside the 4-variable space: derivatives in x-slots.
    def res(f, var):
        g = f.derivative(var)
        out = MultiSeries.zero(4, f.cap)
        while not g.is_zero():
            out = out + g
            g = g.derivative(X1_).scale(b)
        return out

    keep = lambda e: e[V1_] + e[V2_] <= order - 1
    fails = []
    for name, var, vslot in (("V1", X1_, V1_), ("V2", X2_, V2_)):
        lhs = res(gen, var).select(keep)
        rhs = (MultiSeries.var(4, gen.cap, vslot) * gen).select(keep)
        # x-degree at v-degree d is at most d, so compare up to total 2*order - 2.
        bound = lambda e: sum(e) <= 2 * (order - 1)
        if lhs.select(bound) != rhs.select(bound):
            fails.append(f"{name} G != v G")
    return fails


# -- decoupled form ---------------------------------------------------------


def decoupled_generating(p: Params, order: int) -> MultiSeries:
    """exp(x0 v0/(1+βv0)) (1+βv0)^(-ċ) exp(x2 v2 - βm v2²/2) in (v0, v2, x0, x2)."""
    cap = 2 * order
    var = lambda i: MultiSeries.var(4, cap, i)
    v0, v2, x0, x2 = (var(i) for i in range(4))
    b, m = p.beta, p.m
    inv = invert_unit(1 + v0.scale(b))
    pre = substitute(binom_series(4, cap, 0, p.cdot), [(0, v0.scale(-b))])
    return (
        exp_series(x0 * v0 * inv)
        * pre
        * exp_series(x2 * v2 - (v2 * v2).scale(b * m / 2))
    )


def hermite_family(variance, order: int) -> list:
    """h_n with sum h_n t^n = exp(x t - variance t²/2), by three-term recurrence.

    Equals He_n(x; variance) / n!, the scaled probabilists' Hermite polynomial.
    """
    variance = as_rational(variance)
    x = MultiSeries.var(1, order, 0)
    hs = [MultiSeries.one(1, order), x]
    for n in range(1, order):
        nxt = (x * hs[n] - hs[n - 1].scale(variance)).scale(Fraction(1, n + 1))
        hs.append(nxt)
    return hs[: order + 1]


def laguerre_family(alpha, order: int) -> list:
    """Generalized Laguerre L_n^(alpha)(x) by the standard recurrence."""
    alpha = as_rational(alpha)
    x = MultiSeries.var(1, order, 0)
    L = [MultiSeries.one(1, order), 1 + alpha - x]
    for n in range(1, order):
        nxt = (
            L[n] * (2 * n + 1 + alpha - x) - L[n - 1].scale(n + alpha)
        ).scale(Fraction(1, n + 1))
        L.append(nxt)
    return L[: order + 1]


def _rescale_arg(f: MultiSeries, factor) -> MultiSeries:
    factor = as_rational(factor)
    return MultiSeries(1, f.cap, {(d,): c * factor**d for (d,), c in f.items()})


def decoupled_report(p: Params, order: int) -> dict:
    if order < 2:
        raise ValueError("order must be at least 2")
    gen = decoupled_generating(p, order)
    b, m = p.beta, p.m
    fails = []

    # Slots: v0, v2, x0, x2.
    def univariate(vslot, xslot, n, other_v):
        other_x = 3 if xslot == 2 else 2
        terms = {
            (e[xslot],): c
            for e, c in gen.items()
            if e[vslot] == n and e[other_v] == 0 and e[other_x] == 0
        }
        return MultiSeries(1, order, terms)

    # v0 = 0: coefficients of v2^n against the Hermite recurrence.
    herm = hermite_family(b * m, order)
    for n in range(order + 1):
        if univariate(1, 3, n, 0) != herm[n]:
            fails.append(f"v2^{n} family differs from Hermite recurrence")
    # v2 = 0: coefficients of v0^n against (-β)^n L_n^(ċ-1)(x0/β).
    lag = laguerre_family(p.cdot - 1, order)
    for n in range(order + 1):
        want = _rescale_arg(lag[n], 1 / b).scale((-b) ** n)
        if univariate(0, 2, n, 1) != want:
            fails.append(f"v0^{n} family differs from Laguerre recurrence")
    # Full decoupling: coefficient of v0^a v2^b = ell_a(x0) h_b(x2).
    split = _split_by_v(gen, order)
    for (a, bb), poly in split.items():
        ell = _rescale_arg(lag[a], 1 / b).scale((-b) ** a)
        prod = {
            (e, f): c1 * c2
            for (e,), c1 in ell.items()
            for (f,), c2 in herm[bb].items()
        }
        if poly.terms != prod:
            fails.append(f"v0^{a} v2^{bb} coefficient does not factor")
    fails.extend(_decoupled_vs_basis(p, order, split))
    return {
        "params": str(p),
        "order": order,
        "failures": fails,
        "hermite_scaling": f"h_n(x) = He_n(x; variance {format_rational(b * m)}) / n!",
        "laguerre_scaling": (
            f"ell_n(x) = (-{format_rational(b)})^n L_n^({format_rational(p.cdot - 1)})"
            f"(x / {format_rational(b)})"
        ),
    }


def _decoupled_vs_basis(p: Params, order: int, split: dict) -> list:
    """Compare with R0^a G^b Ω rewritten through psi_jk, with x0 = x1 - x2²/(2m)."""
    psi = appell_polynomials(p, order)
    cap = 2 * order
    x1 = MultiSeries.var(2, cap, 0)
    x2 = MultiSeries.var(2, cap, 1)
    x0 = x1 - (x2 * x2).scale(1 / (2 * p.m))
    fails = []
    for (a, bb), poly in split.items():
        if 2 * a + bb > order:
            continue
        lifted = substitute(
            MultiSeries(2, cap, poly.terms), [(0, x0)], polynomial=True
        )
        state = fock.ab_state(a, bb, p, 2 * a + bb)
        expect = MultiSeries.zero(2, cap)
        for (j, k), c in state.items():
            w = c * math.factorial(j) * math.factorial(k)
            expect = expect + MultiSeries(2, cap, psi[(j, k)].terms).scale(w)
        expect = expect.scale(Fraction(1, math.factorial(a) * math.factorial(bb)))
        if lifted != expect:
            fails.append(f"v0^{a} v2^{bb} disagrees with R0^a G^b Ω")
    return fails


def vacuum_moments_from_gram(p: Params, order: int) -> dict:
    """<Ω, X1^j X2^k Ω> through the jk Gram pairing (β taken from ``p``)."""
    cutoff = 2 * order
    G = gram_jk(p, cutoff)
    X1, X2 = fock.tilted_observables(p)
    omega = FockVector.vacuum(cutoff)
    out = {}
    v2 = omega
    for k in range(order + 1):
        v = v2
        for j in range(order - k + 1):
            out[(j, k)] = G.pair(omega, v)
            if j < order - k:
                v = fock.apply(X1, v)
        if k < order:
            v2 = fock.apply(X2, v2)
    return out
