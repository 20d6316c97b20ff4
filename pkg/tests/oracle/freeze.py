"""Independent sympy oracle; writes tests/data/frozen.json.

Run once with ``python tests/oracle/freeze.py``.  Nothing here imports the
package: the Fock space is modelled as polynomials in (r1, r2) with the
annihilators acting as d/dr1, d/dr2, and every table is computed from the
raw generating functions.  Where two routes exist they are asserted equal
before anything is written.
"""

import json
from pathlib import Path

import sympy as sp

m, c, beta = sp.Integer(2), sp.Rational(3, 4), sp.Rational(1, 3)
cdot = c - sp.Rational(1, 2)
r1, r2 = sp.symbols("r1 r2")
B1, B2, V1, V2, v1, v2, x1, x2, tau = sp.symbols("B1 B2 V1 V2 v1 v2 x1 x2 tau")


def K(f):
    return sp.expand(r1 * f)


def G(f):
    return sp.expand(r2 * f)


def Px(f):
    return sp.expand(m * sp.diff(f, r2) + r2 * sp.diff(f, r1))


def Pt(f):
    return sp.expand(
        c * sp.diff(f, r1) + r1 * sp.diff(f, r1, 2) + m / 2 * sp.diff(f, r2, 2) + r2 * sp.diff(f, r1, r2)
    )


def D(f):
    return sp.expand(c * f + 2 * r1 * sp.diff(f, r1) + r2 * sp.diff(f, r2))


def iterate(op, f, n):
    for _ in range(n):
        f = op(f)
    return f


def const_term(f):
    return sp.expand(f).subs({r1: 0, r2: 0})


def components(f):
    poly = sp.Poly(sp.expand(f), r1, r2)
    return {f"{j},{k}": str(v) for (j, k), v in poly.terms() if v != 0}


def taylor(expr, vars_, order):
    """Total-degree truncation through a scaling parameter."""
    t = sp.Symbol("t")
    scaled = expr.subs({v: t * v for v in vars_}, simultaneous=True)
    return sp.expand(sp.series(scaled, t, 0, order + 1).removeO().subs(t, 1))


out = {"params": {"m": str(m), "c": str(c), "beta": str(beta)}}

# Gram entries <jk|j'k'> for weight <= 4, two routes.
W = 4
states = [(j, k) for j in range(W // 2 + 1) for k in range(W - 2 * j + 1)]
ups = (1 - B1 * V1) ** (-c) * sp.exp(m / 2 * (B1 * V2**2 + 2 * B2 * V2 + B2**2 * V1) / (1 - B1 * V1))
ups_t = taylor(ups, (B1, B2, V1, V2), 2 * W)
gram = {}
for s in states:
    for t in states:
        coeff = sp.Poly(ups_t, B1, B2, V1, V2).coeff_monomial(B1**s[0] * B2**s[1] * V1**t[0] * V2**t[1])
        via_ups = coeff * sp.factorial(s[0]) * sp.factorial(s[1]) * sp.factorial(t[0]) * sp.factorial(t[1])
        # <K^j G^k Ω, v> = <Ω, Px^k Pt^j v>.
        via_adj = const_term(iterate(Px, iterate(Pt, r1 ** t[0] * r2 ** t[1], s[0]), s[1]))
        assert via_ups == via_adj, (s, t)
        gram[f"{s[0]},{s[1]}|{t[0]},{t[1]}"] = str(via_ups)
out["gram_jk"] = gram

# Canonical Appell polynomials psi_jk, j + k <= 3.
gen = (
    sp.exp(x1 * v1 / (1 + beta * v1))
    * sp.exp(x2 * v2 / (1 + beta * v1))
    * (1 + beta * v1) ** (-c)
    * sp.exp(-m * beta / 2 * v2**2 / (1 + beta * v1))
)
gen_t = sp.Poly(taylor(gen, (v1, v2), 3), v1, v2)
psi = {}
for j in range(4):
    for k in range(4 - j):
        poly = sp.Poly(gen_t.coeff_monomial(v1**j * v2**k), x1, x2)
        psi[f"{j},{k}"] = {f"{a},{b}": str(v) for (a, b), v in poly.terms() if v != 0}
out["psi"] = psi

# Laguerre and Hermite families of the decoupled form, n <= 4.
x = sp.Symbol("x")
out["laguerre"] = {
    str(n): [str(v) for v in reversed(sp.Poly((-beta) ** n * sp.assoc_laguerre(n, cdot - 1, x / beta), x).all_coeffs())]
    for n in range(5)
}
var = beta * m
out["hermite"] = {
    str(n): [
        str(v)
        for v in reversed(
            sp.Poly(sp.sqrt(var) ** n * sp.hermite_prob(n, x / sp.sqrt(var)) / sp.factorial(n), x).all_coeffs()
        )
    ]
    for n in range(5)
}

# Heat Appell systems exp(τH)|ab>, H = (Pt² + Px²)/2.
R0 = r1 - r2**2 / (2 * m)


def H(f):
    return sp.expand((Pt(Pt(f)) + Px(Px(f))) / 2)


heat = {}
for a, b in [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0), (1, 2), (0, 4), (2, 1)]:
    f = sp.expand(R0**a * r2**b)
    total, n, term = 0, 0, f
    while term != 0:
        total += tau**n / sp.factorial(n) * term
        term = H(term)
        n += 1
    total = sp.expand(total)
    heat[f"{a},{b}"] = {
        str(p): components(total.coeff(tau, p)) for p in range(sp.degree(total, tau) + 1) if total.coeff(tau, p) != 0
    }
out["heat"] = heat

# Vacuum moments of X1 = K + βD + β²Pt, X2 = G + βPx against the density.
def X1(f):
    return sp.expand(K(f) + beta * D(f) + beta**2 * Pt(f))


def X2(f):
    return sp.expand(G(f) + beta * Px(f))


u = sp.Symbol("u", positive=True)
gamma_pdf = u ** (cdot - 1) * sp.exp(-u / beta) / (sp.gamma(cdot) * beta**cdot)
normal_pdf = sp.exp(-(x2**2) / (2 * m * beta)) / sp.sqrt(2 * sp.pi * m * beta)
moments = {}
for j in range(4):
    for k in range(0, 5 - j):
        vac = const_term(iterate(X1, iterate(X2, sp.Integer(1), k), j))
        integrand = sp.expand((u + x2**2 / (2 * m)) ** j * x2**k)
        dens = sp.simplify(
            sp.integrate(sp.integrate(integrand * gamma_pdf, (u, 0, sp.oo)) * normal_pdf, (x2, -sp.oo, sp.oo))
        )
        assert sp.simplify(vac - dens) == 0, (j, k, vac, dens)
        moments[f"{j},{k}"] = str(vac)
out["moments"] = moments

# Density values in high precision.
def density(mm, bb, cc, a1, a2):
    cd = cc - sp.Rational(1, 2)
    uu = a1 - a2**2 / (2 * mm)
    if uu <= 0:
        return 0.0
    val = sp.exp(-a1 / bb) * uu ** (cd - 1) * bb ** (-cd) / (sp.gamma(cd) * sp.sqrt(2 * sp.pi * mm * bb))
    return float(sp.N(val, 30))


pts = [(sp.Rational(1, 2), 0), (1, sp.Rational(1, 2)), (2, -1), (sp.Rational(1, 10), 1)]
out["density"] = [
    {"m": str(mm), "beta": str(bb), "c": str(cc), "x1": str(a1), "x2": str(a2), "value": density(mm, bb, cc, a1, a2)}
    for (mm, bb, cc) in [(m, beta, c), (1, 1, sp.Rational(3, 2)), (sp.Rational(1, 2), 2, 3)]
    for a1, a2 in pts
]

path = Path(__file__).resolve().parents[1] / "data" / "frozen.json"
path.parent.mkdir(exist_ok=True)
path.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")
print(f"wrote {path}")
