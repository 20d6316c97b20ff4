"""Verification suites aggregated into a machine-readable report.

Every check yields one row (id, status, detail, anchor).  Status ``flag``
marks a known misprint in the source formulas; flags never fail a run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import appell, diffreal, evolution, fock, lie_core, probability
from .fock import FockVector, Params
from .lie_core import BASIS, GroupCoords, LieElement
from .series import format_rational, rising_factorial

PASS, FAIL, FLAG = "pass", "fail", "flag"

FOCK_PARAMS = (
    Params(1, Fraction(3, 4)),
    Params(2, Fraction(1, 2)),
    Params(Fraction(1, 3), Fraction(5, 2)),
)
APPELL_PARAMS = (
    Params(1, Fraction(3, 4), 1),
    Params(2, Fraction(1, 2), 2),
    Params(Fraction(1, 3), Fraction(5, 2), Fraction(1, 2)),
)
DENSITY_PARAMS = (
    probability.DensityParams(1, 1, Fraction(3, 2)),
    probability.DensityParams(2, Fraction(1, 3), Fraction(3, 4)),
    probability.DensityParams(Fraction(1, 2), 2, 3),
)


@dataclass
class Check:
    id: str
    status: str
    detail: str
    anchor: str

    def to_json(self) -> dict:
        return {"id": self.id, "status": self.status, "detail": self.detail, "anchor": self.anchor}


@dataclass
class VerifyReport:
    suite: str
    checks: list = field(default_factory=list)

    def add(self, id, ok, detail, anchor):
        self.checks.append(Check(id, PASS if ok else FAIL, detail, anchor))

    def flag(self, id, detail, anchor):
        self.checks.append(Check(id, FLAG, detail, anchor))

    def extend(self, other: "VerifyReport"):
        self.checks.extend(other.checks)

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    @property
    def exit_status(self) -> int:
        return 1 if self.count(FAIL) else 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "summary": {s: self.count(s) for s in (PASS, FAIL, FLAG)},
            "exit_status": self.exit_status,
            "checks": [c.to_json() for c in self.checks],
        }


def _failures(items) -> str:
    items = list(items)
    if not items:
        return "exact"
    head = "; ".join(str(x) for x in items[:3])
    return f"{len(items)} failure(s): {head}"


# -- lie ----------------------------------------------------------------------


def suite_lie(seed: int = 0) -> VerifyReport:
    r = VerifyReport("lie")
    anchor = "structure table / matrix representation"
    for x in BASIS:
        for y in BASIS:
            X, Y = LieElement.basis(x), LieElement.basis(y)
            br = lie_core.commutator(X, Y)
            ok = lie_core.matrix_commutator(lie_core.matrix_of(X), lie_core.matrix_of(Y)) == lie_core.matrix_of(br)
            r.add(f"lie.bracket.{x}.{y}", ok, f"[{x},{y}] = {br}", anchor)
    r.add("lie.antisymmetry", not lie_core.antisymmetry_failures(), _failures(lie_core.antisymmetry_failures()), anchor)
    r.add("lie.jacobi", not lie_core.jacobi_failures(), _failures(lie_core.jacobi_failures()), anchor)
    for name, sub in (("sl2", ("K", "D", "Pt")), ("heisenberg", ("M", "G", "Px"))):
        r.add(f"lie.closure.{name}", lie_core.closes(sub), "span closed under bracket", "semidirect decomposition")

    rng = np.random.default_rng(seed)
    worst = worst_factor = 0.0
    for _ in range(100):
        a = GroupCoords.from_array(rng.uniform(-1, 1, 6))
        g = lie_core.group_matrix(a)
        worst = max(worst, float(np.max(np.abs(lie_core.coords_of(g).as_array() - a.as_array()))))
        worst_factor = max(worst_factor, float(np.max(np.abs(g - lie_core.group_matrix_by_factors(a)))))
    r.add("lie.coords.round_trip", worst < 1e-10, f"max error {worst:.2e} over 100 draws", "coordinates of the second kind")
    r.add("lie.coords.factor_product", worst_factor < 1e-10, f"max error {worst_factor:.2e} vs product of one-parameter expm", "group matrix")

    worst = 0.0
    draws = 0
    while draws < 100:
        B1, B2, V1, V2 = rng.uniform(-1, 1, 4)
        if abs(B1 * V1) > 0.5:
            continue
        draws += 1
        a = lie_core.leibniz_commute(B1, B2, V1, V2).as_array()
        b = lie_core.leibniz_by_matrices(B1, B2, V1, V2).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    r.add("lie.leibniz", worst < 1e-10, f"max coordinate error {worst:.2e} over 100 draws, |B1 V1| <= 1/2", "Leibniz formula")
    return r


# -- fock ---------------------------------------------------------------------


def suite_fock(cutoff: int = 8) -> VerifyReport:
    r = VerifyReport("fock")
    for p in FOCK_PARAMS:
        tag = f"m={format_rational(p.m)},c={format_rational(p.c)}"
        fails = fock.commutator_check(p, cutoff)
        r.add(f"fock.commutators[{tag}]", not fails, _failures(fails), "boson realization")
        fails = fock.grading_failures(p, cutoff)
        r.add(f"fock.grading[{tag}]", not fails, _failures(fails), "weight grading 2j+k")
        S, S0 = fock.schrodinger_operator(p), fock.schrodinger_operator_reduced(p)
        r.add(f"fock.schrodinger_operator[{tag}]", S == S0, f"Pt - Px^2/2m = {S0}", "reduced Schrodinger operator")
        r.add(f"fock.standard_form[{tag}]", *_standard_form(p, cutoff), "standard form")
    return r


def _standard_form(p: Params, cutoff: int):
    L0, R0, rho0 = fock.standard_form(p)
    c = fock.commutator
    fails = []
    if c(L0, R0) != rho0:
        fails.append("[L0,R0] != rho0")
    if c(rho0, R0) != R0.scale(2):
        fails.append("[rho0,R0] != 2R0")
    if c(rho0, L0) != L0.scale(-2):
        fails.append("[rho0,L0] != -2L0")
    for name in ("Px", "G", "M"):
        op = fock.realize(name, p)
        for x, xn in ((L0, "L0"), (R0, "R0"), (rho0, "rho0")):
            if not c(op, x).is_zero():
                fails.append(f"[{name},{xn}] != 0")
    for j, k in fock.interior_states(cutoff):
        s = FockVector.basis(j, k, cutoff)
        ap = fock.apply
        if ap(L0, ap(R0, s)) - ap(R0, ap(L0, s)) != ap(rho0, s):
            fails.append(f"[L0,R0]|{j}{k}>")
    omega = FockVector.vacuum(cutoff)
    if fock.apply(rho0, omega) != omega.scale(p.cdot):
        fails.append("rho0 Ω != ċ Ω")
    return not fails, _failures(fails)


# -- diffreal -----------------------------------------------------------------


def suite_diffreal() -> VerifyReport:
    r = VerifyReport("diffreal")
    for m in (1, 2, Fraction(1, 3)):
        fails = diffreal.realization_failures(m)
        r.add(f"diffreal.realization[m={format_rational(m)}]", not fails, _failures(fails), "differential realization")
    for m in (1, 2):
        rep = diffreal.verify_partial_group_law(m, 6, 3)
        ok = not rep["mismatches"] and rep["b1_free_slice_matches_shift"] and rep["coords_consistency_error"] < 1e-10
        detail = (
            f"{rep['coefficients_compared']} coefficients, {len(rep['mismatches'])} mismatches, "
            f"coordinate route error {rep['coords_consistency_error']:.1e}"
        )
        r.add(f"diffreal.partial_group_law[m={m}]", ok, detail, "partial group law")
    rep = diffreal.symmetry_instance_checks(6)
    r.add("diffreal.symmetry_instances", not rep["failures"], _failures(rep["failures"]), "symmetry algebra of V")
    return r


# -- appell -------------------------------------------------------------------


def suite_appell(cutoff: int = 8, order: int = 8) -> VerifyReport:
    r = VerifyReport("appell")
    literal = []
    for p in APPELL_PARAMS:
        tag = str(p).replace(" ", "")
        ups = appell.leibniz_series(p, 6)
        r.add(f"appell.leibniz_symmetry[{tag}]", appell.exchange_symmetric(ups), "Υ(B,V) = Υ(V,B)", "Leibniz function")
        rep = appell.gram_ab_report(p, cutoff)
        bad = list(rep["off_diagonal"]) + list(rep["diagonal_mismatches"])
        detail = _failures(bad)
        if rep["zero_norm_states"]:
            detail += f"; {len(rep['zero_norm_states'])} zero-norm states (ċ = 0)"
        r.add(f"appell.orthogonal_basis[{tag}]", not bad, detail, "orthogonal basis norms")
        fails = appell.adjointness_check(p, cutoff)
        r.add(f"appell.adjointness[{tag}]", not fails, _failures(fails), "adjoint pairs")
        rep = appell.lowering_check(p, order)
        r.add(f"appell.lowering[{tag}]", not rep["failures"], _failures(rep["failures"]), "canonical Appell system")
        literal.extend(rep["literal_failures"])
        fails = appell.eigen_relation_check(p, order)
        r.add(f"appell.eigen_relation[{tag}]", not fails, _failures(fails), "generating function")
        rep = appell.decoupled_report(p, order)
        r.add(
            f"appell.decoupled[{tag}]",
            not rep["failures"],
            _failures(rep["failures"]) + f"; {rep['laguerre_scaling']}; {rep['hermite_scaling']}",
            "Laguerre-Hermite decoupling",
        )
    if literal:
        r.flag(
            "appell.lowering_2.resolvent_variable",
            f"second lowering operator needs the resolvent in x1; the x2 form fails {len(literal)} identities",
            "lowering operators",
        )
    else:
        r.add("appell.lowering_2.resolvent_variable", False, "x2-resolvent form unexpectedly satisfied", "lowering operators")
    return r


# -- evolution ----------------------------------------------------------------


def suite_evolution(cutoff: int = 10) -> VerifyReport:
    r = VerifyReport("evolution")
    for p in FOCK_PARAMS:
        tag = f"m={format_rational(p.m)},c={format_rational(p.c)}"
        rep = evolution.verify_heat_equation(p, cutoff)
        r.add(f"evolution.heat_equation[{tag}]", not rep["failures"], f"{rep['checked']} systems; " + _failures(rep["failures"]), "heat-type evolution")
        fails = evolution.sl2_leibniz_check(p, 4)
        r.add(f"evolution.sl2_leibniz[{tag}]", not fails, _failures(fails), "sl(2) Leibniz formula")
        fails = evolution.hw_leibniz_check(p, 3)
        r.add(f"evolution.hw_leibniz[{tag}]", not fails, _failures(fails), "Heisenberg-Weyl Leibniz formula")
    p = FOCK_PARAMS[0]
    rep = evolution.verify_heat_equation(p, 8, evolution.LevySpec.drift(Fraction(1, 2), 3))
    r.add("evolution.drift", not rep["failures"], _failures(rep["failures"]), "first-order transport")
    h = evolution.heat_appell(p, 0, 2)
    want = [FockVector.basis(0, 2, 2), FockVector.vacuum(2).scale(p.m**2)]
    r.add("evolution.h02", h.coeffs == want, "h_02 = G²Ω + m²τΩ", "heat Appell system")
    return r


# -- probability --------------------------------------------------------------


def suite_probability(seed: int = 0, n: int = 10**6) -> VerifyReport:
    r = VerifyReport("probability")
    for p in DENSITY_PARAMS:
        tag = f"m={format_rational(p.m)},beta={format_rational(p.beta)},c={format_rational(p.c)}"
        a, b = probability.exact_moments(p, 6).entries, probability.mgf_moments(p, 6).entries
        bad = [k for k in a if a[k] != b[k]]
        r.add(f"probability.mgf_route[{tag}]", not bad, _failures(bad), "moment generating function")
        marg = [
            j for j in range(7) if a[(j, 0)] != p.beta**j * rising_factorial(p.c, j)
        ] + [k for k in range(0, 7, 2) if a[(0, k)] != (p.m * p.beta) ** (k // 2) * evolution.double_factorial(k - 1)]
        r.add(f"probability.marginals[{tag}]", not marg, _failures(marg), "gamma and Gaussian marginals")
        q = probability.DensityParams(p.m, 1, p.c)
        g = appell.vacuum_moments_from_gram(q.to_params(), 4)
        e = probability.exact_moments(q, 4).entries
        bad = [k for k in g if g[k] != e[k]]
        r.add(f"probability.gram_route[{tag},beta=1]", not bad, _failures(bad), "vacuum expectations")
        rep = probability.quadrature_check(p)
        worst = max([rep["normalization_error"]] + [m["error"] for m in rep["moments"]])
        r.add(f"probability.quadrature[{tag}]", not rep["failures"], f"normalization error {rep['normalization_error']:.1e}, worst {worst:.1e}", "joint density")
    p = DENSITY_PARAMS[0]
    rows = probability.monte_carlo_check(p, [(1, 0), (0, 2), (2, 0), (1, 2)], n=n, seed=seed)
    detail = ", ".join(f"({row['j']},{row['k']}) {row['standard_errors']:.2f} se" for row in rows)
    r.add("probability.monte_carlo", all(row["ok"] for row in rows), f"n={n}, seed={seed}: {detail}", "gamma-Gaussian factorization")
    xs = probability.sample(probability.DensityParams(1, 1, Fraction(1, 2)), 1000, seed)
    on_parabola = bool(np.all(xs[:, 0] == xs[:, 1] ** 2 / 2))
    r.add("probability.delta_case", on_parabola, "c = 1/2 samples lie on x1 = x2²/(2m)", "degenerate gamma")
    var = probability.exact_moment(p, 0, 2)
    if var == p.m * p.beta:
        r.flag(
            "probability.x2_variance",
            f"Var(X2) = mβ = {format_rational(var)} from density, MGF and Gram route; the stated 2mβ does not hold",
            "marginal of X2",
        )
    else:
        r.add("probability.x2_variance", False, f"Var(X2) = {format_rational(var)}", "marginal of X2")
    return r


SUITES = {
    "lie": suite_lie,
    "fock": suite_fock,
    "diffreal": suite_diffreal,
    "appell": suite_appell,
    "evolution": suite_evolution,
    "probability": suite_probability,
}


def run_suite(name: str, seed: int = 0) -> VerifyReport:
    if name == "all":
        report = VerifyReport("all")
        for key in SUITES:
            report.extend(run_suite(key, seed))
        return report
    if name not in SUITES:
        raise KeyError(name)
    fn = SUITES[name]
    return fn(seed=seed) if name in ("lie", "probability") else fn()

