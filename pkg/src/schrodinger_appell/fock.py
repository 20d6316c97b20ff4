"""Boson realization of the Schrödinger algebra on the Fock space |jk> = K^j G^k Ω.

Operators are stored as normal-ordered polynomials in the canonical bosons
R1, R2 (creation) and V1, V2 (annihilation) with [V_i, R_j] = δ_ij; a
monomial key ``(r1, r2, v1, v2)`` stands for R1^r1 R2^r2 V1^v1 V2^v2.
On the basis, R1|jk> = |j+1,k>, R2|jk> = |j,k+1>, V1|jk> = j|j-1,k>,
V2|jk> = k|j,k-1>.

States are truncated by the weight w(j, k) = 2j + k, under which every
generator is homogeneous (K: +2, G: +1, D: 0, Px: -1, Pt: -2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ._ordering import weyl_mode_product
from .lie_core import BASIS, LieElement, commutator as lie_commutator
from .series import as_rational, format_rational


class WeightOverflowError(ValueError):
    """An operator pushed a state past the Fock cutoff."""


def weight(j: int, k: int) -> int:
    return 2 * j + k


@dataclass(frozen=True)
class Params:
    """Mass m, vacuum dilation eigenvalue c and tilt beta."""

    m: Fraction
    c: Fraction
    beta: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("m", "c", "beta"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.m == 0:
            raise ValueError("mass m must be non-zero")

    @property
    def cdot(self) -> Fraction:
        return self.c - Fraction(1, 2)

    def __str__(self):
        return (
            f"m={format_rational(self.m)}, c={format_rational(self.c)}, "
            f"beta={format_rational(self.beta)}"
        )


# -- vectors ----------------------------------------------------------------


class FockVector:
    """Sparse vector on |jk> with all stored weights <= cutoff."""

    __slots__ = ("cutoff", "_terms")

    def __init__(self, cutoff: int, terms: Mapping | None = None):
        self.cutoff = cutoff
        clean = {}
        for (j, k), v in (terms or {}).items():
            if j < 0 or k < 0:
                raise ValueError(f"negative index ({j}, {k})")
            if weight(j, k) > cutoff:
                raise WeightOverflowError(f"|{j}{k}> has weight above {cutoff}")
            v = as_rational(v)
            if v:
                clean[(j, k)] = clean.get((j, k), 0) + v
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, cutoff, terms):
        obj = cls.__new__(cls)
        obj.cutoff = cutoff
        obj._terms = terms
        return obj

    @classmethod
    def basis(cls, j: int, k: int, cutoff: int) -> "FockVector":
        return cls(cutoff, {(j, k): 1})

    @classmethod
    def vacuum(cls, cutoff: int) -> "FockVector":
        return cls.basis(0, 0, cutoff)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, jk) -> Fraction:
        return self._terms.get(tuple(jk), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def max_weight(self) -> int:
        return max((weight(j, k) for j, k in self._terms), default=-1)

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FockVector._raw(max(self.cutoff, other.cutoff), out)

    def __neg__(self):
        return FockVector._raw(self.cutoff, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "FockVector":
        s = as_rational(s)
        if not s:
            return FockVector(self.cutoff)
        return FockVector._raw(self.cutoff, {k: v * s for k, v in self._terms.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def __repr__(self):
        if not self._terms:
            return "FockVector(0)"
        parts = [
            f"{format_rational(v)}|{j},{k}>" for (j, k), v in sorted(self._terms.items())
        ]
        return "FockVector(" + " + ".join(parts) + ")"


# -- operators --------------------------------------------------------------


class FockOperator:
    """Normal-ordered polynomial in R1, R2, V1, V2."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for key, v in (terms or {}).items():
            key = tuple(key)
            if len(key) != 4 or min(key) < 0:
                raise ValueError(f"bad monomial {key}")
            v = as_rational(v)
            if v:
                clean[key] = clean.get(key, 0) + v
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def scalar(cls, value) -> "FockOperator":
        return cls({(0, 0, 0, 0): value})

    @classmethod
    def word(cls, r1=0, r2=0, v1=0, v2=0, coef=1) -> "FockOperator":
        return cls({(r1, r2, v1, v2): coef})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, FockOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def _coerce(self, other):
        return other if isinstance(other, FockOperator) else FockOperator.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FockOperator._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return FockOperator._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, s) -> "FockOperator":
        s = as_rational(s)
        if not s:
            return FockOperator()
        return FockOperator._raw({k: v * s for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FockOperator):
            return self.scale(other)
        out: dict = {}
        for (a1, a2, b1, b2), x in self._terms.items():
            for (c1, c2, d1, d2), y in other._terms.items():
                xy = x * y
                # Move V_i^b past R_i^c mode by mode.
                for r1, p1, n1 in weyl_mode_product(b1, c1):
                    for r2, p2, n2 in weyl_mode_product(b2, c2):
                        key = (a1 + r1, a2 + r2, p1 + d1, p2 + d2)
                        out[key] = out.get(key, 0) + xy * (n1 * n2)
        return FockOperator._raw({k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result = FockOperator.scalar(1)
        for _ in range(n):
            result = result * self
        return result

    def weight_changes(self) -> set:
        return {2 * (r1 - v1) + (r2 - v2) for r1, r2, v1, v2 in self._terms}

    @property
    def weight_delta(self) -> int:
        """Largest weight increase over all monomials (0 for the zero operator)."""
        return max(self.weight_changes(), default=0)

    def __repr__(self):
        if not self._terms:
            return "FockOperator(0)"
        names = ("R1", "R2", "V1", "V2")
        parts = []
        for key in sorted(self._terms):
            mono = " ".join(
                n if p == 1 else f"{n}^{p}" for n, p in zip(names, key) if p
            )
            coef = format_rational(self._terms[key])
            parts.append(f"{coef} {mono}".strip())
        return "FockOperator(" + " + ".join(parts) + ")"


def commutator(a: FockOperator, b: FockOperator) -> FockOperator:
    return a * b - b * a


R1 = FockOperator.word(r1=1)
R2 = FockOperator.word(r2=1)
V1 = FockOperator.word(v1=1)
V2 = FockOperator.word(v2=1)
IDENTITY = FockOperator.scalar(1)


def apply(op: FockOperator, v: FockVector, *, strict: bool = True) -> FockVector:
    """Exact action of ``op`` on ``v``.

    With ``strict`` an output component above the cutoff raises
    :class:`WeightOverflowError`; otherwise such components are dropped.
    """
    out: dict = {}
    W = v.cutoff
    for (j, k), x in v.items():
        for (r1, r2, v1, v2), y in op._terms.items():
            if j < v1 or k < v2:
                continue
            nj, nk = j - v1 + r1, k - v2 + r2
            if weight(nj, nk) > W:
                if strict:
                    raise WeightOverflowError(
                        f"|{nj}{nk}> exceeds cutoff {W} (from |{j}{k}>)"
                    )
                continue
            f = math.perm(j, v1) * math.perm(k, v2)
            out[(nj, nk)] = out.get((nj, nk), 0) + x * y * f
    return FockVector._raw(W, {k: val for k, val in out.items() if val})


def basis_states(cutoff: int) -> list:
    """All (j, k) with 2j + k <= cutoff."""
    return [(j, k) for j in range(cutoff // 2 + 1) for k in range(cutoff - 2 * j + 1)]


def interior_states(cutoff: int, margin: int = 4) -> list:
    return basis_states(cutoff - margin) if cutoff >= margin else []


# -- the realization --------------------------------------------------------


def realize(name: str, p: Params) -> FockOperator:
    m, c = p.m, p.c
    if name == "M":
        return FockOperator.scalar(m)
    if name == "K":
        return R1
    if name == "G":
        return R2
    if name == "D":
        return FockOperator({(0, 0, 0, 0): c, (1, 0, 1, 0): 2, (0, 1, 0, 1): 1})
    if name == "Px":
        return FockOperator({(0, 0, 0, 1): m, (0, 1, 1, 0): 1})
    if name == "Pt":
        return FockOperator(
            {
                (0, 0, 1, 0): c,
                (1, 0, 2, 0): 1,
                (0, 0, 0, 2): m / 2,
                (0, 1, 1, 1): 1,
            }
        )
    raise KeyError(f"unknown generator {name!r}; expected one of {BASIS}")


def realize_element(x: LieElement, p: Params) -> FockOperator:
    out = FockOperator()
    for name, a in zip(BASIS, x.coeffs):
        if a:
            out = out + realize(name, p).scale(a)
    return out


def commutator_check(p: Params, cutoff: int) -> list:
    """Verify the bracket table on interior states; return failure strings.

    Each ordered pair is checked both as a normal-form operator identity and
    state by state on every |jk> with 2j + k <= cutoff - 4.
    """
    if cutoff < 4:
        raise ValueError("cutoff must be at least 4")
    failures = []
    states = interior_states(cutoff)
    for x in BASIS:
        for y in BASIS:
            X, Y = realize(x, p), realize(y, p)
            lhs = commutator(X, Y)
            rhs = realize_element(
                lie_commutator(LieElement.basis(x), LieElement.basis(y)), p
            )
            if lhs != rhs:
                failures.append(f"[{x},{y}] normal form differs")
            for j, k in states:
                s = FockVector.basis(j, k, cutoff)
                got = apply(X, apply(Y, s)) - apply(Y, apply(X, s))
                if got != apply(rhs, s):
                    failures.append(f"[{x},{y}]|{j}{k}> differs")
    return failures


def standard_form(p: Params) -> tuple:
    """(L0, R0, rho0) with K = R0 + G²/2m, D = rho0 + G Px/m + 1/2, Pt = L0 + Px²/2m."""
    m = p.m
    K, G, D = realize("K", p), realize("G", p), realize("D", p)
    Px, Pt = realize("Px", p), realize("Pt", p)
    R0 = K - (G * G).scale(1 / (2 * m))
    rho0 = D - (G * Px).scale(1 / m) - Fraction(1, 2)
    L0 = Pt - (Px * Px).scale(1 / (2 * m))
    return L0, R0, rho0


def raising_R0(p: Params) -> FockOperator:
    return R1 - (R2 * R2).scale(1 / (2 * p.m))


def schrodinger_operator(p: Params) -> FockOperator:
    """S = Pt - Px²/(2m), normal-ordered."""
    Px = realize("Px", p)
    return realize("Pt", p) - (Px * Px).scale(1 / (2 * p.m))


def schrodinger_operator_reduced(p: Params) -> FockOperator:
    """The same operator assembled as ċ V1 + R0 V1²."""
    return V1.scale(p.cdot) + raising_R0(p) * V1 * V1


def tilted_observables(p: Params) -> tuple:
    """X1 = K + βD + β²Pt and X2 = G + βPx."""
    b = p.beta
    X1 = realize("K", p) + realize("D", p).scale(b) + realize("Pt", p).scale(b * b)
    X2 = realize("G", p) + realize("Px", p).scale(b)
    return X1, X2


def vacuum_expectation(op: FockOperator, cutoff: int) -> Fraction:
    """<Ω, op Ω>: the |00> component, since distinct basis weights are orthogonal."""
    return apply(op, FockVector.vacuum(cutoff), strict=False)[(0, 0)]


def vacuum_moments(p: Params, order: int) -> dict:
    """<Ω, X1^j X2^k Ω> for j + k <= order, computed by Fock action."""
    X1, X2 = tilted_observables(p)
    cutoff = 2 * order
    out = {}
    # X2^k Ω first, then X1 repeatedly; weights never exceed 2*order.
    v2 = FockVector.vacuum(cutoff)
    for k in range(order + 1):
        v = v2
        for j in range(order - k + 1):
            out[(j, k)] = v[(0, 0)]
            v = apply(X1, v, strict=False)
        v2 = apply(X2, v2, strict=False)
    return out


def ab_state(a: int, b: int, p: Params, cutoff: int) -> FockVector:
    """|ab> = R0^a G^b Ω expanded in the |jk> basis."""
    v = FockVector.basis(0, b, cutoff)
    R0 = raising_R0(p)
    for _ in range(a):
        v = apply(R0, v)
    return v


def grading_failures(p: Params, cutoff: int) -> list:
    expected = {"M": 0, "K": 2, "G": 1, "D": 0, "Px": -1, "Pt": -2}
    bad = []
    for name, dw in expected.items():
        op = realize(name, p)
        if op.weight_changes() - {dw}:
            bad.append(f"{name} is not homogeneous of weight {dw}")
            continue
        for j, k in basis_states(cutoff - max(dw, 0)):
            out = apply(op, FockVector.basis(j, k, cutoff))
            if any(weight(a, b) != weight(j, k) + dw for a, b in out._terms):
                bad.append(f"{name}|{j}{k}> leaves weight {weight(j, k) + dw}")
    return bad


def matrix_in_block(op: FockOperator, states: Iterable, cutoff: int) -> dict:
    """Matrix entries <s'|op|s> components, keyed (s_out, s_in)."""
    out = {}
    for s in states:
        for t, v in apply(op, FockVector.basis(*s, cutoff), strict=False).items():
            out[(t, s)] = v
    return out
