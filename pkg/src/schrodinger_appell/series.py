"""Truncated multivariate formal power series over exact rationals.

A :class:`MultiSeries` keeps every monomial of total degree ``<= cap``.
Products of truncated series are exact up to ``cap`` because all exponents
are non-negative, so every identity checked with this module is an exact
statement about the coefficients it retains.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


Rational = Fraction
Exponents = tuple


class TruncationError(ValueError):
    """A coefficient was requested beyond the retained degree."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string into a Fraction."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rising_factorial(x, n: int) -> Fraction:
    """Pochhammer symbol (x)_n = x (x+1) ... (x+n-1)."""
    out = Fraction(1)
    x = as_rational(x)
    for i in range(n):
        out *= x + i
    return out


class MultiSeries:
    """Immutable truncated power series in ``nvars`` variables.

    ``terms`` maps exponent tuples to non-zero Fractions; every key has
    total degree ``<= cap``.
    """

    __slots__ = ("nvars", "cap", "_terms")

    def __init__(self, nvars: int, cap: int, terms: Mapping | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        if cap < 0:
            raise ValueError("cap must be non-negative")
        self.nvars = nvars
        self.cap = cap
        clean = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or min(exps) < 0:
                raise ValueError(f"bad exponent vector {exps}")
            if sum(exps) > cap:
                continue
            coef = as_rational(coef)
            if coef:
                clean[exps] = clean.get(exps, 0) + coef
        self._terms = {k: v for k, v in clean.items() if v}

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, nvars, cap, terms):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.cap = cap
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, nvars: int, cap: int) -> "MultiSeries":
        return cls(nvars, cap)

    @classmethod
    def constant(cls, nvars: int, cap: int, value) -> "MultiSeries":
        return cls(nvars, cap, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars: int, cap: int) -> "MultiSeries":
        return cls.constant(nvars, cap, 1)

    @classmethod
    def var(cls, nvars: int, cap: int, index: int, power: int = 1) -> "MultiSeries":
        exps = [0] * nvars
        exps[index] = power
        return cls(nvars, cap, {tuple(exps): 1})

    @classmethod
    def monomial(cls, nvars: int, cap: int, exps: Sequence[int], coef=1) -> "MultiSeries":
        return cls(nvars, cap, {tuple(exps): coef})

    def like(self, terms: Mapping) -> "MultiSeries":
        return MultiSeries(self.nvars, self.cap, terms)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def valuation(self) -> int | None:
        """Lowest total degree present, or None for the zero series."""
        if not self._terms:
            return None
        return min(sum(e) for e in self._terms)

    def coeff(self, exponents: Sequence[int]) -> Fraction:
        exps = tuple(exponents)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        if sum(exps) > self.cap:
            raise TruncationError(
                f"degree {sum(exps)} exceeds cap {self.cap}; coefficient unknown"
            )
        return self._terms.get(exps, Fraction(0))

    # -- comparisons --------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.cap == other.cap
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.nvars, self.cap, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            body = "0"
        else:
            parts = []
            for exps in sorted(self._terms, key=lambda e: (sum(e), e)):
                mono = "*".join(
                    f"x{i}" if p == 1 else f"x{i}^{p}"
                    for i, p in enumerate(exps)
                    if p
                )
                coef = format_rational(self._terms[exps])
                parts.append(f"{coef}*{mono}" if mono else coef)
            body = " + ".join(parts)
        return f"MultiSeries(nvars={self.nvars}, cap={self.cap}: {body})"

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "MultiSeries"):
        if not isinstance(other, MultiSeries):
            raise TypeError(f"expected MultiSeries, got {type(other).__name__}")
        if self.nvars != other.nvars or self.cap != other.cap:
            raise ValueError(
                f"shape mismatch: ({self.nvars}, cap {self.cap}) vs "
                f"({other.nvars}, cap {other.cap})"
            )

    def _coerce(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            self._check(other)
            return other
        return MultiSeries.constant(self.nvars, self.cap, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiSeries._raw(self.nvars, self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries._raw(
            self.nvars, self.cap, {k: -v for k, v in self._terms.items()}
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, factor) -> "MultiSeries":
        factor = as_rational(factor)
        if not factor:
            return MultiSeries.zero(self.nvars, self.cap)
        return MultiSeries._raw(
            self.nvars, self.cap, {k: v * factor for k, v in self._terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        self._check(other)
        return _mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return self * invert_unit(other)
        return self.scale(1 / as_rational(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiSeries.one(self.nvars, self.cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus helpers ---------------------------------------------
    def derivative(self, index: int, order: int = 1) -> "MultiSeries":
        """Formal partial derivative.  The result keeps the same cap,
        so its top ``order`` degrees are not trustworthy as a truncation of
        the true derivative; callers size ``cap`` accordingly."""
        out = {}
        for exps, coef in self._terms.items():
            p = exps[index]
            if p < order:
                continue
            f = math.perm(p, order)
            e = list(exps)
            e[index] = p - order
            out[tuple(e)] = coef * f
        return MultiSeries._raw(self.nvars, self.cap, out)

    def select(self, predicate) -> "MultiSeries":
        """Keep only monomials whose exponent vector satisfies ``predicate``."""
        return MultiSeries._raw(
            self.nvars,
            self.cap,
            {k: v for k, v in self._terms.items() if predicate(k)},
        )

    def with_cap(self, cap: int) -> "MultiSeries":
        """Re-truncate to a smaller cap (raising the cap would invent zeros)."""
        if cap > self.cap:
            raise TruncationError("cannot raise the cap of a truncated series")
        return MultiSeries(self.nvars, cap, self._terms)

    def embed(self, nvars: int, positions: Sequence[int], cap: int | None = None):
        """Place this series' variables at ``positions`` of a larger space."""
        cap = self.cap if cap is None else cap
        if cap > self.cap:
            raise TruncationError("cannot raise the cap of a truncated series")
        out = {}
        for exps, coef in self._terms.items():
            e = [0] * nvars
            for p, pos in zip(exps, positions):
                e[pos] = p
            out[tuple(e)] = coef
        return MultiSeries(nvars, cap, out)

    def coefficient_series(self, index: int, power: int) -> "MultiSeries":
        """Coefficient of ``x_index**power`` as a series (that slot zeroed)."""
        out = {}
        for exps, coef in self._terms.items():
            if exps[index] == power:
                e = list(exps)
                e[index] = 0
                out[tuple(e)] = coef
        return MultiSeries._raw(self.nvars, self.cap, out)


def _mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    # Sparse Cauchy product.  Coefficients are moved to integer numerators
    # over a common denominator so the inner loop avoids Fraction gcds.
    if not a._terms or not b._terms:
        return MultiSeries.zero(a.nvars, a.cap)
    cap = a.cap

    def prepare(s):
        den = math.lcm(*(c.denominator for c in s._terms.values()))
        rows = [(e, sum(e), c.numerator * (den // c.denominator)) for e, c in s._terms.items()]
        return rows, den

    arows, aden = prepare(a)
    brows, bden = prepare(b)
    brows.sort(key=lambda r: r[1])
    out: dict = {}
    get = out.get
    for ea, da, na in arows:
        room = cap - da
        for eb, db, nb in brows:
            if db > room:
                break
            k = tuple(map(sum, zip(ea, eb)))
            out[k] = get(k, 0) + na * nb
    den = aden * bden
    return MultiSeries._raw(
        a.nvars, cap, {k: Fraction(v, den) for k, v in out.items() if v}
    )


# -- module-level operations -----------------------------------------------


def add(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    a._check(b)
    return a + b


def mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    a._check(b)
    return a * b


def exp_series(a: MultiSeries) -> MultiSeries:
    """exp(a) truncated at a.cap; a must have zero constant term."""
    if a.constant_term():
        raise ValueError("exp_series needs a zero constant term")
    result = MultiSeries.one(a.nvars, a.cap)
    term = result
    n = 1
    while True:
        term = (term * a).scale(Fraction(1, n))
        if term.is_zero():
            return result
        result = result + term
        n += 1


def binom_series(nvars: int, cap: int, var: int, c) -> MultiSeries:
    """(1 - x_var)^(-c) = sum (c)_n / n! x_var^n, truncated at cap."""
    c = as_rational(c)
    terms = {}
    coef = Fraction(1)
    for n in range(cap + 1):
        if not coef:
            break
        e = [0] * nvars
        e[var] = n
        terms[tuple(e)] = coef
        coef = coef * (c + n) / (n + 1)
    return MultiSeries(nvars, cap, terms)


def invert_unit(a: MultiSeries) -> MultiSeries:
    """Multiplicative inverse up to cap; constant term must be non-zero."""
    a0 = a.constant_term()
    if not a0:
        raise ZeroDivisionError("invert_unit needs a non-zero constant term")
    # a = a0 (1 + t)  =>  1/a = (1/a0) * sum (-t)^n
    t = (a - a0).scale(1 / a0)
    neg_t = -t
    result = MultiSeries.one(a.nvars, a.cap)
    term = result
    while True:
        term = term * neg_t
        if term.is_zero():
            break
        result = result + term
    return result.scale(1 / a0)


def substitute(
    a: MultiSeries,
    assignments: Iterable[tuple[int, MultiSeries]],
    *,
    polynomial: bool = False,
) -> MultiSeries:
    """Simultaneous formal substitution ``x_i -> s_i``.

    Each ``s_i`` must live in the same space as ``a`` and have zero
    constant term, unless ``polynomial=True`` asserts that ``a`` is an
    exact polynomial (not a truncation), in which case any shift is safe.
    """
    assignments = list(assignments)
    for idx, s in assignments:
        a._check(s)
        if not 0 <= idx < a.nvars:
            raise IndexError(f"variable index {idx} out of range")
        if s.constant_term() and not polynomial:
            raise ValueError(
                f"substituting a series with non-zero constant term into x{idx} "
                "would need coefficients beyond the cap"
            )
    subs = dict(assignments)
    if not subs:
        return a
    # Group terms by the exponents of the substituted variables.
    idxs = sorted(subs)
    groups: dict = {}
    for exps, coef in a.items():
        key = tuple(exps[i] for i in idxs)
        rest = list(exps)
        for i in idxs:
            rest[i] = 0
        groups.setdefault(key, {})[tuple(rest)] = coef
    powers: dict = {i: [MultiSeries.one(a.nvars, a.cap)] for i in idxs}

    def power(i, n):
        cache = powers[i]
        while len(cache) <= n:
            cache.append(cache[-1] * subs[i])
        return cache[n]

    result = MultiSeries.zero(a.nvars, a.cap)
    for key, rest in groups.items():
        factor = MultiSeries._raw(a.nvars, a.cap, rest)
        for i, n in zip(idxs, key):
            if n:
                factor = factor * power(i, n)
        result = result + factor
    return result


def coeff(a: MultiSeries, exponents: Sequence[int]) -> Fraction:
    return a.coeff(exponents)


def power_series_of(coeffs: Sequence, s: MultiSeries) -> MultiSeries:
    """sum_n coeffs[n] * s^n by Horner; s needs zero constant term."""
    if s.constant_term():
        raise ValueError("composition needs a zero constant term")
    result = MultiSeries.zero(s.nvars, s.cap)
    for c in reversed(list(coeffs)):
        result = result * s + as_rational(c)
    return result
