"""The six-dimensional Schrödinger algebra and its 4x4 matrix group.

Basis order is fixed as (M, K, G, D, Px, Pt).  Algebra-level work is exact
over Fractions; group elements involve exp/log of the dilation coordinate
and are handled in double precision with numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import expm

BASIS = ("M", "K", "G", "D", "Px", "Pt")
INDEX = {name: i for i, name in enumerate(BASIS)}


class ChartError(ValueError):
    """Group element lies outside the second-kind coordinate chart."""


@dataclass(frozen=True)
class LieElement:
    """a1 M + a2 K + a3 G + a4 D + a5 Px + a6 Pt with Fraction coefficients."""

    coeffs: tuple = (Fraction(0),) * 6

    def __post_init__(self):
        if len(self.coeffs) != 6:
            raise ValueError("a Lie element has exactly six coordinates")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def basis(cls, name: str) -> "LieElement":
        c = [0] * 6
        c[INDEX[name]] = 1
        return cls(tuple(c))

    @classmethod
    def zero(cls) -> "LieElement":
        return cls()

    def __getitem__(self, name: str) -> Fraction:
        return self.coeffs[INDEX[name]]

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return LieElement(tuple(-a for a in self.coeffs))

    def __mul__(self, scalar) -> "LieElement":
        s = Fraction(scalar)
        return LieElement(tuple(a * s for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        parts = [f"{c}*{n}" for c, n in zip(self.coeffs, BASIS) if c]
        return " + ".join(parts) if parts else "0"


def _table() -> tuple:
    # Entry [row][col] is [row, col]; only the non-zero upper half is listed.
    upper = {
        ("K", "D"): {"K": -2},
        ("K", "Px"): {"G": -1},
        ("K", "Pt"): {"D": -1},
        ("G", "D"): {"G": -1},
        ("G", "Px"): {"M": -1},
        ("G", "Pt"): {"Px": -1},
        ("D", "Px"): {"Px": -1},
        ("D", "Pt"): {"Pt": -2},
    }
    rows = []
    for x in BASIS:
        row = []
        for y in BASIS:
            if (x, y) in upper:
                entry = upper[(x, y)]
                sign = 1
            elif (y, x) in upper:
                entry = upper[(y, x)]
                sign = -1
            else:
                entry, sign = {}, 1
            c = [0] * 6
            for name, v in entry.items():
                c[INDEX[name]] = sign * v
            row.append(LieElement(tuple(c)))
        rows.append(tuple(row))
    return tuple(rows)


STRUCTURE_TABLE = _table()


def commutator(x: LieElement, y: LieElement) -> LieElement:
    out = [Fraction(0)] * 6
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if not b:
                continue
            for k, t in enumerate(STRUCTURE_TABLE[i][j].coeffs):
                if t:
                    out[k] += a * b * t
    return LieElement(tuple(out))


# -- matrices ---------------------------------------------------------------


def matrix_of(x: LieElement) -> list:
    """Exact 4x4 matrix (nested lists of Fractions) representing ``x``."""
    a1, a2, a3, a4, a5, a6 = x.coeffs
    z = Fraction(0)
    return [
        [z, a5, a3, 2 * a1],
        [z, a4, a2, a3],
        [z, -a6, -a4, -a5],
        [z, z, z, z],
    ]


def matmul_exact(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    n = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]


def matrix_commutator(a, b) -> list:
    ab = matmul_exact(a, b)
    ba = matmul_exact(b, a)
    return [[p - q for p, q in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


@dataclass(frozen=True)
class GroupCoords:
    """Second-kind coordinates of exp(A1 M) exp(A2 K) ... exp(A6 Pt)."""

    A1: float = 0.0
    A2: float = 0.0
    A3: float = 0.0
    A4: float = 0.0
    A5: float = 0.0
    A6: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.A1, self.A2, self.A3, self.A4, self.A5, self.A6], float)

    @classmethod
    def from_array(cls, values) -> "GroupCoords":
        return cls(*(float(v) for v in values))


def group_matrix(a: GroupCoords) -> np.ndarray:
    A1, A2, A3, A4, A5, A6 = a.as_array()
    e = math.exp(A4)
    g = np.array(
        [
            [e, A5 * e - A3 * A6, A3, 2 * A1 * e - A3 * A5],
            [0.0, e * e - A2 * A6, A2, A3 * e - A2 * A5],
            [0.0, -A6, 1.0, -A5],
            [0.0, 0.0, 0.0, e],
        ]
    )
    return g / e


def group_matrix_by_factors(a: GroupCoords) -> np.ndarray:
    """Ordered product of the six one-parameter exponentials (scipy expm)."""
    g = np.eye(4)
    for name, t in zip(BASIS, a.as_array()):
        gen = np.array(matrix_of(LieElement.basis(name)), dtype=float)
        g = g @ expm(t * gen)
    return g


def coords_of(g) -> GroupCoords:
    g = np.asarray(g, dtype=float)
    # 1-indexed names below follow the usual g_ij convention.
    g13, g14 = g[0, 2], g[0, 3]
    g23 = g[1, 2]
    g32, g33, g34 = g[2, 1], g[2, 2], g[2, 3]
    if not g33 > 0:
        raise ChartError(f"g33 = {g33} is not positive; outside the coordinate chart")
    det = g13 * g34 - g14 * g33
    return GroupCoords.from_array(
        (-0.5 * det / g33, g23 / g33, g13 / g33, -math.log(g33), -g34 / g33, -g32 / g33)
    )


def compose(a: GroupCoords, b: GroupCoords) -> GroupCoords:
    return coords_of(group_matrix(a) @ group_matrix(b))


def inverse(a: GroupCoords) -> GroupCoords:
    return coords_of(np.linalg.inv(group_matrix(a)))


def leibniz_commute(B1: float, B2: float, V1: float, V2: float) -> GroupCoords:
    """Coordinates of g(0,0,0,0,B2,B1) g(0,V1,V2,0,0,0) in closed form."""
    d = 1.0 - B1 * V1
    if not d > 0:
        raise ChartError(f"1 - B1*V1 = {d} must be positive")
    return GroupCoords(
        0.5 * (B1 * V2 * V2 + 2 * B2 * V2 + B2 * B2 * V1) / d,
        V1 / d,
        (V2 + B2 * V1) / d,
        -math.log(d),
        (B1 * V2 + B2) / d,
        B1 / d,
    )


def leibniz_by_matrices(B1: float, B2: float, V1: float, V2: float) -> GroupCoords:
    return compose(GroupCoords(A5=B2, A6=B1), GroupCoords(A2=V1, A3=V2))


# -- structural checks ------------------------------------------------------


def antisymmetry_failures() -> list:
    return [
        (x, y)
        for x in BASIS
        for y in BASIS
        if not (
            commutator(LieElement.basis(x), LieElement.basis(y))
            + commutator(LieElement.basis(y), LieElement.basis(x))
        ).is_zero()
    ]


def jacobi_failures() -> list:
    bad = []
    for x in BASIS:
        for y in BASIS:
            for z in BASIS:
                X, Y, Z = (LieElement.basis(n) for n in (x, y, z))
                s = (
                    commutator(X, commutator(Y, Z))
                    + commutator(Y, commutator(Z, X))
                    + commutator(Z, commutator(X, Y))
                )
                if not s.is_zero():
                    bad.append((x, y, z))
    return bad


def representation_failures() -> list:
    """Ordered basis pairs where [mat X, mat Y] != mat [X, Y]."""
    bad = []
    for x in BASIS:
        for y in BASIS:
            X, Y = LieElement.basis(x), LieElement.basis(y)
            if matrix_commutator(matrix_of(X), matrix_of(Y)) != matrix_of(
                commutator(X, Y)
            ):
                bad.append((x, y))
    return bad


def closes(names: Sequence[str]) -> bool:
    """True if span(names) is closed under the bracket."""
    allowed = {INDEX[n] for n in names}
    for x in names:
        for y in names:
            br = commutator(LieElement.basis(x), LieElement.basis(y))
            if any(c for i, c in enumerate(br.coeffs) if i not in allowed):
                return False
    return True
