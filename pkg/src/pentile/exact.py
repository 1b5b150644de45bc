"""Exact rational arithmetic for tiling angles.

Angles are stored in units of pi as ``r + s/f`` with exact rational
coefficients, where ``f`` is the number of tiles.  All combinatorial
reasoning happens in this representation; floats only appear at the
geometry boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[int, Fraction, str]


def _frac(x: RationalLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, order=False)
class FAngle:
    """An angle ``(r + s/f) * pi`` with exact rational ``r``, ``s``."""

    r: Fraction
    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", _frac(self.r))
        object.__setattr__(self, "s", _frac(self.s))

    # -- linear arithmetic (componentwise, exact) --

    def __add__(self, other: "FAngle") -> "FAngle":
        return FAngle(self.r + other.r, self.s + other.s)

    def __sub__(self, other: "FAngle") -> "FAngle":
        return FAngle(self.r - other.r, self.s - other.s)

    def __neg__(self) -> "FAngle":
        return FAngle(-self.r, -self.s)

    def __mul__(self, k: RationalLike) -> "FAngle":
        k = _frac(k)
        return FAngle(self.r * k, self.s * k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.r == 0 and self.s == 0

    def is_constant(self) -> bool:
        return self.s == 0

    # -- evaluation --

    def eval_at(self, f: int) -> Fraction:
        """Value in units of pi at tile count ``f``."""
        if f == 0:
            raise ZeroDivisionError("tile count f must be nonzero")
        return self.r + self.s / f

    def radians(self, f: int) -> float:
        return float(self.eval_at(f)) * math.pi

    def sign_at(self, f: int) -> int:
        v = self.eval_at(f)
        return (v > 0) - (v < 0)

    def positive_f_range(self, f_values: Iterable[int]) -> list[int]:
        return [f for f in f_values if self.eval_at(f) > 0]

    def __str__(self) -> str:
        if self.s == 0:
            return str(self.r)
        if self.s > 0:
            s_part = f"{self.s}/f"
        else:
            s_part = f"-{-self.s}/f"
        if self.r == 0:
            return s_part
        sign = "+" if self.s > 0 else "-"
        return f"{self.r} {sign} {abs(self.s)}/f"


ZERO = FAngle(0)
FULL_TURN = FAngle(2)  # 2*pi
STRAIGHT = FAngle(1)
PENTAGON_SUM = FAngle(3, 4)  # 3*pi + 4*pi/f for a spherical pentagon


def fangle(r: RationalLike, s: RationalLike = 0) -> FAngle:
    return FAngle(_frac(r), _frac(s))


@dataclass(frozen=True)
class TilingParameters:
    """Tile count of an edge-to-edge spherical pentagonal tiling."""

    f: int

    def __post_init__(self):
        if self.f % 2 != 0 or self.f < 12:
            raise ValueError(f"tile count must be an even integer >= 12, got {self.f}")


def fangle_eval(angle: FAngle, p: TilingParameters) -> Fraction:
    """Evaluate an angle at tile count ``p.f``, in units of pi."""
    return angle.eval_at(p.f)


def fangle_cmp(a: FAngle, b: FAngle, p: TilingParameters) -> int:
    """Exact trichotomy: -1, 0 or 1 as ``a`` <, =, > ``b`` at ``p.f``."""
    va, vb = a.eval_at(p.f), b.eval_at(p.f)
    return (va > vb) - (va < vb)


@dataclass(frozen=True)
class FSolution:
    """Solutions of a linear angle identity over the tile count."""

    all_f: bool
    f_values: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.all_f or bool(self.f_values)


def fangle_linear_solve(
    terms: Sequence[tuple[FAngle, int]],
    target: FAngle,
    f_range: Iterable[int] = range(18, 101, 2),
) -> FSolution:
    """Even tile counts at which ``sum(mult * angle) == target`` exactly.

    The identity is linear in ``1/f``; it either holds for every ``f``
    ("all-f"), for a single ``f``, or never.  Only values in ``f_range``
    are reported.
    """
    total = ZERO
    for angle, mult in terms:
        total = total + angle * mult
    diff = total - target
    if diff.is_zero():
        return FSolution(all_f=True, f_values=tuple(f_range))
    if diff.r == 0:  # s/f = 0 with s != 0: no solution
        return FSolution(all_f=False, f_values=())
    # r + s/f = 0  =>  f = -s/r
    f = -diff.s / diff.r
    if f.denominator == 1 and f > 0 and f % 2 == 0 and int(f) in set(f_range):
        return FSolution(all_f=False, f_values=(int(f),))
    return FSolution(all_f=False, f_values=())
