"""Univariate polynomials and rational functions over F_p, with Frobenius orbits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import check_prime, inv_mod


def _trim(c: Sequence[int], p: int) -> tuple[int, ...]:
    out = [x % p for x in c]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class FpPoly:
    """Dense polynomial in t, coefficients low degree first."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "coeffs", _trim(self.coeffs, self.p))

    @classmethod
    def const(cls, c: int, p: int) -> "FpPoly":
        return cls((c,), p)

    @classmethod
    def t(cls, p: int) -> "FpPoly":
        return cls((0, 1), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1]

    def __add__(self, other: "FpPoly") -> "FpPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FpPoly(tuple(x + y for x, y in zip(a, b)), self.p)

    def __neg__(self) -> "FpPoly":
        return FpPoly(tuple(-x for x in self.coeffs), self.p)

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        return self + (-other)

    def __mul__(self, other: "FpPoly | int") -> "FpPoly":
        if isinstance(other, int):
            return FpPoly(tuple(x * other for x in self.coeffs), self.p)
        if self.is_zero() or other.is_zero():
            return FpPoly((), self.p)
        p = self.p
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = (out[i + j] + a * b) % p
        return FpPoly(tuple(out), p)

    def divmod(self, other: "FpPoly") -> tuple["FpPoly", "FpPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        rem = list(self.coeffs)
        inv = inv_mod(other.lead(), p)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return FpPoly((), p), self
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv % p
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = (rem[k + j] - c * b) % p
        return FpPoly(tuple(quot), p), FpPoly(tuple(rem), p)

    def monic(self) -> "FpPoly":
        return self * inv_mod(self.lead(), self.p)

    def frobenius(self, n: int = 1) -> "FpPoly":
        """P(t)^(p^n) = P(t^(p^n)) since the coefficients lie in F_p."""
        q = self.p**n
        out = [0] * (self.degree * q + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * q] = c
        return FpPoly(tuple(out), self.p)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def poly_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


@dataclass(frozen=True)
class RatFunc:
    """num/den in lowest terms with monic denominator."""

    num: FpPoly
    den: FpPoly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if self.num.p != self.den.p:
            raise ValueError("numerator and denominator over different fields")
        g = poly_gcd(self.num, self.den) if not self.num.is_zero() else self.den.monic()
        num = self.num.divmod(g)[0]
        den = self.den.divmod(g)[0]
        scale = inv_mod(den.lead(), den.p)
        object.__setattr__(self, "num", num * scale)
        object.__setattr__(self, "den", den * scale)

    @classmethod
    def from_poly(cls, a: FpPoly) -> "RatFunc":
        return cls(a, FpPoly.const(1, a.p))

    @property
    def p(self) -> int:
        return self.num.p

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __mul__(self, other: "RatFunc | int") -> "RatFunc":
        if isinstance(other, int):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def frobenius(self, n: int = 1) -> "RatFunc":
        return RatFunc(self.num.frobenius(n), self.den.frobenius(n))

    def is_one(self) -> bool:
        return self.num.coeffs == (1,) and self.den.coeffs == (1,)

    def __str__(self) -> str:
        if self.den.coeffs == (1,):
            return str(self.num)
        return f"({self.num})/({self.den})"


def _weighted_sum(base: Sequence[RatFunc], coeffs: Sequence[int], p: int) -> RatFunc:
    total = RatFunc.from_poly(FpPoly((), p))
    for x, a in zip(base, coeffs):
        total = total + x * (a % p)
    return total


def frobenius_orbit(p: int, base: Sequence[RatFunc], coeffs: Sequence[int], n: int) -> list[RatFunc]:
    """Raise every term of a solution of sum a_j x_j = 1 to the p^n-th power.

    The result again solves the equation because the a_j lie in F_p and are
    fixed by Frobenius; this is checked exactly before returning.
    """
    check_prime(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    if len(base) != len(coeffs) or not base:
        raise ValueError("need one coefficient per base term")
    if any(x.p != p for x in base):
        raise ValueError("base terms are over a different field")
    if not _weighted_sum(base, coeffs, p).is_one():
        raise ValueError("base does not satisfy the equation")
    image = [x.frobenius(n) for x in base]
    if not _weighted_sum(image, coeffs, p).is_one():
        raise AssertionError("Frobenius image does not satisfy the equation")
    return image
