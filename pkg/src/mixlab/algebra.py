"""Prime fields and sparse Laurent polynomials over F_p in d variables.

Exponent vectors are plain tuples of ints.  A :class:`LaurentPoly` is an
immutable map from exponent vectors to nonzero residues mod p; zero
coefficients are never stored.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DimensionMismatch, ExponentOverflow, ModulusMismatch

ExpVec = tuple  # tuple[int, ...] of length d

MAX_PRIME = 1 << 16
MAX_EXPONENT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p) or p >= MAX_PRIME:
        raise ValueError(f"modulus must be a prime below 2^16, got {p!r}")
    return p


def check_expvec(v: Sequence[int], d: int) -> ExpVec:
    v = tuple(int(c) for c in v)
    if len(v) != d:
        raise DimensionMismatch(f"exponent vector {v} does not have length {d}")
    for c in v:
        if abs(c) > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {c} exceeds the bound 2^20")
    return v


def vec_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a: ExpVec, n: int) -> ExpVec:
    return tuple(n * x for x in a)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


class LaurentPoly:
    """Sparse Laurent polynomial over F_p in ``d`` variables u1..ud."""

    __slots__ = ("p", "d", "_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | Iterable, p: int, d: int):
        check_prime(p)
        if d < 1:
            raise ValueError("dimension must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExpVec, int] = {}
        for e, c in items:
            e = check_expvec(e, d)
            acc[e] = (acc.get(e, 0) + int(c)) % p
        self.p = p
        self.d = d
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e]}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, p: int, d: int) -> "LaurentPoly":
        # trusted constructor: terms already reduced, nonzero and in range
        obj = cls.__new__(cls)
        obj.p = p
        obj.d = d
        obj._terms = {e: terms[e] for e in sorted(terms)}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, p: int, d: int) -> "LaurentPoly":
        return cls({}, p, d)

    @classmethod
    def one(cls, p: int, d: int) -> "LaurentPoly":
        return cls({(0,) * d: 1}, p, d)

    @classmethod
    def monomial(cls, e: Sequence[int], c: int, p: int, d: int) -> "LaurentPoly":
        return cls({tuple(e): c}, p, d)

    @property
    def terms(self) -> dict[ExpVec, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[ExpVec, int]]:
        return iter(self._terms.items())

    def support(self) -> list[ExpVec]:
        return list(self._terms)

    def coeff(self, e: Sequence[int]) -> int:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    def bounding_box(self) -> tuple[ExpVec, ExpVec]:
        if not self._terms:
            raise ValueError("the zero polynomial has no support")
        sup = list(self._terms)
        lo = tuple(min(e[i] for e in sup) for i in range(self.d))
        hi = tuple(max(e[i] for e in sup) for i in range(self.d))
        return lo, hi

    def _check_compatible(self, other: "LaurentPoly") -> None:
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"expected LaurentPoly, got {type(other).__name__}")
        if self.p != other.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")
        if self.d != other.d:
            raise DimensionMismatch(f"dimensions differ: {self.d} vs {other.d}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_compatible(other)
        p = self.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, p, self.d)

    def __neg__(self) -> "LaurentPoly":
        p = self.p
        return LaurentPoly._raw({e: p - c for e, c in self._terms.items()}, p, self.d)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        self._check_compatible(other)
        p = self.p
        out: dict[ExpVec, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        for e in out:
            for x in e:
                if abs(x) > MAX_EXPONENT:
                    raise ExponentOverflow(f"product exponent {e} exceeds the bound 2^20")
        return LaurentPoly._raw({e: c for e, c in out.items() if c}, p, self.d)

    __rmul__ = __mul__

    def scale(self, c: int) -> "LaurentPoly":
        c %= self.p
        if c == 0:
            return LaurentPoly.zero(self.p, self.d)
        return LaurentPoly._raw({e: (v * c) % self.p for e, v in self._terms.items()}, self.p, self.d)

    def shift(self, v: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial u^v."""
        v = check_expvec(v, self.d)
        return LaurentPoly({vec_add(e, v): c for e, c in self._terms.items()}, self.p, self.d)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = LaurentPoly.one(self.p, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.p == other.p and self.d == other.d and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.d, tuple(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            factors = []
            for i, x in enumerate(e, start=1):
                if x == 1:
                    factors.append(f"u{i}")
                elif x != 0:
                    factors.append(f"u{i}^{x}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r}, p={self.p}, d={self.d})"


def poly_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def poly_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def frobenius_power(h: LaurentPoly, n: int) -> LaurentPoly:
    """Return h^(p^n).

    Coefficients lie in F_p, so raising to the p-th power fixes them and
    only the exponents get multiplied by p^n.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    q = h.p**n
    out = {}
    for e, c in h.items():
        e2 = vec_scale(e, q)
        if any(abs(x) > MAX_EXPONENT for x in e2):
            raise ExponentOverflow(f"Frobenius exponent {e2} exceeds the bound 2^20")
        out[e2] = c
    return LaurentPoly._raw(out, h.p, h.d)


def shape_poly(shape: Sequence[Sequence[int]], coeffs: Sequence[int], n: int, p: int) -> LaurentPoly:
    """Build sum_j c_j u^(n s_j) for a shape s_0..s_k and coefficients c_j."""
    if len(shape) != len(coeffs):
        raise ValueError("shape and coefficient lists differ in length")
    if not shape:
        raise ValueError("empty shape")
    if n < 1:
        raise ValueError("dilation must be a positive integer")
    d = len(shape[0])
    pts = [check_expvec(s, d) for s in shape]
    if len(set(pts)) != len(pts):
        raise ValueError("shape points must be distinct")
    cs = [int(c) % p for c in coeffs]
    if not any(cs):
        raise ValueError("coefficients are all zero mod p")
    out: dict[ExpVec, int] = {}
    for s, c in zip(pts, cs):
        if not c:
            continue
        e = check_expvec(vec_scale(s, n), d)
        if e in out:
            raise AssertionError(f"exponent collision at {e}")
        out[e] = c
    return LaurentPoly._raw(out, check_prime(p), d)
