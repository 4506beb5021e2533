"""Text grammars for polynomials, point lists, ranges and rationals.

Polynomial grammar (whitespace ignored)::

    poly     := ["+"|"-"] term {("+"|"-") term}
    term     := coeff ["*" monomial] | monomial
    monomial := var {"*" var}
    var      := "u" INDEX ["^" INT]

Point lists are semicolon-separated parenthesised integer tuples, e.g.
"(0,0);(1,0);(0,1)".
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import LaurentPoly, check_expvec, check_prime
from .errors import PolySyntaxError
from .ideal import IntBox
from .ratfunc import FpPoly, RatFunc


class _Scanner:
    def __init__(self, text: str):
        # keep original offsets so errors point into the caller's string
        self.chars = [(i, ch) for i, ch in enumerate(text) if not ch.isspace()]
        self.pos = 0
        self.end = len(text)

    def peek(self) -> str:
        return self.chars[self.pos][1] if self.pos < len(self.chars) else ""

    def offset(self) -> int:
        return self.chars[self.pos][0] if self.pos < len(self.chars) else self.end

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise PolySyntaxError(f"expected {ch!r}, found {found!r}", self.offset())
        self.pos += 1

    def digits(self) -> int:
        start = self.offset()
        s = ""
        while self.peek().isdigit():
            s += self.take()
        if not s:
            found = self.peek() or "end of input"
            raise PolySyntaxError(f"expected a number, found {found!r}", start)
        return int(s)

    def signed(self) -> int:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take() == "-" else 1
        return sign * self.digits()


def _parse_monomial(sc: _Scanner, d: int, var: str, exps: list[int]) -> None:
    while True:
        start = sc.offset()
        sc.expect(var)
        if var == "u":
            idx = sc.digits()
            if not 1 <= idx <= d:
                raise PolySyntaxError(f"variable index u{idx} outside 1..{d}", start)
        else:
            idx = 1
        e = 1
        if sc.peek() == "^":
            sc.take()
            e = sc.signed()
        exps[idx - 1] += e
        if sc.peek() == "*":
            sc.take()
            continue
        return


def _parse_terms(text: str, d: int, var: str) -> list[tuple[int, list[int]]]:
    sc = _Scanner(text)
    if not sc.chars:
        raise PolySyntaxError("empty polynomial", 0)
    terms = []
    sign = 1
    if sc.peek() in "+-":
        sign = -1 if sc.take() == "-" else 1
    while True:
        exps = [0] * d
        if sc.peek().isdigit():
            c = sc.digits()
            if sc.peek() == "*":
                sc.take()
                _parse_monomial(sc, d, var, exps)
        elif sc.peek() == var:
            c = 1
            _parse_monomial(sc, d, var, exps)
        else:
            found = sc.peek() or "end of input"
            raise PolySyntaxError(f"expected a term, found {found!r}", sc.offset())
        terms.append((sign * c, exps))
        if sc.peek() in ("+", "-"):
            sign = -1 if sc.take() == "-" else 1
            continue
        if sc.peek():
            raise PolySyntaxError(f"unexpected {sc.peek()!r}", sc.offset())
        return terms


def parse_poly(text: str, p: int, d: int) -> LaurentPoly:
    """Parse a Laurent polynomial in u1..ud, reducing coefficients mod p."""
    check_prime(p)
    acc: dict[tuple, int] = {}
    for c, exps in _parse_terms(text, d, "u"):
        e = check_expvec(exps, d)
        acc[e] = acc.get(e, 0) + c
    return LaurentPoly(acc, p, d)


def parse_fp_poly(text: str, p: int) -> FpPoly:
    """Parse an ordinary polynomial in t over F_p."""
    coeffs: dict[int, int] = {}
    for c, (e,) in _parse_terms(text, 1, "t"):
        if e < 0:
            raise PolySyntaxError("negative powers of t are not polynomials")
        coeffs[e] = coeffs.get(e, 0) + c
    top = max(coeffs, default=-1)
    return FpPoly(tuple(coeffs.get(i, 0) for i in range(top + 1)), p)


def parse_ratfunc(text: str, p: int) -> RatFunc:
    """Parse "NUM" or "NUM/DEN" with NUM, DEN polynomials in t (optionally parenthesised)."""
    depth = 0
    split = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split is not None:
                raise PolySyntaxError("more than one '/'", i)
            split = i

    def strip(s: str) -> str:
        s = s.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        return s

    if split is None:
        return RatFunc.from_poly(parse_fp_poly(strip(text), p))
    return RatFunc(parse_fp_poly(strip(text[:split]), p), parse_fp_poly(strip(text[split + 1 :]), p))


_POINT = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)$")


def parse_points(text: str, d: int | None = None) -> list[tuple[int, ...]]:
    """Parse "(a,b);(c,d);..."; an empty string yields no points."""
    text = text.strip()
    if not text:
        return []
    pts = []
    offset = 0
    for chunk in text.split(";"):
        m = _POINT.match(chunk.strip())
        if not m:
            raise PolySyntaxError(f"malformed point {chunk.strip()!r}", offset)
        pt = tuple(int(x) for x in m.group(1).split(","))
        if d is not None:
            pt = check_expvec(pt, d)
        pts.append(pt)
        offset += len(chunk) + 1
    dims = {len(pt) for pt in pts}
    if len(dims) > 1:
        raise PolySyntaxError("points differ in dimension")
    return pts


def parse_ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise PolySyntaxError(f"malformed integer list {text!r}") from exc


def parse_rationals(text: str) -> list[Fraction]:
    text = text.strip()
    if not text:
        return []
    out = []
    for x in text.split(","):
        x = x.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", x):
            raise PolySyntaxError(f"malformed rational {x!r}")
        out.append(Fraction(x))
    return out


def parse_range(text: str) -> list[int]:
    """"a:b" (inclusive) or a comma list of integers."""
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)\s*:\s*(-?\d+)", text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if a > b:
            raise PolySyntaxError(f"empty range {text!r}")
        return list(range(a, b + 1))
    vals = parse_ints(text)
    if not vals:
        raise PolySyntaxError("empty range")
    return vals


def parse_box(text: str, d: int) -> IntBox:
    """A window given as two corners "(lo);(hi)"."""
    pts = parse_points(text, d)
    if len(pts) != 2:
        raise PolySyntaxError("a window needs exactly two corners")
    return IntBox(pts[0], pts[1])


def format_points(pts) -> str:
    return ";".join("(" + ",".join(str(x) for x in pt) + ")" for pt in pts)
