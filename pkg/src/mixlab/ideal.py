"""Principal-ideal computations in F_p[u1^±1, ..., ud^±1].

Both membership and the support-restricted kernel reduce to linear algebra
on the unknown coefficients of a cofactor g.  Supports of products add
(Newton polytopes are additive over an integral domain), so any g with
supp(f g) inside a box B lives in the box erosion of B by box(supp f).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebra import ExpVec, LaurentPoly, check_expvec, inv_mod, vec_add, vec_sub
from .linalg import FpMatrix, nullspace_sparse, row_reduce, solve


@dataclass(frozen=True)
class IntBox:
    lo: ExpVec
    hi: ExpVec

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners differ in dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo}..{self.hi}")

    @classmethod
    def around(cls, points: Sequence[Sequence[int]]) -> "IntBox":
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("cannot bound an empty point set")
        d = len(pts[0])
        return cls(tuple(min(q[i] for q in pts) for i in range(d)), tuple(max(q[i] for q in pts) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.lo)

    def points(self) -> list[ExpVec]:
        """Lattice points in lexicographic order."""
        return list(itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi))))

    def size(self) -> int:
        n = 1
        for a, b in zip(self.lo, self.hi):
            n *= b - a + 1
        return n

    def contains(self, v: Sequence[int]) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, v, self.hi))

    def grow(self, k: int = 1) -> "IntBox":
        return IntBox(tuple(a - k for a in self.lo), tuple(b + k for b in self.hi))


def erosion_support(target_box: IntBox, f_box: IntBox) -> list[ExpVec]:
    """All v with v + f_box inside target_box, in lexicographic order."""
    lo = tuple(t - f for t, f in zip(target_box.lo, f_box.lo))
    hi = tuple(t - f for t, f in zip(target_box.hi, f_box.hi))
    if any(a > b for a, b in zip(lo, hi)):
        return []
    return IntBox(lo, hi).points()


@dataclass(frozen=True)
class KernelBasis:
    """Basis (reduced echelon, in site order) of {b on sites : sum b_s u^s in <f>}."""

    sites: tuple[ExpVec, ...]
    rows: tuple[tuple[int, ...], ...]
    p: int

    @property
    def dim(self) -> int:
        return len(self.rows)

    def polynomial(self, i: int) -> LaurentPoly:
        d = len(self.sites[0])
        return LaurentPoly(dict(zip(self.sites, self.rows[i])), self.p, d)

    def polynomials(self) -> list[LaurentPoly]:
        return [self.polynomial(i) for i in range(self.dim)]

    def annihilates(self, values: Sequence[int]) -> bool:
        """True when every basis row is orthogonal to ``values``."""
        p = self.p
        return all(sum(b * a for b, a in zip(row, values)) % p == 0 for row in self.rows)


@dataclass(frozen=True)
class MembershipWitness:
    quotient: LaurentPoly


def _box_of(f: LaurentPoly) -> IntBox:
    lo, hi = f.bounding_box()
    return IntBox(lo, hi)


def _unit_quotient(f: LaurentPoly, h: LaurentPoly) -> LaurentPoly:
    # f = c u^e is a unit; h / f = c^-1 u^-e h
    (e, c), = f.items()
    inv = inv_mod(c, f.p)
    neg = tuple(-x for x in e)
    return LaurentPoly({vec_add(k, neg): v * inv for k, v in h.items()}, f.p, f.d)


def divides(f: LaurentPoly, h: LaurentPoly, backend: str = "auto") -> MembershipWitness | None:
    """Return the quotient g with f g = h when h lies in <f>, else None."""
    f._check_compatible(h)
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if h.is_zero():
        return MembershipWitness(LaurentPoly.zero(f.p, f.d))
    if f.is_monomial():
        return MembershipWitness(_unit_quotient(f, h))
    unknowns = erosion_support(_box_of(h), _box_of(f))
    if not unknowns:
        return None
    col = {v: j for j, v in enumerate(unknowns)}
    rows: dict[ExpVec, dict[int, int]] = {e: {} for e in h.support()}
    f_terms = list(f.items())
    for v, j in col.items():
        for s, c in f_terms:
            rows.setdefault(vec_add(v, s), {})[j] = c
    order = sorted(rows)
    dense = [tuple(rows[e].get(j, 0) for j in range(len(unknowns))) for e in order]
    rhs = [h.coeff(e) for e in order]
    x = solve(FpMatrix.from_rows(dense, f.p, len(unknowns)), rhs, backend)
    if x is None:
        return None
    g = LaurentPoly(dict(zip(unknowns, x)), f.p, f.d)
    if f * g != h:
        raise AssertionError("divisibility solve produced an inexact quotient")
    return MembershipWitness(g)


@lru_cache(maxsize=4096)
def _kernel_rows(f: LaurentPoly, sites: tuple[ExpVec, ...], backend: str) -> tuple[tuple[int, ...], ...]:
    p = f.p
    n = len(sites)
    if f.is_monomial():
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    unknowns = erosion_support(IntBox.around(sites), _box_of(f))
    if not unknowns:
        return ()
    site_idx = {s: i for i, s in enumerate(sites)}
    f_terms = list(f.items())
    outside: dict[ExpVec, dict[int, int]] = {}
    for j, v in enumerate(unknowns):
        for s, c in f_terms:
            e = vec_add(v, s)
            if e not in site_idx:
                outside.setdefault(e, {})[j] = c
    kernel = nullspace_sparse([outside[e] for e in sorted(outside)], len(unknowns), p, backend)
    if not kernel:
        return ()
    images = []
    for g in kernel:
        b = [0] * n
        for j, gv in enumerate(g):
            if gv:
                v = unknowns[j]
                for s, c in f_terms:
                    # terms landing off the sites cancel by construction
                    i = site_idx.get(vec_add(v, s))
                    if i is not None:
                        b[i] = (b[i] + gv * c) % p
        images.append(tuple(b))
    red = row_reduce(FpMatrix.from_rows(images, p, n), backend)
    return tuple(red.rref)


def kernel_on_support(f: LaurentPoly, sites: Sequence[Sequence[int]], backend: str = "auto") -> KernelBasis:
    """Basis of site-indexed vectors b whose polynomial sum b_s u^s lies in <f>."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    pts = tuple(check_expvec(s, f.d) for s in sites)
    if not pts:
        raise ValueError("site set must be nonempty")
    if len(set(pts)) != len(pts):
        raise ValueError("sites must be distinct")
    # kernels are translation equivariant; normalising the corner improves cache reuse
    corner = IntBox.around(pts).lo
    normalized = tuple(vec_sub(s, corner) for s in pts)
    return KernelBasis(pts, _kernel_rows(f, normalized, backend), f.p)
