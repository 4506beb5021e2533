"""S-unit equations sum a_j x_j = 1 over a finitely generated subgroup of Q*.

Solutions are searched in an exponent box [-H, H]^d.  Degenerate solutions
(some proper sub-sum vanishes) come in families that grow with H, while the
non-degenerate ones stop appearing once H is large enough.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import WorkBoundExceeded

DEFAULT_MAX_WORK = 5_000_000
MAX_SUBSET_TERMS = 20

Degeneracy = tuple  # tuple of sorted 0-based index tuples; () means non-degenerate
NON_DEGENERATE: Degeneracy = ()


def _prime_factors(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _column_echelon(a: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int | None]]:
    """Unimodular column reduction a U = L with L in column echelon form.

    Returns (L, U, pivot column per row or None).
    """
    m = len(a)
    n = len(a[0]) if a else 0
    L = [row[:] for row in a]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        for M in (L, U):
            for row in M:
                row[dst] -= q * row[src]

    def swap(i: int, j: int) -> None:
        for M in (L, U):
            for row in M:
                row[i], row[j] = row[j], row[i]

    pivots: list[int | None] = []
    col = 0
    for r in range(m):
        if col >= n:
            pivots.append(None)
            continue
        while True:
            nz = [c for c in range(col, n) if L[r][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(L[r][c]))
            if best != col:
                swap(best, col)
            done = True
            for c in range(col + 1, n):
                if L[r][c]:
                    colop(c, col, L[r][c] // L[r][col])
                    if L[r][c]:
                        done = False
            if done:
                break
        if L[r][col] == 0:
            pivots.append(None)
        else:
            pivots.append(col)
            col += 1
    return L, U, pivots


def integer_solve(a: list[list[int]], b: list[int]) -> tuple[list[int], list[list[int]]] | None:
    """Particular integer solution and integer kernel basis of a x = b, or None."""
    n = len(a[0]) if a else 0
    L, U, pivots = _column_echelon(a)
    y = [0] * n
    for r, pc in enumerate(pivots):
        acc = sum(L[r][c] * y[c] for c in range(n) if c != pc)
        if pc is None:
            if acc != b[r]:
                return None
            continue
        q, rem = divmod(b[r] - acc, L[r][pc])
        if rem:
            return None
        y[pc] = q
    x = [sum(U[i][j] * y[j] for j in range(n)) for i in range(n)]
    used = {pc for pc in pivots if pc is not None}
    kernel = [[U[i][j] for i in range(n)] for j in range(n) if j not in used]
    return x, kernel


@dataclass(frozen=True)
class SUnitGroup:
    """The group generated by ``generators`` (and -1 when ``allow_sign``)."""

    generators: tuple[Fraction, ...]
    allow_sign: bool = False
    prime_support: tuple[int, ...] = field(init=False)
    valuation_matrix: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        gens = tuple(Fraction(g) for g in self.generators)
        if not gens:
            raise ValueError("at least one generator is required")
        if any(g == 0 for g in gens):
            raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", gens)
        primes: set[int] = set()
        for g in gens:
            primes |= set(_prime_factors(g.numerator)) | set(_prime_factors(g.denominator))
        support = tuple(sorted(primes))
        matrix = []
        for p in support:
            row = []
            for g in gens:
                vn, _ = _valuation(abs(g.numerator), p)
                vd, _ = _valuation(g.denominator, p)
                row.append(vn - vd)
            matrix.append(tuple(row))
        object.__setattr__(self, "prime_support", support)
        object.__setattr__(self, "valuation_matrix", tuple(matrix))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def element(self, exponents: Sequence[int], sign: int = 1) -> Fraction:
        x = Fraction(sign)
        for g, e in zip(self.generators, exponents):
            x *= g**e
        return x

    def independent(self) -> bool:
        m = [list(r) for r in self.valuation_matrix]
        if not m:
            return False
        _, _, pivots = _column_echelon(m)
        return sum(pc is not None for pc in pivots) == self.rank

    def _sign_of(self, exponents: Sequence[int]) -> int:
        neg = sum(e for g, e in zip(self.generators, exponents) if g < 0)
        return -1 if neg % 2 else 1


@dataclass(frozen=True)
class SUnitEquation:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) < 2:
            raise ValueError("an S-unit equation needs at least two terms")
        if any(c == 0 for c in cs):
            raise ValueError("coefficients must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coeffs, values)), Fraction(0))


@dataclass(frozen=True)
class SUnitSolution:
    values: tuple[Fraction, ...]
    exponents: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]
    degeneracy: Degeneracy

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracy)


def _canonical_search(
    g: SUnitGroup, target: list[int], sign: int, bound: int
) -> tuple[int, ...] | None:
    # smallest sup-norm first, then lexicographic
    V = g.valuation_matrix
    for r in range(bound + 1):
        hits = []
        for e in itertools.product(range(-r, r + 1), repeat=g.rank):
            if max((abs(x) for x in e), default=0) != r:
                continue
            if any(sum(row[j] * e[j] for j in range(g.rank)) != t for row, t in zip(V, target)):
                continue
            if not g.allow_sign and g._sign_of(e) != sign:
                continue
            hits.append(e)
        if hits:
            return min(hits)
    return None


def membership(g: SUnitGroup, q: Fraction, bound: int | None = None) -> tuple[tuple[int, ...], int] | None:
    """Exponents e and sign with q = sign * prod g_i^e_i, or None.

    For independent generators e is unique.  For dependent generators the
    representative of smallest sup-norm is returned (ties broken
    lexicographically).  With ``bound``, representatives whose sup-norm
    exceeds it are treated as absent.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 is never a group element")
    num, den = abs(q.numerator), q.denominator
    target = []
    for p in g.prime_support:
        vn, num = _valuation(num, p)
        vd, den = _valuation(den, p)
        target.append(vn - vd)
    if num != 1 or den != 1:
        return None
    q_sign = 1 if q > 0 else -1
    if not g.prime_support:
        # all generators are ±1
        e = (0,) * g.rank
        if q_sign == 1:
            return e, 1
        if g.allow_sign:
            return e, -1
        hit = _canonical_search(g, [], q_sign, 1)
        return (hit, 1) if hit is not None else None

    V = [list(r) for r in g.valuation_matrix]
    if g.allow_sign:
        sol = integer_solve(V, target)
    else:
        # parity row: sum of exponents on negative generators ≡ [q < 0] mod 2
        neg = [1 if x < 0 else 0 for x in g.generators]
        rows = [r + [0] for r in V] + [neg + [2]]
        sol = integer_solve(rows, target + [0 if q_sign == 1 else 1])
        if sol is not None:
            sol = (sol[0][:-1], [k[:-1] for k in sol[1]])
    if sol is None:
        return None
    particular, kernel = sol
    if not any(any(k) for k in kernel):
        e = tuple(particular)
        if bound is not None and max(abs(x) for x in e) > bound:
            return None
    else:
        limit = max(abs(x) for x in particular)
        if bound is not None:
            limit = min(limit, bound)
        e = _canonical_search(g, target, q_sign, limit)
        if e is None:
            return None
    sign = q_sign * g._sign_of(e)
    if sign == -1 and not g.allow_sign:
        raise AssertionError("sign constraint violated")
    return e, sign


def classify_degeneracy(eq: SUnitEquation, values: Sequence[Fraction]) -> Degeneracy:
    """All minimal nonempty proper index subsets whose weighted sub-sum is 0."""
    k = eq.k
    if len(values) != k:
        raise ValueError("need one value per coefficient")
    if k > MAX_SUBSET_TERMS:
        raise WorkBoundExceeded(f"subset scan limited to {MAX_SUBSET_TERMS} terms")
    terms = [a * Fraction(x) for a, x in zip(eq.coeffs, values)]
    if sum(terms) != 1:
        raise ValueError("values do not solve the equation")
    vanishing = []
    for size in range(1, k):
        for subset in itertools.combinations(range(k), size):
            if any(set(v) <= set(subset) for v in vanishing):
                continue
            if sum(terms[i] for i in subset) == 0:
                vanishing.append(subset)
    return tuple(vanishing)


def _box_elements(g: SUnitGroup, height: int) -> list[tuple[Fraction, tuple[int, ...], int]]:
    """Distinct group elements with a representative in the exponent box."""
    seen: dict[Fraction, tuple[tuple[int, ...], int]] = {}
    signs = (1, -1) if g.allow_sign else (1,)
    for e in itertools.product(range(-height, height + 1), repeat=g.rank):
        base = g.element(e)
        for s in signs:
            x = base * s
            rep = (max((abs(v) for v in e), default=0), e)
            cur = seen.get(x)
            if cur is None or rep < (max((abs(v) for v in cur[0]), default=0), cur[0]):
                seen[x] = (e, s)
    return [(x, e, s) for x, (e, s) in sorted(seen.items())]


def enumerate_solutions(
    eq: SUnitEquation, g: SUnitGroup, height: int, max_work: int = DEFAULT_MAX_WORK
) -> list[SUnitSolution]:
    """Every solution whose terms all have exponents in [-height, height].

    The first k-1 terms run over the box; the last term is solved for and
    tested with :func:`membership`.  Results are deduplicated by value and
    sorted by value tuple.
    """
    if height < 0:
        raise ValueError("height must be non-negative")
    box = _box_elements(g, height)
    work = len(box) ** (eq.k - 1)
    if work > max_work:
        raise WorkBoundExceeded(f"enumeration needs {work} steps, bound is {max_work}")
    *head, last = eq.coeffs
    found: dict[tuple[Fraction, ...], SUnitSolution] = {}
    for combo in itertools.product(box, repeat=eq.k - 1):
        partial = sum((a * x for a, (x, _, _) in zip(head, combo)), Fraction(0))
        rest = (1 - partial) / last
        if rest == 0:
            continue
        mem = membership(g, rest, bound=height)
        if mem is None:
            continue
        values = tuple(x for x, _, _ in combo) + (rest,)
        if values in found:
            continue
        exps = tuple(e for _, e, _ in combo) + (mem[0],)
        signs = tuple(s for _, _, s in combo) + (mem[1],)
        if eq.evaluate(values) != 1:
            raise AssertionError("enumerated tuple does not solve the equation")
        found[values] = SUnitSolution(values, exps, signs, classify_degeneracy(eq, values))
    return [found[v] for v in sorted(found)]


def naive_solutions(eq: SUnitEquation, g: SUnitGroup, height: int) -> set[tuple[Fraction, ...]]:
    """Brute-force solution values over the full product of exponent boxes."""
    box = [x for x, _, _ in _box_elements(g, height)]
    return {vals for vals in itertools.product(box, repeat=eq.k) if eq.evaluate(vals) == 1}


def degenerate_family_count(
    eq: SUnitEquation, g: SUnitGroup, subset: Iterable[int], height: int, max_work: int = DEFAULT_MAX_WORK
) -> int:
    """Number of box solutions whose sub-sum over ``subset`` (0-based) vanishes."""
    J = sorted(set(int(i) for i in subset))
    if not J or len(J) >= eq.k or J[0] < 0 or J[-1] >= eq.k:
        raise ValueError("subset must be a nonempty proper subset of the term indices")
    if len(J) == 1:
        # a_j x_j = 0 has no solution with x_j nonzero
        return 0
    count = 0
    for sol in enumerate_solutions(eq, g, height, max_work):
        if sum(eq.coeffs[i] * sol.values[i] for i in J) == 0:
            count += 1
    return count


def non_degenerate_counts(eq: SUnitEquation, g: SUnitGroup, heights: Iterable[int]) -> dict[int, int]:
    return {h: sum(not s.is_degenerate for s in enumerate_solutions(eq, g, h)) for h in heights}
