"""Exact row reduction over F_p.

Two backends share one contract: a dense numpy path for any prime and a
bitset path for p = 2 where each row is a Python int (bit j = column j).
Pivoting is deterministic in both: leftmost column first, and within a
column the lowest-index remaining row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import check_prime


@dataclass(frozen=True)
class FpMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            if any(not 0 <= x < self.p for x in r):
                raise ValueError(f"entries must be reduced mod {self.p}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> "FpMatrix":
        rows = [tuple(int(x) % p for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        return cls(tuple(rows), ncols, p)

    @property
    def nrows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class RowReduction:
    rank: int
    kernel: list[tuple[int, ...]]
    rref: list[tuple[int, ...]]  # nonzero rows only
    pivots: tuple[int, ...]


def _kernel_from_rref(rref: list[list[int]], pivots: list[int], ncols: int, p: int) -> list[tuple[int, ...]]:
    pivot_set = set(pivots)
    kernel = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, pc in zip(rref, pivots):
            if row[free]:
                v[pc] = (-row[free]) % p
        kernel.append(tuple(v))
    return kernel


def _rref_dense(rows: list[tuple[int, ...]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    if not rows or ncols == 0:
        return [], []
    m = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
    nrows = m.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, col]), -1, p)
        if inv != 1:
            m[r] = (m[r] * inv) % p
        others = np.flatnonzero(m[:, col])
        others = others[others != r]
        if others.size:
            factors = m[others, col][:, None]
            m[others] = (m[others] - factors * m[r][None, :]) % p
        pivots.append(col)
        r += 1
    return [list(map(int, m[i])) for i in range(r)], pivots


def _rref_gf2(rows: list[tuple[int, ...]], ncols: int) -> tuple[list[list[int]], list[int]]:
    work = []
    for row in rows:
        x = 0
        for j, v in enumerate(row):
            if v & 1:
                x |= 1 << j
        work.append(x)
    packed, pivots = gf2_rref_bits(work, ncols)
    return [[(x >> j) & 1 for j in range(ncols)] for x in packed], pivots


def gf2_rref_bits(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of bit-packed GF(2) rows."""
    work = list(rows)
    pivots: list[int] = []
    r = 0
    n = len(work)
    for col in range(ncols):
        if r == n:
            break
        bit = 1 << col
        piv = None
        for i in range(r, n):
            if work[i] & bit:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        for i in range(n):
            if i != r and work[i] & bit:
                work[i] ^= prow
        pivots.append(col)
        r += 1
    return work[:r], pivots


def row_reduce(m: FpMatrix, backend: str = "auto") -> RowReduction:
    """Rank, right kernel basis and reduced echelon form of ``m``.

    ``backend`` is "auto", "dense" or "bitset"; "bitset" requires p = 2.
    """
    if backend == "auto":
        backend = "bitset" if m.p == 2 else "dense"
    if backend == "bitset":
        if m.p != 2:
            raise ValueError("bitset backend requires p = 2")
        rref, pivots = _rref_gf2(list(m.rows), m.ncols)
    elif backend == "dense":
        rref, pivots = _rref_dense(list(m.rows), m.ncols, m.p)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    kernel = _kernel_from_rref(rref, pivots, m.ncols, m.p)
    return RowReduction(len(pivots), kernel, [tuple(r) for r in rref], tuple(pivots))


def solve(a: FpMatrix, rhs: Sequence[int], backend: str = "auto") -> tuple[int, ...] | None:
    """One solution x of a x = rhs (free variables set to 0), or None."""
    if len(rhs) != a.nrows:
        raise ValueError("right-hand side length does not match row count")
    p = a.p
    aug = FpMatrix.from_rows([r + (b % p,) for r, b in zip(a.rows, rhs)], p, a.ncols + 1)
    red = row_reduce(aug, backend)
    if red.pivots and red.pivots[-1] == a.ncols:
        return None
    x = [0] * a.ncols
    for row, pc in zip(red.rref, red.pivots):
        x[pc] = row[-1]
    return tuple(x)


def rank(m: FpMatrix, backend: str = "auto") -> int:
    return row_reduce(m, backend).rank


def nullspace_sparse(
    rows: Sequence[dict[int, int]], ncols: int, p: int, backend: str = "auto"
) -> list[tuple[int, ...]]:
    """Right kernel basis of a matrix given as sparse rows {col: value}.

    Same pivoting rule and output as ``row_reduce(...).kernel`` but skips the
    dense tuple representation, which matters for the large, very sparse
    systems assembled by the ideal computations.
    """
    if backend == "auto":
        backend = "bitset" if p == 2 else "dense"
    if ncols == 0:
        return []
    if backend == "bitset":
        if p != 2:
            raise ValueError("bitset backend requires p = 2")
        packed = []
        for row in rows:
            x = 0
            for j, v in row.items():
                if v & 1:
                    x |= 1 << j
            if x:
                packed.append(x)
        rref, pivots = gf2_rref_bits(packed, ncols)
        pivot_set = set(pivots)
        kernel = []
        for free in range(ncols):
            if free in pivot_set:
                continue
            v = [0] * ncols
            v[free] = 1
            bit = 1 << free
            for prow, pc in zip(rref, pivots):
                if prow & bit:
                    v[pc] = 1
            kernel.append(tuple(v))
        return kernel
    if backend != "dense":
        raise ValueError(f"unknown backend {backend!r}")
    dense = [tuple(row.get(j, 0) % p for j in range(ncols)) for row in rows]
    rref, pivots = _rref_dense(dense, ncols, p)
    return _kernel_from_rref(rref, pivots, ncols, p)
