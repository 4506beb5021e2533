"""Dilation experiments for higher-order mixing.

For a shape s_0..s_k and a dilation n the sets A_j are pulled back to the
translates n*s_j.  The exact defect mu(⋂) - ∏ mu(A_j) is reported next to
the dimension of the space of shape polynomials sum c_j u^(n s_j) lying in
<f>; a nonzero such polynomial is a shape witness.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import ExpVec, LaurentPoly, check_expvec, shape_poly, vec_scale
from .haar import CylinderSpec, SystemSpec, cylinder_measure, joint_measure
from .ideal import divides, kernel_on_support


@dataclass(frozen=True)
class Shape:
    points: tuple[ExpVec, ...]

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in s) for s in self.points)
        if len(pts) < 2:
            raise ValueError("a shape needs at least two points")
        if len({len(s) for s in pts}) != 1:
            raise ValueError("shape points differ in dimension")
        if len(set(pts)) != len(pts):
            raise ValueError("shape points must be distinct")
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return len(self.points) - 1

    @property
    def d(self) -> int:
        return len(self.points[0])

    def dilate(self, n: int) -> list[ExpVec]:
        return [check_expvec(vec_scale(s, n), self.d) for s in self.points]


@dataclass(frozen=True)
class DefectRecord:
    n: int
    joint: Fraction
    product: Fraction
    defect: Fraction
    witness_dim: int


@dataclass(frozen=True)
class ShapeWitness:
    n: int
    coeffs: tuple[int, ...]
    quotient: LaurentPoly


def _check_shape(sys: SystemSpec, shape: Shape) -> None:
    if shape.d != sys.d:
        raise ValueError(f"shape dimension {shape.d} does not match system dimension {sys.d}")


def witness_dim(sys: SystemSpec, shape: Shape, n: int) -> int:
    if n < 1:
        raise ValueError("dilation must be a positive integer")
    _check_shape(sys, shape)
    return kernel_on_support(sys.f, shape.dilate(n)).dim


def shape_witness(sys: SystemSpec, shape: Shape, n: int) -> ShapeWitness | None:
    """First reduced basis element of the dilated shape kernel, with its quotient."""
    if n < 1:
        raise ValueError("dilation must be a positive integer")
    _check_shape(sys, shape)
    basis = kernel_on_support(sys.f, shape.dilate(n))
    if not basis.dim:
        return None
    coeffs = basis.rows[0]
    h = shape_poly(shape.points, coeffs, n, sys.p)
    found = divides(sys.f, h)
    if found is None:
        raise AssertionError("kernel element is not divisible by f")
    return ShapeWitness(n, tuple(coeffs), found.quotient)


def _defect_record(sys: SystemSpec, shape: Shape, cylinders: Sequence[CylinderSpec], n: int) -> DefectRecord:
    translates = shape.dilate(n)
    joint = joint_measure(sys, cylinders, translates).value
    product = Fraction(1)
    for c in cylinders:
        product *= cylinder_measure(sys, c).value
    dim = kernel_on_support(sys.f, translates).dim
    return DefectRecord(n, joint, product, joint - product, dim)


def _witness_entry(sys: SystemSpec, shape: Shape, n: int) -> tuple[int, int]:
    return n, witness_dim(sys, shape, n)


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("MIXLAB_THREADS", "1") or 1)
    return max(1, workers)


def _ordered_map(fn, args: list[tuple], workers: int) -> list:
    if workers == 1 or len(args) < 2:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args)))


def singleton_cylinders(shape: Shape, values: Sequence[int] | None = None) -> list[CylinderSpec]:
    """Single-site cylinders at the origin, one per shape point."""
    if values is None:
        values = [0] * len(shape.points)
    if len(values) != len(shape.points):
        raise ValueError("need one value per shape point")
    origin = (0,) * shape.d
    return [CylinderSpec(((origin, int(v)),)) for v in values]


def dilation_scan(
    sys: SystemSpec,
    shape: Shape,
    cylinders: Sequence[CylinderSpec],
    n_range: Sequence[int],
    workers: int | None = None,
) -> list[DefectRecord]:
    """Exact defect records for each dilation in ``n_range``, ordered by n."""
    _check_shape(sys, shape)
    if len(cylinders) != len(shape.points):
        raise ValueError("need one cylinder per shape point")
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise ValueError("empty dilation range")
    if ns[0] < 1:
        raise ValueError("dilations must be positive")
    for n in ns:
        shape.dilate(n)
    args = [(sys, shape, tuple(cylinders), n) for n in ns]
    return _ordered_map(_defect_record, args, _workers(workers))


def witness_scan(
    sys: SystemSpec, shape: Shape, n_range: Sequence[int], workers: int | None = None
) -> list[tuple[int, int]]:
    _check_shape(sys, shape)
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise ValueError("empty dilation range")
    if ns[0] < 1:
        raise ValueError("dilations must be positive")
    return _ordered_map(_witness_entry, [(sys, shape, n) for n in ns], _workers(workers))


def singleton_defects(sys: SystemSpec, shape: Shape, n: int) -> dict[tuple[int, ...], Fraction]:
    """Defect for every assignment of singleton values at dilation n."""
    out = {}
    for values in itertools.product(range(sys.p), repeat=len(shape.points)):
        rec = _defect_record(sys, shape, singleton_cylinders(shape, values), n)
        out[values] = rec.defect
    return out


def defect_assignment(sys: SystemSpec, shape: Shape, n: int) -> tuple[int, ...] | None:
    """Singleton values whose joint measure vanishes at dilation n, if a witness exists.

    Setting value 1 at the first nonzero witness coefficient and 0 elsewhere
    breaks the linear relation the witness imposes, so the intersection is
    empty while the product of singleton measures stays positive.
    """
    w = shape_witness(sys, shape, n)
    if w is None:
        return None
    j = next(i for i, c in enumerate(w.coeffs) if c)
    return tuple(int(i == j) for i in range(len(w.coeffs)))
