"""Exact experiments on higher-order mixing of algebraic Z^d shifts over F_p
and on S-unit equations over Q and F_p(t)."""

from .algebra import LaurentPoly, frobenius_power, poly_add, poly_mul, shape_poly
from .haar import (
    CylinderSpec,
    MeasureResult,
    SystemSpec,
    cylinder_measure,
    joint_measure,
    merge_cylinders,
    translate_cylinder,
    window_oracle,
)
from .ideal import IntBox, KernelBasis, divides, erosion_support, kernel_on_support
from .linalg import FpMatrix, row_reduce
from .mixing import (
    DefectRecord,
    Shape,
    ShapeWitness,
    dilation_scan,
    shape_witness,
    singleton_cylinders,
    witness_scan,
)
from .sunit import (
    SUnitEquation,
    SUnitGroup,
    SUnitSolution,
    classify_degeneracy,
    degenerate_family_count,
    enumerate_solutions,
    membership,
)
from .ratfunc import FpPoly, RatFunc, frobenius_orbit
from .text import parse_poly

__version__ = "0.1.0"

__all__ = [
    "CylinderSpec",
    "DefectRecord",
    "FpMatrix",
    "FpPoly",
    "IntBox",
    "KernelBasis",
    "LaurentPoly",
    "MeasureResult",
    "RatFunc",
    "SUnitEquation",
    "SUnitGroup",
    "SUnitSolution",
    "Shape",
    "ShapeWitness",
    "SystemSpec",
    "classify_degeneracy",
    "cylinder_measure",
    "degenerate_family_count",
    "dilation_scan",
    "divides",
    "enumerate_solutions",
    "erosion_support",
    "frobenius_orbit",
    "frobenius_power",
    "joint_measure",
    "kernel_on_support",
    "membership",
    "merge_cylinders",
    "parse_poly",
    "poly_add",
    "poly_mul",
    "row_reduce",
    "shape_poly",
    "shape_witness",
    "singleton_cylinders",
    "translate_cylinder",
    "window_oracle",
    "witness_scan",
]
