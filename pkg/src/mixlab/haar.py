"""Exact Haar measure of cylinder sets in X_f, the dual of F_p[u^±]/<f>.

Configurations are maps x: Z^d -> F_p with sum_e f_e x_{s+e} = 0 for every
site s.  The projection of X_f onto a finite site set S is the subspace
orthogonal to K = {b on S : sum b_s u^s in <f>}, so a cylinder has measure
p^(dim K - |S|) when its values are orthogonal to K and 0 otherwise.

Shift convention: (sigma^v x)_s = x_{s+v}.  The image sigma^v(A) of a
cylinder on S therefore fixes sites S - v; see :func:`translate_cylinder`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import ExpVec, LaurentPoly, check_expvec, inv_mod, vec_sub
from .errors import ModulusMismatch, WindowTooLarge
from .ideal import IntBox, kernel_on_support

DEFAULT_MAX_STATES = 1 << 24


@dataclass(frozen=True)
class SystemSpec:
    p: int
    d: int
    f: LaurentPoly

    def __post_init__(self):
        if self.f.is_zero():
            raise ValueError("the defining polynomial must be nonzero")
        if self.f.p != self.p or self.f.d != self.d:
            raise ModulusMismatch("polynomial modulus/dimension disagree with the system")

    @classmethod
    def ledrappier(cls) -> "SystemSpec":
        f = LaurentPoly({(0, 0): 1, (1, 0): 1, (0, 1): 1}, 2, 2)
        return cls(2, 2, f)


@dataclass(frozen=True)
class CylinderSpec:
    """Prescribed values on finitely many sites; no sites means the whole space."""

    assignments: tuple[tuple[ExpVec, int], ...] = ()

    def __post_init__(self):
        sites = [s for s, _ in self.assignments]
        if len(set(sites)) != len(sites):
            raise ValueError("cylinder sites must be distinct")
        object.__setattr__(self, "assignments", tuple(sorted(self.assignments)))

    @classmethod
    def from_map(cls, mapping: Mapping[Sequence[int], int]) -> "CylinderSpec":
        return cls(tuple((tuple(s), int(v)) for s, v in mapping.items()))

    @classmethod
    def from_lists(cls, sites: Sequence[Sequence[int]], values: Sequence[int]) -> "CylinderSpec":
        if len(sites) != len(values):
            raise ValueError("sites and values differ in length")
        pairs = [(tuple(s), int(v)) for s, v in zip(sites, values)]
        if len({s for s, _ in pairs}) != len(pairs):
            raise ValueError("cylinder sites must be distinct")
        return cls(tuple(pairs))

    @property
    def sites(self) -> tuple[ExpVec, ...]:
        return tuple(s for s, _ in self.assignments)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.assignments)

    def as_dict(self) -> dict[ExpVec, int]:
        return dict(self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)


@dataclass(frozen=True)
class MeasureResult:
    """An exact measure; ``exponent`` is m with value p^-m, or None for zero."""

    value: Fraction
    exponent: int | None

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    @classmethod
    def power(cls, p: int, m: int) -> "MeasureResult":
        return cls(Fraction(1, p**m), m)

    @classmethod
    def zero(cls) -> "MeasureResult":
        return cls(Fraction(0), None)


@dataclass(frozen=True)
class WindowOracleReport:
    window: IntBox
    image_size: int
    matching: int
    measure_estimate: Fraction
    stabilized: bool


def translate_cylinder(c: CylinderSpec, v: Sequence[int]) -> CylinderSpec:
    """The image sigma^v(A): every site s moves to s - v."""
    v = tuple(v)
    if not c.assignments:
        return c
    d = len(c.sites[0])
    check_expvec(v, d)
    return CylinderSpec(tuple((check_expvec(vec_sub(s, v), d), a) for s, a in c.assignments))


def merge_cylinders(cylinders: Iterable[CylinderSpec]) -> CylinderSpec | None:
    """Intersection of cylinders, or None when two of them disagree on a site."""
    merged: dict[ExpVec, int] = {}
    for c in cylinders:
        for s, a in c.assignments:
            if merged.setdefault(s, a) != a:
                return None
    return CylinderSpec(tuple(merged.items()))


def _reduced_values(sys: SystemSpec, c: CylinderSpec) -> tuple[int, ...]:
    for s in c.sites:
        check_expvec(s, sys.d)
    return tuple(a % sys.p for a in c.values)


def cylinder_measure(sys: SystemSpec, c: CylinderSpec) -> MeasureResult:
    if not c.assignments:
        return MeasureResult.power(sys.p, 0)
    values = _reduced_values(sys, c)
    basis = kernel_on_support(sys.f, c.sites)
    if not basis.annihilates(values):
        return MeasureResult.zero()
    return MeasureResult.power(sys.p, len(values) - basis.dim)


def joint_measure(
    sys: SystemSpec, cylinders: Sequence[CylinderSpec], translates: Sequence[Sequence[int]]
) -> MeasureResult:
    """Measure of A_0 ∩ sigma^-v_1 A_1 ∩ ... ∩ sigma^-v_k A_k.

    Each A_j is pulled back along its translate, {x : (sigma^v_j x) in A_j},
    so a cylinder on S_j constrains x on S_j + v_j.
    """
    if len(cylinders) != len(translates):
        raise ValueError("need one translate per cylinder")
    if not cylinders:
        raise ValueError("at least one cylinder is required")
    moved = [translate_cylinder(c, tuple(-x for x in v)) for c, v in zip(cylinders, translates)]
    merged = merge_cylinders(moved)
    if merged is None:
        return MeasureResult.zero()
    return cylinder_measure(sys, merged)


def window_image(
    sys: SystemSpec, sites: Sequence[Sequence[int]], window: IntBox, max_states: int = DEFAULT_MAX_STATES
) -> set[tuple[int, ...]]:
    """Distinct restrictions to ``sites`` of window configurations obeying f.

    A configuration on the window is valid when every translate of f lying
    entirely inside the window annihilates it.  Cells are swept in
    lexicographic order while keeping only the set of distinct partial
    states on cells that still matter: the requested sites, and cells of
    constraints not yet closed.  Whenever a cell closes a constraint its
    value is forced, so the work tracks the number of valid partial
    states rather than p^|window|.
    """
    p = sys.p
    sites = [check_expvec(s, sys.d) for s in sites]
    for s in sites:
        if not window.contains(s):
            raise ValueError(f"site {s} lies outside the window")
    cells = window.points()
    index = {c: i for i, c in enumerate(cells)}
    f_terms = list(sys.f.items())
    flo, fhi = sys.f.bounding_box()
    alo = tuple(w - a for w, a in zip(window.lo, flo))
    ahi = tuple(w - b for w, b in zip(window.hi, fhi))
    constraints: list[list[tuple[int, int]]] = []
    if all(a <= b for a, b in zip(alo, ahi)):
        for a in IntBox(alo, ahi).points():
            cons = [(index[tuple(x + y for x, y in zip(a, e))], c) for e, c in f_terms]
            cons.sort()
            constraints.append(cons)

    ending: dict[int, list[list[tuple[int, int]]]] = {}
    last_use = {i: -1 for i in range(len(cells))}
    for cons in constraints:
        end = cons[-1][0]
        ending.setdefault(end, []).append(cons)
        for i, _ in cons:
            last_use[i] = max(last_use[i], end)
    site_cells = {index[s] for s in sites}
    for i in site_cells:
        last_use[i] = len(cells)

    live: list[int] = []
    states: set[tuple[int, ...]] = {()}
    for i in range(len(cells)):
        if last_use[i] < i:
            # unconstrained cell outside the sites: projects away
            continue
        pos = {cell: k for k, cell in enumerate(live)}
        closing = ending.get(i, [])
        keep = [k for k, cell in enumerate(live) if last_use[cell] > i]
        keep_new = last_use[i] > i
        nxt: set[tuple[int, ...]] = set()
        if closing:
            first, rest = closing[0], closing[1:]
            lead = first[-1][1]
            neg_inv = (-inv_mod(lead, p)) % p
            for st in states:
                val = neg_inv * sum(st[pos[j]] * c for j, c in first[:-1]) % p
                ok = all(
                    (sum(st[pos[j]] * c for j, c in cons[:-1]) + cons[-1][1] * val) % p == 0
                    for cons in rest
                )
                if ok:
                    kept = tuple(st[k] for k in keep)
                    nxt.add(kept + (val,) if keep_new else kept)
        else:
            for st in states:
                kept = tuple(st[k] for k in keep)
                if keep_new:
                    for val in range(p):
                        nxt.add(kept + (val,))
                else:
                    nxt.add(kept)
        if len(nxt) > max_states:
            raise WindowTooLarge(f"window enumeration exceeded {max_states} states")
        states = nxt
        live = [live[k] for k in keep] + ([i] if keep_new else [])

    order = [live.index(index[s]) for s in sites]
    return {tuple(st[k] for k in order) for st in states}


def window_oracle(
    sys: SystemSpec,
    c: CylinderSpec,
    window: IntBox | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> WindowOracleReport:
    """Enumeration estimate of a cylinder measure from a finite window.

    The image is recomputed on the window grown by one and by two cells in
    every direction; ``stabilized`` records that all three images agree.
    """
    if not c.assignments:
        if window is None:
            raise ValueError("a window is required for the empty cylinder")
        return WindowOracleReport(window, 1, 1, Fraction(1), True)
    if window is None:
        window = IntBox.around(c.sites)
    values = _reduced_values(sys, c)
    images = [window_image(sys, c.sites, window.grow(k), max_states) for k in range(3)]
    image = images[0]
    matching = 1 if values in image else 0
    return WindowOracleReport(
        window=window,
        image_size=len(image),
        matching=matching,
        measure_estimate=Fraction(matching, len(image)),
        stabilized=images[0] == images[1] == images[2],
    )
