"""Closed-form geometry of N(T) and D(T).

Volumes come from the regular ideal octahedron, cusp data from the edge
valences, and the hyperbolicity certificates from the angle structure that
puts ``2*pi/v`` on every edge of valence ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .triangulation import EDGES, EDGE_INDEX, Triangulation, edge_classes


# ---------------------------------------------------------------------------
# Lobachevsky function


@lru_cache(maxsize=None)
def _bernoulli_even(count: int) -> tuple[Fraction, ...]:
    """B_2, B_4, ..., B_{2*count} (Akiyama-Tanigawa)."""
    size = 2 * count + 1
    a = [Fraction(0)] * (size + 1)
    out = []
    for m in range(size + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _series_coefficients(count: int = 40) -> tuple[float, ...]:
    # Lambda(x) = x - x*log(2x) + sum_k c_k x^(2k+1) on |x| <= pi/2, with
    # c_k = (-1)^(k+1) 2^(2k-1) B_2k / (k (2k)! (2k+1)) > 0
    coeffs = []
    for k, b in enumerate(_bernoulli_even(count), start=1):
        c = Fraction((-1) ** (k + 1) * 2 ** (2 * k - 1)) * b / (k * math.factorial(2 * k) * (2 * k + 1))
        coeffs.append(float(c))
    return tuple(coeffs)


def lobachevsky(theta: float) -> float:
    """Lambda(theta) = -int_0^theta log|2 sin t| dt.

    Odd and pi-periodic.  After reducing to |x| <= pi/2 we sum the Taylor
    series of log(sin x / x); its terms decay like (x/pi)^(2k) <= 4^-k, so
    the truncation error after 40 terms is far below 1e-16.
    """
    if not math.isfinite(theta):
        raise ValueError("lobachevsky needs a finite argument")
    x = math.remainder(theta, math.pi)
    if x == 0.0:
        return 0.0
    sgn = 1.0 if x > 0 else -1.0
    x = abs(x)
    x2 = x * x
    total = 0.0
    power = x * x2
    for c in _series_coefficients():
        term = c * power
        total += term
        if term < 1e-18:
            break
        power *= x2
    return sgn * (x - x * math.log(2.0 * x) + total)


V_OCTAHEDRON = 8.0 * lobachevsky(math.pi / 4)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CuspShape:
    edge_class: int
    valence: int
    orientable: bool
    area: float
    meridian_length: float
    longitude_length: float | None
    shape_kind: str
    nonmeridinal_min_length: float


@dataclass(frozen=True)
class VolumeReport:
    n: int
    v_O: float
    vol_N: float
    vol_D: float
    genus: int
    boundary_euler: int
    pm_complexity: int
    cusp_horoball_volumes: tuple[int, ...]
    total_horoball_volume: int


def cusp_shapes(T: Triangulation) -> list[CuspShape]:
    out = []
    for e in edge_classes(T):
        q = e.valence
        out.append(CuspShape(
            edge_class=e.index,
            valence=q,
            orientable=e.orientable,
            area=2.0 * q,
            meridian_length=2.0,
            longitude_length=float(q) if e.orientable else None,
            shape_kind="rectangle" if e.orientable else "rhombus",
            nonmeridinal_min_length=float(q),
        ))
    return out


def volume_report(T: Triangulation) -> VolumeReport:
    n = T.n
    horo = tuple(e.valence for e in edge_classes(T))
    return VolumeReport(
        n=n,
        v_O=V_OCTAHEDRON,
        vol_N=n * V_OCTAHEDRON,
        vol_D=2 * n * V_OCTAHEDRON,
        genus=n + 1,
        boundary_euler=-2 * n,
        pm_complexity=10 * n,
        cusp_horoball_volumes=horo,
        total_horoball_volume=6 * n,
    )


# ---------------------------------------------------------------------------
# certificates

NONE_BELOW_6 = "NONE_BELOW_6"
VALENCE_6 = "VALENCE_6"
VALENCE_7 = "VALENCE_7"

CLAIM_HYPERBOLIC_EDGES = "ideal-triangulation-hyperbolic-with-essential-edges"
CLAIM_HAKEN_FILLINGS = "nonmeridinal-fillings-haken-with-essential-cores"
CLAIM_HYPERBOLIC_FILLINGS = "nonmeridinal-fillings-hyperbolic"
CLAIM_ONE_EXCEPTIONAL = "at-most-one-exceptional-slope-per-cusp"


@dataclass(frozen=True)
class Certificate:
    kind: str
    min_valence: int
    cusps: tuple[tuple[int, int], ...] = ()          # (valence, non-meridinal length bound)
    claims: tuple[str, ...] = ()
    angle_assignment: dict[int, float] = field(default_factory=dict)
    vertex_sums: dict[tuple[int, int], float] = field(default_factory=dict)

    def check(self) -> bool:
        """Re-verify the internal arithmetic of the certificate."""
        if self.kind == NONE_BELOW_6:
            return not self.claims and self.min_valence < 6
        tol = 1e-12
        ok = self.min_valence >= 6 and all(s <= math.pi + tol for s in self.vertex_sums.values())
        if self.kind == VALENCE_7:
            ok = ok and self.min_valence >= 7 and all(b == q for q, b in self.cusps)
        return ok


def certify(T: Triangulation) -> Certificate:
    classes = edge_classes(T)
    vmin = min(e.valence for e in classes)
    if vmin < 6:
        return Certificate(NONE_BELOW_6, vmin)
    angle = {e.index: 2 * math.pi / e.valence for e in classes}
    of_wedge = {}
    for e in classes:
        for t, ab in e.wedges:
            of_wedge[(t, ab)] = e.index
    sums = {}
    for t in range(T.n):
        for v in range(4):
            s = 0.0
            for w in range(4):
                if w != v:
                    s += angle[of_wedge[(t, (min(v, w), max(v, w)))]]
            if s > math.pi * (1 + 1e-12):
                raise AssertionError(f"angle sum {s} exceeds pi at vertex {v} of tetrahedron {t}")
            sums[(t, v)] = s
    claims = [CLAIM_HYPERBOLIC_EDGES, CLAIM_HAKEN_FILLINGS]
    kind = VALENCE_6
    cusps = tuple((e.valence, e.valence) for e in classes)
    if vmin >= 7:
        kind = VALENCE_7
        claims += [CLAIM_HYPERBOLIC_FILLINGS, CLAIM_ONE_EXCEPTIONAL]
    return Certificate(kind, vmin, cusps, tuple(claims), angle, sums)


# ---------------------------------------------------------------------------
# exceptional detector

HALF = Fraction(1, 2)
# r-value of a class whose valence changes, keyed by (valence, orientable)
SPECIAL_R = {
    (1, True): Fraction(2),
    (4, True): Fraction(1, 8),
    (1, False): Fraction(1),
    (2, True): Fraction(1, 4),
}
# non-trivial octahedron types: value at a vertex, at its opposite, at the
# four others
OCTAHEDRON_TYPES = {
    "b": (Fraction(2), HALF, Fraction(1, 8)),
    "c": (Fraction(1), Fraction(1), Fraction(1, 4)),
}


def _allowed(profile: tuple[int, bool], r: Fraction) -> bool:
    return r == HALF or SPECIAL_R.get(profile) == r


def exceptional_candidate(T: Triangulation) -> bool:
    """Conservative test for the triangulations whose double admits a second
    decomposition into blocks.

    ``False`` is a proof that ``T`` is not exceptional.  Every tetrahedron
    must carry one of the non-trivial octahedron patterns of horoball
    volumes ``r`` on its six edges (opposite edges are opposite octahedron
    vertices), all tetrahedra of the same type, with ``r`` constant on each
    edge class and compatible with the class's (valence, orientability).
    """
    if T.n == 1:
        return True
    classes = edge_classes(T)
    cls_of = [0] * (6 * T.n)
    profile = {}
    for e in classes:
        profile[e.index] = (e.valence, e.orientable)
        for t, ab in e.wedges:
            cls_of[6 * t + EDGE_INDEX[ab]] = e.index

    for top, opp, rest in OCTAHEDRON_TYPES.values():
        options = []
        for t in range(T.n):
            opts = []
            for i, (a, b) in enumerate(EDGES):
                j = 5 - i  # EDGES is ordered so that opposite edges sum to 5
                vals = {}
                ok = True
                for k in range(6):
                    r = top if k == i else opp if k == j else rest
                    c = cls_of[6 * t + k]
                    if not _allowed(profile[c], r) or vals.get(c, r) != r:
                        ok = False
                        break
                    vals[c] = r
                if ok:
                    opts.append(vals)
            if not opts:
                break
            options.append(opts)
        else:
            if _consistent_choice(options):
                return True
    return False


def _consistent_choice(options) -> bool:
    """Pick one option per tetrahedron so that the chosen class values agree."""
    stack = [(0, {})]
    while stack:
        t, assigned = stack.pop()
        if t == len(options):
            return True
        for vals in options[t]:
            if all(assigned.get(c, r) == r for c, r in vals.items()):
                new = dict(assigned)
                new.update(vals)
                stack.append((t + 1, new))
    return False
