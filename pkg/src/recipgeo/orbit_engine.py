"""Orbit-point enumeration in hyperbolic balls, Delsarte ratios and critical
exponent estimates.

Two enumeration routes:

* exact modular route: for a group that provably equals PSL(2,Z) (integer
  entries and both standard generators reachable from the marked generators),
  orbit points of a rational base point inside a ball around a rational
  center are enumerated bottom row by bottom row.  For a row (c, d) the
  points gamma.p with that row form the horizontal family z0 + t, so the
  admissible integer range of t is an exactly solvable quadratic
  inequality.  Completeness needs no frontier argument.

* generic route: Dijkstra-style frontier over the symmetric generator set,
  expanding every element whose point lies within L + slack.  Completeness
  is validated empirically (slack doubling, cross-checks against the exact
  route), not proven.

Membership tests stay rational in exact mode: a point is inside B(q, L) iff
cosh d(q, .) <= cosh L, and cosh d is a rational function of the
coordinates.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from recipgeo.group_model import GroupSpec, _ball
from recipgeo.hyp_core import (
    EXACT,
    Moebius,
    Point,
    S_GEN,
    T_GEN,
    apply,
    ball_volume,
    cosh_dist,
)


class OrbitBudgetError(RuntimeError):
    """Enumeration exceeded its budget; results would be incomplete."""


@dataclass(frozen=True, slots=True)
class OrbitPoint:
    point: Point
    witness: Moebius
    cosh_dist: object  # Fraction in exact mode, float otherwise


@dataclass(frozen=True)
class CountCurve:
    """Cumulative orbit counts (L, count), strictly increasing in L."""

    samples: tuple[tuple[float, int], ...]

    def __post_init__(self):
        ls = [l for l, _ in self.samples]
        if ls != sorted(set(ls)):
            raise ValueError("L values must be strictly increasing")
        counts = [c for _, c in self.samples]
        if any(c2 < c1 for c1, c2 in zip(counts, counts[1:])):
            raise ValueError("counts must be non-decreasing in L")


@dataclass(frozen=True)
class DelsarteResult:
    count: int
    predicted: float
    ratio: float


# -- modular-group routing ---------------------------------------------------

_MODULAR_CACHE: dict[str, bool] = {}


def _all_integral(spec: GroupSpec) -> bool:
    return all(
        all(isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1) for e in g.entries())
        for g in spec.generators
    )


def is_full_modular_group(spec: GroupSpec) -> bool:
    """True iff the generated group provably equals PSL(2,Z): integral
    entries (hence a subgroup) and both T and S in a small word ball (hence
    the whole group)."""
    if spec.mode != EXACT or not _all_integral(spec):
        return False
    cached = _MODULAR_CACHE.get(spec.name)
    if cached is not None:
        return cached
    ball = _ball(spec.symmetric_generators(), 4) if len(spec.generators) <= 4 else list(spec.generators)
    found = {T_GEN: False, S_GEN: False}
    for g in ball:
        if g == T_GEN:
            found[T_GEN] = True
        if g == S_GEN:
            found[S_GEN] = True
    result = all(found.values())
    _MODULAR_CACHE[spec.name] = result
    return result


# -- exact modular enumeration ------------------------------------------------


def _modular_rows_chunk_i(n2max: int, c_start: int, c_end: int) -> list[tuple[tuple[int, int], int, tuple[int, int, int, int]]]:
    """Orbit points gamma.i with bottom-row c in [c_start, c_end).

    Emits (point_key, n2, witness) with point_key = (a*c + b*d, c*c + d*d),
    i.e. gamma.i = (key[0] + i) / key[1], and n2 = Frobenius norm squared
    = 2 cosh d(i, gamma.i).
    """
    out = []
    isqrt = math.isqrt
    gcd = math.gcd
    if c_start == 0:
        # c == 0: projective reps are the shears [[1, b], [0, 1]]
        bmax = isqrt(n2max - 2) if n2max >= 2 else -1
        for b in range(-bmax, bmax + 1):
            out.append(((b, 1), 2 + b * b, (1, b, 0, 1)))
        c_start = 1
    for c in range(c_start, c_end):
        cc = c * c
        if cc >= n2max:
            break
        dmax = isqrt(n2max - cc)
        for d in range(-dmax, dmax + 1):
            if gcd(c, abs(d)) != 1:
                continue
            n = cc + d * d
            M = n2max - n
            if M <= 0:
                continue
            # a0*d - b0*c = 1 via extended euclid on (d, -c)
            a0, b0 = _det_one_top(c, d)
            B0 = a0 * c + b0 * d
            disc = n * M - 1
            if disc < 0:
                continue
            # membership (t*n + B0)^2 <= disc; since isqrt(disc) = floor(sqrt),
            # the integer range is exactly [-((B0+s)//n), (-B0+s)//n]
            s = isqrt(disc)
            t_hi = (-B0 + s) // n
            t_lo = -((B0 + s) // n)
            for t in range(t_lo, t_hi + 1):
                a = a0 + t * c
                b = b0 + t * d
                out.append(((a * c + b * d, n), a * a + b * b + n, (a, b, c, d)))
    return out


def _det_one_top(c: int, d: int) -> tuple[int, int]:
    """Some (a0, b0) with a0*d - b0*c = 1, gcd(c, d) = 1."""
    # extended euclid: x*d + y*c = 1  ->  a0 = x, b0 = -y
    old_r, r = d, c
    old_s, s = 1, 0
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    # old_r = gcd = +-1, old_s*d ≡ old_r (mod c)
    if old_r < 0:
        old_s = -old_s
        old_r = -old_r
    a0 = old_s
    b0 = (a0 * d - 1) // c if c != 0 else 0
    return a0, b0


def modular_orbit_i(n2max: int, threads: int = 1, budget: Optional[int] = None) -> dict:
    """Deduplicated PSL(2,Z)-orbit of i within Frobenius bound n2max.

    Returns {point_key: (n2, witness)} keeping the lexicographically smallest
    witness; identical content for every thread count.
    """
    cmax = math.isqrt(max(n2max - 2, 0)) + 1
    if threads <= 1 or cmax < 64:
        chunks = [_modular_rows_chunk_i(n2max, 0, cmax + 1)]
    else:
        bounds = _chunk_bounds(cmax + 1, threads)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_modular_rows_chunk_i, [n2max] * len(bounds), [b[0] for b in bounds], [b[1] for b in bounds]))
    merged: dict = {}
    for chunk in chunks:
        for key, n2, wit in chunk:
            prev = merged.get(key)
            if prev is None or wit < prev[1]:
                merged[key] = (n2, wit)
        if budget is not None and len(merged) > budget:
            raise OrbitBudgetError(f"orbit enumeration exceeded budget of {budget} points")
    return merged


def _chunk_bounds(n: int, parts: int) -> list[tuple[int, int]]:
    # weight chunks toward small c where rows have more admissible d values
    parts = max(1, min(parts, n))
    cuts = [round(n * (1 - math.sqrt(1 - i / parts))) for i in range(parts)] + [n]
    cuts = sorted(set(cuts))
    return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]


def _int_range_around(center: Fraction, radius_sq: Fraction) -> tuple[int, int]:
    """Integers t with (t - center)^2 <= radius_sq, exactly."""
    if radius_sq < 0:
        return 0, -1
    approx = math.sqrt(max(float(radius_sq), 0.0))
    lo = math.floor(float(center) - approx) - 2
    hi = math.ceil(float(center) + approx) + 2
    while (Fraction(lo) - center) ** 2 <= radius_sq:
        lo -= 1
    while (Fraction(lo) - center) ** 2 > radius_sq and lo <= hi:
        lo += 1
    while (Fraction(hi) - center) ** 2 <= radius_sq:
        hi += 1
    while (Fraction(hi) - center) ** 2 > radius_sq and hi >= lo:
        hi -= 1
    return lo, hi


def modular_orbit_rational(p: Point, q: Point, cosh_bound: Fraction, budget: Optional[int] = None) -> dict:
    """PSL(2,Z)-orbit points gamma.p with cosh d(q, gamma.p) <= cosh_bound.

    Exact and complete for rational p, q.  Returns
    {(x, y): (cosh_dist, witness)} with Fraction coordinates.
    """
    px, py = Fraction(p.x), Fraction(p.y)
    qx, qy = Fraction(q.x), Fraction(q.y)
    K = Fraction(cosh_bound)
    if K < 1:
        return {}
    merged: dict = {}

    def visit_row(c: int, d: int, a0: int, b0: int):
        den = (c * px + d) ** 2 + (c * py) ** 2
        yp = py / den
        # (x0 + t - qx)^2 <= 2 qy yp (K - 1) - (yp - qy)^2
        radius_sq = 2 * qy * yp * (K - 1) - (yp - qy) ** 2
        if radius_sq < 0:
            return
        # x0 = Re(gamma0 . p)
        num_x = a0 * c * (px * px + py * py) + (a0 * d + b0 * c) * px + b0 * d
        x0 = num_x / den
        t_lo, t_hi = _int_range_around(qx - x0, radius_sq)
        for t in range(t_lo, t_hi + 1):
            x = x0 + t
            key = (x.numerator, x.denominator, yp.numerator, yp.denominator)
            cd = 1 + ((x - qx) ** 2 + (yp - qy) ** 2) / (2 * qy * yp)
            wit = (a0 + t * c, b0 + t * d, c, d)
            prev = merged.get(key)
            if prev is None or wit < prev[1]:
                merged[key] = (cd, wit)
        if budget is not None and len(merged) > budget:
            raise OrbitBudgetError(f"orbit enumeration exceeded budget of {budget} points")

    # den <= py * (K + sqrt(K^2-1)) / qy < 2 K py / qy
    den_max_f = 2.0 * float(K) * float(py) / float(qy) + 1.0
    cmax = int(math.sqrt(den_max_f) / float(py)) + 2
    visit_row(0, 1, 1, 0)
    for c in range(1, cmax + 1):
        rem = den_max_f - float(c * c * py * py)
        if rem < 0:
            continue
        w = math.sqrt(rem)
        d_center = -float(c * px)
        for d in range(math.floor(d_center - w) - 1, math.ceil(d_center + w) + 2):
            if math.gcd(c, abs(d)) != 1:
                continue
            a0, b0 = _det_one_top(c, d)
            visit_row(c, d, a0, b0)
    return merged


# -- generic frontier enumeration ---------------------------------------------


class PointDeduper:
    """Spatial hash for float points with a tolerance ball and near-tie
    warnings (collisions closer than warn_radius but not merged)."""

    def __init__(self, merge_radius: float = 1e-9, warn_radius: float = 1e-8):
        self.merge_radius = merge_radius
        self.warn_radius = warn_radius
        self.cells: dict[tuple[int, int], list[tuple[float, float]]] = {}
        self.warnings: list[str] = []

    def _cell(self, x: float, y: float) -> tuple[int, int]:
        g = self.warn_radius
        return (round(x / g), round(y / g))

    def add(self, x: float, y: float) -> bool:
        """True if the point is new."""
        cx, cy = self._cell(x, y)
        for nx in (cx - 1, cx, cx + 1):
            for ny in (cy - 1, cy, cy + 1):
                for (ox, oy) in self.cells.get((nx, ny), ()):
                    d = math.hypot(x - ox, y - oy)
                    if d <= self.merge_radius:
                        return False
                    if d <= self.warn_radius:
                        self.warnings.append(
                            f"near-tie orbit points at distance {d:.3e}: ({x}, {y}) vs ({ox}, {oy})"
                        )
        self.cells.setdefault((cx, cy), []).append((x, y))
        return True


def max_generator_displacement(spec: GroupSpec, q: Point) -> float:
    from recipgeo.hyp_core import dist

    return max(dist(q, apply(g, q)) for g in spec.symmetric_generators())


def _frontier_orbit(
    spec: GroupSpec,
    p: Point,
    q: Point,
    L: float,
    punctured: bool,
    slack: Optional[float],
    budget: int,
) -> tuple[list[tuple[object, Point, Moebius]], list[str]]:
    if slack is None:
        slack = 2.0 * max_generator_displacement(spec, q)
    gens = spec.symmetric_generators()
    exact = spec.is_exact and p.is_exact and q.is_exact
    # membership decided on cosh(d): a rational inequality in exact mode
    K_in = Fraction(math.cosh(L)) if exact else math.cosh(L)
    K_expand = math.cosh(L + slack)

    def elem_key(g: Moebius):
        if exact:
            return g.entries()
        return tuple(round(float(e), 7) for e in g.entries())

    start = Moebius(1, 0, 0, 1) if exact else Moebius(1.0, 0.0, 0.0, 1.0, "floating")
    pt0 = apply(start, p)
    heap = [(float(cosh_dist(q, pt0)), 0, start, pt0)]
    seen = {elem_key(start)}
    results: list[tuple[object, Point, Moebius]] = []
    point_seen: set = set()
    deduper = PointDeduper()
    warnings: list[str] = []
    counter = 0
    popped = 0
    while heap:
        cd_f, _, g, pt = heapq.heappop(heap)
        popped += 1
        if popped > budget:
            raise OrbitBudgetError(f"frontier exceeded budget of {budget} elements")
        cd = cosh_dist(q, pt)
        at_center = (cd == 1) if exact else (cd_f <= 1 + 1e-14)
        if cd <= K_in and not (punctured and at_center):
            if exact:
                key = (pt.x, pt.y)
                if key not in point_seen:
                    point_seen.add(key)
                    results.append((cd, pt, g))
            else:
                if deduper.add(*pt.as_floats()):
                    results.append((cd, pt, g))
        if cd_f > K_expand:
            continue
        for s in gens:
            h = s @ g
            key = elem_key(h)
            if key in seen:
                continue
            seen.add(key)
            counter += 1
            hp = apply(h, p)
            heapq.heappush(heap, (float(cosh_dist(q, hp)), counter, h, hp))
    warnings.extend(deduper.warnings)
    results.sort(key=lambda r: (float(r[0]), r[1].as_floats()))
    return results, warnings


# -- public operations --------------------------------------------------------


def orbit_ball(
    spec: GroupSpec,
    p: Point,
    q: Point,
    L: float,
    punctured: bool = True,
    slack: Optional[float] = None,
    budget: int = 2_000_000,
    threads: int = 1,
) -> list[OrbitPoint]:
    """All orbit points of p within hyperbolic distance L of q.

    Complete in the exact modular route; complete up to the slack-validation
    protocol on the generic route.  Exceeding the budget raises
    OrbitBudgetError rather than silently truncating.
    """
    if L < 0:
        raise ValueError("L must be nonnegative")
    if is_full_modular_group(spec) and p.is_exact and q.is_exact:
        K = Fraction(math.cosh(L))
        items: list[OrbitPoint] = []
        if p == Point(0, 1) and q == Point(0, 1):
            n2max = _norm_bound_from_cosh(K)
            merged = modular_orbit_i(n2max, threads=threads, budget=budget)
            for (num, den), (n2, wit) in merged.items():
                cd = Fraction(n2, 2)
                if punctured and cd == 1:
                    continue
                items.append(
                    OrbitPoint(
                        point=Point(Fraction(num, den), Fraction(1, den)),
                        witness=Moebius(*wit),
                        cosh_dist=cd,
                    )
                )
        else:
            merged = modular_orbit_rational(p, q, K, budget=budget)
            for (xn, xd, yn, yd), (cd, wit) in merged.items():
                if punctured and cd == 1:
                    continue
                items.append(
                    OrbitPoint(
                        point=Point(Fraction(xn, xd), Fraction(yn, yd)),
                        witness=Moebius(*wit),
                        cosh_dist=cd,
                    )
                )
        items.sort(key=lambda op: (op.cosh_dist, op.point.x))
        return items
    rows, _warnings = _frontier_orbit(spec, p, q, L, punctured, slack, budget)
    return [OrbitPoint(point=pt, witness=g, cosh_dist=d) for d, pt, g in rows]


def _norm_bound_from_cosh(K: Fraction, warn: Optional[list] = None) -> int:
    """Frobenius bound 2 cosh L as an integer threshold, flagging near-ties."""
    val = 2 * K
    n = int(val)
    if warn is not None and abs(float(val) - round(float(val))) < 1e-9:
        warn.append(f"ball bound 2cosh(L) = {float(val)} is within 1e-9 of an integer")
    return n


def delsarte_ratio(spec: GroupSpec, p: Point, q: Point, R: float, threads: int = 1) -> DelsarteResult:
    """Compare |orbit ∩ B(q,R)| with vol(B)/(|Stab(p)| covol)."""
    if R <= 0:
        raise ValueError("R must be positive")
    if spec.covolume is None:
        raise ValueError("Delsarte prediction needs a finite covolume")
    pts = orbit_ball(spec, p, q, R, punctured=False, threads=threads)
    count = len(pts)
    predicted = ball_volume(R) / (spec.stabilizer_order(p) * spec.covolume)
    return DelsarteResult(count=count, predicted=predicted, ratio=count / predicted)


def count_curve(spec: GroupSpec, p: Point, q: Point, L_values: Sequence[float], threads: int = 1) -> CountCurve:
    """Cumulative punctured-ball counts at each L, from one enumeration."""
    L_max = max(L_values)
    pts = orbit_ball(spec, p, q, L_max, punctured=True, threads=threads)
    coshes = sorted(float(op.cosh_dist) for op in pts)
    samples = []
    for L in sorted(L_values):
        bound = math.cosh(L)
        samples.append((L, _count_leq(coshes, bound)))
    return CountCurve(samples=tuple(samples))


def _count_leq(sorted_vals: list[float], bound: float) -> int:
    import bisect

    return bisect.bisect_right(sorted_vals, bound)


def critical_exponent_estimate(curve: CountCurve, window: tuple[float, float]) -> float:
    """Least-squares slope of log(count) against L over the window."""
    lo, hi = window
    pts = [(L, c) for L, c in curve.samples if lo <= L <= hi and c > 0]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 positive samples in window {window}, got {len(pts)}")
    xs = [L for L, _ in pts]
    ys = [math.log(c) for _, c in pts]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx
