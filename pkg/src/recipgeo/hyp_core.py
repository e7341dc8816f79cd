"""Primitives for the hyperbolic plane in the upper half-plane model.

Group elements are unit-determinant 2x2 matrices acting as Mobius maps
z -> (az+b)/(cz+d), kept projectivized by a sign convention (first nonzero
entry positive).  Two arithmetic modes coexist behind the same types:

* exact  -- entries are ints/Fractions, every predicate is decided with
  integer arithmetic (no tolerance anywhere),
* floating -- entries are floats, comparisons use the module tolerance TAU.

Distances are carried as cosh(d) wherever possible: in exact mode
cosh d(p,q) = 1 + |p-q|^2 / (2 Im p Im q) is a rational number, so ball
membership is a rational inequality.  Lengths in radians of arccosh only
appear at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

#: Absolute comparison tolerance for floating mode.  Fixed (not scaled with
#: matrix norm); near-tie situations are reported by the consumers instead.
TAU = 1e-10

EXACT = "exact"
FLOATING = "floating"

Scalar = Union[int, Fraction, float]


def is_exact_scalar(v: Scalar) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


class IsometryKind(Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class ModeMismatchError(ValueError):
    pass


def _exact_div(n, d) -> Fraction:
    if isinstance(n, int) and isinstance(d, int):
        return Fraction(n, d)
    return Fraction(n) / Fraction(d)


@dataclass(frozen=True, slots=True)
class Point:
    """A point x + iy of the upper half-plane; y > 0 always."""

    x: Scalar
    y: Scalar

    def __post_init__(self):
        if self.is_exact:
            if self.y <= 0:
                raise ValueError(f"point not in upper half-plane: y = {self.y}")
        else:
            if not float(self.y) > 0:
                raise ValueError(f"point not in upper half-plane: y = {self.y}")

    @property
    def is_exact(self) -> bool:
        return is_exact_scalar(self.x) and is_exact_scalar(self.y)

    def as_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def to_floating(self) -> "Point":
        return Point(float(self.x), float(self.y))

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


I_POINT = Point(0, 1)


def _sign_normalize(entries, mode):
    for e in entries:
        if (e != 0) if mode == EXACT else (abs(e) > TAU):
            if e < 0:
                return tuple(-x for x in entries)
            return tuple(entries)
    raise ValueError("zero matrix is not a group element")


@dataclass(frozen=True, slots=True)
class Moebius:
    """Projectivized unit-determinant matrix [[a,b],[c,d]]."""

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar
    mode: str = EXACT

    def __post_init__(self):
        if self.mode not in (EXACT, FLOATING):
            raise ValueError(f"unknown mode {self.mode!r}")
        entries = (self.a, self.b, self.c, self.d)
        if self.mode == EXACT:
            if not all(is_exact_scalar(e) for e in entries):
                raise ValueError("exact mode requires int/Fraction entries")
            det = self.a * self.d - self.b * self.c
            if det != 1:
                raise ValueError(f"determinant must be 1, got {det}")
        else:
            entries = tuple(float(e) for e in entries)
            det = entries[0] * entries[3] - entries[1] * entries[2]
            if abs(det - 1.0) > 1e-9:
                raise ValueError(f"determinant must be 1 within tolerance, got {det}")
        a, b, c, d = _sign_normalize(entries, self.mode)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    # -- algebra ----------------------------------------------------------

    def compose(self, other: "Moebius") -> "Moebius":
        if self.mode != other.mode:
            raise ModeMismatchError(f"cannot compose {self.mode} with {other.mode}")
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.mode,
        )

    def __matmul__(self, other: "Moebius") -> "Moebius":
        return self.compose(other)

    def invert(self) -> "Moebius":
        # det = 1, so the inverse is the adjugate.
        return Moebius(self.d, -self.b, -self.c, self.a, self.mode)

    def __pow__(self, n: int) -> "Moebius":
        if n < 0:
            return self.invert() ** (-n)
        result = identity(self.mode)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self) -> Scalar:
        return self.a + self.d

    def entries(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c, self.d)

    def is_identity(self) -> bool:
        if self.mode == EXACT:
            return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)
        return (
            abs(self.a - 1) <= TAU
            and abs(self.b) <= TAU
            and abs(self.c) <= TAU
            and abs(self.d - 1) <= TAU
        )

    def is_involution(self) -> bool:
        """Order two in the projective group: trace 0 (|tr| <= TAU floating)."""
        if self.is_identity():
            return False
        t = self.trace()
        return t == 0 if self.mode == EXACT else abs(t) <= TAU

    def apply(self, p: Point) -> Point:
        """Mobius action; exact input stays exact."""
        if self.mode == EXACT and p.is_exact:
            x, y = p.x, p.y
            den = (self.c * x + self.d) ** 2 + (self.c * y) ** 2
            num_x = (
                self.a * self.c * (x * x + y * y)
                + (self.a * self.d + self.b * self.c) * x
                + self.b * self.d
            )
            return Point(_exact_div(num_x, den), _exact_div(y, den))
        a, b, c, d = (float(self.a), float(self.b), float(self.c), float(self.d))
        z = complex(*p.as_floats())
        w = (a * z + b) / (c * z + d)
        return Point(w.real, w.imag)

    def to_floating(self) -> "Moebius":
        return Moebius(float(self.a), float(self.b), float(self.c), float(self.d), FLOATING)

    def __repr__(self):
        return f"Moebius({self.a}, {self.b}, {self.c}, {self.d}, {self.mode})"


def identity(mode: str = EXACT) -> Moebius:
    return Moebius(1, 0, 0, 1, mode) if mode == EXACT else Moebius(1.0, 0.0, 0.0, 1.0, FLOATING)


def from_row(row, mode: str = EXACT) -> Moebius:
    a, b, c, d = row
    return Moebius(a, b, c, d, mode)


# Standard modular group elements.
T_GEN = Moebius(1, 1, 0, 1)          # z -> z + 1
S_GEN = Moebius(0, -1, 1, 0)         # z -> -1/z
R_GEN = T_GEN                        # positive-word letter R
L_GEN = Moebius(1, 0, 1, 1)          # positive-word letter L


# -- operations -------------------------------------------------------------


def compose(g: Moebius, h: Moebius) -> Moebius:
    return g.compose(h)


def invert(g: Moebius) -> Moebius:
    return g.invert()


def apply(g: Moebius, p: Point) -> Point:
    return g.apply(p)


def cosh_dist(p: Point, q: Point) -> Scalar:
    """cosh of the hyperbolic distance; exact rational for exact points."""
    if p.is_exact and q.is_exact:
        dx = p.x - q.x
        dy = p.y - q.y
        return 1 + _exact_div(dx * dx + dy * dy, 2 * p.y * q.y)
    px, py = p.as_floats()
    qx, qy = q.as_floats()
    return 1.0 + ((px - qx) ** 2 + (py - qy) ** 2) / (2.0 * py * qy)


def dist(p: Point, q: Point) -> float:
    """Hyperbolic distance, as a float (the cosh is exact where possible)."""
    c = float(cosh_dist(p, q))
    return math.acosh(max(c, 1.0))


def classify(g: Moebius) -> IsometryKind:
    if g.is_identity():
        return IsometryKind.IDENTITY
    t = abs(g.trace())
    if g.mode == EXACT:
        if t < 2:
            return IsometryKind.ELLIPTIC
        if t == 2:
            return IsometryKind.PARABOLIC
        return IsometryKind.HYPERBOLIC
    t = float(t)
    if abs(t - 2.0) <= TAU:
        return IsometryKind.PARABOLIC
    return IsometryKind.ELLIPTIC if t < 2.0 else IsometryKind.HYPERBOLIC


def translation_length(g: Moebius) -> float:
    """Length 2*arccosh(|tr|/2) of a hyperbolic element."""
    kind = classify(g)
    if kind is not IsometryKind.HYPERBOLIC:
        raise ValueError(f"translation length needs a hyperbolic element, got {kind.value}")
    return 2.0 * math.acosh(float(abs(g.trace())) / 2.0)


def involution_fixed_point(sigma: Moebius) -> Point:
    """The unique fixed point of an order-two element.

    For trace 0 and det 1 the lower-left entry never vanishes and the fixed
    point is ((a-d)/(2c), 1/|c|), exact in exact mode.
    """
    if not sigma.is_involution():
        raise ValueError("input is not an involution (projective order two)")
    a, c, d = sigma.a, sigma.c, sigma.d
    if sigma.mode == EXACT:
        x = Fraction(a - d, 2 * c)
        y = Fraction(1, abs(c))
        return Point(x, y)
    tr = float(a + d)
    x = (float(a) - float(d)) / (2.0 * float(c))
    y = math.sqrt(max(4.0 - tr * tr, 0.0)) / (2.0 * abs(float(c)))
    return Point(x, y)


def ball_volume(R: float) -> float:
    """Hyperbolic area 2*pi*(cosh R - 1) of a ball of radius R."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    return 2.0 * math.pi * (math.cosh(R) - 1.0)


def geodesic_sample(p: Point, q: Point, t: float) -> tuple[Point, float]:
    """Point at arc-length fraction t in [0,1] along the geodesic p -> q,
    together with the tangent direction angle in [0, 2pi)."""
    px, py = p.as_floats()
    qx, qy = q.as_floats()
    if px == qx and py == qy:
        raise ValueError("geodesic sampling needs two distinct points")
    if abs(px - qx) <= 1e-14 * max(1.0, abs(px), abs(qx)):
        # vertical line
        y = py * (qy / py) ** t
        angle = math.pi / 2 if qy > py else 3 * math.pi / 2
        return Point(px, y), angle
    center = (qx * qx + qy * qy - px * px - py * py) / (2.0 * (qx - px))
    r = math.hypot(px - center, py)
    phi_p = math.atan2(py, px - center)
    phi_q = math.atan2(qy, qx - center)
    # u = log tan(phi/2) is an arc-length coordinate along the semicircle
    u_p = math.log(math.tan(phi_p / 2.0))
    u_q = math.log(math.tan(phi_q / 2.0))
    u = u_p + t * (u_q - u_p)
    phi = 2.0 * math.atan(math.exp(u))
    z = complex(center + r * math.cos(phi), r * math.sin(phi))
    # dz/du = i r e^{i phi} sin(phi) * sign(u_q - u_p)
    tangent = 1j * complex(math.cos(phi), math.sin(phi)) * math.sin(phi)
    if u_q < u_p:
        tangent = -tangent
    angle = math.atan2(tangent.imag, tangent.real) % (2.0 * math.pi)
    return Point(z.real, z.imag), angle
