"""Fuchsian groups with 2-torsion, described as data.

A group is a marked generating set plus a list of involution conjugacy-class
representatives with their normalizer orders, the orbifold Euler
characteristic and (optionally) the covolume.  Class representatives are
supplied, not discovered: computing a full set of involution classes for an
arbitrary lattice would need a fundamental domain.  A brute-force word search
(verify_normalizer_order) lets callers check the declared orders.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from recipgeo.hyp_core import (
    EXACT,
    FLOATING,
    TAU,
    Moebius,
    Point,
    S_GEN,
    T_GEN,
    apply,
    cosh_dist,
    identity,
    involution_fixed_point,
)


class GroupValidationError(ValueError):
    """A group description violates one of its invariants."""


@dataclass(frozen=True, slots=True)
class InvolutionClass:
    rep: Moebius
    fixed_point: Point
    normalizer_order: int

    def __post_init__(self):
        if not self.rep.is_involution():
            raise GroupValidationError("involution representative is not order 2")
        fp = involution_fixed_point(self.rep)
        if self.rep.mode == EXACT:
            ok = fp == self.fixed_point
        else:
            fx, fy = fp.as_floats()
            gx, gy = self.fixed_point.as_floats()
            ok = abs(fx - gx) <= 1e-8 and abs(fy - gy) <= 1e-8
        if not ok:
            raise GroupValidationError(
                f"fixed_point {self.fixed_point} does not match the representative's fixed point {fp}"
            )
        if self.normalizer_order < 1:
            raise GroupValidationError("normalizer_order must be a positive integer")


@dataclass(frozen=True)
class GroupSpec:
    name: str
    mode: str
    generators: tuple[Moebius, ...]
    involution_classes: tuple[InvolutionClass, ...]
    euler_char: Optional[Fraction]  # None for infinite-covolume subgroups
    covolume: Optional[float] = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.involution_classes:
            raise GroupValidationError("a group spec needs at least one involution class")
        for g in self.generators:
            if g.mode != self.mode:
                raise GroupValidationError("generator mode does not match group mode")
        for cls in self.involution_classes:
            if cls.rep.mode != self.mode:
                raise GroupValidationError("involution class mode does not match group mode")
        if self.euler_char is not None:
            if self.euler_char >= 0:
                raise GroupValidationError("orbifold Euler characteristic must be negative")
            expected = 2.0 * math.pi * abs(float(self.euler_char))
            if self.covolume is not None and abs(self.covolume - expected) > 1e-8:
                raise GroupValidationError(
                    f"covolume {self.covolume} inconsistent with 2*pi*|euler_char| = {expected}"
                )
            if self.covolume is None:
                object.__setattr__(self, "covolume", expected)
        _check_class_non_conjugacy(self)

    @property
    def is_exact(self) -> bool:
        return self.mode == EXACT

    def symmetric_generators(self) -> tuple[Moebius, ...]:
        """Generators closed under inversion, deduplicated."""
        out: list[Moebius] = []
        seen = set()
        for g in self.generators:
            for h in (g, g.invert()):
                key = _element_key(h)
                if key not in seen:
                    seen.add(key)
                    out.append(h)
        return tuple(out)

    def stabilizer_order(self, p: Point) -> int:
        """Order of Stab(p) as declared: the normalizer order of a class whose
        fixed point is p, else 1 (generic points have trivial stabilizer)."""
        for cls in self.involution_classes:
            if self.is_exact and p.is_exact:
                if cls.fixed_point == p:
                    return cls.normalizer_order
            else:
                fx, fy = cls.fixed_point.as_floats()
                px, py = p.as_floats()
                if abs(fx - px) <= 1e-9 and abs(fy - py) <= 1e-9:
                    return cls.normalizer_order
        return 1


def _element_key(g: Moebius):
    if g.mode == EXACT:
        return g.entries()
    return tuple(round(float(e) / 1e-8) for e in g.entries())


def _ball(generators: Sequence[Moebius], word_bound: int) -> list[Moebius]:
    """All elements of word length <= word_bound over the symmetric set."""
    mode = generators[0].mode if generators else EXACT
    frontier = [identity(mode)]
    seen = {_element_key(frontier[0])}
    out = list(frontier)
    for _ in range(word_bound):
        nxt = []
        for g in frontier:
            for s in generators:
                h = g @ s
                key = _element_key(h)
                if key not in seen:
                    seen.add(key)
                    nxt.append(h)
        out.extend(nxt)
        frontier = nxt
    return out


def _check_class_non_conjugacy(spec: GroupSpec, word_bound: int = 4) -> None:
    if len(spec.involution_classes) < 2:
        return
    gens = spec.symmetric_generators()
    ball = _ball(gens, word_bound)
    reps = [cls.rep for cls in spec.involution_classes]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            for w in ball:
                if w @ reps[i] @ w.invert() == reps[j]:
                    raise GroupValidationError(
                        f"involution classes {i} and {j} are conjugate (word length <= {word_bound})"
                    )


def verify_normalizer_order(spec: GroupSpec, k: int, word_bound: int) -> int:
    """Count group elements of word length <= word_bound fixing the k-th class
    fixed point.  Stabilizes at the declared normalizer order once the bound
    is large enough."""
    if word_bound < 0:
        raise ValueError("word_bound must be >= 0")
    cls = spec.involution_classes[k]
    p = cls.fixed_point
    count = 0
    for g in _ball(spec.symmetric_generators(), word_bound):
        q = apply(g, p)
        if spec.is_exact:
            if q == p:
                count += 1
        else:
            qx, qy = q.as_floats()
            px, py = p.as_floats()
            if abs(qx - px) <= 1e-7 and abs(qy - py) <= 1e-7:
                count += 1
    return count


# -- built-in groups --------------------------------------------------------


def _rotation_about(x: float, y: float, theta: float) -> Moebius:
    """Elliptic element of rotation angle theta fixing x + iy (floating)."""
    s = math.sqrt(y)
    move = Moebius(s, x / s, 0.0, 1.0 / s, FLOATING)
    t = theta / 2.0
    spin = Moebius(math.cos(t), -math.sin(t), math.sin(t), math.cos(t), FLOATING)
    return move @ spin @ move.invert()


def _triangle_237() -> GroupSpec:
    # Rotation generators of the (2,3,7) von Dyck group: order-2 rotation at
    # the right-angle vertex (placed at i), order-3 at distance c up the
    # imaginary axis, with cosh c = cos(pi/7) / (sin(pi/2) sin(pi/3)).
    a_ang, b_ang, c_ang = math.pi / 2, math.pi / 3, math.pi / 7
    side = math.acosh(
        (math.cos(a_ang) * math.cos(b_ang) + math.cos(c_ang)) / (math.sin(a_ang) * math.sin(b_ang))
    )
    rot2 = _rotation_about(0.0, 1.0, 2 * a_ang)
    rot3 = _rotation_about(0.0, math.exp(side), 2 * b_ang)
    invol = InvolutionClass(rep=rot2, fixed_point=Point(0.0, 1.0), normalizer_order=2)
    return GroupSpec(
        name="triangle237",
        mode=FLOATING,
        generators=(rot2, rot3),
        involution_classes=(invol,),
        euler_char=Fraction(-1, 42),
    )


def _psl2z() -> GroupSpec:
    invol = InvolutionClass(rep=S_GEN, fixed_point=Point(0, 1), normalizer_order=2)
    return GroupSpec(
        name="psl2z",
        mode=EXACT,
        generators=(T_GEN, S_GEN),
        involution_classes=(invol,),
        euler_char=Fraction(-1, 6),
    )


_BUILTINS = {"psl2z": _psl2z, "triangle237": _triangle_237}


def builtin_group(name: str) -> GroupSpec:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown builtin group {name!r}; choose from {sorted(_BUILTINS)}") from None


# -- serialization ----------------------------------------------------------


def _scalar_to_json(v, mode: str):
    if mode == EXACT:
        f = Fraction(v)
        return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)
    return float(v)


def _scalar_from_json(v, mode: str):
    if mode == EXACT:
        if isinstance(v, str):
            return Fraction(v)
        if isinstance(v, int):
            return v
        raise GroupValidationError(f"exact mode expects integer or 'p/q' string, got {v!r}")
    return float(v)


def group_to_json(spec: GroupSpec) -> dict:
    return {
        "name": spec.name,
        "mode": spec.mode,
        "generators": [[_scalar_to_json(e, spec.mode) for e in g.entries()] for g in spec.generators],
        "involutions": [
            {
                "rep": [_scalar_to_json(e, spec.mode) for e in cls.rep.entries()],
                "normalizer_order": cls.normalizer_order,
            }
            for cls in spec.involution_classes
        ],
        "euler_char": None
        if spec.euler_char is None
        else f"{spec.euler_char.numerator}/{spec.euler_char.denominator}",
        "covolume": spec.covolume,
    }


def group_from_json(data: dict) -> GroupSpec:
    try:
        mode = data["mode"]
        if mode not in (EXACT, FLOATING):
            raise GroupValidationError(f"mode must be 'exact' or 'floating', got {mode!r}")
        gens = tuple(
            Moebius(*[_scalar_from_json(e, mode) for e in row], mode=mode) for row in data["generators"]
        )
        classes = []
        for item in data["involutions"]:
            rep = Moebius(*[_scalar_from_json(e, mode) for e in item["rep"]], mode=mode)
            if not rep.is_involution():
                raise GroupValidationError("involution representative is not order 2")
            classes.append(
                InvolutionClass(
                    rep=rep,
                    fixed_point=involution_fixed_point(rep),
                    normalizer_order=int(item["normalizer_order"]),
                )
            )
        euler = data.get("euler_char")
        euler_frac = None if euler is None else Fraction(euler)
        return GroupSpec(
            name=str(data["name"]),
            mode=mode,
            generators=gens,
            involution_classes=tuple(classes),
            euler_char=euler_frac,
            covolume=data.get("covolume"),
        )
    except KeyError as exc:
        raise GroupValidationError(f"missing required field {exc.args[0]!r}") from None


def load_group(path) -> GroupSpec:
    """Load and validate a group spec from a JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupValidationError(f"cannot parse {path}: {exc}") from None
    return group_from_json(data)


def save_group(spec: GroupSpec, path) -> None:
    Path(path).write_text(json.dumps(group_to_json(spec), indent=2), encoding="utf-8")
