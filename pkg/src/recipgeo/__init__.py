"""Counting and equidistribution experiments for infinite dihedral subgroups
of Fuchsian lattices, a.k.a. reciprocal geodesics."""

from recipgeo.hyp_core import (
    EXACT,
    FLOATING,
    TAU,
    IsometryKind,
    Moebius,
    Point,
    apply,
    ball_volume,
    classify,
    compose,
    cosh_dist,
    dist,
    geodesic_sample,
    invert,
    involution_fixed_point,
    translation_length,
)

__all__ = [
    "EXACT",
    "FLOATING",
    "TAU",
    "IsometryKind",
    "Moebius",
    "Point",
    "apply",
    "ball_volume",
    "classify",
    "compose",
    "cosh_dist",
    "dist",
    "geodesic_sample",
    "invert",
    "involution_fixed_point",
    "translation_length",
]

__version__ = "0.1.0"
