"""Named fans and families, so every check runs without hand-written input files."""

from __future__ import annotations

import itertools
import math
from typing import Callable

from .degeneration import FamilySpec, Partition, projective_ci_family
from .lattice import Cone
from .toric import Fan, build_projective_fan


def polygon_face_fan(boundary_points, name: str = "") -> Fan:
    """2-d fan over boundary lattice points, cones between angular neighbours."""
    pts = sorted(boundary_points, key=lambda p: math.atan2(p[1], p[0]))
    m = len(pts)
    cones = [Cone((i, (i + 1) % m)) for i in range(m)]
    return Fan(2, tuple(tuple(p) for p in pts), tuple(cones), name=name)


def example2_fan() -> Fan:
    """Minimal resolution of P^2/Z_3: the face fan over the 9 boundary points of
    conv{(2,-1), (-1,2), (-1,-1)}."""
    pts = [(2, -1), (1, 0), (0, 1), (-1, 2), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    return polygon_face_fan(pts, name="example2")


def resolved_wps_fan() -> Fan:
    """A smooth resolution of P[9,6,1,1,1] with 9 rays.

    Rays are the nonzero lattice points of the hull of the weighted
    projective fan's rays; the cones come from stellar subdivision at the
    four non-vertex points.  Ray order puts the two pairs of primitive
    collections first: {0,1} x {2,3} contains no cone.
    """
    rays = (
        (0, 0, 0, 1), (0, 0, 1, 0),        # weights 9 and 6
        (0, 0, -2, -3), (0, 0, -1, -2),    # exceptional rays
        (1, 0, 0, 0), (0, 1, 0, 0), (-1, -1, -6, -9),  # weights 1, 1, 1
        (0, 0, -1, -1), (0, 0, 0, -1),     # exceptional rays
    )
    cones = (
        (0, 1, 4, 5), (0, 1, 4, 6), (0, 1, 5, 6), (0, 4, 5, 7), (0, 4, 6, 7),
        (0, 5, 6, 7), (1, 4, 5, 8), (1, 4, 6, 8), (1, 5, 6, 8), (2, 3, 4, 5),
        (2, 3, 4, 6), (2, 3, 5, 6), (2, 4, 5, 7), (2, 4, 6, 7), (2, 5, 6, 7),
        (3, 4, 5, 8), (3, 4, 6, 8), (3, 5, 6, 8),
    )
    return Fan(4, rays, tuple(Cone(c) for c in cones), name="wps96111")


def product_fan(a: Fan, b: Fan, name: str = "") -> Fan:
    rays = [r + (0,) * b.rank for r in a.rays] + [(0,) * a.rank + r for r in b.rays]
    off = a.nrays
    cones = [
        Cone(ca.ray_indices + tuple(i + off for i in cb.ray_indices))
        for ca, cb in itertools.product(a.max_cones, b.max_cones)
    ]
    return Fan(a.rank + b.rank, tuple(rays), tuple(cones), name=name)


def weighted_p112_fan() -> Fan:
    """Complete but singular: P(1,1,2), one cone of index 2."""
    rays = ((1, 0), (0, 1), (-1, -2))
    return Fan(2, rays, (Cone((0, 1)), Cone((0, 2)), Cone((1, 2))), name="P112")


FANS: dict[str, Callable[[], Fan]] = {
    **{f"P{n}": (lambda n=n: build_projective_fan(n)) for n in range(1, 6)},
    "example2": example2_fan,
    "wps96111": resolved_wps_fan,
    "P1xP1": lambda: product_fan(build_projective_fan(1), build_projective_fan(1), "P1xP1"),
    "P2xP1": lambda: product_fan(build_projective_fan(2), build_projective_fan(1), "P2xP1"),
    "P1xP1xP1": lambda: product_fan(
        product_fan(build_projective_fan(1), build_projective_fan(1)), build_projective_fan(1),
        "P1xP1xP1"),
    "P112": weighted_p112_fan,
}


def _named(spec: FamilySpec, label: str) -> FamilySpec:
    return FamilySpec(spec.fan, spec.partition, spec.sections, label=label,
                      claimed_component_count=spec.claimed_component_count)


def empty_family() -> FamilySpec:
    fan = resolved_wps_fan()
    part = Partition(((0, 1), (2, 3), (4, 5, 6, 7, 8)))
    return FamilySpec.generic(fan, part, label="wps96111-empty")


FAMILIES: dict[str, Callable[[], FamilySpec]] = {
    "quintic": lambda: _named(projective_ci_family(3, (5,)), "quintic"),
    "cubic-curve": lambda: _named(projective_ci_family(1, (3,)), "cubic-curve"),
    "two-cubics": lambda: _named(projective_ci_family(3, (3, 3)), "two-cubics"),
    "quartic-k3": lambda: _named(projective_ci_family(2, (4,)), "quartic-k3"),
    "sextic-p5": lambda: _named(projective_ci_family(4, (6,)), "sextic-p5"),
    "example2-curve": lambda: FamilySpec.generic(
        example2_fan(), Partition.single_block(9), label="example2-curve"),
    "empty": empty_family,
}

CY_FAMILIES = ("quintic", "cubic-curve", "two-cubics")
HYPERSURFACE_FANS = ("P2", "P3", "P4", "P5", "example2")


def fan(name: str) -> Fan:
    try:
        return FANS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin fan {name!r}; choose from {sorted(FANS)}") from None


def family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise KeyError(f"unknown builtin family {name!r}; choose from {sorted(FAMILIES)}") from None
