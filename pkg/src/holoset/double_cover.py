"""Holonomy set of a torus double cover branched over two shifted points.

The cover is branched over the origin and over an irrationally shifted
point t = (tx, ty); developing saddle connections into the plane yields
three families of holonomy vectors: primitive integer vectors (UU),
integer translates of +t (UV) and of -t (VU).  ``closed_form`` emits that
description directly; ``geometric_oracle`` re-derives the same set from
first principles by enumerating candidate segments between developed
singularities and keeping exactly those whose open interior misses every
other singularity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .exact import (
    PlanarPoint,
    PointSet,
    QuadExt,
    RadicalSum,
    as_fraction,
    point,
)
from .coprime import coprime_points

TAG_UU = "UU"
TAG_UV = "UV"
TAG_VU = "VU"
TAG_VV = "VV"


@dataclass(frozen=True)
class ShiftVector:
    """Branch shift t = (tx, ty); both components must be irrational and
    lie strictly between 0 and 1 so t is not a lattice point of either
    family."""

    tx: QuadExt = field(default_factory=lambda: QuadExt(-1, 1, 2))
    ty: QuadExt = field(default_factory=lambda: QuadExt(-1, 1, 3))

    def __post_init__(self):
        for name, c in (("tx", self.tx), ("ty", self.ty)):
            if c.is_rational:
                raise ValueError(f"{name} must be irrational")
            if not (QuadExt(0) < c < QuadExt(1)):
                raise ValueError(f"{name} must lie in (0, 1)")


@dataclass(frozen=True)
class BranchConfig:
    """Named configuration of the branched cover (defaults to the
    (sqrt(2)-1, sqrt(3)-1) shift)."""

    shift: ShiftVector = field(default_factory=ShiftVector)


def _norm_le(x: QuadExt, y: QuadExt, R2: Fraction) -> bool:
    return RadicalSum.of(x * x, y * y, -R2).sign() <= 0


def _int_range(lo: QuadExt, hi: QuadExt) -> range:
    return range(lo.floor(), hi.floor() + 2)


def closed_form(cfg: Optional[BranchConfig], radius) -> PointSet:
    """The holonomy set inside the closed radius ball, by its three-family
    description: coprime integer pairs, and the two shifted lattices."""
    cfg = cfg or BranchConfig()
    R = as_fraction(radius)
    if R <= 0:
        raise ValueError("radius must be positive")
    R2 = R * R
    tx, ty = cfg.shift.tx, cfg.shift.ty
    pts: list[PlanarPoint] = [
        PlanarPoint(p.x, p.y, TAG_UU) for p in coprime_points(R)
    ]
    for sx, sy, tag in ((tx, ty, TAG_UV), (-tx, -ty, TAG_VU)):
        for a in _int_range(-R - sx - 1, R - sx + 1):
            x = a + sx
            for b in _int_range(-R - sy - 1, R - sy + 1):
                y = b + sy
                if _norm_le(x, y, R2):
                    pts.append(PlanarPoint(x, y, tag))
    return PointSet(pts)


def _cross(ux, uy, vx, vy) -> RadicalSum:
    return RadicalSum.of(ux) * RadicalSum.of(vy) - RadicalSum.of(uy) * RadicalSum.of(vx)


def _dot(ux, uy, vx, vy) -> RadicalSum:
    return RadicalSum.of(ux) * RadicalSum.of(vx) + RadicalSum.of(uy) * RadicalSum.of(vy)


def _strictly_between(w, src, dst) -> bool:
    """Exact test: w lies on the open segment (src, dst).

    Assumes nothing about fields; all arithmetic goes through RadicalSum.
    """
    wx, wy = w
    sx, sy = src
    dx, dy = dst
    if not _cross(wx - sx, wy - sy, dx - sx, dy - sy).is_zero:
        return False
    if _dot(wx - sx, wy - sy, dx - sx, dy - sy).sign() <= 0:
        return False
    if _dot(wx - dx, wy - dy, sx - dx, sy - dy).sign() <= 0:
        return False
    return True


def _segment_interior_empty(src, dst, shifts) -> bool:
    """No singularity of any family lies strictly inside the segment."""
    sx, sy = src
    dx, dy = dst
    xlo, xhi = (sx, dx) if sx <= dx else (dx, sx)
    ylo, yhi = (sy, dy) if sy <= dy else (dy, sy)
    for ftx, fty in shifts:
        for m in _int_range(xlo - ftx - 1, xhi - ftx + 1):
            wx = m + ftx
            if wx < xlo or wx > xhi:
                continue
            for k in _int_range(ylo - fty - 1, yhi - fty + 1):
                wy = k + fty
                if wy < ylo or wy > yhi:
                    continue
                if _strictly_between((wx, wy), src, dst):
                    return False
    return True


def geometric_oracle(cfg: Optional[BranchConfig], radius) -> PointSet:
    """Re-derive the holonomy set from segment geometry.

    Sources reduce, by translation invariance of the two singularity
    families, to one representative per family: the origin (U) and the
    shift t (V).  Every candidate target within the radius ball is tested
    for an empty open interior against both full families.
    """
    cfg = cfg or BranchConfig()
    R = as_fraction(radius)
    if R <= 0:
        raise ValueError("radius must be positive")
    R2 = R * R
    tx, ty = cfg.shift.tx, cfg.shift.ty
    zero = QuadExt(0)
    families = {
        "U": (zero, zero),
        "V": (tx, ty),
    }
    shifts = list(families.values())
    pts: list[PlanarPoint] = []
    for src_name, (ox, oy) in families.items():
        for dst_name, (ftx, fty) in families.items():
            tag = src_name + dst_name
            for a in _int_range(ox - R - ftx - 1, ox + R - ftx + 1):
                wx = a + ftx
                hx = wx - ox
                for b in _int_range(oy - R - fty - 1, oy + R - fty + 1):
                    wy = b + fty
                    hy = wy - oy
                    if (src_name == dst_name) and a == 0 and b == 0:
                        continue
                    if not _norm_le(hx, hy, R2):
                        continue
                    if _segment_interior_empty((ox, oy), (wx, wy), shifts):
                        pts.append(PlanarPoint(hx, hy, tag))
    return PointSet(pts)


def _as_quad(v) -> QuadExt:
    return v if isinstance(v, QuadExt) else QuadExt(as_fraction(v))


def slope_class(p1: PlanarPoint, p2: PlanarPoint) -> str:
    """Classify the slope of the segment p1 -> p2 exactly.

    Returns "rational", "infinite" (vertical), or "irrational".
    """
    dx = _as_quad(p2.x) - _as_quad(p1.x)
    dy = _as_quad(p2.y) - _as_quad(p1.y)
    if not dx and not dy:
        raise ValueError("points coincide; slope undefined")
    if not dx:
        return "infinite"
    if not dy:
        return "rational"
    if dx.is_rational and dy.is_rational:
        return "rational"
    if dx.is_rational or dy.is_rational:
        return "irrational"
    if dx.d != dy.d:
        return "irrational"
    # same field: dy = r*dx with rational r iff the components are
    # proportional as rational vectors
    return "rational" if dy.a * dx.b == dy.b * dx.a else "irrational"
