"""
Geometric predicates
====================
orient2d / incircle with a floating-point error filter and an exact rational
fallback, plus the sphere predicate used by the Delaunay builder.

Every float is an exact dyadic rational, so when the filter cannot certify
the sign the same determinant is re-evaluated in Fractions. The returned
value is the float approximation but its sign is always exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence, Tuple

Point = Tuple[float, float]
# None marks the vertex at infinity.
SpherePoint = Optional[Point]

_EPSILON = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPSILON) * _EPSILON
_ICC_ERRBOUND = (10.0 + 96.0 * _EPSILON) * _EPSILON


def orient2d(a: Point, b: Point, c: Point) -> float:
    """Twice the signed area of (a, b, c); positive when counterclockwise."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    errbound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > errbound or -det > errbound:
        return det
    return _with_exact_sign(det, _orient2d_exact(a, b, c))


def incircle(a: Point, b: Point, c: Point, d: Point) -> float:
    """Positive when d lies inside the circle through counterclockwise (a, b, c)."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]

    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if det > _ICC_ERRBOUND * permanent or -det > _ICC_ERRBOUND * permanent:
        return det
    return _with_exact_sign(det, _incircle_exact(a, b, c, d))


def insphere(face: Sequence[SpherePoint], d: SpherePoint) -> float:
    """
    Positive when d lies in the open cap of the positively oriented sphere
    face. For a counterclockwise face the cap is the circumdisk, for a
    clockwise one its exterior, and for a face through infinity the half
    plane on the left of its finite edge.
    """
    a, b, c = face
    if d is None:
        if a is None or b is None or c is None:
            raise ValueError("vertex at infinity tested against a face containing it")
        return -orient2d(a, b, c)

    if a is None:
        a, b, c = b, c, a
    elif b is None:
        a, b, c = c, a, b
    if c is None:
        return orient2d(a, b, d)
    return incircle(a, b, c, d)


def _with_exact_sign(approx: float, exact: Fraction) -> float:
    if exact == 0:
        return 0.0
    if (approx > 0) == (exact > 0) and approx != 0.0:
        return approx
    return float(exact)


def _orient2d_exact(a: Point, b: Point, c: Point) -> Fraction:
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (*a, *b, *c))
    return (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)


def _incircle_exact(a: Point, b: Point, c: Point, d: Point) -> Fraction:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    rows = []
    for p in (a, b, c):
        px, py = Fraction(p[0]) - dx, Fraction(p[1]) - dy
        rows.append((px, py, px * px + py * py))
    (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
    return (
        al * (bx * cy - cx * by)
        + bl * (cx * ay - ax * cy)
        + cl * (ax * by - bx * ay)
    )


def orient2d_relative(a: Point, b: Point, c: Point) -> float:
    """orient2d divided by its permanent: a scale-free collinearity margin."""
    permanent = abs((a[0] - c[0]) * (b[1] - c[1])) + abs((a[1] - c[1]) * (b[0] - c[0]))
    det = orient2d(a, b, c)
    if det == 0.0:
        return 0.0
    return det / permanent if permanent > 0 else math.copysign(1.0, det)


def incircle_relative(a: Point, b: Point, c: Point, d: Point) -> float:
    """incircle divided by its permanent: a scale-free cocircularity margin."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    permanent = (
        (abs(bdx * cdy) + abs(cdx * bdy)) * (adx * adx + ady * ady)
        + (abs(cdx * ady) + abs(adx * cdy)) * (bdx * bdx + bdy * bdy)
        + (abs(adx * bdy) + abs(bdx * ady)) * (cdx * cdx + cdy * cdy)
    )
    det = incircle(a, b, c, d)
    if det == 0.0:
        return 0.0
    return det / permanent if permanent > 0 else math.copysign(1.0, det)


def insphere_relative(face: Sequence[SpherePoint], d: SpherePoint) -> float:
    """Scale-free version of insphere with the same sign."""
    a, b, c = face
    if d is None:
        return -orient2d_relative(a, b, c)
    if a is None:
        a, b, c = b, c, a
    elif b is None:
        a, b, c = c, a, b
    if c is None:
        return orient2d_relative(a, b, d)
    return incircle_relative(a, b, c, d)
