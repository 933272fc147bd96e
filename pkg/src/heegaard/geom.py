"""Exact rational plane primitives for per-triangle curve arrangements.

Points are pairs of Fractions inside the model triangle (0,0),(1,0),(0,1).
Everything is exact: no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction


def cross(o, a, b):
    """Orientation of the triple o, a, b (positive = counterclockwise)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def direction_key(d):
    """Sort key ordering direction vectors counterclockwise from east.

    Returns a tuple (half, slope-comparable) usable with exact comparison:
    vectors with angle in [0, pi) come first.
    """
    x, y = d
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    return half, _SlopeKey(x, y)


class _SlopeKey:
    """Compares directions within one half-plane by cross product."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x, self.y = x, y

    def __lt__(self, other):
        return self.x * other.y - self.y * other.x > 0

    def __eq__(self, other):
        return self.x * other.y - self.y * other.x == 0


def segment_intersection_params(p1, p2, q1, q2):
    """Parameters (s, t) with p1 + s(p2-p1) = q1 + t(q2-q1), or None.

    Only proper interior intersections (0 < s, t < 1) are reported; the
    inputs here are chords of a triangle in general position.
    """
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    w = (q1[0] - p1[0], q1[1] - p1[1])
    s = Fraction(w[0] * d2[1] - w[1] * d2[0], den)
    t = Fraction(w[0] * d1[1] - w[1] * d1[0], den)
    if 0 < s < 1 and 0 < t < 1:
        return s, t
    return None


def point_on_segment(p1, p2, s):
    return (p1[0] + s * (p2[0] - p1[0]), p1[1] + s * (p2[1] - p1[1]))
