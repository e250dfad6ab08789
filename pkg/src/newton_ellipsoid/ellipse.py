"""Planar ellipses ``{x : (x - c)^T B^{-1} (x - c) <= 1}`` and central cuts.

Points of the plane are complex numbers; the real inner product
``<a, v> = Re(a) Re(v) + Im(a) Im(v)`` identifies them with R^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import Rect

MEMBERSHIP_TOL = 1e-12
CUT_AREA_RATIO = 4.0 / (3.0 * math.sqrt(3.0))


class DegenerateNormal(ArithmeticError):
    pass


class IllConditioned(ArithmeticError):
    """A cut produced a shape matrix that is no longer positive definite."""


@dataclass(frozen=True)
class Ellipse2:
    """Center ``c`` and symmetric positive-definite shape ``[[b11, b12], [b12, b22]]``."""

    center: complex
    b11: float
    b12: float
    b22: float

    def __post_init__(self):
        if not (self.det > 0 and self.b11 + self.b22 > 0):
            raise ValueError(f"shape matrix is not positive definite: {self.matrix}")

    @classmethod
    def from_matrix(cls, center, shape) -> "Ellipse2":
        (a, b), (c, d) = shape
        if isinstance(center, complex):
            z = center
        else:
            z = complex(center[0], center[1])
        return cls(z, float(a), 0.5 * (float(b) + float(c)), float(d))

    @classmethod
    def disk(cls, center: complex, radius: float) -> "Ellipse2":
        r2 = radius * radius
        return cls(complex(center), r2, 0.0, r2)

    @property
    def matrix(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.b11, self.b12), (self.b12, self.b22))

    @property
    def det(self) -> float:
        return self.b11 * self.b22 - self.b12 * self.b12

    def quad_form(self, point: complex) -> float:
        """``(x - c)^T B^{-1} (x - c)``."""
        dx = point.real - self.center.real
        dy = point.imag - self.center.imag
        return (self.b22 * dx * dx - 2.0 * self.b12 * dx * dy + self.b11 * dy * dy) / self.det

    def contains(self, point: complex) -> bool:
        return self.quad_form(point) <= 1.0 + MEMBERSHIP_TOL

    def area(self) -> float:
        return math.pi * math.sqrt(self.det)

    def cut(self, a: complex) -> "Ellipse2":
        """Least-area ellipse containing ``self`` intersected with ``<a, x - c> <= 0``."""
        return cut(self, a)


def contains(e: Ellipse2, point: complex) -> bool:
    return e.contains(point)


def area(e: Ellipse2) -> float:
    return e.area()


def cut(e: Ellipse2, a: complex) -> Ellipse2:
    ax, ay = a.real, a.imag
    if math.hypot(ax, ay) < 1e-300:
        raise DegenerateNormal(f"cut normal {a!r} is numerically zero")
    # rescale the normal; the cut is invariant under positive scaling of a
    s = max(abs(ax), abs(ay))
    ax, ay = ax / s, ay / s
    bax = e.b11 * ax + e.b12 * ay
    bay = e.b12 * ax + e.b22 * ay
    q = ax * bax + ay * bay
    if not q > 0:
        raise DegenerateNormal(f"a^T B a = {q} is not positive")
    root_q = math.sqrt(q)
    center = complex(e.center.real - bax / (3.0 * root_q),
                     e.center.imag - bay / (3.0 * root_q))
    f = 2.0 / (3.0 * q)
    k = 4.0 / 3.0
    b11 = k * (e.b11 - f * bax * bax)
    b12 = k * (e.b12 - f * bax * bay)
    b22 = k * (e.b22 - f * bay * bay)
    if not (b11 * b22 - b12 * b12 > 0 and b11 + b22 > 0):
        raise IllConditioned(f"cut of {e} along {a!r} lost positive definiteness")
    return Ellipse2(center, b11, b12, b22)


def initial_disk(rect: Rect, z0: complex) -> Ellipse2:
    """Smallest disk centred at ``z0`` covering ``rect``.

    The shape matrix is ``r^2 I`` so the disk really has radius ``r``.
    """
    r = max(abs(c - z0) for c in rect.corners())
    return Ellipse2.disk(z0, r)
