"""A priori upper bounds on the modulus of polynomial zeros.

For ``m = 2, 3, 4`` every zero ``theta`` of ``p`` satisfies
``|theta| <= max_k |T_k|^(1/(k-1)) / r_m`` where ``r_m`` is the positive root
of ``t^(m-1) + t - 1`` and ``T_k`` is a small determinant in the
coefficients normalised by a power of the leading one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Polynomial

ORDERS = (2, 3, 4)


@dataclass(frozen=True)
class Rect:
    x_lo: float
    y_lo: float
    x_hi: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError(f"degenerate rectangle {self}")

    @classmethod
    def square(cls, half_width: float, center: complex = 0j) -> "Rect":
        return cls(center.real - half_width, center.imag - half_width,
                   center.real + half_width, center.imag + half_width)

    def corners(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.x_lo, self.y_lo), complex(self.x_hi, self.y_lo),
                complex(self.x_lo, self.y_hi), complex(self.x_hi, self.y_hi))

    def contains(self, z: complex) -> bool:
        return self.x_lo <= z.real <= self.x_hi and self.y_lo <= z.imag <= self.y_hi

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> float:
        return self.y_hi - self.y_lo


def radical(m: int) -> float:
    """Positive root of ``t^(m-1) + t - 1`` by bisection on ``[0.5, 1]``."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if m == 2:
        return 0.5
    lo, hi = 0.5, 1.0
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if mid ** (m - 1) + mid - 1 < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _coef(p: Polynomial, j: int) -> complex:
    # negative subscripts are zero padding
    return p.coeffs[j] if 0 <= j <= p.degree else 0j


def _det2(a, b, c, d):
    return a * d - b * c


def _det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _terms(p: Polynomial, m: int) -> list[tuple[int, complex]]:
    n = p.degree
    a = lambda j: _coef(p, j)  # noqa: E731
    an = a(n)
    if m == 2:
        return [(k, a(n - k + 1) / an) for k in range(2, n + 2)]
    if m == 3:
        return [(k, _det2(a(n - 1), a(n - k + 1), an, a(n - k + 2)) / an ** 2)
                for k in range(3, n + 3)]
    return [(k, _det3(((a(n - 1), a(n - 2), a(n - k + 1)),
                       (an, a(n - 1), a(n - k + 2)),
                       (0j, an, a(n - k + 3)))) / an ** 3)
            for k in range(4, n + 4)]


def bound(p: Polynomial, m: int) -> float:
    """Upper bound on ``|theta|`` over all zeros of ``p`` (``m`` in 2, 3, 4)."""
    if m not in ORDERS:
        raise ValueError(f"bound order must be one of {ORDERS}, got {m}")
    if p.degree < 1:
        raise ValueError("bound needs a polynomial of degree >= 1")
    best = max(abs(t) ** (1.0 / (k - 1)) for k, t in _terms(p, m))
    return best / radical(m)


def best_bound(p: Polynomial) -> float:
    return min(bound(p, m) for m in ORDERS)


def bounding_square(p: Polynomial) -> Rect:
    rho = best_bound(p)
    if rho == 0.0:
        # only for c*z^n; keep a nondegenerate square around the origin
        rho = 1.0
    return Rect.square(rho)
