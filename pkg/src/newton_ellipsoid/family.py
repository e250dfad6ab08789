"""The basic family of iteration functions B_m.

``B_m(z) = z - p(z) D_{m-2}(z) / D_{m-1}(z)`` where ``D_0 = 1`` and

    D_k = sum_{i=1}^{min(n, k)} (-1)^(i-1) p^(i-1) (p^(i) / i!) D_{k-i}

B_2 is Newton's method and B_3 is Halley's.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Polynomial

DEGENERACY_FLOOR = 1e-14


class DegenerateDenominator(ArithmeticError):
    """D_{m-1}(z) vanishes (to working precision) at the requested point."""

    def __init__(self, z: complex, m: int, value: complex):
        super().__init__(f"D_{m - 1}({z}) = {value} is degenerate")
        self.z = z
        self.m = m
        self.value = value


@dataclass(frozen=True)
class DSequence:
    z: complex
    m: int
    values: tuple[complex, ...]
    pz: complex

    def __getitem__(self, k: int) -> complex:
        return self.values[k] if k >= 0 else 0j


def _check_order(m: int) -> None:
    if m < 2:
        raise ValueError(f"order m must be >= 2, got {m}")


def d_sequence(p: Polynomial, z: complex, m: int) -> DSequence:
    """Compute ``D_0(z), ..., D_{m-1}(z)`` bottom-up."""
    _check_order(m)
    n = p.degree
    top = min(n, m - 1)
    derivs = p.eval_derivs(z, top)
    pz = derivs[0]
    # scaled[i] = (-1)^(i-1) p^(i-1) p^(i) / i!
    scaled = [0j] * (top + 1)
    fact = 1.0
    ppow = 1 + 0j
    for i in range(1, top + 1):
        fact *= i
        sign = 1 if i % 2 == 1 else -1
        scaled[i] = sign * ppow * derivs[i] / fact
        ppow *= pz
    d = [1 + 0j]
    for k in range(1, m):
        acc = 0j
        for i in range(1, min(n, k) + 1):
            acc += scaled[i] * d[k - i]
        d.append(acc)
    return DSequence(z=z, m=m, values=tuple(d), pz=pz)


def family_direction(p: Polynomial, z: complex, m: int) -> complex:
    """Basic-family direction ``-p(z) D_{m-2}(z) / D_{m-1}(z)``."""
    ds = d_sequence(p, z, m)
    num = ds.pz * ds[m - 2]
    den = ds[m - 1]
    if abs(den) < DEGENERACY_FLOOR * (1 + abs(num)):
        raise DegenerateDenominator(z, m, den)
    return -num / den


def b_m_step(p: Polynomial, z: complex, m: int) -> complex:
    """One step of the order-``m`` member of the basic family."""
    return z + family_direction(p, z, m)


def newton_step(p: Polynomial, z: complex) -> complex:
    return b_m_step(p, z, 2)


def halley_step(p: Polynomial, z: complex) -> complex:
    return b_m_step(p, z, 3)
