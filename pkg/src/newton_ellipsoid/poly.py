"""Complex polynomials stored as ascending coefficient tuples."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence


def _finite(z: complex) -> bool:
    return cmath.isfinite(z)


@dataclass(frozen=True)
class Polynomial:
    """A polynomial ``a_0 + a_1 z + ... + a_n z^n``.

    ``coeffs[i]`` is the coefficient of ``z**i``. Trailing exact zeros are
    trimmed on construction, so ``coeffs[-1]`` is the leading coefficient
    unless the polynomial is identically zero.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex]):
        cs = [complex(c) for c in coeffs]
        if not cs:
            raise ValueError("polynomial needs at least one coefficient")
        for c in cs:
            if not _finite(c):
                raise ValueError(f"non-finite coefficient {c!r}")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_descending(cls, coeffs: Iterable[complex]) -> "Polynomial":
        return cls(list(coeffs)[::-1])

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "Polynomial":
        """Monic polynomial whose zeros are ``roots`` (with multiplicity)."""
        if len(roots) == 0:
            raise ValueError("from_roots needs at least one root")
        cs = [1 + 0j]
        for r in roots:
            r = complex(r)
            # multiply by (z - r)
            nxt = [0j] * (len(cs) + 1)
            for i, c in enumerate(cs):
                nxt[i + 1] += c
                nxt[i] -= r * c
            cs = nxt
        return cls(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def descending(self) -> tuple[complex, ...]:
        return self.coeffs[::-1]

    def __call__(self, z: complex) -> complex:
        return self.eval(z)

    def eval(self, z: complex) -> complex:
        """Horner evaluation."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_derivs(self, z: complex, k: int) -> list[complex]:
        """Return ``[p(z), p'(z), ..., p^(k)(z)]``.

        Each entry is a Horner pass over the coefficients of the repeated
        derivative, so entry 1 matches ``self.derivative().eval(z)`` bit for
        bit. Orders above the degree come out as exact zeros.
        """
        if k < 0:
            raise ValueError("k must be non-negative")
        out = []
        cs = list(self.coeffs)
        for _ in range(k + 1):
            acc = 0j
            for c in reversed(cs):
                acc = acc * z + c
            out.append(acc)
            cs = [i * c for i, c in enumerate(cs) if i > 0] or [0j]
        return out

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0])
        return Polynomial([i * c for i, c in enumerate(self.coeffs) if i > 0])

    def deflate(self, theta: complex) -> "Polynomial":
        """Divide by ``(z - theta)`` and drop the remainder.

        Synthetic division runs from the leading coefficient down.
        """
        n = self.degree
        if n < 1:
            raise ValueError("cannot deflate a constant polynomial")
        q = [0j] * n
        acc = self.coeffs[n]
        for i in range(n - 1, -1, -1):
            q[i] = acc
            acc = self.coeffs[i] + acc * theta
        return Polynomial(q)

    def scale(self, c: complex) -> "Polynomial":
        return Polynomial([c * a for a in self.coeffs])

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def eval_poly(p: Polynomial, z: complex) -> complex:
    return p.eval(z)


def eval_derivs(p: Polynomial, z: complex, k: int) -> list[complex]:
    return p.eval_derivs(z, k)


def deflate(p: Polynomial, theta: complex) -> Polynomial:
    return p.deflate(theta)


def from_roots(roots: Sequence[complex]) -> Polynomial:
    return Polynomial.from_roots(roots)
