"""Newton-Ellipsoid and B_m-Ellipsoid root finding.

Each iteration treats ``a = p(z) D_{m-2}(z) / D_{m-1}(z)`` (for m = 2 simply
``p(z) / p'(z)``) as the normal of a half-plane through the current center
``z`` that must contain a root, replaces the current ellipse by the
least-area ellipse containing its half, and moves to the new center.
Plain fixed-point iteration ``z <- B_m(z)`` is provided for comparison.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, TextIO

from .bounds import Rect, bounding_square
from .ellipse import DegenerateNormal, Ellipse2, IllConditioned, cut, initial_disk
from .family import DegenerateDenominator, b_m_step, family_direction
from .poly import Polynomial
from .rng import Lcg64

DET_FLOOR = 1e-280
SEED_NUDGE = cmath.exp(0.25j * math.pi)
POLISH_STEPS = 3


class Status(enum.Enum):
    CONVERGED = "Converged"
    ITERATION_LIMIT = "IterationLimit"
    DEGENERATE = "Degenerate"
    RESTARTED = "Restarted"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SolveOptions:
    """Knobs shared by every solver.

    ``max_iter`` bounds the steps of a single run (one seed). The ellipsoid
    methods contract the ellipse area by 4/(3*sqrt(3)) per step, so reaching
    ``eps = 1e-10`` from a disk of radius ~5 takes a couple of hundred steps;
    the 60-step budget used for basin pictures is far too small for solving.
    """

    eps: float = 1e-10
    max_iter: int = 500
    restarts: int = 10
    rng_seed: int = 0
    min_area: float = 1e-24

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")


@dataclass(frozen=True)
class Iterate:
    k: int
    z: complex
    residual: float
    area: Optional[float] = None
    run: int = 0


@dataclass(frozen=True)
class Run:
    seed: complex
    status: Status
    reason: str
    steps: int


@dataclass
class SolveTrace:
    status: Status = Status.ITERATION_LIMIT
    iterates: list[Iterate] = field(default_factory=list)
    root: Optional[complex] = None
    runs: list[Run] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def last(self) -> complex:
        return self.iterates[-1].z

    @property
    def restarts(self) -> int:
        return max(len(self.runs) - 1, 0)

    @property
    def steps(self) -> int:
        """Steps taken in the final run."""
        return self.runs[-1].steps if self.runs else 0

    def orbit(self, run: Optional[int] = None) -> list[complex]:
        return [it.z for it in self.iterates if run is None or it.run == run]

    def _record(self, z: complex, residual: float, area: Optional[float], run: int) -> None:
        self.iterates.append(Iterate(len(self.iterates), z, residual, area, run))


class IncompleteRoots(RuntimeError):
    """A deflation stage failed to converge; ``roots`` holds those found so far."""

    def __init__(self, roots: list[complex], remaining: Polynomial):
        super().__init__(f"found {len(roots)} roots, {remaining.degree} missing")
        self.roots = roots
        self.remaining = remaining


def bm_solve(p: Polynomial, z0: complex, m: int, opts: SolveOptions = SolveOptions()) -> SolveTrace:
    """Plain fixed-point iteration of the order-``m`` basic-family member."""
    trace = SolveTrace()
    z = complex(z0)
    for k in range(opts.max_iter + 1):
        pz = p(z)
        trace._record(z, abs(pz), None, 0)
        if abs(pz) < opts.eps:
            trace.status, trace.root = Status.CONVERGED, z
            trace.runs.append(Run(z0, Status.CONVERGED, "residual", k))
            return trace
        if k == opts.max_iter:
            break
        try:
            z = b_m_step(p, z, m)
        except DegenerateDenominator:
            trace.status = Status.DEGENERATE
            trace.runs.append(Run(z0, Status.DEGENERATE, "denominator", k))
            return trace
        if not cmath.isfinite(z):
            trace.status = Status.DEGENERATE
            trace.runs.append(Run(z0, Status.DEGENERATE, "overflow", k + 1))
            return trace
    trace.status = Status.ITERATION_LIMIT
    trace.runs.append(Run(z0, Status.ITERATION_LIMIT, "max_iter", opts.max_iter))
    return trace


def newton_solve(p: Polynomial, z0: complex, opts: SolveOptions = SolveOptions()) -> SolveTrace:
    return bm_solve(p, z0, 2, opts)


def _cut_normal(p: Polynomial, z: complex, m: int) -> complex:
    return -family_direction(p, z, m)


def _ellipsoid_run(p, seed, m, opts, rect, trace, run):
    z = seed
    ell = initial_disk(rect, z)
    nudged = False
    k = 0
    while True:
        pz = p(z)
        res = abs(pz)
        if res < opts.eps:
            trace._record(z, res, ell.area(), run)
            return Status.CONVERGED, "residual", k
        if k >= opts.max_iter:
            trace._record(z, res, ell.area(), run)
            return Status.ITERATION_LIMIT, "max_iter", k
        if ell.area() < opts.min_area:
            trace._record(z, res, ell.area(), run)
            return Status.RESTARTED, "min_area", k
        if ell.det < DET_FLOOR:
            trace._record(z, res, ell.area(), run)
            return Status.RESTARTED, "conditioning", k
        try:
            a = _cut_normal(p, z, m)
        except DegenerateDenominator:
            if k == 0 and not nudged:
                # critical seed: nudge once along (1+i)/sqrt(2)
                z = z + 1e-8 * (1 + abs(z)) * SEED_NUDGE
                ell = initial_disk(rect, z)
                nudged = True
                continue
            trace._record(z, res, ell.area(), run)
            return Status.DEGENERATE, "denominator", k
        trace._record(z, res, ell.area(), run)
        try:
            ell = cut(ell, a)
        except DegenerateNormal:
            return Status.DEGENERATE, "normal", k
        except IllConditioned:
            return Status.RESTARTED, "conditioning", k
        z = ell.center
        k += 1


def bm_ellipsoid_solve(p: Polynomial, z0: Optional[complex], m: int,
                       opts: SolveOptions = SolveOptions(),
                       rect: Optional[Rect] = None) -> SolveTrace:
    """Ellipsoid method driven by the order-``m`` basic-family direction.

    ``rect`` is the region the initial disk must cover; it defaults to the
    square given by the a priori root bound. When ``z0`` is None the seed is
    drawn uniformly from ``rect``. A run that does not converge is restarted
    from a fresh random seed, at most ``opts.restarts`` times.
    """
    if m < 2:
        raise ValueError(f"order m must be >= 2, got {m}")
    if p.degree < 1:
        raise ValueError("solver needs a polynomial of degree >= 1")
    rect = rect if rect is not None else bounding_square(p)
    rng = Lcg64(opts.rng_seed)
    seed = complex(z0) if z0 is not None else rng.point_in(rect)
    trace = SolveTrace()
    for run in range(opts.restarts + 1):
        status, reason, steps = _ellipsoid_run(p, seed, m, opts, rect, trace, run)
        if status is Status.CONVERGED:
            trace.runs.append(Run(seed, status, reason, steps))
            trace.status, trace.root = status, trace.last
            return trace
        if run < opts.restarts:
            trace.runs.append(Run(seed, Status.RESTARTED, reason, steps))
            seed = rng.point_in(rect)
        else:
            trace.runs.append(Run(seed, status, reason, steps))
    if opts.restarts > 0 or trace.runs[-1].status is Status.RESTARTED:
        trace.status = Status.ITERATION_LIMIT
    else:
        trace.status = trace.runs[-1].status
    return trace


def newton_ellipsoid_solve(p: Polynomial, z0: Optional[complex] = None,
                           opts: SolveOptions = SolveOptions(),
                           rect: Optional[Rect] = None) -> SolveTrace:
    return bm_ellipsoid_solve(p, z0, 2, opts, rect)


def polish(p: Polynomial, z: complex, steps: int = POLISH_STEPS) -> complex:
    """A few Newton steps on ``p``; stops early at an exact zero or critical point."""
    for _ in range(steps):
        try:
            nz = b_m_step(p, z, 2)
        except DegenerateDenominator:
            break
        if not cmath.isfinite(nz):
            break
        z = nz
    return z


def all_roots(p: Polynomial, opts: SolveOptions = SolveOptions()) -> list[complex]:
    """All ``n`` roots by Newton-Ellipsoid plus deflation.

    Each root is polished against the original ``p`` before the current
    quotient is deflated by it. Raises IncompleteRoots if a stage exhausts
    its restarts.
    """
    if p.degree < 1:
        raise ValueError("all_roots needs a polynomial of degree >= 1")
    rng = Lcg64(opts.rng_seed)
    roots: list[complex] = []
    q = p
    while q.degree >= 1:
        if q.degree == 1:
            theta = -q.coeffs[0] / q.coeffs[1]
        else:
            trace = newton_ellipsoid_solve(q, None, replace(opts, rng_seed=rng.next_u64()))
            if not trace.converged:
                raise IncompleteRoots(roots, q)
            theta = trace.root
        theta = polish(p, theta)
        roots.append(theta)
        q = q.deflate(theta)
    return roots


def halfspace_has_root(roots: Sequence[complex], z0: complex, a: complex) -> bool:
    """True iff some root satisfies ``<a, theta - z0> <= 1e-12``."""
    if len(roots) == 0:
        raise ValueError("roots must be nonempty")
    for theta in roots:
        d = theta - z0
        if a.real * d.real + a.imag * d.imag <= 1e-12:
            return True
    return False


def format_trace_csv(trace: SolveTrace) -> Iterable[str]:
    for it in trace.iterates:
        area = "" if it.area is None else f"{it.area:.17g}"
        yield f"{it.k},{it.z.real:.17g},{it.z.imag:.17g},{it.residual:.17g},{area}"


def write_trace(trace: SolveTrace, out: TextIO) -> None:
    out.write("k,re,im,residual,area\n")
    for line in format_trace_csv(trace):
        out.write(line + "\n")
