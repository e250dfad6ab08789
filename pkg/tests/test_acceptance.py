"""Exit criteria, one test each; the terminal summary prints PASS/FAIL per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import io
import math
import time

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from conftest import poly, random_roots
from newton_ellipsoid.bounds import radical, bound
from newton_ellipsoid.ellipse import CUT_AREA_RATIO, Ellipse2, area, contains, cut
from newton_ellipsoid.family import b_m_step
from newton_ellipsoid.poly import Polynomial
from newton_ellipsoid.render import DEFAULT_RECT, basin_grid, basin_stats, pixel_centers, ppm_bytes
from newton_ellipsoid.solver import (
    SolveOptions, Status, all_roots, halfspace_has_root, newton_ellipsoid_solve, newton_solve,
    write_trace,
)

SMALE = poly(1, 0, -2, 2)


def timed(fn, repeat=1):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return result, best


@pytest.mark.acceptance(1, "radicals")
def test_ac1_radicals():
    radical(3)  # warm-up
    (r2, r3, r4), dt = timed(lambda: (radical(2), radical(3), radical(4)), repeat=5)
    assert r2 == 0.5
    assert abs(r3 - 0.618034) <= 1e-6
    assert abs(r4 - 0.682328) <= 1e-6
    assert dt < 1e-3


@pytest.mark.acceptance(2, "cut geometry")
def test_ac2_cut_geometry(rng):
    unit = Ellipse2.disk(0j, 1.0)
    e = cut(unit, 1 + 0j)
    assert abs(e.center - (-1 / 3)) <= 1e-12
    (b11, b12), (_, b22) = e.matrix
    assert abs(b11 - 4 / 9) <= 1e-12 and abs(b12) <= 1e-12 and abs(b22 - 4 / 3) <= 1e-12
    assert abs(area(e) / area(unit) - 4 / (3 * math.sqrt(3))) <= 1e-10
    assert CUT_AREA_RATIO < 0.85

    for _ in range(100):
        lam = rng.uniform(0.5, 4.0, size=2)
        t = rng.uniform(0, math.pi)
        q = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        old = Ellipse2.from_matrix(complex(*rng.normal(size=2)), q @ np.diag(lam) @ q.T)
        a = complex(*rng.normal(size=2))
        new = cut(old, a)
        chol = np.linalg.cholesky(np.array(old.matrix))
        found = 0
        while found < 500:
            u = rng.uniform(-1, 1, size=2)
            if u @ u > 1:
                continue
            v = chol @ u
            if a.real * v[0] + a.imag * v[1] > 0:
                continue
            assert contains(new, old.center + complex(v[0], v[1]))
            found += 1


@pytest.mark.acceptance(3, "halfspace theorem")
def test_ac3_newton_halfspace(rng):
    cases = []
    while len(cases) < 1000:
        roots = random_roots(rng, int(rng.integers(2, 9)))
        cases.append((roots, Polynomial.from_roots(roots), complex(*rng.uniform(-5, 5, size=2))))

    def run():
        hits = total = 0
        for roots, p, z0 in cases:
            dp = p.derivative()(z0)
            if abs(dp) < 1e-12:
                continue
            total += 1
            hits += halfspace_has_root(roots, z0, p(z0) / dp)
        return hits, total

    (hits, total), dt = timed(run)
    assert total > 0 and hits == total
    assert dt < 1.0


@pytest.mark.acceptance(4, "bound soundness")
def test_ac4_bound_soundness(rng):
    assert abs(bound(poly(1, 0, -1), 2) - 2.0) <= 1e-12
    assert abs(bound(SMALE, 2) - 2 * math.sqrt(2)) <= 1e-12
    cases = []
    for _ in range(1000):
        roots = random_roots(rng, int(rng.integers(2, 9)), radius=float(rng.uniform(0.1, 10)))
        cases.append((max(abs(r) for r in roots), Polynomial.from_roots(roots)))

    def run():
        return [(rmax, bound(p, m)) for rmax, p in cases for m in (2, 3, 4)]

    pairs, dt = timed(run)
    assert all(rmax <= b for rmax, b in pairs)
    assert dt < 1.0


@pytest.mark.acceptance(5, "smale escape")
def test_ac5_smale_escape():
    def run():
        return (newton_solve(SMALE, 0j, SolveOptions(max_iter=60)),
                newton_ellipsoid_solve(SMALE, 0j, SolveOptions(eps=1e-10, max_iter=60, restarts=10)))

    newton_solve(SMALE, 0j)  # warm-up
    (nt, et), dt = timed(run)
    summary = (f"newton-ellipsoid: status={et.status} best residual="
               f"{min(it.residual for it in et.iterates):.3e} runs={len(et.runs)} time={dt * 1e3:.2f}ms")
    print(summary)
    assert nt.status is Status.ITERATION_LIMIT
    assert nt.orbit() == [complex(k % 2) for k in range(61)]
    assert et.converged, summary
    assert abs(SMALE(et.root)) < 1e-10
    assert et.steps <= 60 and et.restarts <= 10
    assert dt < 1e-2


@pytest.mark.acceptance(6, "all roots recovery")
def test_ac6_all_roots(rng):
    cases = []
    for _ in range(200):
        roots = random_roots(rng, int(rng.integers(1, 9)), min_sep=0.1)
        cases.append((roots, Polynomial.from_roots(roots)))

    def run():
        worst = 0.0
        for roots, p in cases:
            found = all_roots(p)
            assert len(found) == len(roots)
            cost = np.abs(np.subtract.outer(np.array(roots), np.array(found)))
            r, c = linear_sum_assignment(cost)
            worst = max(worst, float(cost[r, c].max()))
        return worst

    worst, dt = timed(run)
    print(f"worst matched error {worst:.3e} in {dt:.2f}s")
    assert worst <= 1e-6
    assert dt < 30.0


@pytest.mark.acceptance(7, "quadratic voronoi basins")
def test_ac7_quadratic_voronoi():
    img = basin_grid(poly(1, 0, -1), "newton", DEFAULT_RECT, 200, 200)
    centers = pixel_centers(DEFAULT_RECT, 200, 200)
    mask = np.abs(centers.real) > 0.1
    want = np.where(centers.real > 0, img.roots.index(1 + 0j), img.roots.index(-1 + 0j))
    frac = float(np.mean(img.root_index[mask] == want[mask]))
    print(f"voronoi agreement {frac:.6f}")
    assert frac >= 0.99


@pytest.mark.acceptance(8, "divergence contrast")
def test_ac8_divergence_contrast():
    def run():
        return [basin_stats(basin_grid(SMALE, m, DEFAULT_RECT, 200, 200)).divergent_fraction
                for m in ("newton", "newton-ellipsoid")]

    (newton, ellipsoid), dt = timed(run)
    print(f"divergent fraction newton={newton:.6f} newton-ellipsoid={ellipsoid:.6f} ({dt:.1f}s)")
    assert newton > ellipsoid
    assert newton > 0
    assert dt < 120.0


@pytest.mark.acceptance(9, "basic family limit")
def test_ac9_basic_family_limit():
    p = poly(1, 0, 0, -1)
    values = [b_m_step(p, 2 + 0j, m) for m in range(2, 13)]
    assert abs(values[0] - 1.41667) <= 1e-5
    assert abs(values[1] - 1.17647) <= 1e-5
    gaps = [abs(v - 1) for v in values]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


@pytest.mark.acceptance(10, "determinism")
def test_ac10_determinism():
    p = poly(1, 0, -3, 1, 0, 2)

    def solve_bytes():
        buf = io.StringIO()
        write_trace(newton_ellipsoid_solve(p, None, SolveOptions(rng_seed=1234)), buf)
        return buf.getvalue()

    assert solve_bytes() == solve_bytes()
    for method in ("newton", "halley", "newton-ellipsoid", "bm-ellipsoid-4"):
        opts = SolveOptions(max_iter=60, rng_seed=7)
        images = [ppm_bytes(basin_grid(p, method, DEFAULT_RECT, 64, 48, opts, workers=w, bands=b))
                  for w, b in ((1, None), (1, None), (2, 3), (4, 7))]
        assert all(img == images[0] for img in images[1:]), method
