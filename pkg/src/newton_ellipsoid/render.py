"""Polynomiography: classify a grid of seeds by the root their orbit reaches.

Every pixel is an independent orbit started at the center of its grid cell,
so the grid can be split across worker processes in any way without
changing a single output byte. The per-pixel kernel works on separate
real/imaginary float64 arrays and spells out complex products and Smith
quotients the same way CPython does; each operation is a correctly rounded
IEEE op, so the result does not depend on SIMD width or batch size.
"""

from __future__ import annotations

import colorsys
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bounds import Rect
from .family import DEGENERACY_FLOOR
from .poly import Polynomial
from .solver import DET_FLOOR, SEED_NUDGE, SolveOptions, all_roots

DIVERGENT = -1
DEFAULT_RECT = Rect(-4.0, -4.0, 4.0, 4.0)
RENDER_MAX_ITER = 60
ROOT_TOL = 1e-3


@dataclass(frozen=True)
class Method:
    """Iteration used for a basin picture.

    ``kind`` is ``"fixed"`` (plain ``z <- B_m(z)``; m = 2 is Newton) or
    ``"ellipsoid"`` (B_m-Ellipsoid; m = 2 is Newton-Ellipsoid).
    """

    kind: str
    order: int = 2

    def __post_init__(self):
        if self.kind not in ("fixed", "ellipsoid"):
            raise ValueError(f"unknown method kind {self.kind!r}")
        if self.order < 2:
            raise ValueError("method order must be >= 2")

    @property
    def name(self) -> str:
        if self.kind == "fixed":
            return {2: "newton", 3: "halley"}.get(self.order, f"bm-{self.order}")
        if self.order == 2:
            return "newton-ellipsoid"
        return f"bm-ellipsoid-{self.order}"

    @classmethod
    def parse(cls, text: str, order: Optional[int] = None) -> "Method":
        """Accepts ``newton``, ``halley``, ``newton-ellipsoid``, ``bm-<m>``,
        ``bm-ellipsoid`` (order from ``order``), ``bm-ellipsoid-<m>`` and the
        underscore spellings of the same."""
        t = text.strip().lower().replace("_", "-")
        if t == "newton":
            return cls("fixed", 2)
        if t == "halley":
            return cls("fixed", 3)
        if t == "newton-ellipsoid":
            return cls("ellipsoid", 2)
        if t == "halley-ellipsoid":
            return cls("ellipsoid", 3)
        mt = re.fullmatch(r"bm(-ellipsoid)?(?:[-:(](\d+)\)?)?", t)
        if mt is None:
            raise ValueError(f"unknown method {text!r}")
        m = int(mt.group(2)) if mt.group(2) else order
        if m is None:
            raise ValueError(f"method {text!r} needs an order")
        return cls("ellipsoid" if mt.group(1) else "fixed", m)


@dataclass(frozen=True)
class PixelClass:
    root_index: Optional[int]
    iterations: int

    @property
    def divergent(self) -> bool:
        return self.root_index is None


@dataclass
class BasinImage:
    width: int
    height: int
    rect: Rect
    roots: tuple[complex, ...]
    max_iter: int
    root_index: np.ndarray  # (height, width) int, DIVERGENT where no root
    iterations: np.ndarray  # (height, width) int
    final: np.ndarray = field(repr=False)  # (height, width) complex, last iterate
    method: Optional[Method] = None

    def pixel(self, i: int, j: int) -> PixelClass:
        """Column ``i``, row ``j`` (row 0 is the top, highest imaginary part)."""
        k = int(self.root_index[j, i])
        return PixelClass(None if k == DIVERGENT else k, int(self.iterations[j, i]))


def pixel_centers(rect: Rect, width: int, height: int) -> np.ndarray:
    xs = rect.x_lo + (np.arange(width) + 0.5) * (rect.width / width)
    ys = rect.y_hi - (np.arange(height) + 0.5) * (rect.height / height)
    return xs[None, :] + 1j * ys[:, None]


def reference_roots(p: Polynomial, opts: SolveOptions = SolveOptions()) -> list[complex]:
    """All roots, sorted by real then imaginary part (real parts on a 1e-8 grid)."""
    roots = all_roots(p, opts)
    return sorted(roots, key=lambda z: (round(z.real, 8), z.imag))


# -- float-pair complex arithmetic, matching CPython's complex ops --

def _cmul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


def _cdiv(ar, ai, br, bi):
    use_re = np.abs(br) >= np.abs(bi)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.where(use_re, bi / br, br / bi)
        denom = np.where(use_re, br + bi * ratio, br * ratio + bi)
        qr = np.where(use_re, ar + ai * ratio, ar * ratio + ai) / denom
        qi = np.where(use_re, ai - ar * ratio, ai * ratio - ar) / denom
    return qr, qi


class _Kernel:
    def __init__(self, p: Polynomial, order: int):
        self.n = p.degree
        self.order = order
        self.top = min(self.n, order - 1)
        self.deriv_coeffs = []
        cs = list(p.coeffs)
        for _ in range(self.top + 1):
            self.deriv_coeffs.append(cs)
            cs = [i * c for i, c in enumerate(cs) if i > 0] or [0j]

    def _horner(self, cs, zr, zi):
        accr = np.zeros_like(zr)
        acci = np.zeros_like(zr)
        for c in reversed(cs):
            accr, acci = _cmul(accr, acci, zr, zi)
            accr = accr + c.real
            acci = acci + c.imag
        return accr, acci

    def value(self, zr, zi):
        return self._horner(self.deriv_coeffs[0], zr, zi)

    def direction_parts(self, zr, zi):
        """``(num, den)`` with direction ``-num/den``, plus a degeneracy mask."""
        ders = [self._horner(cs, zr, zi) for cs in self.deriv_coeffs]
        pr, pi = ders[0]
        m = self.order
        scaled = [None]
        fact = 1.0
        ppr, ppi = np.ones_like(zr), np.zeros_like(zr)
        for i in range(1, self.top + 1):
            fact *= i
            sign = 1.0 if i % 2 == 1 else -1.0
            tr, ti = _cmul(sign * ppr, sign * ppi, *ders[i])
            scaled.append((tr / fact, ti / fact))
            ppr, ppi = _cmul(ppr, ppi, pr, pi)
        d = [(np.ones_like(zr), np.zeros_like(zr))]
        for k in range(1, m):
            accr, acci = np.zeros_like(zr), np.zeros_like(zr)
            for i in range(1, min(self.n, k) + 1):
                tr, ti = _cmul(*scaled[i], *d[k - i])
                accr, acci = accr + tr, acci + ti
            d.append((accr, acci))
        numr, numi = _cmul(pr, pi, *d[m - 2])
        denr, deni = d[m - 1]
        bad = np.hypot(denr, deni) < DEGENERACY_FLOOR * (1 + np.hypot(numr, numi))
        return (numr, numi), (denr, deni), bad


def _nearest(zr, zi, roots):
    best = np.full(zr.shape, np.inf)
    idx = np.full(zr.shape, DIVERGENT, dtype=np.int64)
    for k, r in enumerate(roots):
        dist = np.hypot(zr - r.real, zi - r.imag)
        closer = dist < best
        best = np.where(closer, dist, best)
        idx = np.where(closer, k, idx)
    return idx, best


def _initial_shape(rect: Rect, zr, zi):
    r = np.zeros_like(zr)
    for c in rect.corners():
        r = np.maximum(r, np.hypot(c.real - zr, c.imag - zi))
    r2 = r * r
    return r2, np.zeros_like(zr), r2.copy()


def _cut_step(ar, ai, c11, c12, c22, zr, zi):
    """Vector form of :func:`ellipse.cut`; returns new center, shape and a failure mask."""
    degenerate = np.hypot(ar, ai) < 1e-300
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s = np.maximum(np.abs(ar), np.abs(ai))
        ar, ai = ar / s, ai / s
        bax = c11 * ar + c12 * ai
        bay = c12 * ar + c22 * ai
        q = ar * bax + ai * bay
        rq = np.sqrt(q)
        nzr = zr - bax / (3.0 * rq)
        nzi = zi - bay / (3.0 * rq)
        f = 2.0 / (3.0 * q)
        n11 = (4.0 / 3.0) * (c11 - f * bax * bax)
        n12 = (4.0 / 3.0) * (c12 - f * bax * bay)
        n22 = (4.0 / 3.0) * (c22 - f * bay * bay)
    failed = degenerate | ~(q > 0) | ~((n11 * n22 - n12 * n12 > 0) & (n11 + n22 > 0))
    return nzr, nzi, n11, n12, n22, failed


def _run_band(p: Polynomial, method: Method, rect: Rect, seeds: np.ndarray,
              roots: Sequence[complex], opts: SolveOptions, root_tol: float):
    shape = seeds.shape
    zr = seeds.real.ravel().copy()
    zi = seeds.imag.ravel().copy()
    npx = zr.size
    out_idx = np.full(npx, DIVERGENT, dtype=np.int64)
    out_it = np.zeros(npx, dtype=np.int64)
    out_z = np.empty(npx, dtype=complex)
    kern = _Kernel(p, method.order)
    ellipsoid = method.kind == "ellipsoid"

    # seeds sitting on a critical point are nudged once, as in the scalar solver
    pr, pi = kern.value(zr, zi)
    _, dist = _nearest(zr, zi, roots)
    settled = (dist < root_tol) | (np.hypot(pr, pi) < opts.eps)
    _, _, bad = kern.direction_parts(zr, zi)
    nudge = bad & ~settled
    if nudge.any():
        mag = 1e-8 * (1 + np.hypot(zr[nudge], zi[nudge]))
        zr[nudge] = zr[nudge] + mag * SEED_NUDGE.real
        zi[nudge] = zi[nudge] + mag * SEED_NUDGE.imag
    if ellipsoid:
        b11, b12, b22 = _initial_shape(rect, zr, zi)

    def finish(sel, k, idx=None):
        out_idx[sel] = DIVERGENT if idx is None else idx
        out_it[sel] = k
        out_z[sel] = zr[sel] + 1j * zi[sel]

    live = np.arange(npx)
    k = 0
    while live.size:
        lr, li = zr[live], zi[live]
        pr, pi = kern.value(lr, li)
        res = np.hypot(pr, pi)
        near, dist = _nearest(lr, li, roots)
        hit = (dist < root_tol) | (res < opts.eps)
        stop = hit | (k >= opts.max_iter) | ~(np.isfinite(lr) & np.isfinite(li))
        if ellipsoid:
            det = b11[live] * b22[live] - b12[live] * b12[live]
            area = math.pi * np.sqrt(np.maximum(det, 0.0))
            stop |= (area < opts.min_area) | (det < DET_FLOOR)
        if stop.any():
            ok = hit[stop] & (dist[stop] < root_tol)
            finish(live[stop], k, np.where(ok, near[stop], DIVERGENT))
            live = live[~stop]
            if not live.size:
                break
            lr, li = zr[live], zi[live]
        (nr, ni), (dr, di), bad = kern.direction_parts(lr, li)
        if bad.any():
            finish(live[bad], k)
            good = ~bad
            live, lr, li = live[good], lr[good], li[good]
            nr, ni, dr, di = nr[good], ni[good], dr[good], di[good]
        qr, qi = _cdiv(nr, ni, dr, di)
        if ellipsoid:
            nzr, nzi, n11, n12, n22, failed = _cut_step(
                qr, qi, b11[live], b12[live], b22[live], lr, li)
            if failed.any():
                finish(live[failed], k)
                ok = ~failed
                live = live[ok]
                nzr, nzi, n11, n12, n22 = nzr[ok], nzi[ok], n11[ok], n12[ok], n22[ok]
            zr[live], zi[live] = nzr, nzi
            b11[live], b12[live], b22[live] = n11, n12, n22
        else:
            # z + (-(num / den)), as in b_m_step
            zr[live] = lr + (-qr)
            zi[live] = li + (-qi)
        k += 1
    return out_idx.reshape(shape), out_it.reshape(shape), out_z.reshape(shape)


def _band_job(args):
    return _run_band(*args)


def basin_grid(p: Polynomial, method: Method | str, rect: Rect = DEFAULT_RECT,
               width: int = 800, height: int = 800,
               opts: Optional[SolveOptions] = None,
               roots: Optional[Sequence[complex]] = None,
               root_tol: float = ROOT_TOL, workers: int = 1,
               bands: Optional[int] = None) -> BasinImage:
    """Classify every pixel of ``rect`` by the root its orbit reaches.

    An orbit is classified as soon as it comes within ``root_tol`` of a
    reference root (or its residual drops below ``opts.eps`` there); orbits
    that run out of steps or hit a degenerate step are Divergent. Restarts
    are never used: a pixel's color belongs to its own seed. Ellipsoid
    methods start from the disk centred at the seed that covers ``rect``.
    """
    if width < 1 or height < 1:
        raise ValueError("width and height must be >= 1")
    if isinstance(method, str):
        method = Method.parse(method)
    if opts is None:
        opts = SolveOptions(max_iter=RENDER_MAX_ITER)
    if roots is None:
        roots = reference_roots(p)
    roots = tuple(complex(r) for r in roots)
    seeds = pixel_centers(rect, width, height)
    nb = max(1, min(height, bands if bands is not None else workers))
    edges = np.linspace(0, height, nb + 1).astype(int)
    jobs = [(p, method, rect, seeds[a:b], roots, opts, root_tol)
            for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_band_job, jobs))
    else:
        parts = [_band_job(j) for j in jobs]
    idx = np.concatenate([part[0] for part in parts], axis=0)
    its = np.concatenate([part[1] for part in parts], axis=0)
    fin = np.concatenate([part[2] for part in parts], axis=0)
    return BasinImage(width, height, rect, roots, opts.max_iter, idx, its, fin, method)


def palette(num_roots: int, max_iter: int) -> np.ndarray:
    """Color table indexed ``[root, iterations]``; hue k/K scaled by speed."""
    lut = np.zeros((max(num_roots, 1), max_iter + 1, 3), dtype=np.uint8)
    for k in range(num_roots):
        for it in range(max_iter + 1):
            v = max(0.35, 1.0 - it / max_iter) if max_iter > 0 else 1.0
            r, g, b = colorsys.hsv_to_rgb(k / num_roots, 1.0, v)
            lut[k, it] = (round(255 * r), round(255 * g), round(255 * b))
    return lut


def to_rgb(img: BasinImage) -> np.ndarray:
    lut = palette(len(img.roots), img.max_iter)
    its = np.clip(img.iterations, 0, img.max_iter)
    idx = np.where(img.root_index == DIVERGENT, 0, img.root_index)
    rgb = lut[idx, its]
    rgb[img.root_index == DIVERGENT] = 0
    return rgb


def ppm_bytes(img: BasinImage) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(to_rgb(img), dtype=np.uint8).tobytes()


def write_image(img: BasinImage, path: str | os.PathLike) -> None:
    """Write a binary P6 pixmap, top row first."""
    data = ppm_bytes(img)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write image to {os.fspath(path)!r}: {exc}") from exc


@dataclass(frozen=True)
class BasinStats:
    pixels: int
    divergent_fraction: float
    counts: tuple[int, ...]
    mean_iterations: tuple[float, ...]

    def format(self) -> str:
        lines = [f"pixels={self.pixels}",
                 f"divergent_fraction={self.divergent_fraction:.17g}"]
        for k, (c, mi) in enumerate(zip(self.counts, self.mean_iterations)):
            lines.append(f"root{k}_pixels={c}")
            lines.append(f"root{k}_mean_iterations={mi:.17g}")
        return "\n".join(lines) + "\n"


def basin_stats(img: BasinImage) -> BasinStats:
    total = img.width * img.height
    div = int(np.count_nonzero(img.root_index == DIVERGENT))
    counts, means = [], []
    for k in range(len(img.roots)):
        mask = img.root_index == k
        c = int(np.count_nonzero(mask))
        counts.append(c)
        means.append(float(img.iterations[mask].mean()) if c else float("nan"))
    return BasinStats(total, div / total, tuple(counts), tuple(means))
