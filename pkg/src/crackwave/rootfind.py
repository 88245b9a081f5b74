"""Locating and certifying complex roots of scalar dispersion functions.

The dispersion functions may wrap interpolated kernel data, so nothing
here assumes an analytic derivative: Newton iteration differentiates by
central differences with an adaptive real step, grid scans localize roots
as strict local minima of |f| on a rectangle, and the argument principle
(winding number of f around the rectangle boundary) certifies how many
zeros a region actually contains.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryContactError, DomainError, NonConvergenceError

# Central-difference step floor; see design note in newton().
_STEP_SCALE = 1e-7
# Local minima qualify as root candidates only below this percentile of
# the grid values (scale-free across problems).
CANDIDATE_PERCENTILE = 5.0
# Refined roots closer than this multiple of tol are merged.
_MERGE_FACTOR = 10.0


@dataclass(frozen=True)
class SearchRegion:
    """Axis-aligned rectangle of the complex plane with a grid resolution."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int = 101
    ny: int = 101

    def __post_init__(self):
        if not self.re_min < self.re_max:
            raise DomainError(f"re_min must be below re_max, got [{self.re_min}, {self.re_max}]")
        if not self.im_min < self.im_max:
            raise DomainError(f"im_min must be below im_max, got [{self.im_min}, {self.im_max}]")
        if self.nx < 2 or self.ny < 2:
            raise DomainError(f"grid resolution must be at least 2x2, got {self.nx}x{self.ny}")

    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.nx)

    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.ny)

    def cell_size(self) -> tuple[float, float]:
        return (
            (self.re_max - self.re_min) / (self.nx - 1),
            (self.im_max - self.im_min) / (self.ny - 1),
        )


@dataclass(frozen=True)
class RootRecord:
    """An accepted root with its certification data."""

    location: complex
    residual_modulus: float
    iterations: int
    method: str
    certified_count: int | None = None


def _derivative(f, z: complex) -> complex:
    h = max(_STEP_SCALE, _STEP_SCALE * abs(z))
    return (f(z + h) - f(z - h)) / (2.0 * h)


def newton(f, z0: complex, tol: float = 1e-12, max_iter: int = 50) -> RootRecord:
    """Newton iteration from z0 with numerically differenced derivative.

    Accepts only iterates with |f(z)| < tol; anything else raises
    NonConvergenceError carrying the last iterate, so divergence is never
    silent.
    """
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    z = complex(z0)
    fz = f(z)
    for it in range(1, max_iter + 1):
        if abs(fz) < tol:
            return RootRecord(z, abs(fz), it - 1, "newton")
        df = _derivative(f, z)
        if df == 0 or not (cmath.isfinite(df) and cmath.isfinite(fz)):
            raise NonConvergenceError(
                f"newton stalled at z={z}: derivative {df}, value {fz}",
                last_iterate=z, residual=abs(fz), iterations=it - 1,
            )
        z = z - fz / df
        fz = f(z)
    if abs(fz) < tol:
        return RootRecord(z, abs(fz), max_iter, "newton")
    raise NonConvergenceError(
        f"newton did not reach |f| < {tol} in {max_iter} iterations; last z={z}, |f|={abs(fz)}",
        last_iterate=z, residual=abs(fz), iterations=max_iter,
    )


def _local_minima(values: np.ndarray) -> list[tuple[int, int]]:
    """Strictly smallest entries among their existing 8-neighbours."""
    ny, nx = values.shape
    out = []
    for iy in range(ny):
        for ix in range(nx):
            v = values[iy, ix]
            strict = True
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dy == 0 and dx == 0:
                        continue
                    jy, jx = iy + dy, ix + dx
                    if 0 <= jy < ny and 0 <= jx < nx and not v < values[jy, jx]:
                        strict = False
                        break
                if not strict:
                    break
            if strict:
                out.append((iy, ix))
    return out


def grid_scan(f, region: SearchRegion, tol: float = 1e-12, max_iter: int = 50) -> list[RootRecord]:
    """Localize roots of f in a region: |f| grid -> local minima -> newton.

    Strict local minima of |f| below the candidate percentile seed Newton
    refinement; refined roots are deduplicated and returned sorted by
    (re, im).  An empty list is a valid outcome.  Candidates whose
    refinement diverges are dropped (they were not roots).
    """
    xs = region.re_axis()
    ys = region.im_axis()
    values = np.empty((region.ny, region.nx))
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            values[iy, ix] = abs(f(complex(x, y)))
    threshold = np.percentile(values, CANDIDATE_PERCENTILE)
    roots: list[RootRecord] = []
    for iy, ix in _local_minima(values):
        if not values[iy, ix] < threshold:
            continue
        seed = complex(xs[ix], ys[iy])
        try:
            rec = newton(f, seed, tol=tol, max_iter=max_iter)
        except NonConvergenceError:
            continue
        rec = RootRecord(rec.location, rec.residual_modulus, rec.iterations, "grid-refine")
        for known in roots:
            if abs(known.location - rec.location) < _MERGE_FACTOR * tol:
                break
        else:
            roots.append(rec)
    roots.sort(key=lambda r: (r.location.real, r.location.imag))
    return roots


def _boundary_path(region: SearchRegion, samples_per_edge: int) -> np.ndarray:
    corners = [
        complex(region.re_min, region.im_min),
        complex(region.re_max, region.im_min),
        complex(region.re_max, region.im_max),
        complex(region.re_min, region.im_max),
    ]
    pts = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        t = np.arange(samples_per_edge) / samples_per_edge
        pts.append(a + (b - a) * t)
    return np.concatenate(pts)


def winding_count(f, region: SearchRegion, samples_per_edge: int = 64) -> int:
    """Zeros of f enclosed by the region boundary, via the argument principle.

    Accumulates the phase change of f counterclockwise around the
    rectangle.  Segments where the phase jumps by more than pi/2 are
    bisected adaptively; if refinement bottoms out, or |f| on the boundary
    drops to ~0, a BoundaryContactError reports the offending sample.
    """
    if samples_per_edge < 2:
        raise DomainError(f"samples_per_edge must be at least 2, got {samples_per_edge}")
    path = _boundary_path(region, samples_per_edge)
    vals = np.array([f(z) for z in path])
    mags = np.abs(vals)
    scale = float(np.median(mags))
    floor = max(1e-13 * scale, 1e-300)
    small = int(np.argmin(mags))
    if mags[small] <= floor:
        raise BoundaryContactError(
            f"|f| = {mags[small]:.3e} at boundary sample {path[small]}: "
            "zero too close to the region boundary",
            sample=path[small], value=vals[small],
        )

    def phase_step(za, fa, zb, fb, depth):
        dphi = cmath.phase(fb / fa)
        if abs(dphi) <= 0.5 * math.pi:
            return dphi
        if depth >= 48:
            raise BoundaryContactError(
                f"cannot resolve the phase of f between boundary samples {za} and {zb}",
                sample=zb, value=fb,
            )
        zm = 0.5 * (za + zb)
        fm = f(zm)
        if abs(fm) <= floor:
            raise BoundaryContactError(
                f"|f| = {abs(fm):.3e} at boundary sample {zm}: zero on the region boundary",
                sample=zm, value=fm,
            )
        return phase_step(za, fa, zm, fm, depth + 1) + phase_step(zm, fm, zb, fb, depth + 1)

    total = 0.0
    n = len(path)
    for j in range(n):
        za, fa = path[j], vals[j]
        zb, fb = path[(j + 1) % n], vals[(j + 1) % n]
        total += phase_step(za, fa, zb, fb, 0)
    turns = total / (2.0 * math.pi)
    count = round(turns)
    if abs(turns - count) > 0.25:
        raise BoundaryContactError(
            f"winding number {turns} is not close to an integer; boundary data inconsistent",
            sample=None, value=None,
        )
    return int(count)


def certify(f, record: RootRecord, region_half_width: float, samples_per_edge: int = 64) -> RootRecord:
    """Attach a winding-number certificate over a square around the root."""
    z = record.location
    region = SearchRegion(
        z.real - region_half_width, z.real + region_half_width,
        z.imag - region_half_width, z.imag + region_half_width,
        nx=2, ny=2,
    )
    count = winding_count(f, region, samples_per_edge)
    return RootRecord(record.location, record.residual_modulus, record.iterations,
                      record.method, certified_count=count)
