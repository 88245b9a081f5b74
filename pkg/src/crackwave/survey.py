"""High-level numerical studies over the dispersion relations.

``level_curve_grid`` fills a rectangle of the complex eta (or omega) plane
with the level-curve function of the chosen relation -- the map whose
valleys locate front-wave roots.  ``attenuation_sweep`` tracks the
corrugation root across a range of crack speeds, recording its imaginary
part (the attenuation rate).  ``critical_speed_search`` bisects for the
smallest speed at which a weakly-attenuated corrugation root exists.

All outputs are assembled in deterministic input order regardless of how
the point evaluations are parallelized internally, so grids reproduce
bit-for-bit across runs with identical inputs and backend.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _accel
from .dispersion import DispersionProblem, d_corrugation, d_inplane, d_mixed, w_modulus
from .elastodyn import rayleigh_speed
from .errors import CapabilityError, CrackwaveError, DomainError
from .kernels import COMPONENT_ORDER, SyntheticKernelProvider
from .rootfind import RootRecord, SearchRegion, grid_scan

# Defaults for the critical-speed predicate: a root counts as a front wave
# when its residual is below this and |Im eta| stays under this fraction
# of |Re eta|.  Both are configurable per call.
DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_IM_RATIO_MAX = 0.25


@dataclass
class GridSurvey:
    """A rectangular survey of the level-curve function.

    ``values`` is row-major over the region grid: rows follow the
    imaginary axis (ascending), columns the real axis (ascending).
    ``metadata`` echoes the physical parameters; a ``timestamp`` entry is
    allowed but never set by this module so that emitted files stay
    byte-reproducible.
    """

    region: SearchRegion
    values: np.ndarray
    metadata: dict


@dataclass
class SweepResult:
    """Corrugation-root track over increasing crack speeds.

    ``roots[i]`` is None where no root was found at ``speeds[i]`` (the
    absence is recorded, not skipped); ``attenuation[i]`` is Im(eta) or
    None correspondingly.
    """

    speeds: list
    roots: list
    attenuation: list


def _grid_points(region: SearchRegion):
    xs = region.re_axis()
    ys = region.im_axis()
    grid = xs[None, :] + 1j * ys[:, None]
    return grid.ravel()


def _fast_grid(problem: DispersionProblem, pts: np.ndarray) -> np.ndarray | None:
    """Array fast path for synthetic providers; None when not applicable."""
    prov = problem.provider
    if not isinstance(prov, SyntheticKernelProvider):
        return None
    if problem.relation == "corrugation":
        c, d, v0 = prov.params.for_component((1, 1))
        return _accel.corrugation_values(
            pts, c, d, v0, problem.theta13, problem.omega13, problem.load.V
        )
    k2 = problem.raw_k2 if problem.normalization == "raw" else 1.0
    if problem.relation == "inplane":
        c, d, v0 = prov.params.for_component((3, 3))
        m_term = 2.0 * problem.load.m if problem.include_m_term else 0.0
        return _accel.inplane_values(pts, k2, c, d, v0, problem.flog_i, m_term)
    triples = np.array([prov.params.for_component(comp) for comp in COMPONENT_ORDER])
    return _accel.mixed_values(
        pts, k2, triples[:, 0], triples[:, 1], triples[:, 2],
        problem.theta13, problem.omega13, problem.omega23,
        problem.f_i, problem.f_iii, problem.fprime_i, problem.fprime_iii,
        problem.load.k0, problem.load.V,
    )


def dispersion_modulus(problem: DispersionProblem):
    """Scalar |D| evaluator for the problem's relation (generic path)."""
    if problem.relation == "corrugation":
        return lambda z: w_modulus(problem, z)
    k2 = problem.raw_k2 if problem.normalization == "raw" else 1.0
    if problem.relation == "inplane":
        return lambda z: abs(d_inplane(problem, z, k2))
    return lambda z: abs(d_mixed(problem, z, k2))


def level_curve_grid(problem: DispersionProblem, region: SearchRegion) -> GridSurvey:
    """Fill the region with the level-curve values of the problem's relation.

    Synthetic providers go through the accelerated array kernels; any
    other provider is evaluated point by point in deterministic row-major
    order, and a capability failure is reported with the first offending
    grid point.
    """
    pts = _grid_points(region)
    values = _fast_grid(problem, pts)
    if values is None:
        f = dispersion_modulus(problem)
        values = np.empty(pts.shape[0])
        for i, z in enumerate(pts):
            try:
                values[i] = f(complex(z))
            except CapabilityError as exc:
                raise CapabilityError(f"at grid point {complex(z)}: {exc}") from exc
    metadata = {
        "relation": problem.relation,
        "V_over_b": problem.load.V / problem.material.b,
        "nu": problem.material.nu,
        "provider": problem.provider.kind,
        "normalization": problem.normalization,
    }
    return GridSurvey(region=region, values=values.reshape(region.ny, region.nx),
                      metadata=metadata)


def _problem_at_speed(base: DispersionProblem, V: float, provider_factory) -> DispersionProblem:
    provider = provider_factory(V) if provider_factory is not None else base.provider.with_speed(V)
    load = replace(base.load, V=V)
    return DispersionProblem(
        relation="corrugation",
        material=base.material,
        load=load,
        provider=provider,
        normalization=base.normalization,
        include_m_term=base.include_m_term,
        f3_form=base.f3_form,
        coeff_overrides=base.coeff_overrides,
        raw_k2=base.raw_k2,
    )


def _corrugation_roots(problem: DispersionProblem, region: SearchRegion,
                       tol: float) -> list[RootRecord]:
    return grid_scan(lambda eta: d_corrugation(problem, eta), region, tol=tol)


def _pick_root(roots: list[RootRecord], previous: complex | None) -> complex:
    if previous is not None:
        return min(roots, key=lambda r: abs(r.location - previous)).location
    # First speed of a track: prefer the most wave-like (least attenuated)
    # root, with a deterministic tie-break.
    return min(roots, key=lambda r: (abs(r.location.imag),
                                     r.location.real, r.location.imag)).location


def attenuation_sweep(
    base: DispersionProblem,
    speeds,
    region: SearchRegion,
    provider_factory=None,
    tol: float = 1e-10,
) -> SweepResult:
    """Track the corrugation root and its attenuation over crack speeds.

    ``speeds`` are V/b values in (0, c_R/b), processed in ascending order.
    Per speed, roots are located by grid scan plus Newton refinement; the
    root nearest the previous speed's root is kept for branch continuity.
    Speeds where no root is found (or where evaluation fails) are recorded
    with an explicit absence, and the sweep continues.

    ``provider_factory(V)`` builds a kernel provider for crack speed V;
    without it the base provider is rebuilt via ``with_speed``.
    """
    b = base.material.b
    cr_over_b = rayleigh_speed(base.material) / b
    speeds = sorted(float(v) for v in speeds)
    for v in speeds:
        if not 0.0 < v < cr_over_b:
            raise DomainError(
                f"sweep speed V/b={v} must lie in (0, c_R/b) = (0, {cr_over_b:.6g})"
            )
    roots: list = []
    attenuation: list = []
    previous = None
    for v in speeds:
        try:
            problem = _problem_at_speed(base, v * b, provider_factory)
            found = _corrugation_roots(problem, region, tol)
        except CrackwaveError:
            found = []
        if not found:
            roots.append(None)
            attenuation.append(None)
            continue
        root = _pick_root(found, previous)
        roots.append(root)
        attenuation.append(root.imag)
        previous = root
    return SweepResult(speeds=speeds, roots=roots, attenuation=attenuation)


def critical_speed_search(
    base: DispersionProblem,
    v_lo: float,
    v_hi: float,
    tol_v: float,
    region: SearchRegion,
    provider_factory=None,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    im_ratio_max: float = DEFAULT_IM_RATIO_MAX,
    min_abs_eta: float = 1e-9,
) -> float | None:
    """Smallest V in [v_lo, v_hi] with a weakly-attenuated corrugation root.

    Bisects on the predicate "some root in the region has residual below
    ``residual_tol`` and |Im eta| < ``im_ratio_max`` * |Re eta|", assumed
    monotone in V.  Roots with |eta| < ``min_abs_eta`` are ignored: eta = 0
    is a stationary perturbation, not a propagating front wave.  Returns
    v_lo if the predicate already holds there, None if it never holds,
    otherwise the threshold within ``tol_v``.  Speeds are absolute (same
    units as the shear speed).
    """
    cr = rayleigh_speed(base.material)
    if not 0.0 < v_lo < v_hi < cr:
        raise DomainError(
            f"need 0 < v_lo < v_hi < c_R = {cr:.6g}, got [{v_lo}, {v_hi}]"
        )
    if tol_v <= 0.0:
        raise DomainError(f"tol_v must be positive, got {tol_v}")

    def predicate(V: float) -> bool:
        try:
            problem = _problem_at_speed(base, V, provider_factory)
            found = _corrugation_roots(problem, region, residual_tol)
        except CrackwaveError as exc:
            raise CrackwaveError(f"critical-speed predicate failed at V={V}: {exc}") from exc
        for rec in found:
            eta = rec.location
            if abs(eta) >= min_abs_eta and abs(eta.imag) < im_ratio_max * abs(eta.real):
                return True
        return False

    if predicate(v_lo):
        return v_lo
    if not predicate(v_hi):
        return None
    lo, hi = v_lo, v_hi
    while hi - lo > tol_v:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi
