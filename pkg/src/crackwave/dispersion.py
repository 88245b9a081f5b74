"""Assembly of the crack-front-wave dispersion functions.

Three scalar relations are exposed, all built from the elastodynamic
coefficients at the crack speed V and a kernel provider:

* ``d_inplane``   -- opening-mode front waves of a flat crack:
  2*Q33(omega, k) - i*omega*f'_I/f_I (+ 2*m behind an option flag);
* ``d_corrugation`` -- out-of-plane corrugation waves under pure opening
  load, per unit wavenumber: -Q11(eta, 1)*theta13 + i*(eta/V)*omega13,
  a function of the single ray variable eta = omega/|k2| because every
  term is homogeneous of degree 1 (the relation is non-dispersive);
* ``d_mixed``     -- the degeneracy condition of the coupled 2x2 system
  that ties the in-plane and out-of-plane perturbations together when a
  mode-III component KIII0 is present (mixity k0 = KIII0/KI0).

Sign convention: fields vary as e^{i(k2 x2 - omega t)}, so Im(omega) < 0
(equivalently Im(eta) < 0) means temporal decay and is the physical branch
for attenuated front waves.

The determinant identity det(mixed_system_matrix) = KI0^3 * d_mixed and
the k0 -> 0 factorization of d_mixed into the corrugation and in-plane
factors hold exactly and are enforced by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elastodyn import (
    LoadState,
    MaterialParams,
    coefficient_functions,
    f_factor_i,
    f_factor_iii,
    f_log_derivative,
)
from .errors import DomainError
from .kernels import KernelProvider, qbar

RELATIONS = ("inplane", "corrugation", "mixed")
NORMALIZATIONS = ("k2-unit", "raw")

# Coefficients that coeff_overrides may replace (test hooks and
# alternative normalizations; see DispersionProblem).
_OVERRIDABLE = ("theta13", "omega13", "omega23", "sigma11", "sigma12",
                "f_i", "f_iii", "flog_i", "flog_iii")


@dataclass(frozen=True)
class SpectralPoint:
    """A point of the (omega, k2) transform plane with its ray variable."""

    omega: complex
    k2: float

    @property
    def eta(self) -> complex:
        if self.k2 == 0.0:
            raise DomainError("eta = omega/|k2| is undefined at k2 = 0")
        return self.omega / abs(self.k2)


@dataclass
class DispersionProblem:
    """A closed-over dispersion function with its physical parameters.

    The elastodynamic coefficients and energy-flux factors are evaluated
    once at construction.  ``coeff_overrides`` may pin any of
    theta13/omega13/omega23/sigma11/sigma12/f_i/f_iii/flog_i/flog_iii to a
    fixed value -- used by controlled experiments that zero out one term.
    ``include_m_term`` restores the low-frequency 2*m term of the in-plane
    relation, which is negligible (and dropped by default) at large
    omega and k.
    """

    relation: str
    material: MaterialParams
    load: LoadState
    provider: KernelProvider
    normalization: str = "k2-unit"
    include_m_term: bool = False
    f3_form: object = None
    coeff_overrides: dict | None = None
    raw_k2: float = 1.0

    theta13: float = field(init=False, repr=False)
    omega13: float = field(init=False, repr=False)
    omega23: float = field(init=False, repr=False)
    sigma11: float = field(init=False, repr=False)
    sigma12: float = field(init=False, repr=False)
    f_i: float = field(init=False, repr=False)
    f_iii: float = field(init=False, repr=False)
    flog_i: float = field(init=False, repr=False)
    flog_iii: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise DomainError(f"unknown relation {self.relation!r}; expected one of {RELATIONS}")
        if self.normalization not in NORMALIZATIONS:
            raise DomainError(
                f"unknown normalization {self.normalization!r}; expected one of {NORMALIZATIONS}"
            )
        self.load.validate_against(self.material)
        self._check_provider()

        mat, V = self.material, self.load.V
        coeffs = coefficient_functions(V, mat)
        values = {
            "theta13": coeffs.theta13,
            "omega13": coeffs.omega13,
            "omega23": coeffs.omega23,
            "sigma11": coeffs.sigma11,
            "sigma12": coeffs.sigma12,
            "f_i": f_factor_i(V, mat),
            "f_iii": f_factor_iii(V, mat, form=self.f3_form),
            "flog_i": f_log_derivative("I", V, mat),
            "flog_iii": f_log_derivative("III", V, mat),
        }
        if self.coeff_overrides:
            unknown = set(self.coeff_overrides) - set(_OVERRIDABLE)
            if unknown:
                raise DomainError(f"unknown coefficient overrides: {sorted(unknown)}")
            values.update(self.coeff_overrides)
        for name, val in values.items():
            setattr(self, name, float(val))

    def _check_provider(self):
        prov = self.provider
        if prov.V is not None:
            prov_b = prov.material.b if prov.material is not None else self.material.b
            if abs(prov.V / prov_b - self.load.V / self.material.b) > 1e-12:
                raise DomainError(
                    f"provider speed V/b={prov.V / prov_b:.12g} does not match "
                    f"load V/b={self.load.V / self.material.b:.12g}"
                )
        if prov.material is not None and abs(prov.material.nu - self.material.nu) > 1e-12:
            raise DomainError(
                f"provider Poisson ratio {prov.material.nu} does not match material {self.material.nu}"
            )

    @property
    def fprime_i(self) -> float:
        return self.f_i * self.flog_i

    @property
    def fprime_iii(self) -> float:
        return self.f_iii * self.flog_iii


def d_inplane(p: DispersionProblem, omega: complex, k: float) -> complex:
    """In-plane relation 2*Q33(omega,k) - i*omega*f'_I/f_I (+ 2m if enabled)."""
    if p.relation != "inplane":
        raise DomainError(f"d_inplane needs an inplane problem, got {p.relation!r}")
    val = 2.0 * qbar(p.provider, (3, 3), omega, k) - 1j * omega * p.flog_i
    if p.include_m_term:
        val += 2.0 * p.load.m
    return val


def d_corrugation(p: DispersionProblem, eta: complex) -> complex:
    """Corrugation bracket -Q11(eta,1)*theta13 + i*(eta/V)*omega13.

    Evaluated at unit wavenumber; by degree-1 homogeneity the bracket at
    general (omega, k2) is |k2| times this value at eta = omega/|k2|, so
    the roots do not depend on wavelength.
    """
    if p.relation != "corrugation":
        raise DomainError(f"d_corrugation needs a corrugation problem, got {p.relation!r}")
    q11 = qbar(p.provider, (1, 1), eta, 1.0)
    return -q11 * p.theta13 + 1j * eta * p.omega13 / p.load.V


def w_modulus(p: DispersionProblem, eta: complex) -> float:
    """Level-curve function |Q11*theta13 - i*(eta/V)*omega13| = |d_corrugation|."""
    return abs(d_corrugation(p, eta))


def _mixed_pieces(p: DispersionProblem, omega: complex, k2: float):
    q11 = qbar(p.provider, (1, 1), omega, k2)
    q12 = qbar(p.provider, (1, 2), omega, k2)
    q21 = qbar(p.provider, (2, 1), omega, k2)
    q22 = qbar(p.provider, (2, 2), omega, k2)
    q33 = qbar(p.provider, (3, 3), omega, k2)
    corr = -q11 * p.theta13 + 1j * (omega / p.load.V) * p.omega13
    energy_i = 2.0 * p.f_i * q33 - 1j * omega * p.fprime_i
    energy_iii = 2.0 * p.f_iii * q22 - 1j * omega * p.fprime_iii
    coupling = 2.0 * p.f_iii * (-q12 * p.theta13 + 1j * k2 * p.omega23) + 4j * k2 * p.f_i
    return corr, energy_i, energy_iii, coupling, q21


def mixed_system_matrix(p: DispersionProblem, omega: complex, k2: float) -> np.ndarray:
    """2x2 coefficient matrix of the coupled (phi, psi) spectral system.

    Row 1 is the energy-balance equation, row 2 the local-symmetry
    (KII = 0) equation; a nontrivial front perturbation exists where the
    matrix is singular.  With KIII0 = 0 the off-diagonal entries vanish
    and the system decouples.
    """
    if p.relation != "mixed":
        raise DomainError(f"mixed_system_matrix needs a mixed problem, got {p.relation!r}")
    ki, kiii = p.load.KI0, p.load.KIII0
    corr, energy_i, energy_iii, coupling, q21 = _mixed_pieces(p, omega, k2)
    m11 = energy_i * ki**2 + energy_iii * kiii**2
    m12 = ki * kiii * coupling
    m21 = (q21 + 1j * k2) * kiii
    m22 = corr * ki
    return np.array([[m11, m12], [m21, m22]], dtype=complex)


def d_mixed(p: DispersionProblem, omega: complex, k2: float) -> complex:
    """Mixed-mode dispersion function (determinant up to the factor KI0^3).

    corr * (energy_i + energy_iii * k0^2) - k0^2 * (Q21 + i k2) * coupling,
    where k0 = KIII0/KI0.  At k0 = 0 this factorizes exactly into
    k2 * d_corrugation(omega/|k2|) times the in-plane factor.
    """
    if p.relation != "mixed":
        raise DomainError(f"d_mixed needs a mixed problem, got {p.relation!r}")
    k0 = p.load.k0
    corr, energy_i, energy_iii, coupling, q21 = _mixed_pieces(p, omega, k2)
    return corr * (energy_i + energy_iii * k0**2) - k0**2 * (q21 + 1j * k2) * coupling
