"""Shared fixtures: materials, loads, and engineered-root kernel doubles."""

from dataclasses import dataclass

import numpy as np
import pytest

from crackwave.dispersion import DispersionProblem
from crackwave.elastodyn import LoadState, MaterialParams, coefficient_functions
from crackwave.kernels import KernelProvider, radiating_sqrt


@pytest.fixture(scope="session")
def material():
    return MaterialParams(nu=0.3, b=1.0)


@pytest.fixture()
def load_v069():
    return LoadState(V=0.69, KI0=1.0)


@dataclass(frozen=True)
class TwoBranchKernelProvider(KernelProvider):
    """Test double: Q11 as a sum of two radiating square roots.

    A single c*sqrt(v0^2 k2^2 - w^2) + d*i*w term with real coefficients
    can only place corrugation roots on the real or imaginary axis; two
    branch speeds give enough freedom to pin a genuinely complex root
    while keeping degree-1 homogeneity and conjugate symmetry.
    """

    c1: float = 0.0
    v1: float = 0.35
    c2: float = 0.0
    v2: float = 0.95

    kind = "synthetic-two-branch"
    capability = "complex-plane"

    def _component(self, component, omega, k2):
        if component != (1, 1):
            return 0.0 + 0.0j
        s1 = radiating_sqrt(self.v1 * self.v1 * k2 * k2 - omega * omega, omega)
        s2 = radiating_sqrt(self.v2 * self.v2 * k2 * k2 - omega * omega, omega)
        return self.c1 * s1 + self.c2 * s2

    def with_speed(self, V):
        from dataclasses import replace

        return replace(self, V=V)


@dataclass(frozen=True)
class QuadraticBracketProvider(KernelProvider):
    """Test double making the corrugation bracket an exact quadratic.

    Q11 is defined at unit wavenumber as
        q(eta) = (i*eta*omega13/V - K*(eta - a)*(eta - b)) / theta13
    and extended by degree-1 homogeneity, so that
        d_corrugation(eta) = K*(eta - a)*(eta - b)
    identically: two prescribed roots, nothing else.  Used to pin down
    root-selection behaviour (continuity tracking) with zero ambiguity.
    """

    root_a: complex = 0.0j
    root_b: complex = 0.0j
    scale: float = 1.0
    theta13: float = 1.0
    omega13: float = 1.0

    kind = "synthetic-quadratic"
    capability = "complex-plane"

    def _component(self, component, omega, k2):
        if component != (1, 1):
            return 0.0 + 0.0j
        eta = omega / k2
        bracket = self.scale * (eta - self.root_a) * (eta - self.root_b)
        q_unit = (1j * eta * self.omega13 / self.V - bracket) / self.theta13
        return k2 * q_unit


def quadratic_bracket_provider(mat, V, root_a, root_b, scale=1.0):
    co = coefficient_functions(V, mat)
    return QuadraticBracketProvider(
        material=mat, V=V, root_a=complex(root_a), root_b=complex(root_b),
        scale=scale, theta13=co.theta13, omega13=co.omega13,
    )


def engineered_corrugation_provider(mat, V, eta_star, v1=0.35, v2=0.95):
    """Kernel double whose corrugation bracket vanishes exactly at eta_star.

    Solves the 2x2 real system for (c1, c2) so that
    -theta13*(c1*S1 + c2*S2) + i*eta*omega13/V = 0 at eta = eta_star.
    """
    co = coefficient_functions(V, mat)
    s1 = radiating_sqrt(v1 * v1 - eta_star * eta_star, eta_star)
    s2 = radiating_sqrt(v2 * v2 - eta_star * eta_star, eta_star)
    a1 = -co.theta13 * s1
    a2 = -co.theta13 * s2
    rhs = -1j * eta_star * co.omega13 / V
    system = np.array([[a1.real, a2.real], [a1.imag, a2.imag]])
    c1, c2 = np.linalg.solve(system, [rhs.real, rhs.imag])
    return TwoBranchKernelProvider(material=mat, V=V, c1=c1, v1=v1, c2=c2, v2=v2)


def corrugation_problem(mat, V, provider, **kwargs):
    return DispersionProblem(
        relation="corrugation",
        material=mat,
        load=LoadState(V=V, KI0=1.0),
        provider=provider,
        **kwargs,
    )
