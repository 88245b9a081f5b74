"""Closed-form elastodynamic scalars for a straight crack moving at speed V.

Everything here is a pure function of the crack speed and the elastic
constants: the slowness factors alpha and beta, the Rayleigh function and
its positive root (the Rayleigh wave speed), the energy-flux factors for
the opening and antiplane modes, and the five coefficient functions
(theta13, omega13, omega23, sigma11, sigma12) that weight the front-wave
dispersion relations.

All speeds are in the same units as the shear wave speed ``b``.  The
subsonic factors are

    alpha^2 = 1 - V^2/a^2,   beta^2 = 1 - V^2/b^2,
    R(V)    = 4*alpha*beta - (1 + beta^2)^2,

with ``a`` the longitudinal wave speed.  R vanishes at V = 0 and again at
the Rayleigh speed c_R; several ratios below are 0/0 at V = 0, so the
implementation switches to exact limit values below a small-speed
threshold and uses cancellation-free rearrangements elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.optimize import brentq

from .errors import DomainError

# Below this fraction of b the 0/0 coefficient ratios switch to their
# exact V -> 0 limit values.
SMALL_SPEED_FRACTION = 1e-6

# Below this fraction of b the Rayleigh function is evaluated through its
# rationalized cubic-in-V^2 form, which has no subtractive cancellation.
_RATIONALIZED_SPEED_FRACTION = 0.5


@dataclass(frozen=True)
class MaterialParams:
    """Isotropic elastic medium: Poisson ratio and shear wave speed.

    The longitudinal speed is derived, ``a = b * sqrt(2(1-nu)/(1-2nu))``.
    Density is optional and only carried as metadata.
    """

    nu: float
    b: float
    rho: float | None = None

    def __post_init__(self):
        if not 0.0 < self.nu < 0.5:
            raise DomainError(f"Poisson ratio must lie in (0, 0.5), got nu={self.nu}")
        if not self.b > 0.0:
            raise DomainError(f"shear wave speed must be positive, got b={self.b}")
        if self.rho is not None and not self.rho > 0.0:
            raise DomainError(f"density must be positive, got rho={self.rho}")

    @property
    def a(self) -> float:
        """Longitudinal wave speed."""
        return self.b * math.sqrt(2.0 * (1.0 - self.nu) / (1.0 - 2.0 * self.nu))


@dataclass(frozen=True)
class LoadState:
    """Unperturbed crack state: speed and edge-field coefficients.

    ``KI0`` and ``KIII0`` are the opening and antiplane stress intensity
    factors of the steady crack; ``A10 .. A30`` are the coefficients of the
    next (square-root) term of the near-edge stress expansion.  Two derived
    ratios enter the dispersion relations: ``m`` couples A30 to KI0 and
    ``k0`` is the mode mixity KIII0/KI0.
    """

    V: float
    KI0: float
    KIII0: float = 0.0
    A10: float = 0.0
    A20: float = 0.0
    A30: float = 0.0

    def __post_init__(self):
        if not self.KI0 > 0.0:
            raise DomainError(f"KI0 must be positive, got {self.KI0}")
        if not self.V > 0.0:
            raise DomainError(f"crack speed must be positive, got V={self.V}")

    @property
    def m(self) -> float:
        return math.sqrt(math.pi / 2.0) * self.A30 / self.KI0

    @property
    def k0(self) -> float:
        return self.KIII0 / self.KI0

    def validate_against(self, mat: MaterialParams) -> None:
        """Check the speed is subsonic-sub-Rayleigh for this material."""
        cr = rayleigh_speed(mat)
        if not self.V < cr:
            raise DomainError(
                f"crack speed V={self.V} must stay below the Rayleigh speed {cr:.6g}"
            )


@dataclass(frozen=True)
class CoefficientSet:
    """The five speed-dependent weights of the dispersion relations."""

    theta13: float
    omega13: float
    omega23: float
    sigma11: float
    sigma12: float


def alpha_beta(V: float, mat: MaterialParams) -> tuple[float, float]:
    """Subsonic slowness factors (alpha, beta) at crack speed V.

    alpha = sqrt(1 - V^2/a^2), beta = sqrt(1 - V^2/b^2); both lie in
    (0, 1] for 0 <= V < b.  Raises DomainError outside [0, b).
    """
    if V < 0.0:
        raise DomainError(f"crack speed must be non-negative, got V={V}")
    if V >= mat.b:
        raise DomainError(
            f"subsonic regime violated: V={V} must stay below shear speed b={mat.b}"
        )
    a = mat.a
    return math.sqrt(1.0 - (V / a) ** 2), math.sqrt(1.0 - (V / mat.b) ** 2)


def _rayleigh_rationalized(V: float, mat: MaterialParams) -> float:
    # R = eps * P(eps) / (4*alpha*beta + (1+beta^2)^2) with eps = V^2.
    # P is the cubic from rationalizing 16 a^2 b^2 - (1+b^2)^4; it removes
    # the 4ab ~ (1+b^2)^2 cancellation at small V.
    A = 1.0 / mat.a**2
    B = 1.0 / mat.b**2
    eps = V * V
    p = 16.0 * (B - A) + eps * (16.0 * A * B - 24.0 * B * B + eps * (8.0 * B**3 - eps * B**4))
    alpha, beta = alpha_beta(V, mat)
    return eps * p / (4.0 * alpha * beta + (1.0 + beta * beta) ** 2)


def rayleigh_function(V: float, mat: MaterialParams) -> float:
    """Rayleigh function R(V) = 4*alpha*beta - (1 + beta^2)^2 on [0, b].

    R(0) = 0, R > 0 on (0, c_R), R(c_R) = 0, R < 0 beyond, and R(b) = -1
    exactly (beta = 0 there); the closed right endpoint is kept so the
    limit value is computable.
    """
    if V < 0.0 or V > mat.b:
        raise DomainError(f"Rayleigh function is defined on [0, b], got V={V}")
    if V < _RATIONALIZED_SPEED_FRACTION * mat.b:
        return _rayleigh_rationalized(V, mat)
    alpha = math.sqrt(1.0 - (V / mat.a) ** 2)
    beta2 = 1.0 - (V / mat.b) ** 2
    beta = math.sqrt(max(beta2, 0.0))
    return 4.0 * alpha * beta - (1.0 + beta2) ** 2


@lru_cache(maxsize=256)
def _rayleigh_speed_cached(nu: float, b: float) -> float:
    mat = MaterialParams(nu=nu, b=b)
    # c_R always exceeds 0.86 b, so [b/2, b] brackets the sign change:
    # R(b/2) > 0, R(b) = -1.
    return brentq(rayleigh_function, 0.5 * b, b, args=(mat,), xtol=1e-14 * b, rtol=1e-13)


def rayleigh_speed(mat: MaterialParams) -> float:
    """Unique root c_R of the Rayleigh function in (0, b), to 1e-12 relative."""
    return _rayleigh_speed_cached(mat.nu, mat.b)


def f_factor_i_limit0() -> float:
    """Limit of the opening-mode energy-flux factor as v -> 0 (exactly 1)."""
    return 1.0


def f_factor_i(v: float, mat: MaterialParams) -> float:
    """Opening-mode energy-flux factor f_I(v) = v^2 alpha / ((1-nu) b^2 R(v)).

    Positive and finite on (0, c_R); tends to 1 as v -> 0 (use
    :func:`f_factor_i_limit0` at v = 0) and diverges at the Rayleigh speed.
    """
    if v <= 0.0:
        raise DomainError(
            f"f_I needs v > 0 (got v={v}); the v=0 limit is f_factor_i_limit0()"
        )
    if v >= rayleigh_speed(mat):
        raise DomainError(f"f_I is defined below the Rayleigh speed, got v={v}")
    alpha, _ = alpha_beta(v, mat)
    return v * v * alpha / ((1.0 - mat.nu) * mat.b**2 * rayleigh_function(v, mat))


def f_factor_iii(v: float, mat: MaterialParams, form=None) -> float:
    """Antiplane energy-flux factor, by default f_III(v) = 1/beta(v).

    ``form`` may be a callable ``(v, mat) -> float`` substituting another
    normalization; the default gives f_III(0) = 1 exactly and grows
    monotonically towards the shear speed.
    """
    if form is not None:
        return form(v, mat)
    if v < 0.0 or v >= mat.b:
        raise DomainError(f"f_III is defined on [0, b), got v={v}")
    if v == 0.0:
        return 1.0
    _, beta = alpha_beta(v, mat)
    return 1.0 / beta


def f_log_derivative_step(which: str, V: float, mat: MaterialParams, h: float) -> float:
    """Plain central difference of ln f at step h (second-order accurate)."""
    f = _select_factor(which)
    return (math.log(f(V + h, mat)) - math.log(f(V - h, mat))) / (2.0 * h)


def _select_factor(which: str):
    if which == "I":
        return f_factor_i
    if which == "III":
        return f_factor_iii
    raise DomainError(f"unknown energy-flux factor {which!r}; expected 'I' or 'III'")


def f_log_derivative(which: str, V: float, mat: MaterialParams) -> float:
    """Logarithmic derivative f'(V)/f(V) of the chosen energy-flux factor.

    Computed as a Richardson-extrapolated central difference of ln f with
    the step halved until two successive extrapolations agree to 1e-9
    relative; the achieved accuracy is therefore verified, not assumed.
    For the antiplane factor the closed form V / (b^2 beta^2) is available
    as an independent check.
    """
    upper = rayleigh_speed(mat) if which == "I" else mat.b
    if not 0.0 < V < upper:
        raise DomainError(f"log-derivative of f_{which} needs 0 < V < {upper:.6g}, got {V}")

    def extrapolated(h: float) -> float:
        d1 = f_log_derivative_step(which, V, mat, h)
        d2 = f_log_derivative_step(which, V, mat, 0.5 * h)
        return (4.0 * d2 - d1) / 3.0

    room = min(V, upper - V)
    h = min(1e-3 * upper, 0.25 * room)
    prev = extrapolated(h)
    best, best_err = prev, math.inf
    for _ in range(24):
        h *= 0.5
        cur = extrapolated(h)
        err = abs(cur - prev)
        if err < best_err:
            best, best_err = cur, err
        if err <= 1e-9 * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return best


def coefficient_functions(V: float, mat: MaterialParams) -> CoefficientSet:
    """The weights theta13, omega13, omega23, sigma11, sigma12 at speed V.

    omega13 = (alpha-beta)(1+beta^2)(alpha+2beta)/R - 2
    omega23 = 2 nu (1+beta^2)(alpha^2-beta^2)/R - 1
    sigma11 = -[4 alpha beta - (1+2alpha^2-beta^2)(1+beta^2)]/R
    sigma12 = -2 (1+beta^2-2 alpha beta)/R
    theta13 = sigma11 + V^2/(2 b^2) sigma12

    Every ratio is 0/0 at V = 0; below ``SMALL_SPEED_FRACTION * b`` the
    exact limits (-1/2, 2nu-1, 1, -(1-2nu), 1) are returned, and above it
    the numerators are rearranged so the leading V^2 factors cancel
    analytically instead of numerically.
    """
    if V <= 0.0:
        raise DomainError(f"coefficient functions need V > 0, got {V}")
    if V >= rayleigh_speed(mat):
        raise DomainError(f"coefficient functions need V below the Rayleigh speed, got {V}")

    A = 1.0 / mat.a**2
    B = 1.0 / mat.b**2
    if V < SMALL_SPEED_FRACTION * mat.b:
        sigma12 = -A / (B - A)
        return CoefficientSet(
            theta13=1.0,
            omega13=-0.5,
            omega23=2.0 * mat.nu - 1.0,
            sigma11=1.0,
            sigma12=sigma12,
        )

    alpha, beta = alpha_beta(V, mat)
    R = rayleigh_function(V, mat)
    eps = V * V
    one_p_b2 = 1.0 + beta * beta
    # alpha - beta = eps (B - A) / (alpha + beta): exact, no cancellation.
    alpha_m_beta = eps * (B - A) / (alpha + beta)
    omega13 = alpha_m_beta * one_p_b2 * (alpha + 2.0 * beta) / R - 2.0
    omega23 = 2.0 * mat.nu * one_p_b2 * eps * (B - A) / R - 1.0
    # 4ab - (1+2a^2-b^2)(1+b^2) = 2 eps (A-B) - 2 (a-b)^2 - eps^2 (2AB - B^2)
    n11 = 2.0 * eps * (A - B) - 2.0 * alpha_m_beta**2 - eps * eps * (2.0 * A * B - B * B)
    sigma11 = -n11 / R
    # 1 + b^2 - 2ab = eps A + (a-b)^2
    sigma12 = -2.0 * (eps * A + alpha_m_beta**2) / R
    theta13 = sigma11 + 0.5 * eps * B * sigma12
    return CoefficientSet(theta13, omega13, omega23, sigma11, sigma12)
