"""Space-time reconstruction of the perturbed crack front from modal roots.

A dispersion root (k2, omega) is one Fourier mode of the front
perturbation; superposing modes gives the real field

    phi(x2, t) = sum_m Re[ A_m * exp(i*(k2_m*x2 - omega_m*t)) ],

so a real omega propagates neutrally at speed Re(omega)/k2 and
Im(omega) = -gamma < 0 decays like e^{-gamma t}.  ``measure_speed``
recovers the propagation speed of a synthesized field from the circular
cross-correlation lag between successive time slices, which is what makes
the synthesized picture checkable against the roots that produced it.

The spatial window is sampled periodically (endpoint excluded), so a
window spanning an integer number of wavelengths wraps exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import DomainError, SynthesisError

# Time slices with rms below this fraction of the strongest slice carry no
# usable phase information and are skipped by measure_speed.
_RMS_FLOOR_FRACTION = 1e-12


@dataclass(frozen=True)
class Mode:
    """One front-perturbation mode: wavenumber, amplitude, dispersion root.

    ``residual`` is the dispersion-relation residual |D| at (omega, k2);
    synthesize() rejects modes whose residual exceeds the front tolerance.
    """

    k2: float
    amplitude: complex
    omega: complex
    residual: float = 0.0


@dataclass(frozen=True)
class SpatialWindow:
    """Periodically sampled interval: n points, spacing (x_max-x_min)/n."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise DomainError(f"window needs x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if self.n < 2:
            raise DomainError(f"window needs at least 2 samples, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    def grid(self) -> np.ndarray:
        return self.x_min + np.arange(self.n) * self.dx


@dataclass
class ModalFront:
    """A set of modes with the sampling window and times to render them on."""

    modes: list
    window: SpatialWindow
    times: list
    residual_tol: float = 1e-8


def synthesize(front: ModalFront) -> np.ndarray:
    """Render the real space-time field of a modal front, shape (nt, nx).

    Each mode contributes Re[A e^{i(k2 x - omega t)}]; the conjugate
    partner that makes the underlying complex field real is implicit in
    taking the real part.  A mode whose stored dispersion residual exceeds
    ``front.residual_tol`` is rejected with a diagnostic.
    """
    if not front.modes:
        raise SynthesisError("modal front has no modes")
    for idx, mode in enumerate(front.modes):
        if mode.residual > front.residual_tol:
            raise SynthesisError(
                f"mode {idx} (k2={mode.k2}, omega={mode.omega}) has dispersion "
                f"residual {mode.residual:.3e} above tolerance {front.residual_tol:.3e}"
            )
    times = np.asarray(front.times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise SynthesisError("modal front needs a non-empty 1-D list of times")
    k2s = np.array([m.k2 for m in front.modes], dtype=float)
    amps = np.array([m.amplitude for m in front.modes], dtype=complex)
    omegas = np.array([m.omega for m in front.modes], dtype=complex)
    return _accel.synthesize_field(front.window.grid(), times, k2s, amps, omegas)


def _pair_lag(s0: np.ndarray, s1: np.ndarray) -> float:
    """Signed circular cross-correlation lag of s1 relative to s0, in cells.

    Ties between equal correlation peaks (periodic fields repeat their
    peak every wavelength) resolve to the smallest |lag|; the peak is then
    refined to sub-cell accuracy by parabolic interpolation.
    """
    n = s0.size
    corr = np.fft.ifft(np.fft.fft(s1) * np.conj(np.fft.fft(s0))).real
    peak = corr.max()
    ties = np.nonzero(corr >= peak - 1e-9 * max(abs(peak), 1e-300))[0]
    signed = np.where(ties > n // 2, ties - n, ties)
    pick = int(np.argmin(np.abs(signed)))
    m = int(ties[pick])
    lag = float(signed[pick])
    c_minus, c_0, c_plus = corr[(m - 1) % n], corr[m], corr[(m + 1) % n]
    denom = c_minus - 2.0 * c_0 + c_plus
    if denom != 0.0:
        delta = 0.5 * (c_minus - c_plus) / denom
        if abs(delta) <= 1.0:
            lag += delta
    return lag


def measure_speed(field: np.ndarray, dx: float, dt: float) -> float:
    """Propagation speed of a dominant mode from time-slice correlation lags.

    Takes the median of per-pair lags over successive slices (robust to a
    sign flip of a standing field and to near-node slices, which are
    skipped).  Matches Re(omega)/k2 to within a fraction of a grid cell
    per time step; uniform exponential decay does not bias the estimate.
    """
    field = np.asarray(field, dtype=float)
    if field.ndim != 2 or field.shape[0] < 2 or field.shape[1] < 4:
        raise SynthesisError(
            f"measure_speed needs a (nt>=2, nx>=4) field, got shape {field.shape}"
        )
    if dx <= 0.0 or dt <= 0.0:
        raise DomainError(f"grid steps must be positive, got dx={dx}, dt={dt}")
    rms = np.sqrt(np.mean(field * field, axis=1))
    strongest = rms.max()
    if not strongest > 0.0:
        raise SynthesisError("degenerate (identically zero) field: no speed to measure")
    usable = rms > _RMS_FLOOR_FRACTION * strongest
    lags = []
    for j in range(field.shape[0] - 1):
        if usable[j] and usable[j + 1]:
            lags.append(_pair_lag(field[j], field[j + 1]))
    if not lags:
        raise SynthesisError("no usable pair of time slices: field vanishes almost everywhere")
    return float(np.median(lags)) * dx / dt


def modes_from_corrugation_root(eta: complex, wavenumbers, amplitudes,
                                residual: float = 0.0) -> list:
    """Build modes from a corrugation root: non-dispersive, omega = eta*|k2|."""
    modes = []
    for k2, amp in zip(wavenumbers, amplitudes):
        if k2 == 0.0:
            raise DomainError("corrugation modes need k2 != 0")
        modes.append(Mode(k2=float(k2), amplitude=complex(amp),
                          omega=eta * abs(k2), residual=residual))
    return modes
