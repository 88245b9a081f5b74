"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Grid surveys and front synthesis evaluate the same closed-form synthetic
symbols over 1e4..1e6 points; those inner loops live here in two
interchangeable implementations.  Selection is by the environment variable

    CRACKWAVE_ACCEL = auto | numba | numpy      (default: auto)

``auto`` takes numba when it imports, ``numba`` insists on it, ``numpy``
forces the vectorized fallback.  CRACKWAVE_THREADS, when set, bounds the
numba thread count.  Both paths evaluate the formulas in the same order;
``benchmarks/bench_grid.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

ACCEL_ENV = "CRACKWAVE_ACCEL"
THREADS_ENV = "CRACKWAVE_THREADS"


def use_numba() -> bool:
    """Resolve the backend choice from the environment."""
    flag = os.environ.get(ACCEL_ENV, "auto").strip().lower()
    if flag in ("", "auto"):
        return HAVE_NUMBA
    if flag == "numba":
        if not HAVE_NUMBA:
            raise ConfigError("CRACKWAVE_ACCEL=numba but numba is not importable")
        return True
    if flag == "numpy":
        return False
    raise ConfigError(f"unknown CRACKWAVE_ACCEL value {flag!r}; use auto, numba or numpy")


def apply_thread_bound() -> None:
    """Clamp numba's thread pool to CRACKWAVE_THREADS when set."""
    if not HAVE_NUMBA:
        return
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return
    try:
        want = int(raw)
    except ValueError:
        raise ConfigError(f"CRACKWAVE_THREADS must be an integer, got {raw!r}") from None
    if want < 1:
        raise ConfigError(f"CRACKWAVE_THREADS must be >= 1, got {want}")
    numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# pure-numpy implementations

def _np_branch_sqrt(arg: np.ndarray, omega: np.ndarray) -> np.ndarray:
    s = np.sqrt(arg)
    flip = (omega.imag == 0.0) & (arg.real < 0.0) & (omega.real < 0.0)
    return np.where(flip, -s, s)


def _np_synth(omega, k2, c, d, v0):
    arg = np.asarray(v0 * v0 * k2 * k2 - omega * omega, dtype=complex)
    return c * _np_branch_sqrt(arg, omega) + d * 1j * omega


def _np_corrugation(eta, c, d, v0, theta13, omega13, V):
    q11 = _np_synth(eta, 1.0, c, d, v0)
    return np.abs(-q11 * theta13 + 1j * eta * (omega13 / V))


def _np_inplane(omega, k, c, d, v0, flog_i, m_term):
    q33 = _np_synth(omega, k, c, d, v0)
    return np.abs(2.0 * q33 - 1j * omega * flog_i + m_term)


def _np_mixed(omega, k2, cs, ds, v0s, theta13, omega13, omega23,
              f_i, f_iii, fprime_i, fprime_iii, k0, V):
    q11 = _np_synth(omega, k2, cs[0], ds[0], v0s[0])
    q12 = _np_synth(omega, k2, cs[1], ds[1], v0s[1])
    q21 = _np_synth(omega, k2, cs[2], ds[2], v0s[2])
    q22 = _np_synth(omega, k2, cs[3], ds[3], v0s[3])
    q33 = _np_synth(omega, k2, cs[4], ds[4], v0s[4])
    corr = -q11 * theta13 + 1j * (omega / V) * omega13
    energy_i = 2.0 * f_i * q33 - 1j * omega * fprime_i
    energy_iii = 2.0 * f_iii * q22 - 1j * omega * fprime_iii
    coupling = 2.0 * f_iii * (-q12 * theta13 + 1j * k2 * omega23) + 4j * k2 * f_i
    return np.abs(corr * (energy_i + energy_iii * k0 * k0)
                  - k0 * k0 * (q21 + 1j * k2) * coupling)


def _np_field(x, times, k2s, amps, omegas):
    phases = np.exp(1j * (k2s[None, None, :] * x[None, :, None]
                          - omegas[None, None, :] * times[:, None, None]))
    return np.real(np.sum(amps[None, None, :] * phases, axis=2))


# ---------------------------------------------------------------------------
# numba implementations (same arithmetic, explicit loops)

if HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _nb_synth_point(omega, k2, c, d, v0):
        arg = v0 * v0 * k2 * k2 - omega * omega
        s = np.sqrt(arg)
        if omega.imag == 0.0 and arg.real < 0.0 and omega.real < 0.0:
            s = -s
        return c * s + d * 1j * omega

    @njit(cache=True, parallel=True)
    def _nb_corrugation(eta, c, d, v0, theta13, omega13, V):
        out = np.empty(eta.shape[0])
        for i in prange(eta.shape[0]):
            q11 = _nb_synth_point(eta[i], 1.0, c, d, v0)
            out[i] = abs(-q11 * theta13 + 1j * eta[i] * (omega13 / V))
        return out

    @njit(cache=True, parallel=True)
    def _nb_inplane(omega, k, c, d, v0, flog_i, m_term):
        out = np.empty(omega.shape[0])
        for i in prange(omega.shape[0]):
            q33 = _nb_synth_point(omega[i], k, c, d, v0)
            out[i] = abs(2.0 * q33 - 1j * omega[i] * flog_i + m_term)
        return out

    @njit(cache=True, parallel=True)
    def _nb_mixed(omega, k2, cs, ds, v0s, theta13, omega13, omega23,
                  f_i, f_iii, fprime_i, fprime_iii, k0, V):
        out = np.empty(omega.shape[0])
        for i in prange(omega.shape[0]):
            om = omega[i]
            q11 = _nb_synth_point(om, k2, cs[0], ds[0], v0s[0])
            q12 = _nb_synth_point(om, k2, cs[1], ds[1], v0s[1])
            q21 = _nb_synth_point(om, k2, cs[2], ds[2], v0s[2])
            q22 = _nb_synth_point(om, k2, cs[3], ds[3], v0s[3])
            q33 = _nb_synth_point(om, k2, cs[4], ds[4], v0s[4])
            corr = -q11 * theta13 + 1j * (om / V) * omega13
            energy_i = 2.0 * f_i * q33 - 1j * om * fprime_i
            energy_iii = 2.0 * f_iii * q22 - 1j * om * fprime_iii
            coupling = 2.0 * f_iii * (-q12 * theta13 + 1j * k2 * omega23) + 4j * k2 * f_i
            out[i] = abs(corr * (energy_i + energy_iii * k0 * k0)
                         - k0 * k0 * (q21 + 1j * k2) * coupling)
        return out

    @njit(cache=True, parallel=True)
    def _nb_field(x, times, k2s, amps, omegas):
        nt = times.shape[0]
        nx = x.shape[0]
        out = np.zeros((nt, nx))
        for it in prange(nt):
            for im in range(k2s.shape[0]):
                phase_t = omegas[im] * times[it]
                for ix in range(nx):
                    out[it, ix] += (amps[im] * np.exp(1j * (k2s[im] * x[ix] - phase_t))).real
        return out


# ---------------------------------------------------------------------------
# dispatching wrappers

def corrugation_values(eta, c, d, v0, theta13, omega13, V):
    eta = np.ascontiguousarray(eta, dtype=complex)
    if use_numba():
        apply_thread_bound()
        return _nb_corrugation(eta, c, d, v0, theta13, omega13, V)
    return _np_corrugation(eta, c, d, v0, theta13, omega13, V)


def inplane_values(omega, k, c, d, v0, flog_i, m_term):
    omega = np.ascontiguousarray(omega, dtype=complex)
    if use_numba():
        apply_thread_bound()
        return _nb_inplane(omega, k, c, d, v0, flog_i, m_term)
    return _np_inplane(omega, k, c, d, v0, flog_i, m_term)


def mixed_values(omega, k2, cs, ds, v0s, theta13, omega13, omega23,
                 f_i, f_iii, fprime_i, fprime_iii, k0, V):
    omega = np.ascontiguousarray(omega, dtype=complex)
    cs = np.ascontiguousarray(cs, dtype=float)
    ds = np.ascontiguousarray(ds, dtype=float)
    v0s = np.ascontiguousarray(v0s, dtype=float)
    if use_numba():
        apply_thread_bound()
        return _nb_mixed(omega, k2, cs, ds, v0s, theta13, omega13, omega23,
                         f_i, f_iii, fprime_i, fprime_iii, k0, V)
    return _np_mixed(omega, k2, cs, ds, v0s, theta13, omega13, omega23,
                     f_i, f_iii, fprime_i, fprime_iii, k0, V)


def synthesize_field(x, times, k2s, amps, omegas):
    x = np.ascontiguousarray(x, dtype=float)
    times = np.ascontiguousarray(times, dtype=float)
    k2s = np.ascontiguousarray(k2s, dtype=float)
    amps = np.ascontiguousarray(amps, dtype=complex)
    omegas = np.ascontiguousarray(omegas, dtype=complex)
    if use_numba():
        apply_thread_bound()
        return _nb_field(x, times, k2s, amps, omegas)
    return _np_field(x, times, k2s, amps, omegas)
