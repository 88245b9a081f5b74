"""Numba fast path vs pure-numpy fallback: selection and numerical parity."""

import numpy as np
import pytest

from crackwave import _accel
from crackwave.errors import ConfigError


@pytest.fixture()
def sample_points():
    rng = np.random.default_rng(51)
    pts = rng.normal(size=400) + 1j * rng.normal(size=400)
    # Include exactly-real points on both sides of zero: they exercise the
    # branch-cut sign fix.
    pts[:50] = np.linspace(-3.0, 3.0, 50) + 0.0j
    return pts


class TestBackendSelection:
    def test_auto_uses_numba_when_available(self, monkeypatch):
        monkeypatch.delenv(_accel.ACCEL_ENV, raising=False)
        assert _accel.use_numba() == _accel.HAVE_NUMBA

    def test_numpy_forced(self, monkeypatch):
        monkeypatch.setenv(_accel.ACCEL_ENV, "numpy")
        assert _accel.use_numba() is False

    @pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
    def test_numba_forced(self, monkeypatch):
        monkeypatch.setenv(_accel.ACCEL_ENV, "numba")
        assert _accel.use_numba() is True

    def test_unknown_backend_rejected(self, monkeypatch):
        monkeypatch.setenv(_accel.ACCEL_ENV, "gpu")
        with pytest.raises(ConfigError):
            _accel.use_numba()

    def test_thread_bound_validation(self, monkeypatch):
        monkeypatch.setenv(_accel.THREADS_ENV, "zero")
        with pytest.raises(ConfigError):
            _accel.apply_thread_bound()
        monkeypatch.setenv(_accel.THREADS_ENV, "0")
        with pytest.raises(ConfigError):
            _accel.apply_thread_bound()
        monkeypatch.setenv(_accel.THREADS_ENV, "2")
        _accel.apply_thread_bound()


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
class TestBackendParity:
    def _both(self, monkeypatch, fn, *args):
        monkeypatch.setenv(_accel.ACCEL_ENV, "numba")
        fast = fn(*args)
        monkeypatch.setenv(_accel.ACCEL_ENV, "numpy")
        plain = fn(*args)
        return fast, plain

    def test_corrugation_values(self, monkeypatch, sample_points):
        fast, plain = self._both(
            monkeypatch, _accel.corrugation_values,
            sample_points, 1.3, -0.4, 0.8, 1.58, 0.02, 0.69,
        )
        assert np.allclose(fast, plain, rtol=1e-13, atol=1e-300)

    def test_inplane_values(self, monkeypatch, sample_points):
        fast, plain = self._both(
            monkeypatch, _accel.inplane_values,
            sample_points, 1.0, 2.0, -0.3, 0.8, 0.66, 0.1,
        )
        assert np.allclose(fast, plain, rtol=1e-13, atol=1e-300)

    def test_mixed_values(self, monkeypatch, sample_points):
        cs = np.array([1.0, -0.7, 0.4, 1.3, 2.0])
        ds = np.array([0.5, 0.2, -0.9, 0.1, -0.3])
        v0s = np.array([1.2, 0.6, 1.5, 0.9, 0.8])
        fast, plain = self._both(
            monkeypatch, _accel.mixed_values,
            sample_points, 1.0, cs, ds, v0s,
            1.58, 0.02, -0.16, 1.8, 1.38, 1.2, 0.9, 0.5, 0.69,
        )
        assert np.allclose(fast, plain, rtol=1e-13, atol=1e-300)

    def test_synthesize_field(self, monkeypatch):
        x = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
        times = np.linspace(0.0, 3.0, 12)
        k2s = np.array([1.0, 2.0, -1.0])
        amps = np.array([1.0 + 0.2j, 0.3 - 0.1j, 0.5 + 0.0j])
        omegas = np.array([0.5 - 0.02j, 1.1 + 0.0j, 0.5 - 0.02j])
        fast, plain = self._both(monkeypatch, _accel.synthesize_field,
                                 x, times, k2s, amps, omegas)
        assert fast.shape == plain.shape == (12, 64)
        assert np.allclose(fast, plain, rtol=1e-12, atol=1e-15)

    def test_branch_fix_applied_on_real_axis(self, monkeypatch):
        # Real omega < 0 outside the cone must flip the square-root sign in
        # both backends: values at (-w, k2=1)... conjugate of (+w).
        pts = np.array([2.0 + 0.0j, -2.0 + 0.0j])
        fast, plain = self._both(
            monkeypatch, _accel.corrugation_values,
            pts, 1.0, 0.0, 1.0, 1.0, 0.0, 0.69,
        )
        for vals in (fast, plain):
            assert vals[0] == pytest.approx(vals[1], rel=1e-14)
