"""Root localization: Newton, grid scan, argument-principle certification."""

import numpy as np
import pytest

from conftest import corrugation_problem, engineered_corrugation_provider

from crackwave.dispersion import d_corrugation
from crackwave.errors import BoundaryContactError, DomainError, NonConvergenceError
from crackwave.rootfind import SearchRegion, certify, grid_scan, newton, winding_count


class TestSearchRegion:
    def test_validation(self):
        with pytest.raises(DomainError):
            SearchRegion(1.0, 1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            SearchRegion(0.0, 1.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            SearchRegion(0.0, 1.0, 0.0, 1.0, nx=1)

    def test_axes(self):
        region = SearchRegion(0.0, 1.0, -1.0, 0.0, nx=11, ny=21)
        assert region.re_axis().shape == (11,)
        assert region.im_axis().shape == (21,)
        assert region.cell_size() == (0.1, 0.05)


class TestNewton:
    def test_quadratic_known_root(self):
        rec = newton(lambda z: z * z + 1, 0.1 + 0.9j, tol=1e-12)
        assert abs(rec.location - 1j) < 1e-12
        assert rec.residual_modulus < 1e-12
        assert rec.method == "newton"

    def test_linear_one_step(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            c = complex(rng.normal(), rng.normal())
            rec = newton(lambda z: z - c, c + 1.0 + 1.0j, tol=1e-6)
            assert rec.iterations == 1
            assert abs(rec.location - c) < 1e-6

    def test_engineered_corrugation_root(self, material):
        V, eta_star = 0.69, 0.8 - 0.05j
        provider = engineered_corrugation_provider(material, V, eta_star)
        p = corrugation_problem(material, V, provider)
        rec = newton(lambda e: d_corrugation(p, e), 0.75 - 0.1j, tol=1e-12)
        assert abs(rec.location - eta_star) < 1e-8

    def test_divergence_reported(self):
        # exp(z) + 3 has no zeros on this path: the iteration flees to the
        # flat region and the failure must carry the last iterate.
        with pytest.raises(NonConvergenceError) as info:
            newton(lambda z: np.exp(z) + 3.0, 0.0 + 0.0j, tol=1e-12, max_iter=8)
        assert info.value.last_iterate is not None
        assert info.value.residual is not None

    def test_max_iter_exhaustion_reported(self):
        # A genuine slow case: high-multiplicity zero converges linearly.
        with pytest.raises(NonConvergenceError) as info:
            newton(lambda z: (z - 1.0) ** 9, 2.0 + 0.0j, tol=1e-300, max_iter=5)
        assert info.value.iterations == 5

    def test_zero_derivative_reported(self):
        with pytest.raises(NonConvergenceError):
            newton(lambda z: 1.0 + 0j, 0.0j, tol=1e-12, max_iter=5)

    def test_tolerance_validated(self):
        with pytest.raises(DomainError):
            newton(lambda z: z, 1.0, tol=0.0)


class TestGridScan:
    def test_quadratic_two_roots(self):
        region = SearchRegion(-2.0, 2.0, -2.0, 2.0, nx=101, ny=101)
        roots = grid_scan(lambda z: z * z + 1, region, tol=1e-12)
        assert len(roots) == 2
        assert abs(roots[0].location + 1j) < 1e-12
        assert abs(roots[1].location - 1j) < 1e-12
        assert all(r.method == "grid-refine" for r in roots)

    def test_constant_no_candidates(self):
        region = SearchRegion(-2.0, 2.0, -2.0, 2.0, nx=51, ny=51)
        assert grid_scan(lambda z: 1.0 + 0j, region) == []

    def test_root_on_region_boundary(self):
        # Zero at re_max lands on a grid node when the grid touches it.
        region = SearchRegion(0.0, 2.0, -1.0, 1.0, nx=21, ny=21)
        roots = grid_scan(lambda z: z - 2.0, region, tol=1e-12)
        assert len(roots) == 1
        assert abs(roots[0].location - 2.0) < 1e-12

    def test_double_root_merged(self):
        region = SearchRegion(-1.0, 1.0, -1.0, 1.0, nx=81, ny=81)
        roots = grid_scan(lambda z: (z - 0.25) ** 2, region, tol=1e-10)
        assert len(roots) == 1
        assert abs(roots[0].location - 0.25) < 1e-5

    def test_refinement_stays_local(self):
        # For well-separated roots the refined location stays within two
        # grid cells of its seed.
        region = SearchRegion(-2.0, 2.0, -2.0, 2.0, nx=41, ny=41)
        cell = max(region.cell_size())
        roots = grid_scan(lambda z: z * z + 1, region, tol=1e-12)
        for rec in roots:
            true = 1j if rec.location.imag > 0 else -1j
            assert abs(rec.location - true) < 2 * cell

    def test_deterministic_ordering(self):
        region = SearchRegion(-2.0, 2.0, -2.0, 2.0, nx=101, ny=101)
        roots = grid_scan(lambda z: (z - 1) * (z + 1) * (z - 1j), region, tol=1e-12)
        locs = [r.location for r in roots]
        assert locs == sorted(locs, key=lambda z: (z.real, z.imag))
        assert len(locs) == 3


class TestWindingCount:
    def test_simple_zero(self):
        region = SearchRegion(-1.0, 1.0, -1.0, 1.0)
        assert winding_count(lambda z: z, region) == 1

    def test_double_zero(self):
        region = SearchRegion(-1.0, 1.0, -1.0, 1.0)
        assert winding_count(lambda z: z * z, region) == 2

    def test_two_separate_zeros(self):
        region = SearchRegion(-1.0, 1.0, -1.0, 1.0)
        assert winding_count(lambda z: (z - 0.3) * (z + 0.5j), region) == 2

    def test_no_zeros(self):
        region = SearchRegion(-1.0, 1.0, -1.0, 1.0)
        assert winding_count(lambda z: z - 5.0, region) == 0

    @pytest.mark.parametrize("shift", [0.0, 0.4])
    def test_matches_grid_scan_for_quartic(self, shift):
        # Degree-4 polynomial with a known inside/outside split.
        roots = [0.5 + 0.2j, -0.6 - 0.3j, 0.1 - 0.7j, 2.5 + shift * 1j]

        def f(z):
            out = 1.0 + 0.0j
            for r in roots:
                out *= z - r
            return out

        region = SearchRegion(-1.0, 1.0, -1.0, 1.0, nx=81, ny=81)
        count = winding_count(f, region, samples_per_edge=128)
        found = grid_scan(f, region, tol=1e-11)
        inside = [r for r in roots if abs(r.real) < 1 and abs(r.imag) < 1]
        assert count == len(inside)
        assert len(found) == len(inside)
        for rec in found:
            assert min(abs(rec.location - r) for r in inside) < 1e-11

    def test_boundary_zero_detected(self):
        region = SearchRegion(-1.0, 1.0, -1.0, 1.0)
        with pytest.raises(BoundaryContactError):
            winding_count(lambda z: z - (1.0 + 0.0j), region, samples_per_edge=64)

    def test_winding_of_engineered_corrugation_root(self, material):
        # The contour must stay in the closed lower half-plane: the kernel
        # square roots carry branch cuts along the real axis outside the
        # sonic cone, and the argument principle needs analyticity.
        V, eta_star = 0.69, 0.8 - 0.05j
        provider = engineered_corrugation_provider(material, V, eta_star)
        p = corrugation_problem(material, V, provider)
        region = SearchRegion(0.6, 1.0, -0.2, 0.0)
        assert winding_count(lambda e: d_corrugation(p, e), region, 128) == 1

    def test_certify_attaches_winding_count(self):
        f = lambda z: z * z + 1  # noqa: E731
        rec = newton(f, 0.1 + 0.9j, tol=1e-12)
        certified = certify(f, rec, region_half_width=0.3)
        assert certified.certified_count == 1
        assert certified.location == rec.location
        double = newton(lambda z: (z - 0.2) ** 2, 0.21 + 0.01j, tol=1e-10, max_iter=200)
        assert certify(lambda z: (z - 0.2) ** 2, double, 0.1).certified_count == 2

    def test_winding_rejects_branch_cut_crossing(self, material):
        # Straddling the cut leaves an irreducible phase jump, reported
        # rather than silently miscounted.
        V, eta_star = 0.69, 0.8 - 0.05j
        provider = engineered_corrugation_provider(material, V, eta_star)
        p = corrugation_problem(material, V, provider)
        region = SearchRegion(0.6, 1.0, -0.2, 0.05)
        with pytest.raises(BoundaryContactError):
            winding_count(lambda e: d_corrugation(p, e), region, 128)
