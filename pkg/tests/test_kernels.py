"""Kernel providers: contracts, branch convention, tabulation round trips."""

import math

import numpy as np
import pytest

from crackwave.elastodyn import MaterialParams
from crackwave.errors import (
    CapabilityError,
    DomainError,
    ReferenceKernelUnavailable,
    TableFormatError,
)
from crackwave.kernels import (
    COMPONENT_ORDER,
    KernelTable,
    SyntheticParams,
    load_table,
    make_reference,
    make_synthetic,
    qbar,
    tabulate,
)

OFF_BLOCK = [(1, 3), (3, 1), (2, 3), (3, 2)]


@pytest.fixture()
def rich_synthetic():
    return make_synthetic({
        "Q11": (1.0, 0.5, 1.2),
        "Q12": (-0.7, 0.2, 0.6),
        "Q21": (0.4, -0.9, 1.5),
        "Q22": (1.3, 0.1, 0.9),
        "Q33": (2.0, -0.3, 0.8),
    })


class TestQbarContract:
    @pytest.mark.parametrize("component", OFF_BLOCK)
    def test_off_block_exactly_zero(self, rich_synthetic, component):
        assert qbar(rich_synthetic, component, 1.3 + 0.2j, 0.7) == 0j

    def test_origin_rejected(self, rich_synthetic):
        with pytest.raises(DomainError):
            qbar(rich_synthetic, (3, 3), 0.0, 0.0)

    def test_bad_component(self, rich_synthetic):
        with pytest.raises(DomainError):
            qbar(rich_synthetic, (0, 1), 1.0, 1.0)

    def test_homogeneity_random_samples(self, rich_synthetic):
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(100):
            omega = complex(rng.normal(), rng.normal())
            k2 = float(rng.normal())
            for s in (0.5, 2.0, 10.0):
                for comp in COMPONENT_ORDER:
                    lhs = qbar(rich_synthetic, comp, s * omega, s * k2)
                    rhs = s * qbar(rich_synthetic, comp, omega, k2)
                    worst = max(worst, abs(lhs - rhs))
        assert worst < 1e-12

    def test_conjugate_symmetry_real_rays(self, rich_synthetic):
        rng = np.random.default_rng(12)
        for _ in range(100):
            omega = float(rng.normal()) * 3.0
            k2 = float(rng.normal()) * 3.0
            for comp in COMPONENT_ORDER:
                lhs = qbar(rich_synthetic, comp, -omega, -k2)
                rhs = np.conj(qbar(rich_synthetic, comp, omega, k2))
                assert lhs == pytest.approx(rhs, abs=1e-12)


class TestSynthetic:
    def test_unit_ray_value(self):
        prov = make_synthetic({"Q11": (1.0, 0.0, 1.0)})
        assert qbar(prov, (1, 1), 0.0, 1.0) == 1.0 + 0.0j

    def test_branch_convention(self):
        prov = make_synthetic({"Q11": (1.0, 0.0, 1.0)})
        # sqrt(-4) on the physical branch: +2i for omega > 0 and the
        # conjugate for omega < 0.
        assert qbar(prov, (1, 1), 2.0, 0.0) == pytest.approx(2j, abs=1e-15)
        assert qbar(prov, (1, 1), -2.0, 0.0) == pytest.approx(-2j, abs=1e-15)

    def test_linear_term(self):
        prov = make_synthetic({"Q33": (0.0, 1.5, 1.0)})
        assert qbar(prov, (3, 3), 0.4, 9.9) == pytest.approx(1.5j * 0.4, abs=1e-15)

    def test_param_validation(self):
        with pytest.raises(DomainError):
            make_synthetic({"Q11": (1.0, 0.0, 0.0)})
        with pytest.raises(DomainError):
            make_synthetic({"Q11": (math.inf, 0.0, 1.0)})
        with pytest.raises(DomainError):
            make_synthetic({"Q17": (1.0, 0.0, 1.0)})
        with pytest.raises(DomainError):
            make_synthetic({"Q11": (1.0, 0.0)})

    def test_with_speed_clones(self):
        prov = make_synthetic({"Q11": (1.0, 0.0, 1.0)}, V=0.5)
        clone = prov.with_speed(0.7)
        assert clone.V == 0.7 and clone.params == prov.params

    def test_complex_plane_capability(self):
        prov = make_synthetic({"Q11": (1.0, 0.0, 1.0)})
        value = qbar(prov, (1, 1), 0.3 - 0.2j, 1.0)
        assert np.isfinite(value)


class TestTabulated:
    @pytest.fixture()
    def table_provider(self, rich_synthetic, tmp_path):
        table = tabulate(rich_synthetic, n_angles=2048, nu=0.3, V_over_b=0.5)
        path = tmp_path / "kernel_table.txt"
        table.write(path)
        return load_table(path)

    def test_round_trip_accuracy(self, rich_synthetic, table_provider):
        # Random real rays away from the sonic angles of every component.
        rng = np.random.default_rng(21)
        branch_speeds = [rich_synthetic.params.for_component(c)[2] for c in COMPONENT_ORDER]
        checked = 0
        worst = 0.0
        while checked < 200:
            omega = float(rng.normal()) * 3.0
            k2 = float(rng.normal()) * 3.0
            r = math.hypot(omega, k2)
            if r < 0.1 or any(abs(abs(omega) - v * abs(k2)) < 0.1 * r for v in branch_speeds):
                continue
            checked += 1
            for comp in COMPONENT_ORDER:
                err = abs(qbar(table_provider, comp, omega, k2)
                          - qbar(rich_synthetic, comp, omega, k2)) / r
                worst = max(worst, err)
        assert worst < 1e-3

    def test_stored_angle_reproduced_exactly(self, rich_synthetic, table_provider):
        theta = table_provider.table.angles[123]
        stored = table_provider.table.entries[(1, 1)][123]
        # Interpolation endpoint is exact; the (omega, k2) -> (r, theta)
        # reconstruction adds at most a couple of ulps through hypot/atan2.
        assert table_provider.table.interp_unit((1, 1), theta) == stored
        got = qbar(table_provider, (1, 1), math.sin(theta), math.cos(theta))
        assert got == pytest.approx(stored, rel=1e-14)

    def test_write_read_round_trip_exact(self, rich_synthetic, tmp_path):
        # 17 significant digits round-trip doubles exactly.
        table = tabulate(rich_synthetic, n_angles=64, nu=0.3, V_over_b=0.5)
        path = tmp_path / "t.txt"
        table.write(path)
        back = load_table(path).table
        assert np.array_equal(back.angles, table.angles)
        for comp in COMPONENT_ORDER:
            assert np.array_equal(back.entries[comp], table.entries[comp])

    def test_conjugate_symmetry(self, table_provider):
        rng = np.random.default_rng(22)
        for _ in range(100):
            omega = float(rng.normal())
            k2 = float(rng.normal())
            lhs = qbar(table_provider, (1, 1), -omega, -k2)
            rhs = np.conj(qbar(table_provider, (1, 1), omega, k2))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_homogeneity(self, table_provider):
        rng = np.random.default_rng(23)
        for _ in range(100):
            omega = float(rng.normal())
            k2 = float(rng.normal())
            if math.hypot(omega, k2) < 1e-3:
                continue
            for s in (0.5, 2.0, 10.0):
                lhs = qbar(table_provider, (1, 1), s * omega, s * k2)
                rhs = s * qbar(table_provider, (1, 1), omega, k2)
                assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(rhs)))

    def test_complex_argument_rejected(self, table_provider):
        with pytest.raises(CapabilityError):
            qbar(table_provider, (1, 1), 1.0 + 0.5j, 1.0)

    def test_with_speed(self, table_provider):
        assert table_provider.with_speed(0.5) is table_provider
        with pytest.raises(CapabilityError):
            table_provider.with_speed(0.6)

    def test_interpolation_converges_with_angle_count(self, rich_synthetic):
        # Doubling the sample count should at least halve the error on
        # smooth (Lipschitz) stretches away from the sonic angles.
        branch_speeds = [rich_synthetic.params.for_component(c)[2] for c in COMPONENT_ORDER]
        rays = []
        rng = np.random.default_rng(24)
        while len(rays) < 100:
            theta = rng.uniform(0.0, math.pi)
            omega, k2 = math.sin(theta), math.cos(theta)
            if any(abs(abs(omega) - v * abs(k2)) < 0.15 for v in branch_speeds):
                continue
            rays.append((omega, k2))

        def max_err(n):
            prov = None
            table = tabulate(rich_synthetic, n_angles=n, nu=0.3, V_over_b=0.5)
            from crackwave.kernels import TabulatedKernelProvider
            prov = TabulatedKernelProvider(material=MaterialParams(nu=0.3, b=1.0),
                                           V=0.5, table=table)
            return max(
                abs(qbar(prov, comp, om, k2) - qbar(rich_synthetic, comp, om, k2))
                for om, k2 in rays for comp in COMPONENT_ORDER
            )

        assert max_err(256) / max_err(512) >= 2.0


class TestTableFormat:
    def _write(self, tmp_path, text):
        path = tmp_path / "table.txt"
        path.write_text(text, encoding="utf-8")
        return path

    def _rows(self, n, start=0.0, step=None):
        step = step if step is not None else math.pi / n
        lines = []
        for i in range(n):
            theta = start + i * step
            lines.append(" ".join([f"{theta:.17g}"] + ["1 0"] * 5))
        return lines

    def test_minimum_angle_count(self, tmp_path):
        text = "\n".join(["0.3", "0.5", "2"] + self._rows(2, step=0.5))
        with pytest.raises(TableFormatError, match="at least 64"):
            load_table(self._write(tmp_path, text))

    def test_monotonicity_enforced(self, tmp_path):
        rows = self._rows(64)
        rows[10], rows[11] = rows[11], rows[10]
        text = "\n".join(["0.3", "0.5", "64"] + rows)
        with pytest.raises(TableFormatError, match="increasing"):
            load_table(self._write(tmp_path, text))

    def test_bad_field_reports_line(self, tmp_path):
        rows = self._rows(64)
        rows[5] = rows[5].replace("1 0", "oops 0", 1)
        text = "\n".join(["0.3", "0.5", "64"] + rows)
        with pytest.raises(TableFormatError, match=r":9:"):
            load_table(self._write(tmp_path, text))

    def test_missing_column_reports_line(self, tmp_path):
        rows = self._rows(64)
        rows[3] = " ".join(rows[3].split()[:-1])
        text = "\n".join(["0.3", "0.5", "64"] + rows)
        with pytest.raises(TableFormatError, match=r":7:.*fields"):
            load_table(self._write(tmp_path, text))

    def test_row_count_mismatch(self, tmp_path):
        text = "\n".join(["0.3", "0.5", "64"] + self._rows(63))
        with pytest.raises(TableFormatError, match="expected 64"):
            load_table(self._write(tmp_path, text))

    def test_truncated(self, tmp_path):
        with pytest.raises(TableFormatError, match="truncated"):
            load_table(self._write(tmp_path, "0.3\n0.5\n"))

    def test_bad_nu(self, tmp_path):
        text = "\n".join(["0.7", "0.5", "64"] + self._rows(64))
        with pytest.raises(TableFormatError, match="Poisson"):
            load_table(self._write(tmp_path, text))

    def test_nonfinite_entries(self, tmp_path):
        rows = self._rows(64)
        rows[0] = rows[0].replace("1 0", "inf 0", 1)
        text = "\n".join(["0.3", "0.5", "64"] + rows)
        with pytest.raises(TableFormatError, match="non-finite"):
            load_table(self._write(tmp_path, text))

    def test_angle_range_enforced(self, tmp_path):
        rows = self._rows(64, start=0.1, step=math.pi / 64)
        text = "\n".join(["0.3", "0.5", "64"] + rows)
        with pytest.raises(TableFormatError, match=r"\[0, pi\)"):
            load_table(self._write(tmp_path, text))

    def test_component_set_enforced(self):
        angles = np.arange(64) * math.pi / 64
        entries = {comp: np.ones(64, dtype=complex) for comp in COMPONENT_ORDER[:-1]}
        table = KernelTable(nu=0.3, V_over_b=0.5, angles=angles, entries=entries)
        with pytest.raises(TableFormatError, match="missing components: Q33"):
            table.validate()


class TestReference:
    def test_factory_unavailable(self):
        with pytest.raises(ReferenceKernelUnavailable):
            make_reference(MaterialParams(nu=0.3, b=1.0), 0.5)


class TestSyntheticParamsDefaults:
    def test_defaults_are_zero_symbols(self):
        params = SyntheticParams()
        for comp in COMPONENT_ORDER:
            c, d, v0 = params.for_component(comp)
            assert (c, d) == (0.0, 0.0) and v0 == 1.0
