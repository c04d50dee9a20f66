import io
import math

import numpy as np
import pytest

from qcat.arith import validate_catmap
from qcat.exceptions import InvariantFailure, TooLarge, UnitarityFailure
from qcat.heisenberg import (
    MatrixFormat,
    QuantumState,
    build_propagator,
    dispersive_bound,
    egorov_defect,
    egorov_sweep,
    export_matrix,
    gauss_bound_report,
    gauss_bound_scan,
    numerical_period,
    read_binary_matrix,
    sample_indices,
    scalar_test,
)
from qcat.heisenberg.checks import basis_block
from qcat.heisenberg.propagator import _propagator_entries
from tests.utils import assert_unitary, naive_propagator, random_state


class TestPropagator:
    def test_dimension_one(self, propagators):
        M = propagators(1)
        assert M.matrix().shape == (1, 1)
        assert abs(M.matrix()[0, 0]) == pytest.approx(1, abs=1e-12)

    def test_small_columns(self, propagators):
        norms = np.linalg.norm(propagators(5).matrix(), axis=0)
        np.testing.assert_allclose(norms, 1, atol=1e-12)

    @pytest.mark.parametrize("matrix", [(2, 3, 1, 2), (2, -3, -1, 2), (4, 5, 3, 4)])
    @pytest.mark.parametrize("N", [1, 2, 5, 8])
    def test_matches_gauss_sums(self, matrix, N):
        catmap = validate_catmap(*matrix)
        np.testing.assert_allclose(
            _propagator_entries(catmap, N), naive_propagator(catmap, N), atol=1e-12
        )

    @pytest.mark.parametrize("N", [1, 5, 19, 71, 265, 989])
    def test_unitary(self, propagators, N):
        M = propagators(N)
        assert M.unitarity_defect() <= 1e-8
        assert_unitary(M.matrix())

    @pytest.mark.slow
    def test_unitary_even_modulus(self, m1560):
        assert m1560.unitarity_defect() <= 1e-8

    def test_too_large(self, catmap):
        with pytest.raises(TooLarge) as exc_info:
            build_propagator(catmap, 10, n_max=5)
        assert (exc_info.value.n, exc_info.value.n_max) == (10, 5)

    def test_unitarity_failure(self, catmap, log_records):
        with pytest.raises(UnitarityFailure):
            build_propagator(catmap, 5, unitarity_tol=-1.0)
        assert any(r["message"] == "Propagator failed unitarity check" for r in log_records)

    def test_entries_are_read_only(self, propagators):
        with pytest.raises(ValueError):
            propagators(5).matrix()[0, 0] = 0

    def test_negative_powers_invert(self, propagators):
        M = propagators(19)
        coords = random_state(19)

        back = M.power_apply_array(M.power_apply_array(coords, 3), -3)

        np.testing.assert_allclose(back, coords, atol=1e-12)

    def test_orbit(self, propagators):
        M = propagators(5)
        start = basis_block(5, [2])[:, 0]

        orbit = list(M.orbit(start, 4))

        assert len(orbit) == 4
        np.testing.assert_allclose(orbit[3], M.power_apply_array(start, 3), atol=1e-12)

    def test_apply_state(self, propagators):
        M = propagators(5)
        u = QuantumState(5, random_state(5))

        assert (M @ u).norm() == pytest.approx(1)
        with pytest.raises(ValueError):
            M.apply(QuantumState.basis(4, 0))


class TestEgorov:
    def test_zero_mode(self, propagators):
        assert egorov_defect(propagators(19), (0, 0)) <= 1e-8

    @pytest.mark.parametrize("N", [5, 19, 71, 265])
    def test_sweep(self, propagators, N):
        assert egorov_sweep(propagators(N), radius=5) <= 1e-8

    @pytest.mark.timeout(120)
    def test_sweep_989(self, m989):
        assert egorov_sweep(m989, radius=5) <= 1e-8

    def test_single_mode_989(self, m989):
        assert egorov_defect(m989, (1, 0)) <= 1e-8

    @pytest.mark.slow
    def test_single_mode_1560(self, m1560):
        assert egorov_defect(m1560, (2, 3)) <= 1e-8


class TestScalar:
    def test_sample_indices(self):
        assert sample_indices(5) == (0, 1, 2, 3, 4)
        sample = sample_indices(989, 32)
        assert sample[0] == 0 and sample[-1] == 988
        assert len(sample) == 32

    def test_scalar_test(self):
        images = np.exp(0.3j) * basis_block(4, [0, 2])

        result = scalar_test(images, [0, 2])

        assert result.passed()
        assert result.phi == pytest.approx(0.3)

    def test_scalar_test_detects_leakage(self):
        images = basis_block(4, [0, 2])
        images[1, 0] = 1e-3

        assert not scalar_test(images, [0, 2]).passed()

    @pytest.mark.parametrize("N, period", [(1, 1), (5, 3), (19, 5), (71, 7), (265, 9), (989, 11)])
    def test_numerical_period(self, propagators, N, period):
        assert numerical_period(propagators(N)) == period

    @pytest.mark.slow
    def test_numerical_period_even(self, m1560):
        assert numerical_period(m1560) == 24

    def test_numerical_period_ceiling(self, m989):
        assert numerical_period(m989, max_t=10) is None


class TestGauss:
    def test_bound_at_one(self, m989):
        report = gauss_bound_report(m989, 1, (0, 0), 0, 0)

        assert report.bound == pytest.approx(1 / math.sqrt(989))
        assert report.bound == pytest.approx(0.03180, abs=1e-5)
        assert report.holds

    def test_bound_at_period(self, m989):
        assert dispersive_bound(m989, 11) >= 1
        assert gauss_bound_report(m989, 11, (0, 0), 3, 3).holds

    def test_scan_265(self, propagators):
        reports = gauss_bound_scan(propagators(265), range(1, 9), [(0, 0), (1, 0)])

        assert len(reports) == 16
        assert all(r.holds for r in reports)

    def test_off_diagonal_scan(self, propagators):
        assert all(r.holds for r in gauss_bound_scan(propagators(71), [1, 2, -3], diagonal=False))

    def test_zero_power(self, m989):
        with pytest.raises(ValueError):
            dispersive_bound(m989, 0)

    def test_index_range(self, m989):
        with pytest.raises(ValueError):
            gauss_bound_report(m989, 1, (0, 0), 989, 0)

    def test_broken_bound_is_raised(self, m989, monkeypatch):
        monkeypatch.setattr("qcat.heisenberg.checks.dispersive_bound", lambda propagator, r: 0.0)

        with pytest.raises(InvariantFailure) as exc_info:
            gauss_bound_report(m989, 1, (0, 0), 0, 0)
        assert exc_info.value.failed[0].startswith("dispersive bound at r=1")


class TestExport:
    def test_binary(self, propagators):
        M = propagators(5)
        fp = io.BytesIO()

        export_matrix(M, fp, MatrixFormat.BINARY, extra={"command": "propagator"})
        fp.seek(0)
        header, entries = read_binary_matrix(fp)

        assert header["N"] == 5 and header["matrix"] == "2,3,1,2"
        assert header["command"] == "propagator"
        np.testing.assert_array_equal(entries, M.matrix())

    def test_csv(self, propagators):
        M = propagators(2)
        fp = io.BytesIO()

        export_matrix(M, fp, MatrixFormat.CSV)
        lines = fp.getvalue().decode().splitlines()

        assert lines[0] == "# matrix=2,3,1,2"
        body = lines[lines.index("row,col,re,im") + 1 :]
        cells = [line.split(",")[:2] for line in body]
        assert cells == [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]
        row, col, re, im = body[2].split(",")
        assert complex(float(re), float(im)) == M.matrix()[0, 1]

    def test_truncated_binary(self):
        fp = io.BytesIO(b'{"N": 2}\n' + b"\0" * 16)
        with pytest.raises(ValueError):
            read_binary_matrix(fp)
