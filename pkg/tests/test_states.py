import cmath
import math

import numpy as np
import pytest

from qcat.arith import Branch, Parity
from qcat.components import sweep_executor
from qcat.exceptions import NotScalar, VanishingState
from qcat.heisenberg import QuantumState
from qcat.states import (
    ProjectorSpec,
    coordinate_profile,
    eigen_residual,
    law_point,
    normalize,
    norm_law_scan,
    peak_law_scan,
    projector_block,
    projector_spec,
    projector_state,
    scalar_phase,
    vanish_tolerance,
)


def unit_state(propagator, spec):
    v, _ = projector_state(propagator, spec)
    return normalize(v)


class TestScalarPhase:
    def test_at_period(self, m989):
        phi = scalar_phase(m989, 11)
        assert 0 <= phi < 2 * math.pi

    def test_below_period(self, m989):
        with pytest.raises(NotScalar) as exc_info:
            scalar_phase(m989, 10)
        assert exc_info.value.t == 10

    def test_bad_t(self, m989):
        with pytest.raises(ValueError):
            scalar_phase(m989, 0)

    def test_dimension_one(self, propagators):
        M = propagators(1)
        assert cmath.exp(1j * scalar_phase(M, 1)) == pytest.approx(M.matrix()[0, 0])


class TestProjectorSpec:
    def test_odd_member(self, m989):
        spec = projector_spec(m989, 5)

        assert (spec.N, spec.t, spec.branch) == (989, 11, Branch.ODD)
        assert spec.omega**spec.t == pytest.approx(cmath.exp(1j * spec.phi))

    def test_even_member(self, propagators):
        spec = projector_spec(propagators(8), 2, Parity.EVEN)
        assert (spec.t, spec.branch) == (8, Branch.EVEN_4K)

    def test_wrong_modulus(self, propagators):
        with pytest.raises(ValueError):
            projector_spec(propagators(71), 5)

    def test_index_range(self, propagators):
        with pytest.raises(ValueError):
            projector_spec(propagators(19), 2, j=19)

    def test_with_branch(self, propagators):
        spec = projector_spec(propagators(19), 2)
        moved = spec.with_branch(j=21, sigma=3)
        assert (moved.j, moved.sigma, moved.t) == (2, 3, spec.t)


class TestProjectorState:
    def test_single_term(self, propagators):
        spec = projector_spec(propagators(1), 0)

        v, norm = projector_state(propagators(1), spec)

        assert spec.t == 1
        assert norm == pytest.approx(1)
        np.testing.assert_allclose(v.coords, [1])

    def test_norm_law_instance(self, m989):
        _, norm = projector_state(m989, projector_spec(m989, 5))
        assert abs(11 * norm**2 - 1) < 0.6

    def test_block_matches_single(self, propagators):
        M = propagators(19)
        spec = projector_spec(M, 2)

        block = projector_block(M, spec, [0, 7], [0, 3])

        v, _ = projector_state(M, spec.with_branch(j=7, sigma=3))
        np.testing.assert_allclose(block[1, :, 1], v.coords, atol=1e-12)

    def test_branches_resolve_the_basis_vector(self, propagators):
        M = propagators(19)
        spec = projector_spec(M, 2, j=4)

        block = projector_block(M, spec, [4], list(range(spec.t)))

        expected = QuantumState.basis(19, 4).coords
        np.testing.assert_allclose(block.sum(axis=0)[:, 0], expected, atol=1e-12)

    @pytest.mark.parametrize("sigma", [0, 2, 5])
    def test_sigma_is_taken_modulo_t(self, propagators, sigma):
        M = propagators(71)
        spec = projector_spec(M, 3, j=4, sigma=sigma)

        v, _ = projector_state(M, spec)
        shifted, _ = projector_state(M, spec.with_branch(sigma=sigma + spec.t))

        assert spec.with_branch(sigma=sigma + spec.t).omega == pytest.approx(spec.omega)
        np.testing.assert_allclose(shifted.coords, v.coords, atol=1e-12)

    def test_branches_are_orthogonal(self, propagators):
        M = propagators(71)
        spec = projector_spec(M, 3)

        block = projector_block(M, spec, [0], [0, 1])

        assert abs(np.vdot(block[0, :, 0], block[1, :, 0])) <= 1e-12


class TestNormalize:
    def test_unit_vector(self):
        u = QuantumState.basis(7, 3)
        np.testing.assert_array_equal(normalize(u).coords, u.coords)

    def test_vanishing(self):
        v = QuantumState.basis(7, 3).scaled(1e-14)

        with pytest.raises(VanishingState) as exc_info:
            normalize(v)

        assert exc_info.value.tolerance == vanish_tolerance(7)

    def test_explicit_tolerance(self):
        v = QuantumState.basis(4, 0).scaled(0.5)
        with pytest.raises(VanishingState):
            normalize(v, vanish_tol=0.5)
        assert normalize(v, vanish_tol=0.4).norm() == pytest.approx(1)


class TestEigenResidual:
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    @pytest.mark.parametrize("sigma", [0, 1])
    def test_projector_states(self, family, k, sigma):
        M = family(k)
        spec = projector_spec(M, k, sigma=sigma)
        assert eigen_residual(M, unit_state(M, spec), spec.omega) <= 1e-7

    def test_basis_vector(self, propagators):
        assert eigen_residual(propagators(5), QuantumState.basis(5, 0), 1) > 0.5

    def test_dimension_one(self, propagators):
        M = propagators(1)
        spec = projector_spec(M, 0)
        assert eigen_residual(M, unit_state(M, spec), spec.omega) == pytest.approx(0, abs=1e-12)

    @pytest.mark.slow
    @pytest.mark.parametrize("sigma", [0, 1])
    def test_even_member(self, m1560, sigma):
        spec = projector_spec(m1560, 6, Parity.EVEN, j=1, sigma=sigma)
        assert eigen_residual(m1560, unit_state(m1560, spec), spec.omega) <= 1e-7


class TestProfile:
    def test_peak_at_989(self, m989):
        spec = projector_spec(m989, 5, j=57)

        report = coordinate_profile(unit_state(m989, spec), spec)

        assert report.peak_index == 57
        assert abs(report.peak_value) == pytest.approx(1 / math.sqrt(11), rel=0.1)
        assert report.off_peak_ok
        assert report.passed()
        assert report.l2 == pytest.approx(1)

    def test_peak_at_71(self, propagators):
        M = propagators(71)
        spec = projector_spec(M, 3, sigma=5)

        report = coordinate_profile(unit_state(M, spec), spec)

        assert report.peak_at_j
        assert report.off_peak_ok

    @pytest.mark.parametrize("sigma", range(7))
    def test_small_member_is_exact_but_spread(self, propagators, sigma):
        M = propagators(71)
        spec = projector_spec(M, 3, sigma=sigma)
        u = unit_state(M, spec)

        report = coordinate_profile(u, spec)

        assert eigen_residual(M, u, spec.omega) <= 1e-10
        # the off-peak floor is still comparable to the peak at t = 7
        assert report.off_peak_max > report.linf / 3

    def test_delta(self):
        spec = ProjectorSpec(
            N=3, k=0, parity=Parity.ODD, j=1, sigma=0, t=1, phi=0.0, branch=Branch.ODD
        )

        report = coordinate_profile(QuantumState.basis(3, 1), spec)

        assert report.peak_index == 1 and report.peak_value == 1
        assert report.off_peak_max == 0
        assert report.peak_error == 0


class TestLaws:
    def test_law_point(self, catmap):
        point = law_point(catmap, 2, sample_size=8)

        assert (point.N, point.t) == (19, 5)
        assert point.norm_deviation >= 0
        assert point.off_peak_max < 1

    def test_scan_on_workers(self, catmap, log_records):
        with sweep_executor(2) as executor:
            scan = peak_law_scan(catmap, [1, 2, 3], sample_size=8, executor=executor)

        assert [p.N for p in scan.points] == [5, 19, 71]
        assert scan.fit is None or scan.fit.points_num == 3
        assert sum(r["message"] == "Law point" for r in log_records) == 3

    def test_short_scan_is_not_fitted(self, catmap):
        assert norm_law_scan(catmap, [1, 2], sample_size=4).fit is None

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    def test_deviations_shrink(self, catmap):
        small, large = law_point(catmap, 3), law_point(catmap, 6)

        assert large.peak_deviation < small.peak_deviation
        assert large.norm_deviation < small.norm_deviation
