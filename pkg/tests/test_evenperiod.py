import math

import pytest

from qcat.arith import Branch, Parity, p_seq
from qcat.components import sweep_executor
from qcat.evenperiod import (
    a_k,
    candidate_js,
    default_threshold,
    g_vector,
    h_vector,
    half_period_check,
    half_period_scan,
    quarter_turn_check,
    support_report,
    vanishing_scan,
)
from qcat.exceptions import BranchMismatch
from qcat.heisenberg import QuantumState, sample_indices
from qcat.states import ProjectorSpec, normalize, projector_spec

HALF = 1 / math.sqrt(2)


class TestHalfPeriod:
    def test_origin(self, m1560):
        report = half_period_check(m1560, 6, 0)

        assert report.indices == (0, 780)
        assert report.moduli == pytest.approx((HALF, HALF), abs=1e-6)

    @pytest.mark.slow
    def test_first_index(self, m1560):
        assert half_period_check(m1560, 6, 1).indices == (1351, 571)

    def test_smallest_member(self, family):
        reports = half_period_scan(family(1, Parity.EVEN), 1, [0, 1])
        assert [r.indices for r in reports] == [(0, 1), (0, 1)]

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_sampled(self, family, k):
        M = family(k, Parity.EVEN)
        scale = a_k(M.catmap, k)

        reports = half_period_scan(M, k, sample_indices(M.N, 64))

        for report in reports:
            assert report.indices[0] == scale * report.j % M.N
            assert report.leakage <= 1e-6

    @pytest.mark.slow
    def test_sampled_1560(self, m1560):
        assert len(half_period_scan(m1560, 6, sample_indices(1560, 64))) == 64

    def test_wrong_member(self, family):
        with pytest.raises(ValueError):
            half_period_check(family(3, Parity.EVEN), 2, 0)


class TestQuarterTurn:
    def test_four_k_branch(self, family):
        etas = quarter_turn_check(family(2, Parity.EVEN), 2)

        assert sorted(etas) == list(range(8))
        assert all(abs(eta) == pytest.approx(1, abs=1e-6) for eta in etas.values())

    @pytest.mark.slow
    def test_at_1560(self, m1560):
        etas = quarter_turn_check(m1560, 6, sample=[0, 1, 780])
        assert set(etas) == {0, 1, 780}

    def test_two_k_branch(self, family):
        with pytest.raises(BranchMismatch) as exc_info:
            quarter_turn_check(family(3, Parity.EVEN), 3)
        assert (exc_info.value.period, exc_info.value.required) == (6, 12)


class TestHalfSums:
    def test_h_on_moved_index(self, family):
        M = family(2, Parity.EVEN)
        spec = projector_spec(M, 2, Parity.EVEN, j=1)

        # (a_2 - 1) * 1 = 6 is not divisible by p_2 = 4
        assert h_vector(M, spec).norm_sq == pytest.approx(4)

    def test_h_dichotomy_at_origin(self, family):
        M = family(2, Parity.EVEN)
        spec = projector_spec(M, 2, Parity.EVEN)

        norms = sorted(h_vector(M, spec.with_branch(sigma=s)).norm_sq for s in (0, 2))

        assert norms == pytest.approx([0, 8], abs=1e-9)

    @pytest.mark.parametrize("j", range(30))
    def test_g_lower_bound(self, family, j):
        M = family(3, Parity.EVEN)
        spec = projector_spec(M, 3, Parity.EVEN, j=j)

        assert spec.branch is Branch.EVEN_2K
        assert g_vector(M, spec).norm_sq >= 2 - math.sqrt(2) - 1e-9


class TestSupport:
    def test_default_threshold(self):
        assert default_threshold(0) == 0.5
        assert default_threshold(4) == pytest.approx(1 / 4)
        assert default_threshold(6) == pytest.approx(0.5 / math.sqrt(6))

    def test_delta(self):
        spec = ProjectorSpec(
            N=3, k=0, parity=Parity.ODD, j=0, sigma=0, t=1, phi=0.0, branch=Branch.ODD
        )

        report = support_report(QuantumState.basis(3, 0), spec)

        assert report.support_set == (0,)
        assert report.size == 1
        assert report.off_support_max == 0

    def test_explicit_threshold(self):
        spec = ProjectorSpec(
            N=4, k=1, parity=Parity.EVEN, j=0, sigma=0, t=4, phi=0.0, branch=Branch.EVEN_4K
        )
        u = QuantumState(4, [0.8, 0.6, 0, 0])

        assert support_report(u, spec, threshold=0.7).support_set == (0,)
        assert support_report(u, spec, threshold=0.1).moduli == pytest.approx((0.8, 0.6))

    @pytest.mark.parametrize(
        "branch, coords, ok",
        [
            (Branch.EVEN_4K, [1, 0, 0, 0], False),
            (Branch.EVEN_4K, [HALF, 0, HALF, 0], True),
            (Branch.EVEN_4K, [0.5, 0.5, 0.5, 0.5], True),
            (Branch.EVEN_2K, [0.5, 0.5, 0.5, 0.5], False),
            (Branch.EVEN_2K, [0.6, 0.0, 0.8, 0.0], True),
        ],
    )
    def test_branch_structure(self, branch, coords, ok, log_records):
        spec = ProjectorSpec(
            N=4, k=1, parity=Parity.EVEN, j=0, sigma=0, t=4, phi=0.0, branch=branch
        )

        report = support_report(QuantumState(4, coords), spec, threshold=0.3)

        assert report.structure_ok is ok
        messages = {r["message"] for r in log_records}
        assert ("Support size breaks the branch structure" in messages) is not ok

    @pytest.mark.parametrize("j", range(10))
    def test_two_k_branch_keeps_three_coordinates(self, family, j):
        M = family(3, Parity.EVEN)
        spec = projector_spec(M, 3, Parity.EVEN, j=j)

        report = support_report(normalize(g_vector(M, spec).vector), spec)

        assert spec.branch is Branch.EVEN_2K
        assert 1 <= report.size <= 3
        assert report.structure_ok
        assert report.off_support_max <= 1e-6


class TestVanishingScan:
    def test_coefficients(self, catmap):
        assert [a_k(catmap, k) for k in (2, 4, 6)] == [7, 97, 1351]

    def test_candidates(self, catmap):
        assert candidate_js(catmap, 2, 8) == tuple(range(8))

    def test_candidates_beyond_full_scan(self, catmap):
        N = 2 * p_seq(catmap, 8)
        js = candidate_js(catmap, 8, N)

        scale, p = a_k(catmap, 8), p_seq(catmap, 8)
        assert all(j in js for j in range(N) if (scale - 1) * j % p == 0)
        assert len(js) < N
        assert candidate_js(catmap, 8, N) == js

    def test_smallest_four_k(self, family, log_records):
        report = vanishing_scan(family(2, Parity.EVEN), 2)

        assert (report.N, report.branch, report.t) == (8, Branch.EVEN_4K, 8)
        assert report.scanned_num == 8
        assert report.gcd_identity_holds
        assert set(report.sigma_outcomes) == {0, 1, 2, 3}
        assert "vanishes" in {report.sigma_outcomes[0], report.sigma_outcomes[2]}
        assert report.to_json()["gcd"] == report.n_prime_k
        assert any(r["message"] == "Vanishing scan finished" for r in log_records)

    def test_on_workers(self, family):
        M = family(2, Parity.EVEN)

        with sweep_executor(3) as executor:
            threaded = vanishing_scan(M, 2, executor=executor)

        assert threaded.vanishing == vanishing_scan(M, 2).vanishing

    def test_two_k_branch(self, family):
        with pytest.raises(BranchMismatch):
            vanishing_scan(family(3, Parity.EVEN), 3)

    @pytest.mark.slow
    @pytest.mark.timeout(900)
    def test_dichotomy_at_1560(self, m1560):
        report = vanishing_scan(m1560, 6)

        assert report.failures() == []
        assert report.dichotomy_holds
        assert report.gcd == 30
        assert report.support_ok
        assert report.supports
        for sigma, support in report.supports.items():
            assert support.support_set == (0, 780), sigma
