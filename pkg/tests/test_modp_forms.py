import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphecke.errors import DomainError, InconsistencyError
from sphecke.modp_forms import (QExpansion, basis, basis_monomials,
                                commutation_check, delta, eigen_twist_check,
                                eisenstein4, eisenstein6, filtration, hasse,
                                hecke_T, space_dimension, sturm_bound, theta,
                                theta_cycle)

# classical values of the discriminant coefficients
TAU = {1: 1, 2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048}


class TestSeries:
    def test_delta_coefficients(self):
        d = delta(6)
        for n, t in TAU.items():
            assert d.coeffs[n] == t

    def test_eisenstein_normalization(self):
        assert eisenstein4(3).coeffs[:3] == (1, 240, 2160)
        assert eisenstein6(3).coeffs[:3] == (1, -504, -16632)

    def test_e4_is_hasse_like_mod_5(self):
        e = eisenstein4(20).reduce_mod(5)
        assert e.coeffs == (1,) + (0,) * 20

    def test_weight_12_basis(self):
        assert basis_monomials(12) == [(3, 0, 0), (0, 0, 1)]
        assert space_dimension(12) == 2

    def test_dimension_table(self):
        expected = {0: 1, 2: 0, 4: 1, 6: 1, 8: 1, 10: 1, 12: 2, 14: 1,
                    16: 2, 18: 2, 20: 2, 22: 2, 24: 3, 26: 2}
        for k, d in expected.items():
            assert space_dimension(k) == d

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_basis_spans_full_rank_through_weight_60(self, p):
        for k in range(0, 62, 2):
            # classical closed form for the level-one dimension
            classical = k // 12 + (0 if k % 12 == 2 else 1) if k >= 0 else 0
            forms = basis(k, p, sturm_bound(k) + 1)  # asserts full rank mod p
            assert len(forms) == space_dimension(k) == classical

    def test_small_primes_rejected(self):
        with pytest.raises(DomainError):
            basis(12, 3, 10)
        with pytest.raises(DomainError):
            hasse(2, 10)

    def test_hasse(self):
        for p in (5, 7):
            h = hasse(p, 8)
            assert h.weight == p - 1
            assert h.coeffs == (1,) + (0,) * 8
            assert theta(h).is_zero()


class TestTheta:
    def test_fixes_q(self):
        f = QExpansion("Fp", 2, [0, 1, 0, 0], p=5)
        assert theta(f).coeffs == (0, 1, 0, 0)

    def test_kills_constants(self):
        one = QExpansion("Fp", 0, [1, 0, 0], p=5)
        assert theta(one).is_zero()

    def test_delta_mod_5(self):
        td = theta(delta(6).reduce_mod(5))
        assert td.weight == 18
        assert td.coeffs[2] == (2 * -24) % 5

    def test_rejects_rational_input(self):
        with pytest.raises(DomainError):
            theta(delta(6))

    @given(st.lists(st.integers(0, 4), min_size=2, max_size=12),
           st.lists(st.integers(0, 4), min_size=2, max_size=12))
    @settings(max_examples=40)
    def test_leibniz(self, a, b):
        p = 5
        f = QExpansion("Fp", 4, a, p=p)
        g = QExpansion("Fp", 8, b, p=p)
        lhs = theta(f * g)
        rhs = theta(f) * g + f * theta(g)
        assert lhs.coeffs[:lhs.trunc + 1] == rhs.coeffs[:lhs.trunc + 1]


class TestHecke:
    def test_delta_eigenform_mod_5(self):
        d5 = delta(40).reduce_mod(5)
        t2 = hecke_T(2, d5)
        assert t2.agrees_with(d5.scale(TAU[2] % 5))

    def test_zero(self):
        z = QExpansion("Fp", 12, [0] * 20, p=5)
        assert hecke_T(3, z).is_zero()

    def test_delta_mod_7_at_3(self):
        d7 = delta(30).reduce_mod(7)
        assert hecke_T(3, d7).agrees_with(d7.scale(TAU[3] % 7))

    def test_bad_place_rejected(self):
        with pytest.raises(DomainError):
            hecke_T(5, delta(30).reduce_mod(5))

    def test_truncation_shrinks(self):
        d5 = delta(30).reduce_mod(5)
        assert hecke_T(3, d5).trunc == 10


class TestCommutation:
    def test_delta_mod_5_ell_2(self):
        assert commutation_check(delta(50).reduce_mod(5), 2)

    def test_e6_mod_5_ell_3(self):
        assert commutation_check(eisenstein6(50).reduce_mod(5), 3)

    def test_wrong_weight_regression(self):
        # running the Hecke step at the original weight (instead of the
        # raised one) must break the identity for some basis form
        p, ell = 5, 2
        broken = []
        for f in basis(12, p, 60):
            tf = theta(f)
            mislabeled = QExpansion("Fp", f.weight, tf.coeffs, p=p)
            lhs = hecke_T(ell, mislabeled)
            rhs = theta(hecke_T(ell, f)).scale(ell)
            broken.append(lhs.coeffs[:lhs.trunc + 1]
                          != rhs.coeffs[:lhs.trunc + 1])
        assert any(broken)


class TestFiltration:
    def test_hasse_is_invisible(self):
        assert filtration(hasse(5, 5)) == 0

    def test_delta_mod_5(self):
        assert filtration(delta(10).reduce_mod(5)) == 12

    def test_theta_delta_mod_5(self):
        val = filtration(theta(delta(10).reduce_mod(5)))
        assert val == 18
        assert val <= 12 + 5 + 1
        assert val % 4 == 14 % 4

    def test_hasse_multiplication_invisible(self):
        rng = random.Random(4)
        for p in (5, 7):
            for k in (12, 16, 20, 24):
                forms = basis(k, p, sturm_bound(k + p - 1) + 1)
                f = forms[rng.randrange(len(forms))]
                fh = f * hasse(p, f.trunc)
                assert filtration(fh) == filtration(f)

    def test_theta_filtration_bound(self):
        for p in (5, 7):
            for k in (12, 16):
                for f in basis(k, p, sturm_bound(k + p + 1) + 1):
                    tf = theta(f)
                    if tf.is_zero():
                        continue
                    assert filtration(tf) <= filtration(f) + p + 1

    def test_mislabeled_weight_detected(self):
        wrong = QExpansion("Fp", 14, delta(10).reduce_mod(5).coeffs, p=5)
        with pytest.raises(InconsistencyError):
            filtration(wrong)

    def test_needs_sturm_truncation(self):
        with pytest.raises(DomainError):
            filtration(QExpansion("Fp", 48, [0, 1], p=5))


class TestThetaCycle:
    def test_theta_power_p_equals_theta(self):
        f = delta(40).reduce_mod(5)
        g = theta(f)
        h = g
        for _ in range(4):
            h = theta(h)
        assert h.coeffs == g.coeffs  # theta^5 = theta coefficientwise

    def test_delta_mod_5_fixture(self):
        assert theta_cycle(delta(60).reduce_mod(5), 6) == [18, 24, 30, 12, 18, 24]

    def test_constant_reports_empty(self):
        one = QExpansion("Fp", 0, [1] + [0] * 59, p=5)
        assert theta_cycle(one, 5) == []

    def test_p_power_support_reports_empty(self):
        coeffs = [0] * 60
        for n in range(5, 60, 5):
            coeffs[n] = 1
        f = QExpansion("Fp", 12, coeffs, p=5)
        assert theta_cycle(f, 5) == []

    def test_needs_iterations_at_least_p(self):
        with pytest.raises(DomainError):
            theta_cycle(delta(60).reduce_mod(5), 3)


class TestEigenTwist:
    def test_delta_mod_5(self):
        report = eigen_twist_check(delta(100).reduce_mod(5), [2, 3])
        assert not report["theta_kills"]
        for chk in report["checks"]:
            assert chk["eigenvalue_ok"]
            expected = (chk["ell"] * TAU[chk["ell"]]) % 5
            assert chk["theta_eigenvalue"] == expected
            assert chk["twist"].all_passed

    def test_theta_killed_input(self):
        # f(q^p) formally: support on multiples of p only
        d = delta(8)
        coeffs = [0] * 41
        for n in range(1, 9):
            coeffs[5 * n] = int(d.coeffs[n])
        f = QExpansion("Fp", 12, coeffs, p=5)
        report = eigen_twist_check(f, [2])
        assert report == {"theta_kills": True, "checks": []}

    def test_non_eigenform_rejected(self):
        e4 = eisenstein4(100).reduce_mod(7)
        f = e4  # weight 4, a_1 = 240 mod 7 != 1
        with pytest.raises(DomainError):
            eigen_twist_check(f, [2])


class TestQExpansionBasics:
    def test_mixed_rings_rejected(self):
        with pytest.raises(DomainError):
            delta(5) * delta(5).reduce_mod(5)

    def test_sum_needs_matching_weight(self):
        with pytest.raises(DomainError):
            eisenstein4(5) + eisenstein6(5)

    def test_json_round_trip(self):
        d = delta(8)
        assert QExpansion.from_json(d.to_json()) == d
        d5 = d.reduce_mod(5)
        assert QExpansion.from_json(d5.to_json()) == d5

    def test_reduce_rejects_bad_denominator(self):
        from fractions import Fraction
        f = QExpansion("Q", 4, [Fraction(1, 5), 1])
        with pytest.raises(DomainError):
            f.reduce_mod(5)
