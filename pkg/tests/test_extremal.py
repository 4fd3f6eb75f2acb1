import cmath
import math

import numpy as np
import pytest

import oracles
from pvbounds.bounds import aouf_bound, theorem1_bound
from pvbounds.errors import CaseMismatch
from pvbounds.extremal import (
    ExtremalSpec,
    Family,
    attainment_report,
    delta_from_turns,
    expand_global,
    expand_per_n,
    witness_spec,
)
from pvbounds.params import CaseLabel, classify_case, new_params

KOEBE = new_params(1, -1, 0, 1)
ROW1 = new_params(0.8, 0.5, 0, 1)


def random_params(rng, p_max=4):
    B = float(rng.uniform(-1, 0.95))
    A = float(rng.uniform(B, 1))
    if A <= B:
        A = min(1.0, B + 1e-3)
    return new_params(A, B, float(rng.uniform(0, 0.99)), int(rng.integers(1, p_max + 1)))


class TestGlobal:
    def test_koebe(self):
        f = expand_global(ExtremalSpec(KOEBE), 30)
        np.testing.assert_allclose(f.coeffs, np.arange(1, 30), rtol=1e-12)

    def test_B_zero_branch(self):
        f = expand_global(ExtremalSpec(new_params(1, 0, 0, 1)), 6)
        assert f.coeff(2) == pytest.approx(1)
        np.testing.assert_allclose(f.coeffs, [1 / math.factorial(k) for k in range(5)], rtol=1e-12)

    def test_p2_first_step(self):
        P = new_params(1, -1, 0, 2)
        f = expand_global(ExtremalSpec(P), 8)
        assert f.offset == 2 and f.coeff(2) == 1
        assert f.coeff(3) == pytest.approx(4)
        assert abs(f.coeff(3)) == pytest.approx(theorem1_bound(P, 3))

    def test_against_mpmath(self):
        P = new_params(0.7, -0.4, 0.35, 3)
        delta = delta_from_turns(0.3)
        lam = P.c / P.B
        ref = oracles.taylor_mp(lambda z: (1 + P.B * delta * z) ** lam, 10)
        f = expand_global(ExtremalSpec(P, delta=delta), P.p + 10)
        np.testing.assert_allclose(f.coeffs, ref, rtol=1e-10)


class TestPerN:
    def test_row1(self):
        f = expand_per_n(ExtremalSpec(ROW1, Family.PER_N, n=3), 12)
        ref = oracles.taylor_mp(lambda z: (1 + 0.5 * z**2) ** 0.3, 11)
        np.testing.assert_allclose(f.coeffs, ref, rtol=1e-10, atol=1e-15)
        assert f.coeff(3) == pytest.approx(0.15, rel=1e-12)
        assert f.coeff(2) == 0

    def test_B_zero_first_term(self):
        P = new_params(0.6, 0, 0.2, 3)
        n = 5
        delta = delta_from_turns(0.125)
        f = expand_per_n(ExtremalSpec(P, Family.PER_N, n=n, delta=delta), P.p + 3 * (n - 1))
        # printed gap n - 1: first coefficient sits at z^(p+n-1)
        assert f.coeff(P.p + n - 1) == pytest.approx(P.A * (P.p - P.beta) * delta / (n - 1))

    def test_lacunary(self):
        P = new_params(0.3, -0.2, 0.1, 2)
        spec = ExtremalSpec(P, Family.PER_N, n=6)
        g = spec.effective_gap
        f = expand_per_n(spec, 60)
        for power in range(P.p, 60):
            if (power - P.p) % g:
                assert f.coeff(power) == 0

    def test_printed_gap_misses_target_for_p_above_one(self):
        P = new_params(0.5, 0.4, 0.5, 2)
        spec = ExtremalSpec(P, Family.PER_N, n=4)
        assert spec.first_index == P.p + 4 - 1 != 4
        fixed = witness_spec(spec)
        assert fixed.effective_gap == 4 - P.p
        f = expand_per_n(fixed, 10)
        assert abs(f.coeff(4)) == pytest.approx(P.c / (4 - P.p), rel=1e-12)

    def test_printed_gap_attains_its_landing_index(self):
        # the printed family witnesses the case-2 bound at index p + n - 1
        P = new_params(0.5, 0.4, 0.5, 2)
        n = 4
        landing = P.p + n - 1
        assert classify_case(P, landing) is CaseLabel.NON_POSITIVE_TERMS
        f = expand_per_n(ExtremalSpec(P, Family.PER_N, n=n), landing + 1)
        assert abs(f.coeff(landing)) == pytest.approx(theorem1_bound(P, landing), rel=1e-12)


class TestAttainment:
    def test_koebe_n7(self):
        rep = attainment_report(ExtremalSpec(KOEBE), 7)
        assert rep.attained and rep.extremal_modulus == pytest.approx(7)

    def test_row1_per_n(self):
        rep = attainment_report(ExtremalSpec(ROW1, Family.PER_N, n=3), 3)
        assert rep.attained and rep.extremal_modulus == pytest.approx(0.15)

    def test_global_misses_case2_and_equals_aouf(self):
        f = expand_global(ExtremalSpec(ROW1), 4)
        lam = 0.6
        assert abs(f.coeff(3)) == pytest.approx(abs(lam * (lam - 1) / 2) * 0.25, rel=1e-12)
        assert abs(f.coeff(3)) == pytest.approx(aouf_bound(ROW1, 3), rel=1e-12)
        with pytest.raises(CaseMismatch):
            attainment_report(ExtremalSpec(ROW1), 3)

    def test_mismatch_flag(self):
        P = new_params(0.5, 0.4, 0.5, 2)
        rep = attainment_report(ExtremalSpec(P, Family.PER_N, n=4), 4)
        assert rep.printed_index_mismatch and rep.attained
        rep1 = attainment_report(ExtremalSpec(ROW1, Family.PER_N, n=3), 3)
        assert not rep1.printed_index_mismatch

    def test_wrong_target(self):
        with pytest.raises(CaseMismatch):
            attainment_report(ExtremalSpec(ROW1, Family.PER_N, n=3), 4)

    def test_mixed_has_no_witness(self):
        P = new_params(1, -0.5, 0, 1)
        with pytest.raises(CaseMismatch):
            attainment_report(ExtremalSpec(P), 6)
        with pytest.raises(CaseMismatch):
            attainment_report(ExtremalSpec(P, Family.PER_N, n=6), 6)


class TestValidation:
    def test_delta_unimodular(self):
        with pytest.raises(ValueError):
            ExtremalSpec(ROW1, delta=1.1)

    def test_per_n_needs_target(self):
        with pytest.raises(ValueError):
            ExtremalSpec(ROW1, Family.PER_N)
        with pytest.raises(ValueError):
            ExtremalSpec(ROW1, Family.PER_N, n=1)


def test_both_families_give_first_coefficient():
    rng = np.random.default_rng(11)
    for _ in range(100):
        P = random_params(rng)
        n = P.p + 1
        for spec in (ExtremalSpec(P), witness_spec(ExtremalSpec(P, Family.PER_N, n=n))):
            f = expand_global(spec, n + 1) if spec.family is Family.GLOBAL else expand_per_n(spec, n + 1)
            assert abs(f.coeff(n)) == pytest.approx(P.c, rel=1e-12)


def test_rotation_invariance():
    rng = np.random.default_rng(5)
    for _ in range(20):
        P = random_params(rng)
        ref = np.abs(expand_global(ExtremalSpec(P), P.p + 14).coeffs)
        ref_n = np.abs(expand_per_n(ExtremalSpec(P, Family.PER_N, n=P.p + 3, gap=3), P.p + 14).coeffs)
        for t in np.linspace(0, 1, 9)[:-1] + 0.037:
            d = cmath.exp(2j * math.pi * t)
            got = np.abs(expand_global(ExtremalSpec(P, delta=d), P.p + 14).coeffs)
            np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-300)
            got_n = np.abs(expand_per_n(ExtremalSpec(P, Family.PER_N, n=P.p + 3, gap=3, delta=d), P.p + 14).coeffs)
            np.testing.assert_allclose(got_n, ref_n, rtol=1e-12, atol=1e-300)


def test_global_coefficients_are_the_product_bound():
    rng = np.random.default_rng(8)
    for _ in range(200):
        P = random_params(rng)
        f = expand_global(ExtremalSpec(P), P.p + 13)
        for n in range(P.p + 1, P.p + 13):
            assert abs(f.coeff(n)) == pytest.approx(aouf_bound(P, n), rel=1e-9, abs=1e-300)
