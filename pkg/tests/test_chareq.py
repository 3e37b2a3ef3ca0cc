import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamspec import (
    BeamParams,
    char_derivative,
    char_fn,
    char_fn_beta,
    char_fn_scaled,
    lambda_from_mu,
    undamped_spectrum,
)
from beamspec.chareq import newton_ratio
from beamspec.errors import DegenerateLambda, DivisionNearZero

XI = 1.0 / math.sqrt(2.0)
PI = math.pi


def raw_reference(params, mu):
    """Textbook evaluation, no scaling tricks: the oracle for moderate lam."""
    lam = lambda_from_mu(params, mu).lam
    s, sh = cmath.sin(lam), cmath.sinh(lam)
    xi = params.xi
    bracket = (s * cmath.sinh(lam * xi) * cmath.sinh(lam * (1 - xi))
               - sh * cmath.sin(lam * xi) * cmath.sin(lam * (1 - xi)))
    aeff = params.alpha + (params.beta / mu if params.beta else 0.0)
    return 2.0 * (mu + params.b) * sh * s + aeff * lam * bracket


class TestCharFn:
    def test_zero_at_closed_form_roots(self, undamped):
        for rec in undamped_spectrum(1.0, 1.0, 3):
            v = char_fn(undamped, rec.mu)
            assert abs(v.value) <= 1e-9

    def test_rejects_beta(self, canonical):
        with pytest.raises(ValueError, match="beta"):
            char_fn(canonical.replace(beta=0.1), -0.5 + 9.86j)

    def test_degenerate_points_raise(self, canonical):
        with pytest.raises(DegenerateLambda):
            char_fn(canonical, -canonical.b)

    def test_matches_reference(self, canonical):
        rng = np.random.default_rng(7)
        for _ in range(50):
            mu = complex(rng.uniform(-3, -0.05), rng.uniform(-60, 60))
            v = char_fn(canonical, mu)
            ref = raw_reference(canonical, mu)
            scale = abs(ref) if v.scaled else 1.0
            val = v.value * math.exp(v.scale_log) if v.scaled else v.value
            assert val == pytest.approx(ref, rel=1e-10)

    def test_auto_scaling_kicks_in(self, canonical):
        # |Im mu| ~ 2000 puts |lam| ~ 45: raw sinh would be ~ e^45
        v = char_fn(canonical, -0.5 + 2000j)
        assert v.scaled
        assert v.scale_log > 30.0
        assert np.isfinite(v.value)

    def test_newton_decreases_from_perturbed_seed(self):
        # damped problem: the magnitude at the alpha=0 root is nonzero and
        # Newton drives it below 1e-10
        p = BeamParams(a=1.0, b=1.0, alpha=0.1, xi=XI)
        mu = -0.5 + 0.5j * math.sqrt(4 * PI ** 4 - 1)
        start = abs(char_fn(p, mu).value)
        assert start > 1e-6
        for _ in range(8):
            step, gmag, _ = newton_ratio(p, mu)
            mu = mu - step
        assert abs(char_fn(p, mu).value) < 1e-10


class TestCharFnScaled:
    def test_vanishes_at_integer_pi(self, canonical):
        # lam = n pi real: the sinh*sin product term carries sin(n pi) = 0
        p = canonical.replace(alpha=0.0)
        lam = 3 * PI
        mu = (-p.b + cmath.sqrt(p.b ** 2 - 4 * p.a * lam ** 4)) / 2.0
        v = char_fn_scaled(p, lam, mu)
        assert abs(v.value) < 1e-12

    def test_bounded_for_large_lambda(self):
        # lam = 40 + 0.1i: raw sinh ~ e^40, the scaled value stays small
        p = BeamParams(a=1.0, b=1.0, alpha=0.0, xi=XI)
        lam = 40.0 + 0.1j
        mu = (-p.b + cmath.sqrt(p.b ** 2 - 4 * p.a * lam ** 4)) / 2.0
        v = char_fn_scaled(p, lam, mu)
        assert v.scaled and abs(v.value) <= 4.0
        # zero set unchanged: agreement with the raw form at moderate lam
        # through the documented conversion factor i a lam^4 / (2 mu)
        p2 = p.replace(alpha=0.05)
        lam2 = 8.0 + 0.1j
        mu2 = (-p2.b + cmath.sqrt(p2.b ** 2 - 4 * p2.a * lam2 ** 4)) / 2.0
        raw = raw_reference(p2, mu2)
        v2 = char_fn_scaled(p2, lam2, mu2)
        back = (1j * p2.a * lam2 ** 4 / (2.0 * mu2)) * v2.value * math.exp(v2.scale_log)
        assert back == pytest.approx(raw, rel=1e-10)

    def test_inconsistent_pair_rejected(self, canonical):
        with pytest.raises(ValueError, match="fourth root"):
            char_fn_scaled(canonical, 3.0, -0.5 + 9.86j)

    def test_damper_term_subdominant_at_large_lambda(self):
        # along arg lam = pi/8 the alpha-term is O(1/|lam|) of the product term
        p = BeamParams(a=1.0, b=1.0, alpha=1.0, xi=0.3)
        ratios = []
        for r in (25.0, 50.0, 100.0):
            lam = r * cmath.exp(1j * PI / 8)
            mu = (-p.b + cmath.sqrt(p.b ** 2 - 4 * p.a * lam ** 4)) / 2.0
            with_damper = char_fn_scaled(p, lam, mu).value
            without = char_fn_scaled(p.replace(alpha=0.0), lam, mu).value
            ratios.append(abs(with_damper - without) / abs(without))
        assert ratios[0] < 0.2
        # ~1/|lam| decay: doubling |lam| roughly halves the ratio
        assert ratios[2] < ratios[0] * (25.0 / 100.0) * 3.0


class TestCharFnBeta:
    def test_reduces_to_char_fn(self, canonical):
        rng = np.random.default_rng(3)
        for _ in range(100):
            mu = complex(rng.uniform(-3, -0.05), rng.uniform(-50, 50))
            assert char_fn_beta(canonical, mu).value == char_fn(canonical, mu).value

    def test_beta_perturbs_roots(self):
        p = BeamParams(a=1.0, b=1.0, alpha=0.0, beta=0.05, xi=XI)
        mu = -0.5 + 0.5j * math.sqrt(4 * PI ** 4 - 1)
        assert abs(char_fn_beta(p, mu).value) > 1e-8

    def test_division_guard(self):
        p = BeamParams(a=1.0, b=1.0, alpha=0.0, beta=0.05, xi=XI)
        with pytest.raises(DivisionNearZero):
            char_fn_beta(p, 1e-13)

    def test_root_matches_modal_oracle(self):
        from beamspec import modal_eigen_oracle, refine_root

        p = BeamParams(a=1.0, b=1.0, alpha=0.05, beta=0.02, xi=0.3 + 1e-5)
        rec = refine_root(p, -0.5 + 9.857j)
        ev = modal_eigen_oracle(p, 128)
        assert np.min(np.abs(ev - rec.mu)) < 1e-6


class TestCharDerivative:
    def test_against_central_differences(self, canonical):
        rng = np.random.default_rng(11)
        for _ in range(50):
            mu = complex(rng.uniform(-3, -0.05), rng.uniform(0.5, 60))
            h = 1e-6 * max(1.0, abs(mu))
            fd = (raw_reference(canonical, mu + h)
                  - raw_reference(canonical, mu - h)) / (2 * h)
            assert char_derivative(canonical, mu) == pytest.approx(fd, rel=1e-6)

    def test_nonzero_at_simple_large_roots(self, canonical):
        from beamspec import compute_spectrum

        spec = compute_spectrum(canonical, 12)
        for rec in spec.eigenvalues:
            if rec.n >= 8 and rec.sign > 0:
                assert abs(char_derivative(canonical, rec.mu)) > 1e-8

    def test_fallback_near_degenerate_set(self, canonical):
        # within the 1e-3 halo of -b the central-difference path is used
        mu = -canonical.b + 5e-4 + 1e-4j
        h = 1e-6 * max(1.0, abs(mu))
        fd = (raw_reference(canonical, mu + h)
              - raw_reference(canonical, mu - h)) / (2 * h)
        assert char_derivative(canonical, mu) == pytest.approx(fd, rel=1e-9)


class TestInvariants:
    def test_branch_independence(self, canonical):
        rng = np.random.default_rng(5)
        for _ in range(20):
            mu = complex(rng.uniform(-3, -0.05), rng.uniform(0.5, 40))
            lam = lambda_from_mu(canonical, mu).lam
            base = char_fn_scaled(canonical, lam, mu)
            for rot in (1j, -1.0, -1j):
                v = char_fn_scaled(canonical, rot * lam, mu)
                assert abs(v.value) == pytest.approx(abs(base.value), rel=1e-12)

    def test_alpha_zero_factorization(self, undamped):
        rng = np.random.default_rng(9)
        for _ in range(20):
            mu = complex(rng.uniform(-3, -0.05), rng.uniform(0.5, 30))
            lam = lambda_from_mu(undamped, mu).lam
            expect = 2.0 * (mu + undamped.b) * cmath.sinh(lam) * cmath.sin(lam)
            assert char_fn(undamped, mu).value == pytest.approx(expect, rel=1e-12)

    def test_scaled_raw_agreement(self, canonical):
        rng = np.random.default_rng(13)
        count = 0
        while count < 25:
            mu = complex(rng.uniform(-3, -0.05), rng.uniform(0.5, 120))
            lam = lambda_from_mu(canonical, mu).lam
            if abs(lam) > 20:
                continue
            count += 1
            raw = char_fn(canonical, mu)
            raw_val = (raw.value if not raw.scaled
                       else raw.value * math.exp(raw.scale_log))
            sc = char_fn_scaled(canonical, lam, mu)
            back = (1j * canonical.a * lam ** 4 / (2.0 * mu)) \
                * sc.value * math.exp(sc.scale_log)
            assert back == pytest.approx(raw_val, rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(re=st.floats(-4.0, -0.05), im=st.floats(0.1, 60.0))
def test_conjugate_symmetry(re, im):
    p = BeamParams(a=1.0, b=1.0, alpha=0.07, xi=XI)
    mu = complex(re, im)
    v = char_fn(p, mu).value
    vc = char_fn(p, mu.conjugate()).value
    assert vc == pytest.approx(v.conjugate(), rel=1e-12, abs=1e-300)
