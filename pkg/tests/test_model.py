import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamspec import BeamParams, GridFunction, lambda_from_mu, mu_from_lambda
from beamspec.errors import DegenerateLambda, RationalXiWarning

XI = 1.0 / math.sqrt(2.0)


class TestBeamParams:
    def test_validation(self):
        with pytest.raises(ValueError, match="a must be > 0"):
            BeamParams(a=0.0, b=1.0, xi=XI)
        with pytest.raises(ValueError, match="b must be > 0"):
            BeamParams(a=1.0, b=-1.0, xi=XI)
        with pytest.raises(ValueError, match="alpha must be >= 0"):
            BeamParams(a=1.0, b=1.0, alpha=-0.1, xi=XI)
        with pytest.raises(ValueError, match="beta must be >= 0"):
            BeamParams(a=1.0, b=1.0, beta=-0.1, xi=XI)
        with pytest.raises(ValueError, match="xi must lie in"):
            BeamParams(a=1.0, b=1.0, xi=1.2)

    def test_rational_guard_warns(self):
        with pytest.warns(RationalXiWarning):
            p = BeamParams(a=1.0, b=1.0, xi=0.5)
        assert p.xi_is_rational_guard

    def test_irrational_xi_silent(self, recwarn):
        p = BeamParams(a=1.0, b=1.0, xi=XI)
        assert not p.xi_is_rational_guard
        assert not any(isinstance(w.message, RationalXiWarning) for w in recwarn)

    def test_json_round_trip(self):
        p = BeamParams(a=2.0, b=3.0, alpha=0.1, beta=0.2, xi=XI)
        q = BeamParams.from_json(p.to_json())
        assert q == p
        assert set(json.loads(p.to_json())) == {"a", "b", "alpha", "beta", "xi"}


class TestLambdaFromMu:
    def test_degenerate_at_minus_b(self):
        p = BeamParams(a=1.0, b=1.0, xi=XI)
        with pytest.raises(DegenerateLambda):
            lambda_from_mu(p, -1.0)
        with pytest.raises(DegenerateLambda):
            lambda_from_mu(p, 0.0)

    def test_closed_form_mode_one(self):
        # mu_1^+ of (a=1, b=1) maps back to lam = pi
        p = BeamParams(a=1.0, b=1.0, xi=XI)
        mu = -0.5 + 0.5j * math.sqrt(4.0 * math.pi ** 4 - 1.0)
        pt = lambda_from_mu(p, mu)
        assert pt.lam == pytest.approx(math.pi, rel=1e-13)
        assert abs(pt.lam.imag) < 1e-13

    def test_direct_arithmetic(self):
        # (a=4, b=2), mu=-1: lam^4 = -(-2+1)/4 = 1/4
        p = BeamParams(a=4.0, b=2.0, xi=XI)
        pt = lambda_from_mu(p, -1.0)
        assert pt.lam == pytest.approx((0.25) ** 0.25, rel=1e-14)
        assert pt.lam == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)

    def test_principal_sector(self):
        # the sector edge is defined up to atan2 rounding (1 ulp)
        p = BeamParams(a=1.0, b=1.0, xi=XI)
        edge = math.pi / 4 + 4e-16
        for mu in (-0.4 + 3j, -0.4 - 3j, -2.5 + 0.1j, -1.5 - 40j, -5.0 + 0.0j):
            pt = lambda_from_mu(p, mu)
            ph = cmath.phase(pt.lam)
            assert -edge <= ph < edge
            resid = abs(pt.lam ** 4 + (p.b * mu + mu * mu) / p.a)
            assert resid <= 1e-10 * max(1.0, abs(pt.lam) ** 4)


class TestMuFromLambda:
    def test_closed_form(self):
        p = BeamParams(a=1.0, b=1.0, xi=XI)
        plus, minus = mu_from_lambda(p, math.pi)
        expect = 0.5j * math.sqrt(4.0 * math.pi ** 4 - 1.0)
        assert plus == pytest.approx(-0.5 + expect, rel=1e-14)
        assert minus == pytest.approx(-0.5 - expect, rel=1e-14)
        assert abs(plus.imag - 9.857) < 2e-4  # desk value

    def test_lambda_zero(self):
        p = BeamParams(a=1.0, b=1.0, xi=XI)
        assert mu_from_lambda(p, 0.0) == (0.0, -1.0)

    def test_double_root_at_critical_damping(self):
        # b = 2 sqrt(a) pi^2 makes the discriminant vanish at lam = pi
        b = 2.0 * math.pi ** 2
        p = BeamParams(a=1.0, b=b, xi=XI)
        plus, minus = mu_from_lambda(p, math.pi)
        assert plus == pytest.approx(-b / 2.0, rel=1e-12)
        assert minus == pytest.approx(-b / 2.0, rel=1e-12)

    def test_no_cancellation_for_tiny_lambda(self):
        # |a lam^4| << b^2: the small root must come out with full precision
        p = BeamParams(a=1.0, b=10.0, xi=XI)
        lam = 1e-4
        plus, minus = mu_from_lambda(p, lam)
        assert plus == pytest.approx(-lam ** 4 / 10.0, rel=1e-10)
        assert minus == pytest.approx(-10.0, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(re=st.floats(-5.0, -0.01), im=st.floats(-80.0, 80.0))
def test_round_trip_left_half_plane(re, im):
    p = BeamParams(a=1.0, b=1.0, xi=XI)
    mu = complex(re, im)
    pt = lambda_from_mu(p, mu)
    pair = mu_from_lambda(p, pt.lam)
    assert min(abs(m - mu) for m in pair) <= 1e-12 * max(1.0, abs(mu))


@settings(max_examples=40, deadline=None)
@given(re=st.floats(-5.0, -0.01), im=st.floats(-40.0, 40.0))
def test_branch_symmetry(re, im):
    # the quadratic sees lambda only through lambda^4
    p = BeamParams(a=1.3, b=0.7, xi=XI)
    lam = lambda_from_mu(p, complex(re, im)).lam
    base = mu_from_lambda(p, lam)
    for rot in (1j, -1.0, -1j):
        rotated = mu_from_lambda(p, rot * lam)
        assert rotated[0] == pytest.approx(base[0], rel=1e-13, abs=1e-13)
        assert rotated[1] == pytest.approx(base[1], rel=1e-13, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(re=st.floats(-4.0, -0.02), im=st.floats(-50.0, 50.0))
def test_root_sum_and_product(re, im):
    p = BeamParams(a=0.8, b=2.1, xi=XI)
    lam = lambda_from_mu(p, complex(re, im)).lam
    plus, minus = mu_from_lambda(p, lam)
    prod = p.a * lam ** 4
    assert plus + minus == pytest.approx(-p.b, rel=1e-13, abs=1e-13)
    assert plus * minus == pytest.approx(prod, rel=1e-13, abs=1e-300)


class TestGridFunction:
    def test_minimum_size(self):
        with pytest.raises(ValueError, match="M >= 8"):
            GridFunction(np.zeros(5))

    def test_uniform_grid_enforced(self):
        bad = np.linspace(0.0, 1.0, 17) ** 1.01
        with pytest.raises(ValueError):
            GridFunction(np.zeros(17), bad)

    def test_csv_round_trip(self, tmp_path):
        g = GridFunction.from_callable(lambda x: np.exp(1j * x), m=16, xi=0.3)
        path = tmp_path / "g.csv"
        g.to_csv(path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "x,re,im"
        assert len(rows) == 18
        x, re, im = map(float, rows[5].split(","))
        assert complex(re, im) == pytest.approx(np.exp(1j * x), rel=1e-15)
        assert g.xi_index == round(0.3 * 16)
