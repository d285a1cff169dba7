import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsz2d.poly_core import MONOMIAL, UnivariatePoly
from bsz2d.weights import (
    GENERIC_H,
    PRODUCT_OMEGA,
    InvalidWeightError,
    UnsupportedWeightError,
    WeightSpec,
    chebyshev_spec,
    expand_product,
    generic_spec,
    homogeneous_corner,
    is_stable,
    omega_laurent,
    product_spec,
    spec_from_config,
    spec_to_config,
    tilde_expand,
)

factors_st = st.lists(
    st.floats(-0.9, 0.9).filter(lambda a: abs(a) > 0.05), min_size=1, max_size=3
)


class TestProductExpansion:
    def test_single_factor_rows(self):
        spec = product_spec([-0.5])
        rows = [hi.to_basis(MONOMIAL).coeffs.tolist() for hi in spec.h]
        assert rows[0] == [1.0]
        assert rows[1] == [0.0, -1.0]  # 2 a y with a = -0.5
        assert rows[2] == [0.25]

    @given(factors_st)
    @settings(max_examples=40, deadline=None)
    def test_expansion_matches_pointwise(self, factors):
        spec = product_spec(factors)
        for z, y in [(0.3 + 0.4j, 0.2), (-0.8j, -0.7), (1.0, 0.5)]:
            want = np.prod([1 + 2 * a * y * z + a * a * z * z for a in factors])
            assert spec.h_eval(z, y) == pytest.approx(want, rel=1e-12, abs=1e-12)

    @given(factors_st)
    @settings(max_examples=40, deadline=None)
    def test_degree_bounds_hold(self, factors):
        spec = expand_product(factors)
        n = spec.n_h
        assert n == 2 * len(factors)
        assert spec.kappa == len(factors)
        for i, hi in enumerate(spec.h):
            if not hi.is_zero:
                assert hi.deg <= n / 2 - abs(n / 2 - i)

    def test_invalid_factor_rejected(self):
        with pytest.raises(InvalidWeightError):
            product_spec([0.0])
        with pytest.raises(InvalidWeightError):
            product_spec([1.2])


class TestGeneric:
    def test_h0_must_be_one(self):
        with pytest.raises(InvalidWeightError):
            generic_spec([[2.0], [0.0, 1.0]])

    def test_degree_bound_enforced(self):
        # N_h = 2 allows deg h_1 <= 1; a quadratic h_1 must be rejected
        with pytest.raises(InvalidWeightError):
            generic_spec([[1.0], [0.0, 0.0, 1.0], [0.1]])

    def test_variant_and_tilde(self):
        g = generic_spec([[1.0], [-0.6, -1.0], [0.25, 0.3], [-0.1]])
        assert g.variant == GENERIC_H
        with pytest.raises(UnsupportedWeightError):
            tilde_expand(g)
        p = product_spec([0.4, -0.2])
        assert p.variant == PRODUCT_OMEGA
        assert tilde_expand(p) == p  # same factor parameters


class TestLaurentViews:
    @given(factors_st)
    @settings(max_examples=30, deadline=None)
    def test_omega_support_is_diagonal(self, factors):
        table = omega_laurent(product_spec(factors))
        assert set(table) <= {(i, i) for i in range(len(factors) + 1)}
        assert table[(0, 0)] == 1.0

    @given(factors_st)
    @settings(max_examples=30, deadline=None)
    def test_corner_is_elementary_symmetric(self, factors):
        g = homogeneous_corner(product_spec(factors))
        # compare against the polynomial prod (t + a_i)
        poly = np.array([1.0])
        for a in factors:
            poly = np.convolve(poly, [1.0, a])
        assert np.allclose(g, poly)


class TestStability:
    def test_product_always_stable(self):
        rep = is_stable(product_spec([0.9, -0.8]))
        assert rep.stable and rep.method == "analytic"
        assert rep.min_modulus == pytest.approx(1 / 0.9)

    def test_generic_sampled(self):
        rep = is_stable(generic_spec([[1.0], [-0.6, -1.2], [0.36, 0.72], [-0.216]]))
        assert rep.stable and rep.method == "sampled"
        assert rep.min_modulus > 1.0

    def test_unstable_detected(self):
        # h = 1 - 2z has a root at 1/2 inside the disk
        rep = is_stable(generic_spec([[1.0], [-2.0]]))
        assert not rep.stable
        assert rep.min_modulus == pytest.approx(0.5, rel=1e-9)


class TestConfig:
    def test_round_trip_product(self):
        spec = product_spec([-0.5, 0.3])
        again = spec_from_config(spec_to_config(spec))
        assert again == spec

    def test_round_trip_generic(self):
        spec = generic_spec([[1.0], [-0.6, -1.0], [0.25, 0.3], [-0.1]])
        again = spec_from_config(spec_to_config(spec))
        assert again == spec

    def test_zero_factors_dropped(self):
        spec = spec_from_config({"product": [0.0, 0.5]})
        assert spec.factors == (0.5,)

    def test_bad_config(self):
        with pytest.raises(InvalidWeightError):
            spec_from_config({"nonsense": 1})


def test_chebyshev_degenerate_spec():
    ch = chebyshev_spec()
    assert ch.variant == PRODUCT_OMEGA
    assert ch.n_h == 0 and ch.n_f == 0 and ch.kappa == 0
    assert float(np.real(ch.h_eval(0.5 + 0.1j, 0.3))) == pytest.approx(1.0)


def test_fingerprint_is_order_insensitive_for_products():
    assert product_spec([0.3, -0.5]) == product_spec([-0.5, 0.3])
