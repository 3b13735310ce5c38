import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wsbem import specfun as sf


# ---------------------------------------------------------------------------
# independent oracle: truncated Taylor series for j_l
# ---------------------------------------------------------------------------
def j_series(l, z, terms=60):
    """j_l(z) = z^l sum_s (-z^2/2)^s / (s! (2l+2s+1)!!)."""
    acc = 0.0
    for s in range(terms):
        dd = 1.0
        for t in range(2 * l + 2 * s + 1, 0, -2):
            dd *= t
        acc += (-z * z / 2.0) ** s / (math.factorial(s) * dd)
    return z**l * acc


class TestSphBessel:
    def test_j0_closed_form(self):
        for z in (0.5, 1.0, 2.7, 9.3):
            assert sf.sph_bessel("j", 0, z) == pytest.approx(math.sin(z) / z, rel=1e-14)

    def test_h1_0_closed_form(self):
        # h1 at l=0, z=1: -j e^{jz}/z
        assert sf.sph_bessel("h1", 0, 1.0) == pytest.approx(
            0.8414709848078965 - 0.5403023058681398j, rel=1e-14
        )

    def test_j5_matches_series_oracle(self):
        # frozen from the series oracle above (60 terms, z=2.0)
        frozen = 0.002635169770244117
        assert j_series(5, 2.0) == pytest.approx(frozen, rel=1e-15)
        assert sf.sph_bessel("j", 5, 2.0).real == pytest.approx(frozen, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            sf.sph_bessel("j", -1, 1.0)
        with pytest.raises(ValueError):
            sf.sph_bessel("j", 2, -0.5)
        with pytest.raises(ValueError):
            sf.sph_bessel("h1", 0, 0.0)
        with pytest.raises(ValueError):
            sf.sph_bessel("q", 0, 1.0)

    def test_h2_is_conjugate_of_h1(self):
        z = np.linspace(0.3, 20.0, 17)
        for l in (0, 3, 11):
            assert np.allclose(
                sf.sph_bessel("h2", l, z), np.conj(sf.sph_bessel("h1", l, z))
            )

    @given(
        st.integers(min_value=0, max_value=60),
        st.floats(min_value=0.05, max_value=80.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_h1_plus_h2_is_2j(self, l, z):
        lhs = sf.sph_bessel("h1", l, z) + sf.sph_bessel("h2", l, z)
        rhs = 2.0 * sf.sph_bessel("j", l, z)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


class TestSphBesselDeriv:
    def test_j0_deriv_closed_form(self):
        z = 1.3
        expect = (z * math.cos(z) - math.sin(z)) / z**2  # = -0.36438444272498777
        assert sf.sph_bessel_zderiv("j", 0, z).real == pytest.approx(expect, rel=1e-14)

    def test_finite_difference(self):
        z, h = 2.1, 1e-5
        fd = (sf.sph_bessel("j", 3, z + h) - sf.sph_bessel("j", 3, z - h)) / (2 * h)
        an = sf.sph_bessel_zderiv("j", 3, z)
        assert abs(an - fd) < 1e-8 * abs(an)

    def test_wronskian(self):
        # j_l y_l' - j_l' y_l = 1/z^2
        l, z = 4, 3.7
        j = sf.sph_bessel("j", l, z).real
        jp = sf.sph_bessel_zderiv("j", l, z).real
        h1 = sf.sph_bessel("h1", l, z)
        h1p = sf.sph_bessel_zderiv("h1", l, z)
        y, yp = h1.imag, h1p.imag
        assert j * yp - jp * y == pytest.approx(1.0 / z**2, abs=1e-12)

    def test_second_derivative_fd(self):
        z, h = 1.9, 1e-4
        fd = (
            sf.sph_bessel_zderiv("h1", 2, z + h) - sf.sph_bessel_zderiv("h1", 2, z - h)
        ) / (2 * h)
        assert abs(sf.sph_bessel_zderiv2("h1", 2, z) - fd) < 1e-6


class TestSphericalHarmonic:
    def test_monopole_constant(self):
        p = sf.ModeIndex(0, 0, 0)
        for th, ph in [(0.1, 0.0), (1.2, 2.2), (3.0, 5.5)]:
            assert sf.spherical_harmonic(p, th, ph) == pytest.approx(
                1.0 / math.sqrt(4 * math.pi)
            )

    def test_conjugation_relation(self):
        # conj(X_p) = (-1)^m X_(l,-m) at (l, m) = (3, 2)
        p = sf.ModeIndex(0, 3, 2)
        pt = sf.ModeIndex(0, 3, -2)
        th, ph = 1.0, 0.7
        lhs = np.conj(sf.spherical_harmonic(p, th, ph))
        rhs = (-1.0) ** p.m * sf.spherical_harmonic(pt, th, ph)
        assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_orthonormality(self):
        # Gram matrix of all modes with l <= 4 under the reference quadrature
        l_max = 4
        th, ph, w = sf.sphere_quadrature(24, 48)
        X = sf.sph_harm_tables(l_max, th, ph)
        gram = np.einsum("ip,jp,p->ij", X, np.conj(X), w)
        assert np.max(np.abs(gram - np.eye((l_max + 1) ** 2))) < 1e-10

    def test_orthonormality_high_degree(self):
        l_max = 6
        th, ph, w = sf.sphere_quadrature(32, 64)
        X = sf.sph_harm_tables(l_max, th, ph)
        gram = np.einsum("ip,jp,p->ij", X, np.conj(X), w)
        assert np.max(np.abs(gram - np.eye((l_max + 1) ** 2))) < 1e-8

    def test_high_degree_no_overflow(self):
        # normalized recurrence stays finite well past where factorials blow up
        X = sf.sph_harm_tables(120, np.array([1.1]), np.array([0.3]))
        assert np.all(np.isfinite(X))

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            sf.ModeIndex(0, 2, 3)

    def test_theta_derivative_fd(self):
        l_max, h = 5, 1e-6
        th, ph = 0.9, 1.7
        _, dX, mXs = sf.sph_harm_tables(
            l_max, np.array([th]), np.array([ph]), derivatives=True
        )
        Xp = sf.sph_harm_tables(l_max, np.array([th + h]), np.array([ph]))
        Xm = sf.sph_harm_tables(l_max, np.array([th - h]), np.array([ph]))
        fd = (Xp - Xm) / (2 * h)
        assert np.max(np.abs(dX - fd)) < 1e-8
        # m X / sin(theta) is consistent with a phi derivative
        X0 = sf.sph_harm_tables(l_max, np.array([th]), np.array([ph]))
        assert np.max(np.abs(mXs * math.sin(th) - X0 * sf.ModeSet(
            l_max=l_max, k=1, a=1, c=3).orders()[:, None])) < 1e-12


class TestModeSet:
    def test_truncation_rule(self):
        # ka = 5, c = 3 -> l_max = floor(5 + 3 * 5^(1/3)) = 10, M = 121
        ms = sf.build_mode_set(2.0, 2.5, 3.0)
        assert ms.l_max == 10
        assert len(ms) == 121

    def test_degenerate_limit(self):
        ms = sf.build_mode_set(1e-9, 1.0, 3.0)
        assert ms.l_max == 0
        assert len(ms) == 1

    def test_pillbox_scale_count(self):
        # k = 9.664 with a chosen so that M = 1024 (l_max = 31); checks the
        # index bijection at a production-scale mode count
        k = 9.664
        ms = sf.mode_set_from_lmax(31, k, 1.0)
        assert len(ms) == 1024
        for q in ms.modes:
            assert ms.mode(q.l, q.m) is q
            assert q.p == q.l * q.l + q.l + q.m

    def test_ordering(self):
        ms = sf.mode_set_from_lmax(2, 1.0, 1.0)
        lm = [(q.l, q.m) for q in ms.modes]
        assert lm == sorted(lm)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            sf.build_mode_set(-1.0, 1.0, 3.0)
        with pytest.raises(ValueError):
            sf.build_mode_set(1.0, 1.0, 5.0)

    @given(st.integers(min_value=0, max_value=6))
    @settings(max_examples=7, deadline=None)
    def test_index_maps_are_involutions(self, l_max):
        ms = sf.mode_set_from_lmax(l_max, 1.0, 1.0)
        for p in ms.modes:
            assert ms.hat(ms.hat(p)) is p
            assert ms.tilde(ms.tilde(p)) is p

    def test_reflection_pattern(self):
        ms = sf.mode_set_from_lmax(2, 1.0, 1.0)
        I = ms.reflection_pattern()
        # involution with signs: I @ I = identity, and I is symmetric
        assert np.allclose(I @ I, np.eye(len(ms)))
        assert np.allclose(I, I.T)
        # (0,0) couples to itself with sign (-1)^(1+0+0) = -1
        assert I[0, 0] == -1.0
