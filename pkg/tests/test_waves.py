import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wsbem import waves as wv
from wsbem.specfun import (
    ModeIndex,
    mode_set_from_lmax,
    sph_bessel_zderiv,
    spherical_harmonic,
)

RNG = np.random.default_rng(1234)
K = 2.0


def fd_gradient(f, r, h=1e-6):
    g = np.zeros(3, complex)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        g[i] = (f(r + e) - f(r - e)) / (2 * h)
    return g


class TestEvalWave:
    def test_standing_regular_at_origin(self):
        v = wv.eval_wave("standing", ModeIndex(0, 0, 0), K, np.zeros(3))
        assert v == pytest.approx(2 * K * 1j / math.sqrt(4 * math.pi))
        assert wv.eval_wave("standing", ModeIndex(0, 3, 1), K, np.zeros(3)) == 0

    def test_singular_kinds_reject_origin(self):
        for kind in ("incoming", "outgoing"):
            with pytest.raises(ValueError):
                wv.eval_wave(kind, ModeIndex(0, 0, 0), K, np.zeros(3))

    def test_outgoing_from_incoming_conjugate(self):
        # O_lm = (-1)^(1+l+m) conj(I_(l,-m))
        l, m = 2, 1
        r = np.array([0.3, 0.2, 0.5])
        O = wv.eval_wave("outgoing", ModeIndex(0, l, m), K, r)
        I = wv.eval_wave("incoming", ModeIndex(0, l, -m), K, r)
        assert O == pytest.approx((-1) ** (1 + l + m) * np.conj(I), rel=1e-13)

    def test_standing_is_sum(self):
        p = ModeIndex(0, 3, -2)
        for _ in range(10):
            r = RNG.normal(size=3)
            W = wv.eval_wave("standing", p, K, r)
            IO = wv.eval_wave("incoming", p, K, r) + wv.eval_wave("outgoing", p, K, r)
            assert abs(W - IO) <= 1e-12 * max(1.0, abs(W))

    def test_far_field_consistency(self):
        # kr >> 1: incoming approaches e^{jkr}/r X_p with O(1/(kr)) error
        # (leading correction coefficient is l(l+1)/2)
        p = ModeIndex(0, 4, 2)
        r = np.array([0.0, 0.6, 0.8]) * 1e3 / K
        exact = wv.eval_wave("incoming", p, K, r)
        far = wv.eval_wave_far("incoming", p, K, r)
        kr = K * np.linalg.norm(r)
        assert abs(exact - far) / abs(exact) < p.l * (p.l + 1) / kr


class TestStandingKderiv:
    def test_origin_limit(self):
        d = wv.eval_standing_kderiv(ModeIndex(0, 0, 0), K, np.zeros(3))
        assert d == pytest.approx(2j / math.sqrt(4 * math.pi))

    def test_matches_fd_over_k(self):
        h = 1e-5 * K
        for _ in range(20):
            l = int(RNG.integers(0, 5))
            m = int(RNG.integers(-l, l + 1))
            p = ModeIndex(0, l, m)
            r = RNG.normal(size=3)
            fd = (
                wv.eval_wave("standing", p, K + h, r)
                - wv.eval_wave("standing", p, K - h, r)
            ) / (2 * h)
            an = wv.eval_standing_kderiv(p, K, r)
            assert abs(an - fd) < 1e-7 * max(1.0, abs(an))

    def test_gradient_of_kderiv_fd_in_space(self):
        p = ModeIndex(0, 3, 2)
        r = np.array([0.7, -0.4, 1.1])
        an = wv.eval_wave_gradient("standing", p, K, r, kderiv=True)
        fd = fd_gradient(lambda rr: wv.eval_standing_kderiv(p, K, rr), r)
        assert np.linalg.norm(an - fd) < 1e-6 * np.linalg.norm(an)


class TestNormalDeriv:
    def test_radial_on_sphere_closed_form(self):
        # radial n: n.grad W_p = 2 k^2 j^(l+1) j_l'(kr) X_p at (l, m) = (1, 0)
        p = ModeIndex(0, 1, 0)
        r = np.array([0.0, 0.0, 1.3])
        n = r / np.linalg.norm(r)
        got = wv.eval_wave_normal_deriv("standing", p, K, r, n)
        z = K * np.linalg.norm(r)
        expect = (
            2 * K**2 * 1j**2 * sph_bessel_zderiv("j", 1, z)
            * spherical_harmonic(p, 0.0, 0.0)
        )
        assert got == pytest.approx(expect, rel=1e-12)

    def test_tangential_monopole_vanishes(self):
        r = np.array([0.0, 0.0, 1.3])
        t = np.array([1.0, 0.0, 0.0])
        assert wv.eval_wave_normal_deriv("standing", ModeIndex(0, 0, 0), K, r, t) == 0

    def test_matches_spatial_fd(self):
        for _ in range(20):
            l = int(RNG.integers(0, 5))
            m = int(RNG.integers(-l, l + 1))
            p = ModeIndex(0, l, m)
            r = RNG.normal(size=3)
            n = RNG.normal(size=3)
            n /= np.linalg.norm(n)
            an = wv.eval_wave_normal_deriv("standing", p, K, r, n)
            fd = np.dot(fd_gradient(lambda rr: wv.eval_wave("standing", p, K, rr), r), n)
            assert abs(an - fd) < 1e-6 * max(1.0, abs(an))

    def test_unit_normal_required(self):
        with pytest.raises(ValueError):
            wv.eval_wave_normal_deriv(
                "standing", ModeIndex(0, 0, 0), K, np.ones(3), np.array([2.0, 0, 0])
            )


class TestGreen:
    def test_static_limit(self):
        r, rp = np.array([1.0, 0, 0]), np.zeros(3)
        assert wv.green(r, rp, 1e-12) == pytest.approx(1 / (4 * math.pi), rel=1e-9)

    def test_value_closed_form(self):
        r, rp = np.array([1.0, 0, 0]), np.zeros(3)
        expect = (math.cos(2) - 1j * math.sin(2)) / (4 * math.pi)
        assert wv.green(r, rp, 2.0) == pytest.approx(expect, rel=1e-14)

    def test_kderiv_modulus_independent_of_distance(self):
        rp = np.zeros(3)
        for d in (0.2, 1.0, 3.0, 11.0, 40.0):
            g = wv.green(np.array([d, 0, 0]), rp, 2.0, "kderiv")
            assert abs(g) == pytest.approx(1 / (4 * math.pi), rel=1e-14)

    def test_coincident_raises(self):
        with pytest.raises(ValueError):
            wv.green(np.ones(3), np.ones(3), 1.0)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_reciprocity(self, seed):
        rng = np.random.default_rng(seed)
        ra, rb = rng.normal(size=3), rng.normal(size=3)
        if np.linalg.norm(ra - rb) < 1e-6:
            return
        assert wv.green(ra, rb, 2.0) == wv.green(rb, ra, 2.0)

    def test_normal_kernels_match_fd(self):
        rng = np.random.default_rng(7)
        ra, rb = rng.normal(size=3), rng.normal(size=3) + 3.0
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        ns = rng.normal(size=3)
        ns /= np.linalg.norm(ns)
        h = 1e-5
        fd = (wv.green(ra, rb + h * ns, 2.0) - wv.green(ra, rb - h * ns, 2.0)) / (2 * h)
        assert abs(wv.green(ra, rb, 2.0, "normal_src", n_src=ns) - fd) < 1e-8
        fd2 = (
            wv.green(ra + h * n, rb + h * ns, 2.0)
            - wv.green(ra + h * n, rb - h * ns, 2.0)
            - wv.green(ra - h * n, rb + h * ns, 2.0)
            + wv.green(ra - h * n, rb - h * ns, 2.0)
        ) / (4 * h * h)
        assert abs(wv.green(ra, rb, 2.0, "normal_both", n=n, n_src=ns) - fd2) < 1e-5
        fd3 = (
            wv.green(ra + h * n, rb + h * ns, 2.0, "kderiv")
            - wv.green(ra + h * n, rb - h * ns, 2.0, "kderiv")
            - wv.green(ra - h * n, rb + h * ns, 2.0, "kderiv")
            + wv.green(ra - h * n, rb - h * ns, 2.0, "kderiv")
        ) / (4 * h * h)
        assert abs(wv.green(ra, rb, 2.0, "kderiv_normal", n=n, n_src=ns) - fd3) < 1e-5


class TestGreenExpansion:
    def test_converges_to_kernel(self):
        r = np.array([3.0, 2.0, 3.0])
        r = r / np.linalg.norm(r) * 5.0
        rp = np.array([0.3, -0.2, 0.3])
        G = wv.green(r, rp, 2.0)
        Ge = wv.green_expansion_check(r, rp, 2.0, 25)
        assert abs(G - Ge) / abs(G) < 1e-9

    def test_origin_source_single_term(self):
        r = np.array([1.5, 0.0, 0.7])
        rp = np.zeros(3)
        G = wv.green(r, rp, 2.0)
        Ge = wv.green_expansion_check(r, rp, 2.0, 0)
        assert abs(G - Ge) / abs(G) < 1e-13

    def test_far_variant(self):
        rhat = np.array([0.0, 0.6, 0.8])
        r = rhat * 1e3 / 2.0
        rp = np.array([0.3, -0.2, 0.3])
        Gf = wv.green_far(r, rp, 2.0)
        Ge = wv.green_expansion_check(r, rp, 2.0, 25, far=True)
        assert abs(Gf - Ge) / abs(Gf) < 1e-2

    def test_domain_check(self):
        with pytest.raises(ValueError):
            wv.green_expansion_check(np.array([0.1, 0, 0]), np.array([1.0, 0, 0]), 2.0, 4)


class TestHelmholtzResidual:
    def test_six_point_laplacian(self):
        # (lap + k^2) W ~ 0 via central second differences
        h = 1e-3
        for _ in range(5):
            r = RNG.normal(size=3)
            p = ModeIndex(0, int(RNG.integers(0, 4)), 0)
            W = lambda rr: wv.eval_wave("standing", p, K, rr)
            lap = 0.0
            for i in range(3):
                e = np.zeros(3)
                e[i] = h
                lap += (W(r + e) - 2 * W(r) + W(r - e)) / h**2
            resid = lap + K**2 * W(r)
            assert abs(resid) < 1e-4 * K**2 * max(abs(W(r)), 1e-2)


class TestMedium:
    def test_omega_derived(self):
        m = wv.Medium(k=3.0, v=2.0)
        assert m.omega == 6.0

    def test_positive_required(self):
        with pytest.raises(ValueError):
            wv.Medium(k=-1.0)


class TestBatchFields:
    def test_batch_matches_pointwise(self):
        ms = mode_set_from_lmax(3, K, 1.0)
        pts = RNG.normal(size=(5, 3))
        nrm = RNG.normal(size=(5, 3))
        nrm /= np.linalg.norm(nrm, axis=1)[:, None]
        B = wv.standing_wave_fields(3, K, pts)
        Bn = wv.standing_wave_fields(3, K, pts, normals=nrm)
        Bk = wv.standing_wave_fields(3, K, pts, kderiv=True)
        Bnk = wv.standing_wave_fields(3, K, pts, normals=nrm, kderiv=True)
        for q in ms.modes:
            for i in range(5):
                assert B[q.p, i] == pytest.approx(
                    wv.eval_wave("standing", q, K, pts[i]), abs=1e-13
                )
                assert Bn[q.p, i] == pytest.approx(
                    wv.eval_wave_normal_deriv("standing", q, K, pts[i], nrm[i]),
                    abs=1e-13,
                )
                assert Bk[q.p, i] == pytest.approx(
                    wv.eval_standing_kderiv(q, K, pts[i]), abs=1e-13
                )
                assert Bnk[q.p, i] == pytest.approx(
                    wv.eval_wave_normal_deriv(
                        "standing", q, K, pts[i], nrm[i], kderiv=True
                    ),
                    abs=1e-13,
                )
