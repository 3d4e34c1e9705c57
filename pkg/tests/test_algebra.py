"""Polynomial/rational kernel tests.

Expected values follow the stated oracles: construct-then-solve for roots,
hand partial fractions and a Cauchy-integral Taylor oracle for local series.
"""

import numpy as np
import pytest
from fractions import Fraction

from heunlab.algebra import (
    CPoly,
    CRatFun,
    chebyshev_nodes,
    poly_gcd,
    poly_interp,
    poly_resultant,
    poly_roots,
    ratfun_series,
)

rng = np.random.default_rng(20260809)


def poly_from_roots(roots):
    p = CPoly.one()
    for r in roots:
        p = p * CPoly([-r, 1])
    return p


def match_multisets(a, b, tol):
    a = sorted(a, key=lambda z: (z.real, z.imag))
    b = sorted(b, key=lambda z: (z.real, z.imag))
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert abs(x - y) < tol, (x, y)


class TestPolyRoots:
    def test_quadratic_factored(self):
        match_multisets(poly_roots(CPoly([-1, 0, 1])), [1.0, -1.0], 1e-12)

    def test_symmetric_quadratic_g2_4(self):
        # E**2 - 12 with g2 = 4
        match_multisets(poly_roots(CPoly([-12, 0, 1])), [2 * np.sqrt(3), -2 * np.sqrt(3)], 1e-12)

    def test_degree6_construct_then_solve(self):
        roots = [complex(x, y) for x, y in rng.uniform(-2, 2, size=(6, 2))]
        p = poly_from_roots(roots)
        match_multisets(poly_roots(p), roots, 1e-8)

    def test_zero_poly_raises(self):
        with pytest.raises(ValueError, match="undefined roots"):
            poly_roots(CPoly())

    def test_product_roots_union(self):
        r1 = [0.5, -1.2 + 0.3j]
        r2 = [2.0j, 0.5001]
        match_multisets(poly_roots(poly_from_roots(r1) * poly_from_roots(r2)), r1 + [complex(r) for r in r2], 1e-6)


class TestPolyInterp:
    def test_square(self):
        p = poly_interp([(0, 0), (1, 1), (2, 4)], 2)
        assert p.degree == 2
        assert abs(p(3.5) - 3.5**2) < 1e-12

    def test_spectral_quintic_at_chebyshev_nodes(self):
        # (E^2-3g2) prod (E-3e_i) with e=(2,-0.5,-1.5), g2=2*sum(e^2)=13
        e = [2.0, -0.5, -1.5]
        g2 = 2 * sum(x * x for x in e)
        q = CPoly([-3 * g2, 0, 1])
        for ei in e:
            q = q * CPoly([-3 * ei, 1])
        xs = chebyshev_nodes(-8.0, 8.0, 8)
        p = poly_interp([(x, q(x)) for x in xs], 5)
        assert p.degree == 5
        np.testing.assert_allclose(
            [complex(c) for c in p.coeffs], [complex(c) for c in q.coeffs], rtol=1e-9, atol=1e-9
        )

    def test_noisy_nodes(self):
        q = CPoly([1.0, -2.0, 0.5, 1.0])
        xs = chebyshev_nodes(-1, 1, 9)
        noise = rng.uniform(-1e-12, 1e-12, size=9)
        p = poly_interp([(x, q(x) + n) for x, n in zip(xs, noise)], 3)
        np.testing.assert_allclose([complex(c) for c in p.coeffs], [complex(c) for c in q.coeffs], atol=1e-9)

    def test_roundtrip_identity(self):
        for _ in range(5):
            cs = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            q = CPoly(list(cs))
            xs = chebyshev_nodes(-2, 2, 7)
            p = poly_interp([(x, q(x)) for x in xs], 4)
            np.testing.assert_allclose([complex(c) for c in p.coeffs], list(cs), atol=1e-9)

    def test_duplicate_nodes_raise(self):
        with pytest.raises(ValueError, match="duplicate"):
            poly_interp([(1, 1), (1, 2), (2, 4)], 2)

    def test_degree_bound_violation(self):
        xs = chebyshev_nodes(-1, 1, 6)
        with pytest.raises(ValueError, match="degree bound"):
            poly_interp([(x, x**4) for x in xs], 2)


class TestRatfunSeries:
    def test_heun_s_series_hand_partial_fractions(self):
        # s(w) = (ab*w - q)/(w(w-1)(w-t)) at 0: s0=0, s1=-q/t, s2=ab/t - q(1+t)/t^2
        ab, q, t = Fraction(3, 2), Fraction(2, 5), Fraction(7, 3)
        den = CPoly([0, 1]) * CPoly([-1, 1]) * CPoly([-t, 1])
        f = CRatFun(CPoly([-q, ab]), den)
        s = ratfun_series(f, Fraction(0), 2, offset=2)
        # index i carries the power (w)^(i-2)
        assert s[0] == 0
        assert s[1] == -q / t
        assert s[2] == ab / t - q * (1 + t) / t**2

    def test_simple_pole(self):
        eps0 = 0.75
        f = CRatFun(CPoly([eps0]), CPoly([0, 1]))
        r = ratfun_series(f, 0.0, 4, offset=1)
        assert abs(r[0] - eps0) < 1e-14
        assert all(abs(complex(x)) < 1e-14 for x in r[1:])

    def test_regular_point_matches_cauchy_taylor(self):
        f = CRatFun(CPoly([1.0, 2.0, 0.5]), CPoly([3.0, -1.0, 1.0]))
        c = 0.3 + 0.1j
        coeffs = ratfun_series(f, c, 6, offset=0)
        # Cauchy-integral Taylor coefficients on a small circle
        n = 256
        ths = 2 * np.pi * np.arange(n) / n
        r = 0.2
        zs = c + r * np.exp(1j * ths)
        vals = np.array([f(z) for z in zs])
        for k in range(7):
            ck = np.mean(vals * np.exp(-1j * k * ths)) / r**k
            assert abs(ck - complex(coeffs[k])) < 1e-10

    def test_resummation_matches_eval(self):
        f = CRatFun(CPoly([2.0, 1.0]), CPoly([0, 0, 1.0]) * CPoly([-2.0, 1.0]))
        c = 0.0
        coeffs = ratfun_series(f, c, 25, offset=2)
        w = 0.05 + 0.02j
        acc = sum(complex(coeffs[i]) * w ** (i - 2) for i in range(len(coeffs)))
        assert abs(acc - f(w)) < 1e-10 * abs(f(w))

    def test_pole_order_3_raises(self):
        f = CRatFun(CPoly([1.0]), CPoly([0, 0, 0, 1.0]))
        with pytest.raises(ValueError, match="not a regular singular point"):
            ratfun_series(f, 0.0, 3, offset=2)


class TestExactHelpers:
    def test_gcd(self):
        a = CPoly([Fraction(-1), Fraction(0), Fraction(1)])  # x^2-1
        b = CPoly([Fraction(1), Fraction(1)])  # x+1
        g = poly_gcd(a * b, b)
        assert g.coeffs == [Fraction(1), Fraction(1)]

    def test_divmod_exact(self):
        a = CPoly([Fraction(2), Fraction(3), Fraction(1)])
        b = CPoly([Fraction(1), Fraction(1)])
        q, r = a.divmod(b)
        assert r.is_zero() and q.coeffs == [Fraction(2), Fraction(1)]

    def test_resultant_product_of_differences(self):
        # Res_y(y^2-2, E-y) over outer variable E equals E^2-2
        cubic = [CPoly([Fraction(-2)]), CPoly([Fraction(0)]), CPoly([Fraction(1)])]
        lin = [CPoly([Fraction(0), Fraction(1)]), CPoly([Fraction(-1)])]
        res = poly_resultant(cubic, lin)
        assert res.monic().coeffs == [Fraction(-2), Fraction(0), Fraction(1)]

    def test_compose_linear(self):
        p = CPoly([1, 0, 1])  # 1+x^2
        q = p.compose_linear(2, -1)  # 1+(2x-1)^2
        assert [complex(c) for c in q.coeffs] == [2 + 0j, -4 + 0j, 4 + 0j]
