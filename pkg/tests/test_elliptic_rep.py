"""Elliptic <-> algebraic conversion, invariant spaces, non-log polynomials.

The eigenvalues asserted for the worked (2,0,0,0) spaces were derived by
hand from the Weierstrass differential equation (e.g. H sqrt((wp-e2)(wp-e3))
= 3 e1 * (same), via wp'' = 6 wp^2 - g2/2), independent of this code.
"""

import cmath
from fractions import Fraction as F

import numpy as np
import pytest

from heunlab.elliptic_rep import (
    ALWAYS_LOG,
    EllipticOperator,
    E_from_q,
    algebraic_from_elliptic,
    elliptic_transform_params,
    heun_t,
    nonlog_poly,
    q_from_E,
    qs_space_spectrum,
)
from heunlab.heun_core import INF, frobenius_basis_at, heun_to_fuchsian
from heunlab.weierstrass import lattice_new, wp, wp_and_prime

LAT = lattice_new(1.0, 1.3j)
LAT_G = lattice_new(1.1 - 0.2j, 0.4 + 0.9j)


class TestChartMap:
    def test_t_value(self):
        lat = LAT
        assert abs(heun_t(lat) - (lat.e3 - lat.e1) / (lat.e2 - lat.e1)) < 1e-14

    def test_roundtrip_E_q(self):
        op = EllipticOperator((1.0, 0.5, 0.25, 0.75), LAT)
        ch = (-1.0, 0.5 + 1, 0.25 + 1, -0.75)
        for E in (0.37, -1.2 + 0.4j):
            q = q_from_E(LAT, ch, E)
            assert abs(E_from_q(LAT, ch, q) - E) < 1e-12 * max(1, abs(E))

    def test_alpha_choice_validation(self):
        op = EllipticOperator((1.0, 0.5, 0.25, 0.75), LAT)
        with pytest.raises(ValueError, match="alpha_choices"):
            algebraic_from_elliptic(op, (0.3, -0.5, -0.25, -0.75), E=1.0)

    @pytest.mark.parametrize("lat", [LAT, LAT_G])
    def test_dual_chart_oracle(self, lat):
        # a Frobenius solution of the algebraic form, pushed to the x chart,
        # must satisfy (H - E) f = 0
        op = EllipticOperator((1.2, 0.7, 0.45, 0.3), lat, E=0.83 + 0.21j)
        ch = (-1.2, -0.7, 0.45 + 1, -0.3)
        chart = algebraic_from_elliptic(op, ch)
        h = chart.heun
        eq = heun_to_fuchsian(h)
        basis = frobenius_basis_at(eq, 0, order=60)

        a1, a2, a3 = [complex(a) for a in ch[1:]]
        t = complex(heun_t(lat))

        def f_and_xx(x):
            z, dz = wp_and_prime(x, lat)
            z = (z - lat.e1) / (lat.e2 - lat.e1)
            dz = dz / (lat.e2 - lat.e1)
            ddz = (6 * wp(x, lat) ** 2 - lat.g2 / 2) / (lat.e2 - lat.e1)
            v = basis.f_eval(z)
            vp = basis.f_deriv(z)
            vpp = basis.f_dderiv(z)
            L = a1 / 2 / z + a2 / 2 / (z - 1) + a3 / 2 / (z - t)
            Lp = -a1 / 2 / z**2 - a2 / 2 / (z - 1) ** 2 - a3 / 2 / (z - t) ** 2
            g = 1.0  # branch factor cancels in the residual ratio
            u = v
            u1 = vp + L * v
            u2 = vpp + 2 * L * vp + (L * L + Lp) * v
            f = u
            fx = u1 * dz
            fxx = u2 * dz * dz + u1 * ddz
            return f, fxx

        # x near omega_1 keeps |z| small, inside the series disc
        for frac in (0.9, 0.8):
            x = frac * lat.omega1 + 0.05 * lat.omega3
            f, fxx = f_and_xx(x)
            V = op.potential(x)
            res = -fxx + (V - op.E) * f
            assert abs(res) < 1e-7 * max(abs(fxx), abs(V * f), 1.0)


class TestTransformParams:
    def test_paper_example_setting(self):
        l = (F(3, 2), F(1, 2), F(1, 2), F(1, 2))
        lp, eta, d = elliptic_transform_params(l, F(5, 2))
        assert lp == (F(-3), F(0), F(0), F(0))
        assert eta == F(1, 2)

    def test_free_case_choice(self):
        # l' = (0,0,0,0) with alpha'_0 = 1 maps to (1/2,-1/2,-1/2,-1/2)
        lp = (F(0), F(0), F(0), F(0))
        # inverse direction: find l with alpha_0 giving this l'; use the map
        # forward from l = (1/2,-1/2,-1/2,-1/2) with alpha0 = -l0 = -1/2:
        l = (F(1, 2), F(-1, 2), F(-1, 2), F(-1, 2))
        lp2, eta, d = elliptic_transform_params(l, F(-1, 2))
        # canonical form of lp2 under l <-> -l-1
        canon = tuple(v if v >= F(-1, 2) else -v - 1 for v in lp2)
        assert canon == (F(0), F(0), F(0), F(0))
        assert d == eta - 2

    def test_other_choice_gives_0111(self):
        l = (F(3, 2), F(1, 2), F(1, 2), F(1, 2))
        lp, eta, d = elliptic_transform_params(l, F(-3, 2))
        canon = tuple(v if v >= F(-1, 2) else -v - 1 for v in lp)
        assert canon == (F(0), F(1), F(1), F(1))

    def test_halfint_rule(self):
        l = (F(5, 2), F(1, 2), F(3, 2), F(1, 2))  # sum = 5, odd
        lp, eta, d = elliptic_transform_params(l, l[0] + 1)
        assert all(v.denominator == 1 for v in lp)
        assert (2 * eta).denominator == 1 and eta.denominator == 2

    def test_invalid_alpha0(self):
        with pytest.raises(ValueError):
            elliptic_transform_params((F(1), F(0), F(0), F(0)), F(1, 3))


class TestQSSpaces:
    def test_free_trivial(self):
        op = EllipticOperator((0, 0, 0, 0), LAT)
        qs = qs_space_spectrum(op, (0, 0, 0, 0))
        assert qs.dim == 1
        assert [complex(c) for c in qs.char_poly.coeffs] == [0j, 1 + 0j]

    @pytest.mark.parametrize("lat", [LAT, LAT_G])
    def test_2000_two_dim_space(self, lat):
        op = EllipticOperator((2, 0, 0, 0), lat)
        qs = qs_space_spectrum(op, (-2, 0, 0, 0))
        assert qs.dim == 2
        # char poly = E^2 - 3 g2
        cs = [complex(c) for c in qs.char_poly.coeffs]
        assert abs(cs[2] - 1) < 1e-12 and abs(cs[1]) < 1e-9 * max(1, abs(lat.g2))
        assert abs(cs[0] + 3 * lat.g2) < 1e-9 * max(1, abs(lat.g2))

    @pytest.mark.parametrize(
        "beta,expect",
        [((-2, 1, 1, 0), "e3"), ((-2, 1, 0, 1), "e2"), ((-2, 0, 1, 1), "e1")],
    )
    def test_2000_one_dim_spaces(self, beta, expect):
        lat = LAT_G
        op = EllipticOperator((2, 0, 0, 0), lat)
        qs = qs_space_spectrum(op, beta)
        assert qs.dim == 1
        ev = -complex(qs.char_poly.coeffs[0])
        e = {"e1": lat.e1, "e2": lat.e2, "e3": lat.e3}[expect]
        assert abs(ev - 3 * e) < 1e-9 * max(1.0, abs(e))

    def test_invalid_beta_dimension(self):
        op = EllipticOperator((2, 0, 0, 0), LAT)
        with pytest.raises(ValueError):
            qs_space_spectrum(op, (3, 0, 0, 0))  # sum positive


class TestNonlogPoly:
    def test_3_2_half_family(self):
        lat = LAT_G
        op = EllipticOperator((1.5, 0.5, 0.5, 0.5), lat)
        P0 = nonlog_poly(op, 0)
        cs = [complex(c) for c in P0.coeffs]
        assert P0.degree == 2
        assert abs(cs[1]) < 2e-8 * max(1, abs(lat.g2)) and abs(cs[0] + 3 * lat.g2) < 2e-8 * max(1, abs(lat.g2))
        for i, e in ((1, lat.e1), (2, lat.e2), (3, lat.e3)):
            Pi = nonlog_poly(op, i)
            assert Pi.degree == 1
            assert abs(-complex(Pi.coeffs[0]) - 3 * e) < 2e-8 * max(1.0, abs(e))

    def test_always_logarithmic_marker(self):
        op = EllipticOperator((1.5, -0.5, 0.5, 0.5), LAT)
        assert nonlog_poly(op, 1) == ALWAYS_LOG

    def test_non_half_integer_raises(self):
        op = EllipticOperator((1.5, 0.3, 0.5, 0.5), LAT)
        with pytest.raises(ValueError, match="half-integer"):
            nonlog_poly(op, 1)

    def test_root_level_frobenius_check(self):
        # at each root of P^(1), the z-chart equation is apparent at z = 0
        lat = LAT
        op = EllipticOperator((1.5, 1.5, 0.5, 0.5), lat)
        P1 = nonlog_poly(op, 1)
        assert P1.degree == 2
        from heunlab.heun_core import is_apparent
        from heunlab.elliptic_rep import q_from_E

        ch = tuple(-op.l[j] for j in range(4))
        for E in np.roots([complex(c) for c in P1.coeffs][::-1]):
            chart = algebraic_from_elliptic(op, ch, E=complex(E))
            ok, res = is_apparent(chart.heun, 0)
            assert ok, res
        chart = algebraic_from_elliptic(op, ch, E=complex(np.roots([complex(c) for c in P1.coeffs][::-1])[0]) + 0.2)
        ok, _ = is_apparent(chart.heun, 0)
        assert not ok

    def test_isospectral_composition(self):
        # nonlog_poly roots of the half-integer operator appear in the
        # transformed integer operator's invariant-space spectrum
        lat = LAT
        l = (F(3, 2), F(1, 2), F(1, 2), F(1, 2))
        lp, eta, d = elliptic_transform_params(l, F(5, 2))
        op_half = EllipticOperator([float(x) for x in l], lat)
        op_int = EllipticOperator([float(x) for x in lp], lat)
        # P^(0) roots (E = +-sqrt(3 g2)) are the spectrum of the (-2,0,0,0) space
        P0 = nonlog_poly(op_half, 0)
        qs = qs_space_spectrum(op_int, (-2, 0, 0, 0))
        r_p = sorted(np.roots([complex(c) for c in P0.coeffs][::-1]), key=lambda z: (z.real, z.imag))
        r_q = sorted(np.roots([complex(c) for c in qs.char_poly.coeffs][::-1]), key=lambda z: (z.real, z.imag))
        assert max(abs(a - b) for a, b in zip(r_p, r_q)) < 1e-7
