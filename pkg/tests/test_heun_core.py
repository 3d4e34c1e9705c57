"""Frobenius machinery, apparency conditions, and quasi-solvable spectra.

The Example-5.2 quadratic used below was re-derived independently by
eliminating c from the two linear conditions of the substituted ansatz
(the constant term reads t^2 on its first bracket and carries a factor t
on the middle bracket); the derivation also reproduces the printed c
formula, so both are frozen here as oracles.
"""

import cmath
from fractions import Fraction as F

import numpy as np
import pytest

from heunlab.algebra import CPoly
from heunlab.heun_core import (
    INF,
    Dy1Params,
    HeunParams,
    apparency_poly,
    dy1_to_fuchsian,
    frobenius_basis_at,
    heun_solution_residual,
    heun_to_fuchsian,
    is_apparent,
    lambda_apparent_check,
    polynomial_type_search,
    quasi_solvable_spectrum,
)

rng = np.random.default_rng(11)


def example_52_quadratic(bp, e1p, etp, t):
    """Monic condition quadratic for the eps0' - beta' + 2 = 0 sector."""
    lin = (-2 * bp * e1p + 3 * bp + 3 * e1p - 4) * t + (-2 * bp * etp + 3 * bp + 3 * etp - 4)
    const = (bp - 2) * (
        (e1p - 1) * (e1p - 2) * (bp - 1) * t**2
        + ((bp - 1) * (2 * etp * e1p - 3 * e1p - 3 * etp + 5) - e1p - etp + 3) * t
        + (etp - 1) * (etp - 2) * (bp - 1)
    )
    return CPoly([const, lin, 1 if isinstance(bp, F) else 1.0])


def random_heun(q=None, t=2 + 0.5j):
    e0, e1, et, a = rng.uniform(-2, 2, 4) + 1j * rng.uniform(-1, 1, 4)
    b = e0 + e1 + et - a - 1
    return HeunParams(e0, e1, et, a, b, q if q is not None else complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), t)


class TestEquationTypes:
    def test_heun_exponents(self):
        h = HeunParams(F(1, 3), F(1, 2), F(2, 3), F(1, 4), F(1, 4), F(1), F(2))
        eq = heun_to_fuchsian(h)
        for p, expo in [(0, (0, 1 - F(1, 3))), (1, (0, F(1, 2))), (F(2), (0, F(1, 3))), (INF, (F(1, 4), F(1, 4)))]:
            got = eq.exponents(p)
            want = sorted([complex(x) for x in expo], key=lambda z: -z.real)
            assert max(abs(g - w) for g, w in zip(got, want)) < 1e-10

    def test_double_exponent_eps0_1(self):
        h = HeunParams(1.0, 0.4, 0.7, 0.55, 0.55, 0.3, 1.7)
        assert h.exponents(0) == (0, 0)

    def test_fuchs_violation_raises(self):
        with pytest.raises(ValueError, match="Fuchs"):
            HeunParams(F(1, 3), F(1, 2), F(2, 3), F(1, 4), F(-3, 4), F(1), F(2))

    def test_exponent_sum_is_two(self):
        h = random_heun()
        tot = sum(sum(h.exponents(p)) for p in (0, 1, h.t, INF))
        assert abs(tot - 2) < 1e-12

    def test_dy1_exponents(self):
        d = Dy1Params(0.21, -0.37, 0.45, 0.83, 0.4 + 0.2j, 0.9 - 0.3j, 2 + 0.5j)
        eq = dy1_to_fuchsian(d)
        for p, expo in [(0, (0, d.theta0)), (1, (0, d.theta1)), (d.t, (0, d.thetat)), (d.lam, (0, 2)), (INF, (d.kappa1, d.kappa2 + 1))]:
            got = sorted(eq.exponents(p), key=lambda z: (z.real, z.imag))
            want = sorted([complex(x) for x in expo], key=lambda z: (z.real, z.imag))
            assert max(abs(g - w) for g, w in zip(got, want)) < 1e-10


class TestFrobenius:
    def test_order_one_coefficient(self):
        # hand recursion: c_1 = q/(t eps0) on the holomorphic branch at 0
        h = HeunParams(0.8, 0.3, 0.9, 0.5, 0.5, 0.37, 1.9)
        eq = heun_to_fuchsian(h)
        b = frobenius_basis_at(eq, 0, order=6)
        hol = b.c if abs(b.rho1) < 1e-12 else b.ctilde
        assert abs(complex(hol[0]) - 1) < 1e-14
        assert abs(complex(hol[1]) - h.q / (h.t * h.eps0)) < 1e-12

    def test_series_residual_scaling(self):
        # truncation error of the f-branch drops like (w-p)^(N-1) in the ODE
        h = random_heun()
        eq = heun_to_fuchsian(h)
        for nord in (12,):
            b = frobenius_basis_at(eq, 1, order=nord)

            def resid(w):
                return abs(b.f_dderiv(w) + eq.a1(w) * b.f_deriv(w) + eq.a2(w) * b.f_eval(w))

            r1, r2 = resid(1 + 0.4), resid(1 + 0.2)
            order_est = np.log2(r1 / r2)
            assert order_est > nord - 3.5

    def test_log_branch_satisfies_ode(self):
        # eps0 = -1 generic q: A != 0, g has a log; check the ODE numerically
        h = HeunParams(-1.0, 0.4, 0.7, -0.45, -0.45, 0.23, 1.8)
        eq = heun_to_fuchsian(h)
        b = frobenius_basis_at(eq, 0, order=30)
        assert abs(complex(b.A)) > 1e-6
        hh = 1e-4
        for w in (0.05, 0.03 + 0.02j):
            g0, gp, gm = b.g_eval(w), b.g_eval(w + hh), b.g_eval(w - hh)
            d1 = (gp - gm) / (2 * hh)
            d2 = (gp - 2 * g0 + gm) / hh**2
            res = abs(d2 + eq.a1(w) * d1 + eq.a2(w) * g0)
            assert res < 1e-5 * max(1.0, abs(d2))

    def test_infinity_chart_basis(self):
        h = random_heun()
        eq = heun_to_fuchsian(h)
        b = frobenius_basis_at(eq, INF, order=35)
        w = 9.0 + 3.0j
        hh = 1e-4
        for fun in (b.f_eval, b.g_eval):
            f0, fp, fm = fun(w), fun(w + hh), fun(w - hh)
            d1 = (fp - fm) / (2 * hh)
            d2 = (fp - 2 * f0 + fm) / hh**2
            res = abs(d2 + eq.a1(w) * d1 + eq.a2(w) * f0)
            assert res < 1e-6 * max(1.0, abs(d2), abs(f0))


class TestApparency:
    def test_eps0_minus_one_quadratic_exact(self):
        e1, et, a = F(2, 5), F(3, 7), F(1, 3)
        t = F(5, 2)
        b = F(-1) + e1 + et - a - 1
        h = HeunParams(F(-1), e1, et, a, b, F(0), t)
        P = apparency_poly(h, 0)
        expected = CPoly([a * b * t, e1 * t + et - t - 1, F(1)])
        assert P.coeffs == expected.coeffs

    def test_eps0_zero_linear(self):
        h = HeunParams(F(0), F(2, 5), F(3, 7), F(-1, 6), b1 := F(0) + F(2, 5) + F(3, 7) - F(-1, 6) - 1, F(0), F(5, 2))
        P = apparency_poly(h, 0)
        assert P.coeffs == [F(0), F(1)]

    def test_A_vanishes_iff_root(self):
        e1, et, a = 0.4, 3 / 7, 1 / 3
        t = 2.5
        b = -1 + e1 + et - a - 1
        h0 = HeunParams(-1.0, e1, et, a, b, 0.0, t)
        P = apparency_poly(h0, 0)
        roots = np.roots([complex(c) for c in P.coeffs][::-1])
        for q in roots:
            h = HeunParams(-1.0, e1, et, a, b, complex(q), t)
            flag, res = is_apparent(h, 0)
            assert flag, res
        h = HeunParams(-1.0, e1, et, a, b, complex(roots[0]) + 0.1, t)
        flag, res = is_apparent(h, 0)
        assert not flag and res > 1e-6

    def test_no_integer_difference_raises(self):
        h = random_heun()
        with pytest.raises(ValueError, match="no integral exponent difference"):
            apparency_poly(h, 0)


class TestLambdaApparent:
    def test_hamiltonian_choice_apparent(self):
        d = Dy1Params(0.21, -0.37, 0.45, 0.83, 0.4 + 0.2j, 0.9 - 0.3j, 2 + 0.5j)
        flag, res = lambda_apparent_check(d)
        assert flag, res

    def test_perturbed_H_not_apparent(self):
        d0 = Dy1Params(0.21, -0.37, 0.45, 0.83, 0.4 + 0.2j, 0.9 - 0.3j, 2 + 0.5j)
        d = Dy1Params(0.21, -0.37, 0.45, 0.83, 0.4 + 0.2j, 0.9 - 0.3j, 2 + 0.5j, H=d0.H + 0.1, validate=False)
        flag, res = lambda_apparent_check(d)
        assert not flag and res > 1e-4

    def test_symmetric_parameters_apparent(self):
        th = 0.3
        d = Dy1Params(th, th, th, th, 0.5, 0.77 - 0.21j, 2 + 0.5j)
        flag, _ = lambda_apparent_check(d)
        assert flag


class TestQuasiSolvable:
    def _example52_params(self):
        bp, e1p, etp, t = F(7, 3), F(3, 5), F(5, 7), F(5, 2)
        e0p = bp - 2
        ap = e0p + e1p + etp - 1 - bp
        return HeunParams(e0p, e1p, etp, ap, bp, F(0), t), bp, e1p, etp, t

    def test_example_52_condition_polynomial(self):
        h, bp, e1p, etp, t = self._example52_params()
        nu = (F(0), 1 - e1p, 1 - etp)
        P, _ = quasi_solvable_spectrum(h, nu, "alpha", solve=False)
        expected = example_52_quadratic(bp, e1p, etp, t).monic()
        assert P.coeffs == expected.coeffs

    def test_example_52_solutions_and_c_formula(self):
        h, bp, e1p, etp, t = self._example52_params()
        nu = (F(0), 1 - e1p, 1 - etp)
        P, records = quasi_solvable_spectrum(h, nu, "alpha")
        assert len(records) == 2
        for q_root, poly in records:
            c_expected = (q_root - complex(bp - 1) * (complex(e1p - 2) * complex(t) + complex(etp) - 2)) / complex(
                etp + e1p - bp - 2
            )
            assert abs(complex(poly.coeffs[0]) / complex(poly.coeffs[1]) - c_expected) < 1e-9
            hq = HeunParams(h.eps0, h.eps1, h.epst, h.alpha, h.beta, q_root, h.t, validate=False)
            for w in (0.3 + 0.2j, -0.7, 1.9 - 0.4j):
                assert heun_solution_residual(hq, nu, poly, w) < 1e-10

    def test_alpha_zero_constant_solution(self):
        # alpha = 0, nu = (0,0,0): n = 0, P(q) = q, solution y = 1
        e0, e1, et = F(1, 3), F(1, 2), F(2, 3)
        b = e0 + e1 + et - 1
        h = HeunParams(e0, e1, et, F(0), b, F(0), F(2))
        P, records = quasi_solvable_spectrum(h, (F(0), F(0), F(0)), "alpha")
        assert P.coeffs == [F(0), F(1)]
        q0, poly = records[0]
        assert abs(q0) < 1e-12 and poly.degree == 0

    def test_random_rational_n2_sector(self):
        # alpha = -2 closes a degree-2 sector; every root passes the ODE check
        e0, e1, et = F(2, 5), F(3, 7), F(1, 2)
        a = F(-2)
        b = e0 + e1 + et - a - 1
        h = HeunParams(e0, e1, et, a, b, F(0), F(7, 4))
        P, records = quasi_solvable_spectrum(h, (F(0), F(0), F(0)), "alpha")
        assert P.degree == 3 and len(records) == 3
        for q_root, poly in records:
            hq = HeunParams(e0, e1, et, a, b, q_root, h.t, validate=False)
            for w in (0.4 + 0.3j, -1.1, 2.4 + 0.1j):
                assert heun_solution_residual(hq, (0, 0, 0), poly, w) < 1e-9

    def test_not_quasi_solvable_raises(self):
        h = random_heun()
        with pytest.raises(ValueError, match="not quasi-solvable"):
            quasi_solvable_spectrum(h, (0, 0, 0), "alpha")


class TestPolynomialTypeSearch:
    def test_example52_found(self):
        bp, e1p, etp, t = F(7, 3), F(3, 5), F(5, 7), F(5, 2)
        e0p = bp - 2
        ap = e0p + e1p + etp - 1 - bp
        quad = example_52_quadratic(bp, e1p, etp, t)
        q_root = np.roots([complex(c) for c in quad.coeffs][::-1])[0]
        h = HeunParams(complex(e0p), complex(e1p), complex(etp), complex(ap), complex(bp), complex(q_root), complex(t))
        recs = [r for r in polynomial_type_search(h) if r[3]]
        assert recs
        nu_found = [tuple(np.round([complex(x).real for x in r[0]], 6)) for r in recs]
        assert any(abs(n[1] - (1 - complex(e1p).real)) < 1e-9 for n in nu_found)

    def test_generic_irrational_empty(self):
        h = random_heun()
        recs = polynomial_type_search(h)
        assert not [r for r in recs if r[3]]
