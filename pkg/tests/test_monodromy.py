"""Numerical monodromy: transfer matrices, representations, and the
transformed-monodromy algebra."""

import cmath

import numpy as np
import pytest

from heunlab.euler_transform import dy1_transform, heun_transform
from heunlab.heun_core import (
    INF,
    Dy1Params,
    HeunParams,
    dy1_to_fuchsian,
    frobenius_basis_at,
    heun_to_fuchsian,
    quasi_solvable_spectrum,
)
from heunlab.monodromy import (
    eigenvalue_residual,
    integrate_along,
    integrate_system,
    loop_waypoints,
    monodromy_rep,
    predicted_monodromy,
    trace_invariance_check,
    wronskian_factor,
)

rng = np.random.default_rng(23)


def random_heun(q=None, t=2 + 0.5j, scale=0.6):
    e0, e1, et, a = scale * (rng.uniform(-1, 1, 4) + 1j * rng.uniform(-0.5, 0.5, 4))
    b = e0 + e1 + et - a - 1
    return HeunParams(e0, e1, et, a, b, q if q is not None else complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), t)


class TestIntegrateAlong:
    def test_contractible_loop_identity(self):
        eq = heun_to_fuchsian(random_heun())
        # a small loop around a regular point encloses no singularity
        wp = loop_waypoints(0.4 - 0.6j, 0.1, -0.75 - 0.75j)
        T = integrate_along(eq, wp)
        assert np.max(np.abs(T.matrix - np.eye(2))) < 1e-10

    def test_wronskian_identity_open_path(self):
        eq = heun_to_fuchsian(random_heun())
        wp = [-0.75 - 0.75j, -0.2 - 0.9j, 0.5 - 0.7j, 0.6 + 0.1j]
        T = integrate_along(eq, wp)
        assert abs(T.det - wronskian_factor(eq, wp)) < 1e-9 * abs(T.det)

    def test_loop_around_lambda_is_identity(self):
        # z = lam is apparent for the Hamiltonian H, so its monodromy is trivial
        d = Dy1Params(0.21, -0.37, 0.45, 0.83, 0.4 + 0.2j, 0.9 - 0.3j, 2 + 0.5j)
        eq = dy1_to_fuchsian(d)
        wp = loop_waypoints(d.lam, 0.12, -0.75 - 0.75j, avoid=[0, 1, d.t])
        T = integrate_along(eq, wp)
        assert np.max(np.abs(T.matrix - np.eye(2))) < 1e-8

    def test_clearance_error(self):
        eq = heun_to_fuchsian(random_heun())
        with pytest.raises(ValueError, match="too close"):
            integrate_along(eq, [-0.75 - 0.75j, 1.0000001, 2.0], clearance=1e-3)


class TestMonodromyRep:
    def test_product_relation_and_eigenvalues(self):
        h = random_heun()
        eq = heun_to_fuchsian(h)
        rep = monodromy_rep(eq)
        assert rep.product_residual() < 1e-8
        for p, eps in zip((0j, 1 + 0j, h.t), (h.eps0, h.eps1, h.epst)):
            th = 1 - eps
            assert eigenvalue_residual(rep.matrix(p), [1, cmath.exp(2j * cmath.pi * th)]) < 1e-8
        assert (
            eigenvalue_residual(
                rep.matrix(INF), [cmath.exp(2j * cmath.pi * h.alpha), cmath.exp(2j * cmath.pi * h.beta)]
            )
            < 1e-8
        )
        # traces tr M = 1 + e^{2 pi i theta}
        for p, eps in zip((0j, 1 + 0j, h.t), (h.eps0, h.eps1, h.epst)):
            assert abs(np.trace(rep.matrix(p)) - (1 + cmath.exp(2j * cmath.pi * (1 - eps)))) < 1e-8

    def test_quasi_solvable_common_eigenvector(self):
        # at a spectral root the product-type solution spans an invariant line
        from fractions import Fraction as F

        e0, e1, et = F(2, 5), F(3, 7), F(1, 2)
        a = F(-2)
        b = e0 + e1 + et - a - 1
        h0 = HeunParams(e0, e1, et, a, b, F(0), F(7, 4))
        P, recs = quasi_solvable_spectrum(h0, (F(0), F(0), F(0)), "alpha")
        q_root, poly = recs[0]
        h = HeunParams(*(complex(x) for x in (e0, e1, et, a, b)), q_root, 1.75)
        eq = heun_to_fuchsian(h)
        rep = monodromy_rep(eq)
        o = rep.base
        vec = np.array([complex(poly(o)), complex(poly.deriv()(o))])
        for p in (0j, 1 + 0j, 1.75 + 0j, INF):
            img = rep.matrix(p) @ vec
            cross = img[0] * vec[1] - img[1] * vec[0]
            assert abs(cross) < 1e-8 * max(1.0, np.abs(img).max() * np.abs(vec).max())


class TestTraceInvariance:
    def test_heun_pair(self):
        h = random_heun()
        pair = heun_transform(h, "alpha")
        phase = cmath.exp(-2j * cmath.pi * pair.eta)
        rep = trace_invariance_check(
            heun_to_fuchsian(pair.source),
            heun_to_fuchsian(pair.target),
            phase,
            [(0, 1), (0, h.t), (1, h.t), (1, INF)],
            [1, 2],
        )
        for (_, n, err, tt, ts) in rep:
            tol = 1e-7 * max(1.0, abs(tt), abs(ts))
            assert err < tol, (n, err, tt)

    def test_n_zero_trivial(self):
        h = random_heun()
        pair = heun_transform(h, "beta")
        rep = trace_invariance_check(
            heun_to_fuchsian(pair.source), heun_to_fuchsian(pair.target), 1.0, [(0, 1)], [0]
        )
        assert abs(rep[0][3] - 2) < 1e-9 and abs(rep[0][4] - 2) < 1e-9

    def test_determinant_relation(self):
        h = random_heun()
        pair = heun_transform(h, "alpha")
        rep_s = monodromy_rep(heun_to_fuchsian(pair.source))
        rep_t = monodromy_rep(heun_to_fuchsian(pair.target))
        kappa = pair.kappa
        for (pa, pb) in ((0j, 1 + 0j), (1 + 0j, h.t)):
            ds = np.linalg.det(rep_s.matrix(pa) @ rep_s.matrix(pb))
            dt = np.linalg.det(rep_t.matrix(pa) @ rep_t.matrix(pb))
            assert abs(dt - cmath.exp(4j * cmath.pi * kappa) * ds) < 1e-8 * max(1.0, abs(dt))

    def test_dy1_pair(self):
        d = Dy1Params(0.21, -0.17, 0.33, 0.48, 0.45 + 0.25j, 0.8 - 0.4j, 2 + 0.5j)
        dt = dy1_transform(d)
        phase = cmath.exp(2j * cmath.pi * d.kappa2)
        rep = trace_invariance_check(
            dy1_to_fuchsian(d), dy1_to_fuchsian(dt), phase, [(0, 1), (0, d.t)], [1, 2]
        )
        for (_, n, err, tt, ts) in rep:
            assert err < 1e-6 * max(1.0, abs(tt), abs(ts)), (n, err)


class TestPredictedMonodromy:
    def _holomorphic_direction(self, eq, p, base):
        """(h(o), h'(o)) of the solution holomorphic at p, continued to o."""
        b = frobenius_basis_at(eq, p, order=40)
        # the holomorphic branch is the exponent-0 one
        which = "f" if abs(complex(b.rho1)) < 1e-9 else "g"
        r = 0.08
        w0 = complex(p) + r * (base - complex(p)) / abs(base - complex(p))
        val = b.f_eval(w0) if which == "f" else b.g_eval(w0)
        der = b.f_deriv(w0) if which == "f" else b.g_deriv(w0)
        Y = integrate_system(lambda z: (eq.a1(z), eq.a2(z)), [w0, base], y0=np.array([val, der]))
        return np.array([Y[0], Y[1]])

    def test_traces_against_direct(self):
        for _ in range(2):
            h = random_heun(scale=0.45)
            pair = heun_transform(h, "alpha")
            kappa = pair.kappa
            src_eq = heun_to_fuchsian(pair.source)
            tgt_eq = heun_to_fuchsian(pair.target)
            rep_s = monodromy_rep(src_eq)
            rep_t = monodromy_rep(tgt_eq)
            a_pt, b_pt = 0j, 1 + 0j
            va = self._holomorphic_direction(src_eq, a_pt, rep_s.base)
            vb = self._holomorphic_direction(src_eq, b_pt, rep_s.base)
            MA, MB = predicted_monodromy(rep_s.matrix(a_pt), rep_s.matrix(b_pt), va, vb, kappa)
            tha = 1 - pair.source.eps0
            assert abs(np.trace(MA) - (1 + cmath.exp(2j * cmath.pi * (kappa + tha)))) < 1e-7
            # predicted product trace against the directly computed target trace
            pred = np.trace(MA @ MB)
            direct = np.trace(rep_t.matrix(a_pt) @ rep_t.matrix(b_pt))
            assert abs(pred - direct) < 1e-6 * max(1.0, abs(direct))
            # and the source-side identity tr(M^a M^b) = e^{2 pi i kappa} tr(M'^a M'^b)
            ts = np.trace(rep_s.matrix(a_pt) @ rep_s.matrix(b_pt))
            assert abs(pred - cmath.exp(2j * cmath.pi * kappa) * ts) < 1e-7 * max(1.0, abs(ts))

    def test_vanishing_direction_error(self):
        h = random_heun()
        eq = heun_to_fuchsian(h)
        rep = monodromy_rep(eq)
        with pytest.raises(ValueError, match="transform vanishes"):
            predicted_monodromy(rep.matrix(0j), rep.matrix(1 + 0j), (1.0, 0.0), (0.3, 1.0), -0.3)
