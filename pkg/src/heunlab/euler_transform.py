"""Euler integral transformation: parameter maps, Pochhammer contours,
numeric transforms, and the predicted local expansions of transformed
solutions.

The transform sends solutions v(w) of the primed equation to

    y(z) = int_{[gamma_z, gamma_p]} v(w) (z - w)**kappa dw,

with kappa = -eta for the algebraic form and kappa2 - 1 for the deformed
equation.  Branches of the weight are tracked by accumulating argument
increments along the contour, never by re-evaluating a principal branch
mid-path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import rgamma as _rgamma

from .algebra import CPoly
from .heun_core import (
    INF,
    Dy1Params,
    GeneralFuchsian,
    HeunParams,
    FrobeniusBasis,
    frobenius_basis_at,
    heun_to_fuchsian,
    is_apparent,
    near_integer,
    polynomial_type_search,
    quasi_solvable_spectrum,
)
from .monodromy import integrate_system, route_leg, segment_clearance

# ---------------------------------------------------------------------------
# parameter maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeunTransformPair:
    """Source (primed, integrand side) and target equations linked by eta.

    Solutions v of ``source`` map to solutions of ``target`` under the
    Pochhammer transform with weight (z-w)**(-eta); eta_prime = 2 - eta
    plays the same role for the inverse direction.
    """

    source: HeunParams
    target: HeunParams
    eta: complex

    @property
    def eta_prime(self):
        return 2 - self.eta

    @property
    def kappa(self):
        return -self.eta


def _q_shift(eps0, eps1, epst, eta, t):
    return (1 - eta) * (epst + eps1 * t + (eps0 - eta) * (t + 1))


def heun_transform(h: HeunParams, eta_choice: str, alpha_prime_first: bool = True) -> HeunTransformPair:
    """Transform pair for the target equation ``h`` with eta = alpha or beta.

    The primed parameters are eps'_p = eps_p - eta + 1, {alpha', beta'} =
    {2 - eta, alpha + beta - 2 eta + 1} (alpha' = 2 - eta as printed when
    ``alpha_prime_first``), q' = q + (1-eta)(eps_t + eps_1 t +
    (eps_0 - eta)(t+1)).
    """
    eta = h.alpha if eta_choice == "alpha" else h.beta
    e0p, e1p, etp = h.eps0 - eta + 1, h.eps1 - eta + 1, h.epst - eta + 1
    ap, bp = 2 - eta, h.alpha + h.beta - 2 * eta + 1
    if not alpha_prime_first:
        ap, bp = bp, ap
    qp = h.q + _q_shift(h.eps0, h.eps1, h.epst, eta, h.t)
    src = HeunParams(e0p, e1p, etp, ap, bp, qp, h.t)
    return HeunTransformPair(src, h, eta)


def heun_transform_inverse(src: HeunParams, eta_prime_choice: str, alpha_first: bool = True) -> HeunTransformPair:
    """Pair recovered from the primed side with eta' = alpha' or beta'."""
    etap = src.alpha if eta_prime_choice == "alpha" else src.beta
    e0, e1, et = src.eps0 - etap + 1, src.eps1 - etap + 1, src.epst - etap + 1
    a, b = 2 - etap, src.alpha + src.beta - 2 * etap + 1
    if not alpha_first:
        a, b = b, a
    q = src.q + _q_shift(src.eps0, src.eps1, src.epst, etap, src.t)
    tgt = HeunParams(e0, e1, et, a, b, q, src.t)
    return HeunTransformPair(src, tgt, 2 - etap)


def dy1_transform(d: Dy1Params) -> Dy1Params:
    """Deformed-equation transform: theta~_p = kappa2 + theta_p with the
    (lam, mu) map; an involution up to the sign flip of kappa2."""
    k2 = d.kappa2
    den = d.mu - d.theta0 / d.lam - d.theta1 / (d.lam - 1) - d.thetat / (d.lam - d.t)
    if abs(complex(den)) < 1e-13:
        raise ZeroDivisionError("lam~ at infinity; transform leaves the chart")
    lam_t = d.lam - k2 / den
    mu_t = (
        (k2 + d.theta0) / lam_t
        + (k2 + d.theta1) / (lam_t - 1)
        + (k2 + d.thetat) / (lam_t - d.t)
        + k2 / (d.lam - lam_t)
    )
    return Dy1Params(
        k2 + d.theta0, k2 + d.theta1, k2 + d.thetat, k2 + d.theta_inf, lam_t, mu_t, d.t
    )


@dataclass(frozen=True)
class AltTransformRecipe:
    """Prefactored transform route (the eta - 2 weight).

    y(z) = z^{1-eps0} (z-1)^{1-eps1} (z-t)^{1-epst} *
           int w^{eps0'-1} (w-1)^{eps1'-1} (w-t)^{epst'-1} v(w) (z-w)^{eta-2} dw.

    ``tilde_source`` is the equation satisfied by the prefactored integrand
    and ``tilde_target`` the one satisfied by the integral itself.
    """

    pair: HeunTransformPair
    integrand_exponents: tuple
    weight_exponent: complex
    prefactor_exponents: tuple
    tilde_source: HeunParams
    tilde_target: HeunParams


def heun_transform_alt(pair: HeunTransformPair) -> AltTransformRecipe:
    src, tgt, eta = pair.source, pair.target, pair.eta
    t = src.t
    q_tilde_p = src.q - (src.eps0 + src.epst - 2) - (src.eps0 + src.eps1 - 2) * t
    tilde_src = HeunParams(2 - src.eps0, 2 - src.eps1, 2 - src.epst, 2 - src.alpha, 2 - src.beta, q_tilde_p, t)
    # the (1.8)-type shift for the tilde pair carries eta itself
    q_tilde = q_tilde_p + _q_shift(tilde_src.eps0, tilde_src.eps1, tilde_src.epst, eta, t)
    tilde_tgt = HeunParams(2 - tgt.eps0, 2 - tgt.eps1, 2 - tgt.epst, 2 - tgt.alpha, 2 - tgt.beta, q_tilde, t)
    return AltTransformRecipe(
        pair,
        (src.eps0 - 1, src.eps1 - 1, src.epst - 1),
        eta - 2,
        (1 - tgt.eps0, 1 - tgt.eps1, 1 - tgt.epst),
        tilde_src,
        tilde_tgt,
    )


# ---------------------------------------------------------------------------
# the d coefficient of the local expansion calculus
# ---------------------------------------------------------------------------


def d_coeff(alpha, beta):
    """Pochhammer Beta-type coefficient d_{alpha, beta}.

    Equals the commutator-contour integral of s**(alpha-1) (1-s)**(beta-1)
    when alpha is not a positive integer; for alpha in Z>=1 it is the value
    paired with the log-weighted integral instead.
    """
    a, b = complex(alpha), complex(beta)
    na = near_integer(a, tol=1e-12)
    if near_integer(b, tol=1e-12) is not None and near_integer(b, tol=1e-12) <= 0:
        raise ArithmeticError("undefined Gamma ratio: beta a nonpositive integer")
    two_pi_i = 2j * cmath.pi
    if na is None:
        return (cmath.exp(two_pi_i * a) - 1) * (cmath.exp(two_pi_i * b) - 1) * complex(_gamma(a)) * complex(
            _gamma(b)
        ) * complex(_rgamma(a + b))
    if na <= 0:
        sign = -1.0 if na % 2 else 1.0
        return two_pi_i * (cmath.exp(two_pi_i * b) - 1) * sign * complex(_gamma(b)) * complex(
            _rgamma(na + b)
        ) / math.factorial(-na)
    return two_pi_i * (cmath.exp(two_pi_i * b) - 1) * complex(_gamma(na)) * complex(_gamma(b)) * complex(
        _rgamma(na + b)
    )


# ---------------------------------------------------------------------------
# Pochhammer contours and branch-tracked quadrature
# ---------------------------------------------------------------------------


@dataclass
class PochhammerContour:
    """Discretized commutator double loop [gamma_z, gamma_p] based at o.

    ``panels`` is a list of (start, end) complex pairs traversed in order;
    the four sub-loops (z, p, z^-1, p^-1) are recorded for diagnostics.
    """

    base: complex
    z_anchor: complex
    p_anchor: object
    waypoints: list
    sub_loops: tuple


def _loop_polyline(center, radius, base, avoid, n_arc: int = 12, orientation: int = +1):
    approach = route_leg(base, center, avoid, 0.55 * radius)[:-1]
    u = (approach[-1] - complex(center)) / abs(approach[-1] - complex(center))
    entry = complex(center) + radius * u
    th0 = cmath.phase(u)
    pts = approach + [entry]
    for k in range(1, n_arc + 1):
        pts.append(complex(center) + radius * cmath.exp(1j * (th0 + orientation * 2 * cmath.pi * k / n_arc)))
    pts.extend(reversed(approach))
    return pts


def pochhammer_contour(z, p, sing, base=-0.75 - 0.75j, radius_factor=1 / 3.0, n_arc: int = 12) -> PochhammerContour:
    """Commutator contour around z and p in {0, 1, t, INF} avoiding ``sing``."""
    z = complex(z)
    sing = [complex(s) for s in sing]
    if p == INF:
        R = 2.0 * max(abs(s) for s in sing + [z, complex(base)]) + 2.0
        center, radius, orientation = 0.0, R, -1
        others_p = []
    else:
        center, radius, orientation = complex(p), None, +1
        others_p = [s for s in sing if abs(s - complex(p)) > 1e-12] + [z]
        radius = min(abs(s - complex(p)) for s in others_p) * radius_factor
    others_z = [s for s in sing if abs(s - z) > 1e-12] + ([] if p == INF else [complex(p)])
    rz = min(abs(s - z) for s in others_z) * radius_factor
    loop_z = _loop_polyline(z, rz, complex(base), others_z, n_arc=n_arc)
    loop_p = _loop_polyline(center, radius, complex(base), others_p, n_arc=n_arc, orientation=orientation)
    way = loop_z + loop_p[1:] + list(reversed(loop_z))[1:] + list(reversed(loop_p))[1:]
    return PochhammerContour(complex(base), z, p, way, (loop_z, loop_p))


class BranchTracker:
    """Continuous logs of (w - b_j) factors along an ordered walk in w."""

    def __init__(self, branch_points):
        self.bp = [complex(b) for b in branch_points]
        self.logs = None
        self.w = None

    def start(self, w):
        self.w = complex(w)
        self.logs = [cmath.log(self.w - b) for b in self.bp]
        return list(self.logs)

    def step(self, w):
        w = complex(w)
        for j, b in enumerate(self.bp):
            prev = self.logs[j]
            val = cmath.log(w - b)
            k = round((prev.imag - val.imag) / (2 * cmath.pi))
            self.logs[j] = val + 2j * cmath.pi * k
        self.w = w
        return list(self.logs)


def gauss_legendre_panel(z0, z1, n):
    xs, ws = np.polynomial.legendre.leggauss(n)
    mid, half = (z0 + z1) / 2, (z1 - z0) / 2
    return mid + half * xs, ws * half


def transform_eval(
    eq: GeneralFuchsian,
    seed,
    contour: PochhammerContour,
    kappa,
    z_values,
    nodes_per_panel: int = 64,
    rtol: float = 1e-12,
    return_derivs: bool = True,
):
    """Pochhammer transform of the ODE solution with data ``seed`` at the base.

    ``seed`` = (v, v') at the contour base point.  Returns, for each z in
    ``z_values``, the triple (y, y', y'') obtained by differentiating under
    the integral; the weight branch starts on the principal sheet at the
    base and is continued along the walk.  A closure check verifies the
    integrand returns to its initial branch after the full commutator.
    """
    way = contour.waypoints
    kappa = complex(kappa)
    sing = [complex(s) for s in eq.sing]
    for z0, z1 in zip(way[:-1], way[1:]):
        c = segment_clearance(complex(z0), complex(z1), sing)
        if c < 1e-6:
            raise ValueError(f"contour touches a singularity near {z1}")
    z_values = [complex(z) for z in z_values]

    # integration nodes panel by panel; v continued through all of them
    all_nodes = []
    all_weights = []
    for z0, z1 in zip(way[:-1], way[1:]):
        if z0 == z1:
            continue
        xs, ws = gauss_legendre_panel(complex(z0), complex(z1), nodes_per_panel)
        all_nodes.append(xs)
        all_weights.append(ws)

    def coeff(w):
        return eq.a1(w), eq.a2(w)

    from scipy.integrate import solve_ivp

    n_total = sum(len(a) for a in all_nodes)
    v_vals = np.empty(n_total, dtype=complex)
    weights_flat = np.empty(n_total, dtype=complex)
    state = np.array([seed[0], seed[1]], dtype=complex)
    pos = complex(way[0])
    trackers = {z: BranchTracker([z]) for z in z_values}
    for z in z_values:
        trackers[z].start(pos)
    logs = {z: np.empty(n_total, dtype=complex) for z in z_values}
    idx = 0
    seg_iter = [(complex(a), complex(b)) for a, b in zip(way[:-1], way[1:]) if a != b]
    for (z0, z1), xs, ws in zip(seg_iter, all_nodes, all_weights):
        dz = z1 - z0

        def rhs(s, v):
            w = z0 + s * dz
            a1, a2 = coeff(w)
            return np.array([v[1] * dz, -(a2 * v[0] + a1 * v[1]) * dz])

        svals = np.concatenate([((xs - z0) / dz).real, [1.0]])
        sol = solve_ivp(rhs, (0.0, 1.0), state, method="RK45", rtol=rtol, atol=1e-14, t_eval=svals)
        if not sol.success:
            raise ArithmeticError(f"continuation failed on contour segment {z0} -> {z1}")
        for k, (x, wgt) in enumerate(zip(xs, ws)):
            v_vals[idx] = sol.y[0, k]
            weights_flat[idx] = wgt
            for z in z_values:
                logs[z][idx] = trackers[z].step(x)[0]
            idx += 1
        state = sol.y[:, -1].copy()
        pos = z1
        for z in z_values:
            trackers[z].step(pos)
    closure = max(abs(state[0] - seed[0]), abs(state[1] - seed[1])) / max(1.0, abs(seed[0]), abs(seed[1]))
    results = {}
    for z in z_values:
        lw = logs[z]
        # (z - w)^kappa = exp(kappa*(log(w - z) + i*pi)) continued from the base
        base_phase = 1j * cmath.pi
        wk = np.exp(kappa * (lw + base_phase))
        y0 = np.sum(weights_flat * v_vals * wk)
        if return_derivs:
            wk1 = np.exp((kappa - 1) * (lw + base_phase))
            wk2 = np.exp((kappa - 2) * (lw + base_phase))
            y1 = kappa * np.sum(weights_flat * v_vals * wk1)
            y2 = kappa * (kappa - 1) * np.sum(weights_flat * v_vals * wk2)
            results[z] = (complex(y0), complex(y1), complex(y2))
        else:
            results[z] = (complex(y0),)
    return results, closure


def heun_ode_residual_from_values(h: HeunParams, z, y, dy, ddy) -> float:
    z = complex(z)
    a1 = complex(h.eps0) / z + complex(h.eps1) / (z - 1) + complex(h.epst) / (z - complex(h.t))
    a2 = (complex(h.alpha * h.beta) * z - complex(h.q)) / (z * (z - 1) * (z - complex(h.t)))
    res = ddy + a1 * dy + a2 * y
    return abs(res) / max(abs(ddy), abs(a1 * dy), abs(a2 * y), 1e-300)


# ---------------------------------------------------------------------------
# predicted local expansions of transformed solutions
# ---------------------------------------------------------------------------


@dataclass
class ExpansionImage:
    """Predicted local behaviour of the transformed solution at one point.

    value(z) evaluates D * (z-p)^lead * sum coeff_j (z-p)^j (the series is
    in 1/z at infinity); ``multiplier`` is the local monodromy factor; a
    ``zero`` image means the transform annihilates every solution branch.
    """

    point: object
    lead: complex
    coeffs: list
    multiplier: complex
    zero: bool = False
    prefactor: complex = 1.0

    def value(self, z, D=1.0):
        if self.zero:
            return 0.0
        u = 1.0 / complex(z) if self.point == INF else complex(z) - complex(self.point)
        ser = sum(c * u**j for j, c in enumerate(self.coeffs))
        return complex(D) * self.prefactor * u ** complex(self.lead) * ser


def expansion_image(basis: FrobeniusBasis, kappa) -> ExpansionImage:
    """Term-by-term image of the local basis data under the transform.

    The image of C*f + D*g is D times the returned series (the branch
    holomorphic at the point integrates to zero); ``value(z, D)`` evaluates
    it.  Finite points require the exponent pair to contain 0; infinity
    requires kappa to equal one of the exponents minus 2.  An integer kappa
    is outside the hypotheses and raises.
    """
    kappa = complex(kappa)
    if near_integer(kappa, tol=1e-12) is not None:
        raise ValueError("outside the local-expansion hypotheses: integer weight exponent")
    r1, r2 = complex(basis.rho1), complex(basis.rho2)

    def series_at(expo):
        return basis.c if abs(expo - r1) < 1e-9 else basis.ctilde

    if basis.point == INF:
        if abs(kappa - (r1 - 2)) < 1e-9:
            th2, th1 = r1, r2
        elif abs(kappa - (r2 - 2)) < 1e-9:
            th2, th1 = r2, r1
        else:
            raise ValueError("weight exponent incompatible with the infinity exponents")
        d = th1 - th2
        m = near_integer(d)
        pref = cmath.exp(1j * cmath.pi * (th2 - 1))
        mult = cmath.exp(2j * cmath.pi * d)
        if m is None:
            ct = series_at(th1)
            n1 = near_integer(th1)
            if n1 is None or n1 >= 1:
                coeffs = [complex(cj) * d_coeff(j + d + 1, th2 - 1) for j, cj in enumerate(ct)]
                return ExpansionImage(INF, d + 1, coeffs, mult, prefactor=pref)
            shift = 1 - n1
            coeffs = [
                (complex(ct[j + shift]) if j + shift < len(ct) else 0.0) * d_coeff(j - th2 + 2, th2 - 1)
                for j in range(max(0, len(ct) - shift))
            ]
            return ExpansionImage(INF, -th2 + 2, coeffs, mult, prefactor=pref)
        if m >= 0:
            if basis.A is None or abs(complex(basis.A)) < 1e-13:
                return ExpansionImage(INF, 0.0, [], 1.0, zero=True, prefactor=pref)
            coeffs = [complex(basis.A) * complex(cj) * d_coeff(j + d + 1, th2 - 1) for j, cj in enumerate(basis.c)]
            return ExpansionImage(INF, d + 1, coeffs, mult, prefactor=pref)
        coeffs = []
        for j in range(basis.order):
            if j <= -m - 1:
                cj = complex(basis.ctilde[j]) if j < len(basis.ctilde) else 0.0
            else:
                cj = complex(basis.A) * complex(basis.c[j + m]) if (basis.A is not None and j + m < len(basis.c)) else 0.0
            coeffs.append(cj * d_coeff(j + d + 1, th2 - 1))
        return ExpansionImage(INF, d + 1, coeffs, mult, prefactor=pref)

    # finite point: exponents must contain 0, theta = the other exponent
    if abs(r2) < 1e-9:
        th = r1
    elif abs(r1) < 1e-9:
        th = r2
    else:
        raise ValueError("finite-point expansion requires an exponent 0")
    m = near_integer(th)
    mult = cmath.exp(2j * cmath.pi * (th + kappa))
    if m is None:
        ct = series_at(th)
        tk = near_integer(th + kappa)
        if tk is None or tk > -2:
            coeffs = [complex(cj) * d_coeff(j + th + 1, kappa + 1) for j, cj in enumerate(ct)]
            return ExpansionImage(basis.point, th + kappa + 1, coeffs, mult)
        shift = -tk - 1
        coeffs = [
            (complex(ct[j + shift]) if j + shift < len(ct) else 0.0) * d_coeff(j - kappa, kappa + 1)
            for j in range(max(0, len(ct) - shift))
        ]
        return ExpansionImage(basis.point, 0.0, coeffs, 1.0)
    if m >= 0:
        if basis.A is None or abs(complex(basis.A)) < 1e-13:
            return ExpansionImage(basis.point, 0.0, [], 1.0, zero=True)
        coeffs = [complex(basis.A) * complex(cj) * d_coeff(j + th + 1, kappa + 1) for j, cj in enumerate(basis.c)]
        return ExpansionImage(basis.point, th + kappa + 1, coeffs, mult)
    coeffs = []
    for j in range(basis.order):
        if j <= -m - 1:
            cj = complex(basis.ctilde[j]) if j < len(basis.ctilde) else 0.0
        else:
            cj = complex(basis.A) * complex(basis.c[j + m]) if (basis.A is not None and j + m < len(basis.c)) else 0.0
        coeffs.append(cj * d_coeff(j + th + 1, kappa + 1))
    return ExpansionImage(basis.point, th + kappa + 1, coeffs, mult)


# ---------------------------------------------------------------------------
# vanishing criterion and the polynomial <-> apparency correspondences
# ---------------------------------------------------------------------------


@dataclass
class VanishingReport:
    verdict: str  # 'never-zero' | 'zero-iff-apparent' | 'zero-iff-polynomial-type'
    is_zero: bool
    witness: object


def vanishing_criterion(src: HeunParams, p, eta) -> VanishingReport:
    """Classification of when the transform annihilates all solutions at p.

    ``src`` is the integrand-side equation with transform exponent
    kappa = -eta (eta not an integer).  At a finite point the transform is
    identically zero iff eps'_p in Z<=1 with w=p non-logarithmic, or
    eps_p = eps'_p - eta + 1 in Z>=2 with a polynomial-type solution
    (w-p)^{1-eps'_p} times a polynomial of degree <= eps_p - 2 present.
    """
    if near_integer(eta, tol=1e-12) is not None:
        raise ValueError("integer eta outside the vanishing-criterion hypotheses")
    if p == INF:
        # {alpha', beta'} = {2-eta, alpha+beta-2eta+1}: in source parameters
        # the conditions alpha+beta-eta and alpha+beta-2eta read as follows
        diff1 = src.alpha + src.beta + 2 * eta - 3  # = alpha + beta - eta
        diff2 = src.alpha + src.beta + eta - 3  # = alpha + beta - 2 eta
        m = near_integer(diff1)
        if m is not None and m >= 1:
            ok, res = is_apparent(src, INF)
            return VanishingReport("zero-iff-apparent", bool(ok), res)
        kk = near_integer(diff2)
        if kk is not None and kk <= -1:
            # a pure polynomial solution in w, of degree 2 eta - alpha - beta - 1
            found = [r for r in polynomial_type_search(src) if r[3] and all(abs(complex(x)) < 1e-9 for x in r[0])]
            return VanishingReport("zero-iff-polynomial-type", bool(found), found or None)
        return VanishingReport("never-zero", False, None)
    idx = src.point_index(p)
    epsp = src.eps_at(idx)
    m = near_integer(epsp)
    if m is not None and m <= 1:
        ok, res = is_apparent(src, p)
        return VanishingReport("zero-iff-apparent", bool(ok), res)
    eps_unprimed = epsp - eta + 1
    mm = near_integer(eps_unprimed)
    if mm is not None and mm >= 2:
        nu = [0, 0, 0]
        nu[idx] = 1 - epsp
        found = []
        for choice in ("alpha", "beta"):
            try:
                P, _ = quasi_solvable_spectrum(src, tuple(nu), choice, solve=False)
            except (ValueError, ArithmeticError):
                continue
            if abs(complex(P(src.q))) <= 1e-9 * max(1.0, abs(complex(src.q))) ** P.degree:
                found.append(choice)
        return VanishingReport("zero-iff-polynomial-type", bool(found), found or None)
    return VanishingReport("never-zero", False, None)


# ---------------------------------------------------------------------------
# the eight polynomial <-> apparency correspondences
# ---------------------------------------------------------------------------


@dataclass
class CorrespondenceReport:
    case: str
    verdict: bool
    detail: object


def _sector_solution(h: HeunParams, nu, expected_deg: int, tol: float = 1e-8):
    """Find the polynomial factor of a product-type solution at h.q, if any."""
    for choice in ("alpha", "beta"):
        eta = h.alpha if choice == "alpha" else h.beta
        n = near_integer(-(eta + nu[0] + nu[1] + nu[2]))
        if n is None or n < 0 or (expected_deg is not None and n != expected_deg):
            continue
        P, recs = quasi_solvable_spectrum(h, nu, choice)
        if abs(complex(P(h.q))) <= tol * max(1.0, abs(complex(h.q))) ** P.degree:
            poly = min(recs, key=lambda r: abs(r[0] - complex(h.q)))[1]
            return n, poly
    return None, None


def _third(points, a, b):
    return [p for p in points if p not in (a, b)][0]


def correspondence_check(case: str, pair: HeunTransformPair, a=0, tol: float = 1e-8) -> CorrespondenceReport:
    """Verify one case of the polynomial <-> non-branching correspondence.

    Cases 'i'..'iv' act at a finite singular point ``a``; 'v'..'viii' at
    infinity.  Hypotheses are validated and a violated one raises with its
    name; the verdict states whether the asserted object was found (the
    polynomial-type solution of the target, or apparency of the target
    singularity).
    """
    src, tgt, eta = pair.source, pair.target, pair.eta
    if near_integer(eta, tol=1e-10) is not None:
        raise ValueError("hypothesis failed: eta must not be an integer")
    pts = ("0", "1", "t")
    labels = {0: "0", 1: "1", "t": "t", "0": "0", "1": "1"}
    a_lbl = labels.get(a, "t")
    ia = pts.index(a_lbl)
    eps_s = (src.eps0, src.eps1, src.epst)
    eps_t = (tgt.eps0, tgt.eps1, tgt.epst)

    def nint(x):
        return near_integer(x, tol=1e-9)

    if case == "i":
        m = nint(eps_s[ia])
        if m is None or m < 2:
            raise ValueError("hypothesis failed: eps'_a must be an integer >= 2")
        ok, res = is_apparent(src, a)
        if not ok:
            raise ValueError(f"hypothesis failed: source not apparent at a (A residual {res:.2e})")
        nu = [0, 0, 0]
        nu[ia] = 1 - eps_t[ia]
        deg, poly = _sector_solution(tgt, tuple(nu), None, tol=tol)
        detail = {"degree": None if poly is None else poly.degree, "bound": m - 2, "poly": poly}
        verdict = poly is not None and poly.degree <= m - 2
        if verdict and nint(tgt.alpha) is None and nint(tgt.beta) is None:
            verdict = poly.degree == m - 2
        return CorrespondenceReport(case, verdict, detail)

    if case == "ii":
        m = nint(eps_s[ia])
        if m is None or m > 0:
            raise ValueError("hypothesis failed: eps'_a must be an integer <= 0")
        for nm, val in (("alpha'", src.alpha), ("beta'", src.beta)):
            if nint(val) is not None:
                raise ValueError(f"hypothesis failed: {nm} integer")
        ok, res = is_apparent(src, a)
        if not ok:
            raise ValueError(f"hypothesis failed: source not apparent at a (A residual {res:.2e})")
        nu = [1 - e for e in eps_t]
        nu[ia] = 0
        deg, poly = _sector_solution(tgt, tuple(nu), -m, tol=tol)
        return CorrespondenceReport(case, poly is not None and poly.degree == -m, {"poly": poly, "degree": -m})

    if case == "iii":
        m = nint(eps_t[ia])
        if m is None or m < 2:
            raise ValueError("hypothesis failed: eps_a must be an integer >= 2")
        if nint(tgt.alpha) is not None or nint(tgt.beta) is not None:
            raise ValueError("hypothesis failed: alpha or beta integer")
        nu = [0, 0, 0]
        nu[ia] = 1 - eps_s[ia]
        deg, poly = _sector_solution(src, tuple(nu), None, tol=tol)
        if poly is None:
            raise ValueError("hypothesis failed: no product-type solution of the source at a")
        ok, res = is_apparent(tgt, a)
        return CorrespondenceReport(case, ok, {"A_residual": res})

    if case == "iv":
        m = nint(eps_t[ia])
        if m is None or m > 0:
            raise ValueError("hypothesis failed: eps_a must be an integer <= 0")
        ib, ic = [j for j in range(3) if j != ia]
        for nm, val in (("alpha", tgt.alpha), ("beta", tgt.beta), ("eps'_b", eps_s[ib]), ("eps'_c", eps_s[ic])):
            if nint(val) is not None:
                raise ValueError(f"hypothesis failed: {nm} integer")
        nu = [1 - e for e in eps_s]
        nu[ia] = 0
        deg, poly = _sector_solution(src, tuple(nu), None, tol=tol)
        if poly is None:
            raise ValueError("hypothesis failed: no two-point product solution of the source")
        ok, res = is_apparent(tgt, a)
        return CorrespondenceReport(case, ok, {"A_residual": res})

    s = tgt.alpha + tgt.beta - eta  # alpha + beta - eta in target parameters
    s2 = tgt.alpha + tgt.beta - 2 * eta

    if case == "v":
        m = nint(s)
        if m is None or m > 0:
            raise ValueError("hypothesis failed: alpha+beta-eta must be an integer <= 0")
        ok, res = is_apparent(src, INF)
        if not ok:
            raise ValueError(f"hypothesis failed: source not apparent at infinity ({res:.2e})")
        deg, poly = _sector_solution(tgt, (0, 0, 0), -m, tol=tol)
        return CorrespondenceReport(case, poly is not None and poly.degree == -m, {"poly": poly})

    if case == "vi":
        m = nint(s)
        if m is None or m < 2:
            raise ValueError("hypothesis failed: alpha+beta-eta must be an integer >= 2")
        for nm, val in (("eps0", tgt.eps0), ("eps1", tgt.eps1), ("epst", tgt.epst)):
            if nint(val) is not None:
                raise ValueError(f"hypothesis failed: {nm} integer")
        ok, res = is_apparent(src, INF)
        if not ok:
            raise ValueError(f"hypothesis failed: source not apparent at infinity ({res:.2e})")
        nu = tuple(1 - e for e in eps_t)
        deg, poly = _sector_solution(tgt, nu, m - 2, tol=tol)
        return CorrespondenceReport(case, poly is not None and poly.degree == m - 2, {"poly": poly})

    if case == "vii":
        m = nint(s2)
        if m is None or m > -1:
            raise ValueError("hypothesis failed: alpha+beta-2eta must be an integer <= -1")
        if nint(src.eps0) is not None:
            raise ValueError("hypothesis failed: eps'_0 integer")
        deg, poly = _sector_solution(src, (0, 0, 0), None, tol=tol)
        if poly is None:
            raise ValueError("hypothesis failed: source has no polynomial solution")
        ok, res = is_apparent(tgt, INF)
        return CorrespondenceReport(case, ok, {"A_residual": res})

    if case == "viii":
        m = nint(s2)
        if m is None or m < 1:
            raise ValueError("hypothesis failed: alpha+beta-2eta must be an integer >= 1")
        for nm, val in (("eps'_0", src.eps0), ("eps'_1", src.eps1), ("eps'_t", src.epst)):
            if nint(val) is not None:
                raise ValueError(f"hypothesis failed: {nm} integer")
        nu = tuple(1 - e for e in eps_s)
        deg, poly = _sector_solution(src, nu, None, tol=tol)
        if poly is None:
            raise ValueError("hypothesis failed: no three-point product solution of the source")
        ok, res = is_apparent(tgt, INF)
        return CorrespondenceReport(case, ok, {"A_residual": res})

    raise ValueError(f"unknown case {case!r}")
