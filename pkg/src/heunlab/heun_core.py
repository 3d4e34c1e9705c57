"""Heun and deformed-Fuchsian equation types with Frobenius local analysis.

The local machinery is generic over the coefficient scalars: binary64
complex for numeric work, ``fractions.Fraction`` for exact rational inputs,
and polynomials in the accessory parameter q (as ``CPoly``) for the
apparency and quasi-solvable condition polynomials.

Local data conventions at a regular singular point p:

    a1(w) = sum_i r_i (w-p)**(i-1),   a2(w) = sum_i s_i (w-p)**(i-2),
    F(xi) = xi**2 + (r_0 - 1) xi + s_0           (indicial polynomial)

and series coefficients obey F(rho+n) c_n + sum_{i>=1} ((rho+n-i) r_i + s_i)
c_{n-i} = 0.  The exponent pair is ordered so Re(rho1) >= Re(rho2), ties
broken by imaginary part, which fixes where the log branch lives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import CPoly, CRatFun, _is_exact, poly_roots, ratfun_series

INF = "inf"


def near_integer(x, tol: float = 1e-9):
    """Nearest integer if x is within tol of one (exact test for Fractions)."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else None
    if isinstance(x, int):
        return x
    z = complex(x)
    n = round(z.real)
    if abs(z - n) <= tol:
        return int(n)
    return None


def _re_key(x):
    z = complex(x)
    return (z.real, z.imag)


def order_exponents(r1, r2):
    """rho1 = exponent with larger real part, ties broken by larger imag."""
    return (r1, r2) if _re_key(r1) >= _re_key(r2) else (r2, r1)


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeunParams:
    """Parameters (eps0, eps1, eps_t, alpha, beta; q; t) of the algebraic form."""

    eps0: complex
    eps1: complex
    epst: complex
    alpha: complex
    beta: complex
    q: complex
    t: complex
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not self.validate:
            return
        res = self.eps0 + self.eps1 + self.epst - self.alpha - self.beta - 1
        if isinstance(res, Fraction) or isinstance(res, int):
            ok = res == 0
        else:
            ok = abs(complex(res)) <= 1e-12 * max(1.0, abs(complex(self.alpha)) + abs(complex(self.beta)))
        if not ok:
            raise ValueError(f"Fuchs relation violated: residual {res}")
        if complex(self.t) in (0j, 1 + 0j):
            raise ValueError("t must avoid 0 and 1")

    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in (self.eps0, self.eps1, self.epst, self.alpha, self.beta, self.t))

    def point_index(self, p):
        """0, 1, 2 for the finite singularities 0, 1, t; INF for infinity."""
        if p == INF:
            return INF
        if isinstance(p, str):
            return {"0": 0, "1": 1, "t": 2}[p]
        for i, pt in enumerate((0, 1, self.t)):
            if abs(complex(p) - complex(pt)) < 1e-12 * max(1.0, abs(complex(pt))):
                return i
        raise ValueError(f"{p} is not a singular point of this equation")

    def eps_at(self, idx: int):
        return (self.eps0, self.eps1, self.epst)[idx]

    def singular_points(self):
        return (0, 1, self.t)

    def exponents(self, p):
        """Exponent pair at p (0, 1, t, or INF), ordered by real part."""
        idx = self.point_index(p)
        if idx == INF:
            return order_exponents(self.alpha, self.beta)
        eps = self.eps_at(idx)
        return order_exponents(0 * eps, 1 - eps)


def pochhammer_hamiltonian(theta0, theta1, thetat, theta_inf, lam, mu, t):
    """Accessory Hamiltonian value of the deformed equation."""
    k1 = (theta_inf - theta0 - theta1 - thetat) / 2
    k2 = -(theta_inf + theta0 + theta1 + thetat) / 2
    num = (
        lam * (lam - 1) * (lam - t) * mu * mu
        - (theta0 * (lam - 1) * (lam - t) + theta1 * lam * (lam - t) + (thetat - 1) * lam * (lam - 1)) * mu
        + k1 * (k2 + 1) * (lam - t)
    )
    return num / (t * (t - 1))


@dataclass(frozen=True)
class Dy1Params:
    """Deformed Fuchsian equation data: theta exponents, (lam, mu), location t.

    H defaults to the Hamiltonian value, which is exactly the choice making
    z = lam apparent; pass an explicit H with validate=False to perturb it.
    """

    theta0: complex
    theta1: complex
    thetat: complex
    theta_inf: complex
    lam: complex
    mu: complex
    t: complex
    H: complex = None
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        H0 = pochhammer_hamiltonian(self.theta0, self.theta1, self.thetat, self.theta_inf, self.lam, self.mu, self.t)
        if self.H is None:
            object.__setattr__(self, "H", H0)
        elif self.validate and abs(complex(self.H - H0)) > 1e-12 * max(1.0, abs(complex(H0))):
            raise ValueError("H inconsistent with the Hamiltonian value")
        if self.validate:
            for bad in (0j, 1 + 0j, complex(self.t)):
                if abs(complex(self.lam) - bad) < 1e-12:
                    raise ValueError("lam must avoid 0, 1, t")

    @property
    def kappa1(self):
        return (self.theta_inf - self.theta0 - self.theta1 - self.thetat) / 2

    @property
    def kappa2(self):
        return -(self.theta_inf + self.theta0 + self.theta1 + self.thetat) / 2

    def exponents(self, p):
        if p == INF:
            return order_exponents(self.kappa1, self.kappa2 + 1)
        if p == "lam" or abs(complex(p) - complex(self.lam)) < 1e-12:
            return (2, 0)
        th = {0: self.theta0, 1: self.theta1}.get(
            {0j: 0, 1 + 0j: 1}.get(complex(p), 2), self.thetat
        )
        return order_exponents(0 * th, th)


# ---------------------------------------------------------------------------
# general Fuchsian equations as rational coefficient functions
# ---------------------------------------------------------------------------


def _shifted(f: CRatFun, p) -> CRatFun:
    if p == 0:
        return f
    return CRatFun(f.num.compose_linear(1, p), f.den.compose_linear(1, p))


class GeneralFuchsian:
    """y'' + a1(w) y' + a2(w) y = 0 with rational a1, a2 and listed singularities."""

    def __init__(self, a1: CRatFun, a2: CRatFun, sing_points):
        self.a1 = a1
        self.a2 = a2
        self.sing = list(sing_points)

    def local_rs(self, p, order: int):
        """(r, s) local series at p; at INF, in the u = 1/w chart."""
        if p == INF:
            a1u = self.a1.invert_variable()
            a2u = self.a2.invert_variable()
            # w = 1/u: Y'' + (2/u - a1(1/u)/u^2) Y' + (a2(1/u)/u^4) Y = 0
            b1 = CRatFun(CPoly([2]), CPoly([0, 1])) - CRatFun(a1u.num, a1u.den.shift(2))
            b2 = CRatFun(a2u.num, a2u.den.shift(4))
            r = ratfun_series(b1, 0, order, offset=1)
            s = ratfun_series(b2, 0, order, offset=2)
            return r, s
        r = ratfun_series(_shifted(self.a1, p), 0, order, offset=1)
        s = ratfun_series(_shifted(self.a2, p), 0, order, offset=2)
        return r, s

    def exponents(self, p):
        r, s = self.local_rs(p, 0)
        r0, s0 = complex(r[0]), complex(s[0])
        rt = np.sqrt((r0 - 1) ** 2 - 4 * s0)
        return order_exponents((1 - r0 + rt) / 2, (1 - r0 - rt) / 2)

    def rhs(self, w, y, dy):
        """First-order system right-hand side for (y, y')."""
        return dy, -(self.a1(w) * dy + self.a2(w) * y)

    def gauge(self, factors) -> "GeneralFuchsian":
        """Equation satisfied by y / prod (w-p)**nu, factors = [(p, nu), ...]."""
        lp = None
        for p, nu in factors:
            term = CRatFun(CPoly([nu]), CPoly([-p, 1]))
            lp = term if lp is None else lp + term
        a1 = self.a1 + 2 * lp
        a2 = self.a2 + self.a1 * lp + lp * lp + lp.deriv()
        return GeneralFuchsian(a1, a2, self.sing)


def heun_to_fuchsian(h: HeunParams) -> GeneralFuchsian:
    """Coefficient functions of the algebraic-form equation."""
    t = h.t
    w0, w1, wt = CPoly([0, 1]), CPoly([-1, 1]), CPoly([-t, 1])
    a1 = CRatFun(h.eps0 * (w1 * wt) + h.eps1 * (w0 * wt) + h.epst * (w0 * w1), w0 * w1 * wt)
    a2 = CRatFun(CPoly([-h.q, h.alpha * h.beta]), w0 * w1 * wt)
    return GeneralFuchsian(a1, a2, [0, 1, t])


def dy1_to_fuchsian(d: Dy1Params) -> GeneralFuchsian:
    """Coefficient functions of the deformed equation (five singular points)."""
    t, lam = d.t, d.lam
    w0, w1 = CPoly([0, 1]), CPoly([-1, 1])
    wt, wl = CPoly([-t, 1]), CPoly([-lam, 1])
    a1 = (
        CRatFun(CPoly([1 - d.theta0]), w0)
        + CRatFun(CPoly([1 - d.theta1]), w1)
        + CRatFun(CPoly([1 - d.thetat]), wt)
        + CRatFun(CPoly([-1]), wl)
    )
    a2 = (
        CRatFun(CPoly([d.kappa1 * (d.kappa2 + 1)]), w0 * w1)
        + CRatFun(CPoly([lam * (lam - 1) * d.mu]), w0 * w1 * wl)
        + CRatFun(CPoly([-t * (t - 1) * d.H]), w0 * w1 * wt)
    )
    return GeneralFuchsian(a1, a2, [0, 1, t, lam])


# ---------------------------------------------------------------------------
# Frobenius expansions
# ---------------------------------------------------------------------------


@dataclass
class FrobeniusBasis:
    """Local solution pair at a singular point.

    f = (w-p)**rho1 * sum c_j (w-p)**j is the branch at the larger exponent;
    g = (w-p)**rho2 * sum ct_j (w-p)**j + A * f * log(w-p) carries the log
    term whenever rho1 - rho2 is a nonnegative integer (A is None otherwise).
    At p = INF the expansion variable is 1/w and derivatives are chain-ruled.
    """

    point: object
    rho1: complex
    rho2: complex
    c: list
    ctilde: list
    A: object
    order: int

    @property
    def has_log_branch(self) -> bool:
        return self.A is not None

    def _local(self, w):
        return 1.0 / complex(w) if self.point == INF else complex(w) - complex(self.point)

    def _series(self, u, which):
        rho, cs = (self.rho1, self.c) if which == "f" else (self.rho2, self.ctilde)
        ser = sum(complex(cj) * u**j for j, cj in enumerate(cs))
        val = u ** complex(rho) * ser
        if which == "g" and self.A is not None and complex(self.A) != 0:
            val += complex(self.A) * self._series(u, "f") * np.log(u)
        return val

    def _series_du(self, u, which):
        rho, cs = (self.rho1, self.c) if which == "f" else (self.rho2, self.ctilde)
        val = sum(complex(cj) * (complex(rho) + j) * u ** (complex(rho) + j - 1) for j, cj in enumerate(cs))
        if which == "g" and self.A is not None and complex(self.A) != 0:
            val += complex(self.A) * (self._series_du(u, "f") * np.log(u) + self._series(u, "f") / u)
        return val

    def f_eval(self, w):
        return self._series(self._local(w), "f")

    def g_eval(self, w):
        return self._series(self._local(w), "g")

    def _chain(self, u):
        return -(u**2) if self.point == INF else 1.0

    def f_deriv(self, w):
        u = self._local(w)
        return self._series_du(u, "f") * self._chain(u)

    def g_deriv(self, w):
        u = self._local(w)
        return self._series_du(u, "g") * self._chain(u)

    def _series_d2u(self, u, which):
        rho, cs = (self.rho1, self.c) if which == "f" else (self.rho2, self.ctilde)
        val = sum(
            complex(cj) * (complex(rho) + j) * (complex(rho) + j - 1) * u ** (complex(rho) + j - 2)
            for j, cj in enumerate(cs)
        )
        if which == "g" and self.A is not None and complex(self.A) != 0:
            val += complex(self.A) * (
                self._series_d2u(u, "f") * np.log(u)
                + 2 * self._series_du(u, "f") / u
                - self._series(u, "f") / u**2
            )
        return val

    def f_dderiv(self, w):
        u = self._local(w)
        if self.point == INF:
            return self._series_d2u(u, "f") * u**4 + 2 * self._series_du(u, "f") * u**3
        return self._series_d2u(u, "f")

    def g_dderiv(self, w):
        u = self._local(w)
        if self.point == INF:
            return self._series_d2u(u, "g") * u**4 + 2 * self._series_du(u, "g") * u**3
        return self._series_d2u(u, "g")


def _one_like(r, s):
    if any(isinstance(x, CPoly) for x in list(r) + list(s)):
        exact = all(_is_exact(x) or (isinstance(x, CPoly) and (x.is_zero() or x.is_exact())) for x in list(r) + list(s))
        return CPoly([Fraction(1)]) if exact else CPoly([1.0 + 0j])
    if all(_is_exact(x) for x in list(r) + list(s)):
        return Fraction(1)
    return 1.0 + 0j


def _indicial(r0, s0):
    def F(xi):
        return xi * xi + (r0 - 1) * xi + s0

    return F


def _get(seq, i):
    return seq[i] if i < len(seq) else 0


def frobenius_expand(r, s, rho, order: int):
    """Series coefficients c_0..c_order at exponent rho (no resonances allowed)."""
    F = _indicial(r[0], s[0])
    c = [_one_like(r, s)]
    for n in range(1, order + 1):
        acc = 0
        for i in range(1, n + 1):
            acc = acc + ((rho + n - i) * _get(r, i) + _get(s, i)) * c[n - i]
        Fn = F(rho + n)
        if (_is_exact(Fn) and Fn == 0) or (not _is_exact(Fn) and abs(complex(Fn)) < 1e-10):
            raise ArithmeticError(f"resonance at n={n}; use frobenius_basis")
        c.append(-acc / Fn)
    return c


def _resonant_bracket(r, s, rho2, m: int):
    """(ct_0..ct_{m-1}, bracket): the obstruction at the resonant order m."""
    F = _indicial(r[0], s[0])
    ct = [_one_like(r, s)]
    for n in range(1, m):
        acc = 0
        for i in range(1, n + 1):
            acc = acc + ((rho2 + n - i) * _get(r, i) + _get(s, i)) * ct[n - i]
        ct.append(-acc / F(rho2 + n))
    bracket = 0
    for i in range(1, m + 1):
        bracket = bracket + ((rho2 + m - i) * _get(r, i) + _get(s, i)) * ct[m - i]
    return ct, bracket


def frobenius_basis(r, s, rho1, rho2, order: int):
    """(c, ctilde, A): basis data; A is None when rho1 - rho2 is not in Z>=0."""
    c = frobenius_expand(r, s, rho1, order)
    m = near_integer(rho1 - rho2)
    if m is None or m < 0:
        return c, frobenius_expand(r, s, rho2, order), None
    F = _indicial(r[0], s[0])

    def psi(k):
        # source term of the log branch: L[f log] = log L[f] + psi-series
        val = (2 * (rho1 + k) - 1) * c[k]
        for i in range(0, k + 1):
            val = val + _get(r, i) * c[k - i]
        return val

    if m == 0:
        A = _one_like(r, s)
        ct = [c[0]]
        start = 1
    else:
        ct, bracket = _resonant_bracket(r, s, rho2, m)
        A = -bracket / psi(0)
        ct = ct + [0 * ct[0]]  # resonant coefficient fixed to zero
        start = m + 1
    for n in range(start, order + 1):
        acc = 0
        for i in range(1, n + 1):
            acc = acc + ((rho2 + n - i) * _get(r, i) + _get(s, i)) * ct[n - i]
        acc = acc + A * psi(n - m)
        ct.append(-acc / F(rho2 + n))
    return c, ct, A


def frobenius_basis_at(eq: GeneralFuchsian, p, order: int = 40) -> FrobeniusBasis:
    """Numeric local basis of ``eq`` at the singular point p (or INF)."""
    r, s = eq.local_rs(p, order + 2)
    r = [complex(x) for x in r]
    s = [complex(x) for x in s]
    rt = np.sqrt((r[0] - 1) ** 2 - 4 * s[0])
    rho1, rho2 = order_exponents((1 - r[0] + rt) / 2, (1 - r[0] - rt) / 2)
    m = near_integer(rho1 - rho2)
    if m is not None:
        rho1 = rho2 + m  # snap so the recursion sees the resonance exactly
    c, ct, A = frobenius_basis(r, s, rho1, rho2, order)
    return FrobeniusBasis(p, rho1, rho2, c, ct, A, order)


# ---------------------------------------------------------------------------
# Heun local data, generic over scalars (q may be a CPoly)
# ---------------------------------------------------------------------------


def _q_symbol(h: HeunParams) -> CPoly:
    return CPoly([Fraction(0), Fraction(1)]) if h.is_exact() else CPoly([0j, 1.0 + 0j])


def heun_local_rs(h: HeunParams, p, order: int, q=None):
    """(r, s) local data of the algebraic form; q defaults to h.q.

    Passing ``q = CPoly([0, 1])`` makes the s-coefficients polynomials in
    the accessory parameter, from which condition polynomials are read off.
    """
    q = h.q if q is None else q
    ab = h.alpha * h.beta
    pts = (0, 1, h.t)
    eps = (h.eps0, h.eps1, h.epst)
    idx = h.point_index(p)

    def q_times(x):
        # q*x with q possibly a CPoly (CPoly.__mul__ handles scalars)
        return q * x

    if idx == INF:
        r = [2 - (h.eps0 + h.eps1 + h.epst)]
        for i in range(1, order + 2):
            r.append(-sum(e * pt**i for e, pt in zip(eps, pts)))
        S = [1]
        for _ in range(order + 2):
            S.append(S[-1] * h.t + 1)
        s = [ab * S[0]]
        for i in range(1, order + 2):
            s.append(ab * S[i] + q_times(-S[i - 1]))
        return r, s

    c = pts[idx]
    others = [(pts[j], eps[j]) for j in range(3) if j != idx]
    r = [eps[idx]]
    for i in range(1, order + 2):
        r.append(-sum(e / (pt - c) ** i for pt, e in others))

    def residue(pj):
        den = 1
        for pk in pts:
            if pk is not pj and pk != pj:
                den = den * (pj - pk)
        return (ab * pj + q_times(-1)) / den

    s = [0 * h.alpha, residue(c)]
    for mdx in range(0, order):
        acc = 0
        for pt, _ in others:
            acc = acc + residue(pt) / (pt - c) ** (mdx + 1)
        s.append(-acc)
    return r, s


def apparency_poly(h: HeunParams, p) -> CPoly:
    """Monic polynomial in q whose roots make the singularity at p apparent.

    Requires an integer, nonzero exponent difference at p (1 - eps_p at the
    finite points, the difference of alpha and beta at infinity); degree
    equals that difference.
    """
    rho1, rho2 = h.exponents(p)
    m = near_integer(rho1 - rho2)
    if m is None or m == 0:
        raise ValueError("no integral exponent difference at this point")
    r, s = heun_local_rs(h, p, m + 2, q=_q_symbol(h))
    _, bracket = _resonant_bracket(r, s, rho2, m)
    if not isinstance(bracket, CPoly):
        raise AssertionError("expected a symbolic bracket")
    if bracket.degree != m:
        raise ArithmeticError(f"condition degree {bracket.degree} != exponent difference {m}")
    return bracket.monic()


def is_apparent(h: HeunParams, p, tol: float = 1e-10):
    """(flag, |A| residual) of the non-logarithmic condition at p."""
    rho1, rho2 = h.exponents(p)
    m = near_integer(rho1 - rho2)
    if m is None:
        return True, 0.0
    eq = heun_to_fuchsian(h)
    basis = frobenius_basis_at(eq, INF if h.point_index(p) == INF else p, order=max(8, m + 4))
    res = abs(complex(basis.A))
    return res < tol, res


def lambda_apparent_check(d: Dy1Params, tol: float = 1e-10):
    """Non-logarithmic test at z = lam (exponent pair {0, 2})."""
    eq = dy1_to_fuchsian(d)
    basis = frobenius_basis_at(eq, d.lam, order=8)
    res = abs(complex(basis.A))
    return res < tol, res


# ---------------------------------------------------------------------------
# quasi-solvable spectra (polynomial-type solutions)
# ---------------------------------------------------------------------------


def _gauged_recurrence_coeffs(h: HeunParams, nu, q):
    """Tridiagonal recurrence data for p(w) in y = w^nu0 (w-1)^nu1 (w-t)^nut p(w).

    The gauged equation, multiplied through by w(w-1)(w-t), has polynomial
    coefficients exactly because nu_p in {0, 1-eps_p}; the w^k residual
    couples (a_{k-1}, a_k, a_{k+1}) via the returned (sub, diag, sup).
    """
    t = h.t
    pts = (0, 1, t)
    eps = (h.eps0, h.eps1, h.epst)
    ab = h.alpha * h.beta
    c3_1, c3_2 = t, -(1 + t)
    Q = (CPoly([t, -(1 + t), 1]), CPoly([0, -t, 1]), CPoly([0, -1, 1]))
    P2 = CPoly()
    for j in range(3):
        P2 = P2 + (eps[j] + 2 * nu[j]) * Q[j]
    c2_0, c2_1, c2_2 = (_get(P2.coeffs, 0), _get(P2.coeffs, 1), _get(P2.coeffs, 2))
    lin = ab
    const0 = 0
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            third = pts[3 - a - b]
            coef = (eps[a] + nu[a]) * nu[b]
            lin = lin + coef
            const0 = const0 - coef * third

    def sub(k):
        return (k - 1) * (k - 2) + c2_2 * (k - 1) + lin

    def diag(k):
        base = c3_2 * k * (k - 1) + c2_1 * k + const0
        return q * (-1) + base if isinstance(q, CPoly) else base - q

    def sup(k):
        return c3_1 * (k + 1) * k + c2_0 * (k + 1)

    return sub, diag, sup


def quasi_solvable_spectrum(h: HeunParams, nu, eta_choice: str, solve: bool = True):
    """Condition polynomial P(q) and solutions of one polynomial-type sector.

    ``nu`` = (nu0, nu1, nut) with nu_p in {0, 1-eps_p}; ``eta_choice`` in
    {'alpha', 'beta'} picks the exponent at infinity closing the sector,
    whose degree n = -(eta' + nu0 + nu1 + nut) must be a nonnegative
    integer.  Returns (P, records), records = [(q_root, poly factor)].
    """
    eta = h.alpha if eta_choice == "alpha" else h.beta
    ndeg = near_integer(-(eta + nu[0] + nu[1] + nu[2]))
    if ndeg is None or ndeg < 0:
        raise ValueError("not quasi-solvable in this sector")
    sub, diag, sup = _gauged_recurrence_coeffs(h, nu, _q_symbol(h))
    top = sub(ndeg + 1)
    if abs(complex(top)) > 1e-8 * max(1.0, (ndeg + 1) ** 2, abs(complex(h.alpha * h.beta))):
        raise ArithmeticError(f"sector does not terminate: top coefficient {top!r}")
    one = _one_like([h.alpha], [h.q if not h.is_exact() else Fraction(0)])
    Dm2 = CPoly([one])
    Dm1 = diag(0)
    for k in range(1, ndeg + 1):
        Dm1, Dm2 = diag(k) * Dm1 - (sub(k) * sup(k - 1)) * Dm2, Dm1
    P = Dm1.monic()
    if P.degree != ndeg + 1:
        raise ArithmeticError(f"condition polynomial degree {P.degree} != {ndeg + 1}")
    records = []
    if solve:
        for q_root in poly_roots(P.to_complex()):
            hr = HeunParams(h.eps0, h.eps1, h.epst, h.alpha, h.beta, q_root, h.t, validate=False)
            subn, diagn, supn = _gauged_recurrence_coeffs(hr, nu, q_root)
            M = np.zeros((ndeg + 1, ndeg + 1), dtype=complex)
            for k in range(ndeg + 1):
                M[k, k] = complex(diagn(k))
                if k >= 1:
                    M[k, k - 1] = complex(subn(k))
                if k + 1 <= ndeg:
                    M[k, k + 1] = complex(supn(k))
            _, svals, vh = np.linalg.svd(M)
            vec = vh[-1].conj()
            j = int(np.argmax(np.abs(vec)))
            records.append((q_root, CPoly(list(vec / vec[j]))))
    return P, records


def heun_solution_residual(h: HeunParams, nu, poly: CPoly, w) -> float:
    """Relative ODE residual of w^nu0 (w-1)^nu1 (w-t)^nut * poly(w) at w."""
    w = complex(w)
    pts = (0.0, 1.0, complex(h.t))
    nuc = [complex(x) for x in nu]
    phi = 1.0
    lp = 0.0
    lq = 0.0
    for p, n in zip(pts, nuc):
        phi *= (w - p) ** n
        lp += n / (w - p)
        lq += -n / (w - p) ** 2
    pv = complex(poly(w))
    dp = complex(poly.deriv()(w))
    ddp = complex(poly.deriv().deriv()(w))
    y = phi * pv
    dy = phi * (dp + lp * pv)
    ddy = phi * (ddp + 2 * lp * dp + (lp * lp + lq) * pv)
    a1 = sum(complex(e) / (w - p) for e, p in zip((h.eps0, h.eps1, h.epst), pts))
    a2 = (complex(h.alpha * h.beta) * w - complex(h.q)) / (w * (w - 1) * (w - complex(h.t)))
    res = ddy + a1 * dy + a2 * y
    scale = max(abs(ddy), abs(a1 * dy), abs(a2 * y), 1e-300)
    return abs(res) / scale


def polynomial_type_search(h: HeunParams, tol: float = 1e-9):
    """Enumerate polynomial-type sectors compatible with the exponent sums.

    Records are (nu, eta_choice, degree, satisfied, poly_or_None); no
    satisfied record certifies the absence of a polynomial-type solution
    at the equation's own accessory parameter.
    """
    out = []
    for nu0 in (0 * h.eps0, 1 - h.eps0):
        for nu1 in (0 * h.eps1, 1 - h.eps1):
            for nut in (0 * h.epst, 1 - h.epst):
                for choice in ("alpha", "beta"):
                    eta = h.alpha if choice == "alpha" else h.beta
                    ndeg = near_integer(-(eta + nu0 + nu1 + nut), tol=1e-9)
                    if ndeg is None or ndeg < 0 or ndeg > 64:
                        continue
                    try:
                        P, _ = quasi_solvable_spectrum(h, (nu0, nu1, nut), choice, solve=False)
                    except (ValueError, ArithmeticError):
                        continue
                    scale = max(1.0, abs(complex(h.q))) ** P.degree
                    satisfied = abs(complex(P(h.q))) <= tol * scale
                    poly = None
                    if satisfied:
                        _, recs = quasi_solvable_spectrum(h, (nu0, nu1, nut), choice, solve=True)
                        poly = min(recs, key=lambda rec: abs(rec[0] - complex(h.q)))[1]
                    out.append(((nu0, nu1, nut), choice, ndeg, satisfied, poly))
    return out
