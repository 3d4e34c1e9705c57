"""Elliptical representation of the algebraic-form equation.

The operator is H = -d^2/dx^2 + sum_i l_i (l_i+1) wp(x + omega_i) acting at
eigenvalue E.  The substitution z = (wp(x) - e1)/(e2 - e1) with the gauge
f = v * z^{a1/2} (z-1)^{a2/2} (z-t)^{a3/2} carries (H - E) f = 0 to the
algebraic form; x = 0, omega_1, omega_2, omega_3 map to z = infinity, 0, 1,
t.  The admissible half-exponent choices are a_i in {-l_i, l_i + 1}.

The integral-transform parameter map on the couplings l preserves E; its
cycles I_0..I_3 are identified with the commutator contours
[gamma_z, gamma_inf], [gamma_z, gamma_0], [gamma_z, gamma_1],
[gamma_z, gamma_t] (proof-derived identification, adopted as definition).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import CPoly, CRatFun
from .heun_core import INF, HeunParams, apparency_poly, near_integer
from .weierstrass import Lattice, wp, wp_and_prime

Z_POINT_OF_OMEGA = {0: INF, 1: 0, 2: 1, 3: "t"}


def _canonical_l(l):
    """Representative with Re l >= -1/2 of the l <-> -l-1 symmetry."""
    out = []
    for v in l:
        if complex(v).real < -0.5:
            v = -v - 1
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class EllipticOperator:
    """Coupling constants (l0..l3), a period lattice, optional eigenvalue E."""

    l: tuple
    lattice: Lattice
    E: complex = None

    def __post_init__(self):
        object.__setattr__(self, "l", _canonical_l(tuple(self.l)))

    def coupling(self, i: int):
        v = self.l[i]
        return v * (v + 1)

    def potential(self, x: complex) -> complex:
        lat = self.lattice
        acc = 0j
        for i in range(4):
            c = complex(self.coupling(i))
            if c != 0:
                acc += c * wp(x + lat.half_period(i), lat)
        return acc

    def admissible_exponents(self, i: int):
        return (-self.l[i], self.l[i] + 1)


def heun_t(lat: Lattice) -> complex:
    return (lat.e3 - lat.e1) / (lat.e2 - lat.e1)


def q_from_E(lat: Lattice, alpha_choices, E):
    """Accessory parameter of the algebraic form at eigenvalue E (affine map)."""
    a0, a1, a2, a3 = alpha_choices
    e0p = a1 + Fraction(1, 2) if isinstance(a1, Fraction) else a1 + 0.5
    e1p = a2 + Fraction(1, 2) if isinstance(a2, Fraction) else a2 + 0.5
    etp = a3 + Fraction(1, 2) if isinstance(a3, Fraction) else a3 + 0.5
    t = heun_t(lat)
    s = a0 + a1 + a2 + a3
    ap = s / 2
    bp = (a1 + a2 + a3 + 1 - a0) / 2
    const = (
        (-((ap - bp) ** 2) + 2 * e0p**2 - 4 * e0p + 1) * (t + 1) / 12
        + (6 * e0p * etp + 2 * etp**2 - 4 * etp - e1p**2 + 2 * e1p) / 12
        + (6 * e0p * e1p + 2 * e1p**2 - 4 * e1p - etp**2 + 2 * etp) * t / 12
    )
    return -E / (4 * (lat.e2 - lat.e1)) + const


def E_from_q(lat: Lattice, alpha_choices, q) -> complex:
    return -(q - q_from_E(lat, alpha_choices, 0.0)) * 4 * (lat.e2 - lat.e1)


@dataclass(frozen=True)
class ChartMap:
    """Bookkeeping of the x -> z chart and its gauge prefactor."""

    lattice: Lattice
    alpha_choices: tuple
    heun: HeunParams

    def z_of_x(self, x) -> complex:
        lat = self.lattice
        return (wp(x, lat) - lat.e1) / (lat.e2 - lat.e1)

    def prefactor_of_z(self, z) -> complex:
        a0, a1, a2, a3 = [complex(a) for a in self.alpha_choices]
        t = complex(heun_t(self.lattice))
        return z ** (a1 / 2) * (z - 1) ** (a2 / 2) * (z - t) ** (a3 / 2)


def algebraic_from_elliptic(op: EllipticOperator, alpha_choices, E=None) -> ChartMap:
    """Algebraic-form parameters of (H - E) f = 0 under the chart and gauge.

    ``alpha_choices`` = (a0, a1, a2, a3) with a_i in {-l_i, l_i + 1}.
    Raises for a degenerate lattice with coincident e_i.
    """
    lat = op.lattice
    if min(abs(lat.e1 - lat.e2), abs(lat.e2 - lat.e3), abs(lat.e1 - lat.e3)) < 1e-12:
        raise ValueError("degenerate lattice: coincident branch values")
    E = op.E if E is None else E
    for i, a in enumerate(alpha_choices):
        lo, hi = op.admissible_exponents(i)
        if abs(complex(a) - complex(lo)) > 1e-9 and abs(complex(a) - complex(hi)) > 1e-9:
            raise ValueError(f"alpha_choices[{i}] not in {{-l, l+1}}")
    a0, a1, a2, a3 = alpha_choices
    t = heun_t(lat)
    e0p = a1 + 0.5
    e1p = a2 + 0.5
    etp = a3 + 0.5
    ap = (a1 + a2 + a3 + a0) / 2
    bp = (a1 + a2 + a3 + 1 - a0) / 2
    q = q_from_E(lat, alpha_choices, E)
    h = HeunParams(e0p, e1p, etp, ap, bp, q, t)
    return ChartMap(lat, tuple(alpha_choices), h)


def elliptic_transform_params(l, alpha0):
    """Coupling map of the integral transformation: (l, alpha0) -> (l', eta, d).

    alpha0 must lie in {-l0, l0+1}; the eigenvalue E is unchanged by the
    transform.  Half-integer l with odd sum gives integer l' and
    half-integer eta.
    """
    l0, l1, l2, l3 = l
    if abs(complex(alpha0) - complex(-l0)) > 1e-9 and abs(complex(alpha0) - complex(l0 + 1)) > 1e-9:
        raise ValueError("alpha0 not in {-l0, l0+1}")
    half = Fraction(1, 2) if isinstance(alpha0, Fraction) or isinstance(alpha0, int) else 0.5
    lp0 = (-alpha0 - l1 - l2 - l3) / 2 - 1
    lp1 = (alpha0 + l1 - l2 - l3) / 2 - 1
    lp2 = (alpha0 - l1 + l2 - l3) / 2 - 1
    lp3 = (alpha0 - l1 - l2 + l3) / 2 - 1
    eta = (alpha0 - l1 - l2 - l3) / 2
    return (lp0, lp1, lp2, lp3), eta, eta - 2


# ---------------------------------------------------------------------------
# quasi-solvable invariant spaces
# ---------------------------------------------------------------------------


@dataclass
class QSSpace:
    """Invariant space spanned by Phi-hat(wp(x)) wp(x)^n, n = 0..dim-1.

    beta = (b0..b3) are exponent choices with b_i in {-l_i, l_i+1} and
    -sum(b)/2 a nonnegative integer; Phi-hat(z) = prod (z-e_i)^{b_i/2}.
    """

    beta: tuple
    dim: int
    matrix: np.ndarray
    char_poly: CPoly
    eigen: list


def _h_action_rational(op: EllipticOperator, beta):
    """H acting on Phi-hat * p as rational-function coefficients of p'' , p', p.

    Returns (A2, A1, A0): H[Phi p]/Phi = A2 p'' + A1 p' + A0 p in the z
    variable, with z = wp(x).
    """
    lat = op.lattice
    es = (lat.e1, lat.e2, lat.e3)
    one = CPoly.one()
    Q3 = CPoly([1.0 + 0j])
    for e in es:
        Q3 = Q3 * CPoly([-e, 1])
    Q3 = CRatFun(Q3, one)
    dwp2 = CRatFun(CPoly([-lat.g2 / 2, 0, 6]), one)  # wp'' as polynomial in z
    L = None
    for e, b in zip(es, beta[1:]):
        term = CRatFun(CPoly([complex(b) / 2]), CPoly([-e, 1]))
        L = term if L is None else L + term
    if L is None:
        L = CRatFun(CPoly(), one)
    V = CRatFun(CPoly([0, complex(op.coupling(0))]), one)
    for i, e in enumerate(es, start=1):
        c = complex(op.coupling(i))
        if c == 0:
            continue
        others = [x for x in es if x != e]
        D = (e - others[0]) * (e - others[1])
        V = V + CRatFun(CPoly([c * e]), one) + CRatFun(CPoly([c * D]), CPoly([-e, 1]))
    A2 = -4 * Q3
    A1 = -4 * Q3 * (2 * L) - dwp2
    A0 = -4 * Q3 * (L * L + L.deriv()) - dwp2 * L + V
    return A2, A1, A0


def qs_space_spectrum(op: EllipticOperator, beta, x_check: bool = True) -> QSSpace:
    """Characteristic polynomial and eigenfunctions on the invariant space.

    Requires d = -sum(beta)/2 in Z>=0.  The action of H on the monomial
    basis is computed in the z chart; non-polynomial residue terms must
    cancel, which is itself a check that the space is invariant.
    """
    d = near_integer(-sum(complex(b) for b in beta) / 2)
    if d is None or d < 0:
        raise ValueError("-sum(beta)/2 must be a nonnegative integer")
    for i, b in enumerate(beta):
        lo, hi = op.admissible_exponents(i)
        if abs(complex(b) - complex(lo)) > 1e-9 and abs(complex(b) - complex(hi)) > 1e-9:
            raise ValueError(f"beta[{i}] not in {{-l, l+1}}")
    A2, A1, A0 = _h_action_rational(op, beta)
    dim = d + 1
    M = np.zeros((dim, dim), dtype=complex)
    scale = max(1.0, abs(complex(op.lattice.g2))) * 4
    for n in range(dim):
        p = CPoly([0] * n + [1])
        img = A2 * CRatFun.from_poly(p.deriv().deriv()) + A1 * CRatFun.from_poly(p.deriv()) + A0 * CRatFun.from_poly(p)
        quo, rem = img.num.divmod(img.den)
        if not rem.is_zero() and max(abs(complex(c)) for c in rem.coeffs) > 1e-8 * scale ** max(1, dim):
            raise ArithmeticError("space is not invariant: H image leaves the span")
        if quo.degree > d:
            tail = max(abs(complex(c)) for c in quo.coeffs[d + 1 :])
            if tail > 1e-8 * scale ** max(1, dim):
                raise ArithmeticError("space is not invariant: degree grows")
        for m in range(dim):
            M[m, n] = complex(quo.coeffs[m]) if m <= quo.degree else 0.0
    cp = np.poly(M)  # descending, monic
    char_poly = CPoly(list(cp[::-1]))
    evals, evecs = np.linalg.eig(M)
    eigen = [(complex(ev), CPoly(list(evecs[:, k]))) for k, ev in enumerate(evals)]
    if x_check:
        lat = op.lattice
        xs = [0.31 * lat.omega1 + 0.43 * lat.omega3, 0.52 * lat.omega1 + 0.21 * lat.omega3]
        for ev, pol in eigen:
            for x in xs:
                res = _eigen_residual(op, beta, ev, pol, x)
                if res > 1e-9:
                    raise ArithmeticError(f"eigenfunction residual {res:.2e} at E={ev}")
    return QSSpace(tuple(beta), dim, M, char_poly, eigen)


def _eigen_residual(op: EllipticOperator, beta, E, pol: CPoly, x) -> float:
    """|(H - E) f| / scale at x for f = Phi-hat(wp) pol(wp), branch-free form."""
    lat = op.lattice
    z, dz = wp_and_prime(x, lat)
    es = (lat.e1, lat.e2, lat.e3)
    L = sum(complex(b) / 2 / (z - e) for b, e in zip(beta[1:], es))
    Lp = sum(-complex(b) / 2 / (z - e) ** 2 for b, e in zip(beta[1:], es))
    p = complex(pol(z))
    p1 = complex(pol.deriv()(z))
    p2 = complex(pol.deriv().deriv()(z))
    wp2 = 6 * z * z - complex(lat.g2) / 2
    dz2 = dz * dz  # equals 4z^3 - g2 z - g3
    # (Phi p)'' / Phi etc. assembled in x
    u1 = p1 + L * p
    u2 = p2 + 2 * L * p1 + (L * L + Lp) * p
    f_over = p
    fxx_over = u2 * dz2 + u1 * wp2
    V = complex(op.potential(x))
    res = -fxx_over + (V - complex(E)) * f_over
    scale = max(abs(fxx_over), abs(V * f_over), 1.0)
    return abs(res) / scale


# ---------------------------------------------------------------------------
# half-period expansions: the non-logarithmic polynomials P^(i)(E)
# ---------------------------------------------------------------------------

ALWAYS_LOG = "always logarithmic"


def nonlog_poly(op: EllipticOperator, i: int, alpha_convention=None):
    """Monic P^(i)(E) whose roots make x = omega_i non-logarithmic.

    Requires l_i in Z + 1/2; l_i = -1/2 returns the always-logarithmic
    marker.  Computed in the z chart: the non-log condition at omega_i is
    the apparency condition at the matching point of the algebraic form,
    with q linear in E.
    """
    li = op.l[i]
    m2 = near_integer(2 * complex(li))
    if m2 is None or m2 % 2 == 0:
        raise ValueError("no half-integer resonance: l_i not in Z+1/2")
    if near_integer(complex(li) + 0.5) == 0:
        return ALWAYS_LOG
    deg = abs(near_integer(complex(li) + 0.5))
    if alpha_convention is None:
        alpha_choices = tuple(-op.l[j] for j in range(4))
    else:
        alpha_choices = tuple(alpha_convention)
    lat = op.lattice
    chart = algebraic_from_elliptic(op, alpha_choices, E=0.0)
    h0 = chart.heun
    zp = Z_POINT_OF_OMEGA[i]
    point = {INF: INF, 0: 0, 1: 1, "t": h0.t}[zp]
    Pq = apparency_poly(h0, point)
    # q = q0 - E/(4(e2-e1)): compose to get the monic polynomial in E
    slope = -1 / (4 * (lat.e2 - lat.e1))
    q0 = complex(h0.q)
    PE = Pq.compose_linear(slope, q0)
    if PE.degree != deg:
        raise ArithmeticError(f"P^({i}) degree {PE.degree} != |l_i + 1/2| = {deg}")
    return PE.monic()
