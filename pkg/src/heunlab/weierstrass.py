"""Weierstrass elliptic kernel: sigma, zeta, wp, wp', co-sigma, Phi_i.

Everything is evaluated through the Jacobi theta-1 q-series with nome
q = exp(i*pi*omega3/omega1), truncated when terms fall below 1e-17
relative.  Arguments are first reduced to the fundamental cell and the
quasi-periodicity factors are re-applied, so accuracy is uniform over the
plane.  The derived quantities stored on a Lattice are

    e_k = wp(omega_k),  eta_k = zeta(omega_k),  g2, g3,

with omega0 = 0 and omega2 = -omega1 - omega3.  eta2 is not stored; it
follows from eta1 + eta2 + eta3 = 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

_TRUNC = 1e-17
_NMAX = 64


def _theta1_block(u: complex, iptau: complex):
    """theta1 and its first three u-derivatives at u, nome exp(iptau)."""
    t0 = t1 = t2 = t3 = 0.0 + 0.0j
    scale = 0.0
    for n in range(_NMAX):
        m = 2 * n + 1
        lg = iptau * (n + 0.5) ** 2
        ep = cmath.exp(lg + 1j * m * u)
        em = cmath.exp(lg - 1j * m * u)
        s = (ep - em) / 2j
        c = (ep + em) / 2
        sgn = -1.0 if n % 2 else 1.0
        t0 += 2 * sgn * s
        t1 += 2 * sgn * m * c
        t2 -= 2 * sgn * m * m * s
        t3 -= 2 * sgn * m * m * m * c
        mag = m**3 * (abs(ep) + abs(em))
        scale = max(scale, mag)
        if mag < _TRUNC * scale and n >= 2:
            break
    return t0, t1, t2, t3


@dataclass(frozen=True)
class Lattice:
    """Period lattice with half-periods omega1, omega3, Im(omega3/omega1) > 0."""

    omega1: complex
    omega3: complex
    tau: complex = field(repr=False)
    eta1: complex = field(repr=False)
    eta3: complex = field(repr=False)
    e1: complex = field(repr=False)
    e2: complex = field(repr=False)
    e3: complex = field(repr=False)
    g2: complex = field(repr=False)
    g3: complex = field(repr=False)

    @property
    def omega2(self) -> complex:
        return -self.omega1 - self.omega3

    @property
    def eta2(self) -> complex:
        return -self.eta1 - self.eta3

    def half_period(self, i: int) -> complex:
        return (0, self.omega1, self.omega2, self.omega3)[i]

    def eta(self, i: int) -> complex:
        return (0, self.eta1, self.eta2, self.eta3)[i]

    def e(self, i: int) -> complex:
        return (None, self.e1, self.e2, self.e3)[i]

    def reduce(self, x: complex):
        """x = x_red + 2m*omega1 + 2n*omega3 with x_red in the centered cell."""
        w1, w3 = self.omega1, self.omega3
        det = 4 * (w1.real * w3.imag - w1.imag * w3.real)
        a = 2 * (w3.imag * x.real - w3.real * x.imag) / det
        b = 2 * (-w1.imag * x.real + w1.real * x.imag) / det
        m, n = round(a), round(b)
        return x - 2 * m * w1 - 2 * n * w3, m, n


def _theta_at(lat: Lattice, x: complex):
    u = cmath.pi * x / (2 * lat.omega1)
    return _theta1_block(u, 1j * cmath.pi * lat.tau)


def lattice_new(omega1: complex, omega3: complex) -> Lattice:
    """Build a Lattice, normalizing Im(omega3/omega1) > 0.

    Raises for degenerate (real-proportional) period pairs.  The Legendre
    relation eta1*omega3 - eta3*omega1 = i*pi/2 is validated to 1e-10 as a
    consistency check on the independent zeta evaluations.
    """
    omega1 = complex(omega1)
    omega3 = complex(omega3)
    if omega1 == 0 or omega3 == 0:
        raise ValueError("degenerate lattice: zero half-period")
    tau = omega3 / omega1
    if abs(tau.imag) < 1e-12:
        raise ValueError("degenerate lattice: collinear periods")
    if tau.imag < 0:
        omega3 = -omega3
        tau = -tau
    iptau = 1j * cmath.pi * tau
    _, d1, _, d3 = _theta1_block(0.0, iptau)
    eta1 = -(cmath.pi**2) / (12 * omega1) * (d3 / d1)

    def _zeta_raw(x):
        t0, t1, _, _ = _theta1_block(cmath.pi * x / (2 * omega1), iptau)
        return eta1 * x / omega1 + cmath.pi / (2 * omega1) * (t1 / t0)

    def _wp_raw(x):
        t0, t1, t2, _ = _theta1_block(cmath.pi * x / (2 * omega1), iptau)
        ll = t1 / t0
        return -eta1 / omega1 - (cmath.pi / (2 * omega1)) ** 2 * (t2 / t0 - ll * ll)

    eta3 = _zeta_raw(omega3)
    e1 = _wp_raw(omega1)
    e2 = _wp_raw(omega1 + omega3)  # omega2 mod the period lattice
    e3 = _wp_raw(omega3)
    esum = abs(e1 + e2 + e3)
    scale = max(abs(e1), abs(e2), abs(e3), 1.0)
    if esum > 1e-11 * scale:
        raise ArithmeticError(f"e1+e2+e3 = {esum:.2e}, series inconsistent")
    g2 = 2 * (e1 * e1 + e2 * e2 + e3 * e3)
    g3 = 4 * e1 * e2 * e3
    if abs(g2**3 - 27 * g3**2) < 1e-12 * max(abs(g2) ** 3, 1.0):
        raise ValueError("degenerate lattice: vanishing discriminant")
    legendre = eta1 * omega3 - eta3 * omega1 - 1j * cmath.pi / 2
    if abs(legendre) > 1e-10:
        raise ArithmeticError(f"Legendre relation residual {abs(legendre):.2e}")
    return Lattice(omega1, omega3, tau, eta1, eta3, e1, e2, e3, g2, g3)


def _check_pole(lat: Lattice, xred: complex):
    if abs(xred) < 1e-12 * max(abs(lat.omega1), abs(lat.omega3)):
        raise ZeroDivisionError("pole: argument at a lattice point")


def wp(x: complex, lat: Lattice) -> complex:
    xred, _, _ = lat.reduce(complex(x))
    _check_pole(lat, xred)
    t0, t1, t2, _ = _theta_at(lat, xred)
    ll = t1 / t0
    return -lat.eta1 / lat.omega1 - (cmath.pi / (2 * lat.omega1)) ** 2 * (t2 / t0 - ll * ll)


def wp_prime(x: complex, lat: Lattice) -> complex:
    xred, _, _ = lat.reduce(complex(x))
    _check_pole(lat, xred)
    t0, t1, t2, t3 = _theta_at(lat, xred)
    ll = t1 / t0
    lpp = t3 / t0 - 3 * ll * (t2 / t0) + 2 * ll**3
    return -((cmath.pi / (2 * lat.omega1)) ** 3) * lpp


def wp_and_prime(x: complex, lat: Lattice):
    """(wp, wp') in one theta evaluation; used by ODE right-hand sides."""
    xred, _, _ = lat.reduce(complex(x))
    _check_pole(lat, xred)
    t0, t1, t2, t3 = _theta_at(lat, xred)
    ll = t1 / t0
    w = -lat.eta1 / lat.omega1 - (cmath.pi / (2 * lat.omega1)) ** 2 * (t2 / t0 - ll * ll)
    lpp = t3 / t0 - 3 * ll * (t2 / t0) + 2 * ll**3
    return w, -((cmath.pi / (2 * lat.omega1)) ** 3) * lpp


def zeta_fn(x: complex, lat: Lattice) -> complex:
    xred, m, n = lat.reduce(complex(x))
    _check_pole(lat, xred)
    t0, t1, _, _ = _theta_at(lat, xred)
    val = lat.eta1 * xred / lat.omega1 + cmath.pi / (2 * lat.omega1) * (t1 / t0)
    return val + 2 * m * lat.eta1 + 2 * n * lat.eta3


def sigma(x: complex, lat: Lattice) -> complex:
    x = complex(x)
    xred, m, n = lat.reduce(x)
    t0, d1, _, _ = _theta1_block(0.0, 1j * cmath.pi * lat.tau)
    th, _, _, _ = _theta_at(lat, xred)
    base = 2 * lat.omega1 / cmath.pi * cmath.exp(lat.eta1 * xred**2 / (2 * lat.omega1)) * th / d1
    if m == 0 and n == 0:
        return base
    omega = 2 * m * lat.omega1 + 2 * n * lat.omega3
    eta = 2 * m * lat.eta1 + 2 * n * lat.eta3
    sign = -1.0 if (m * n + m + n) % 2 else 1.0
    return sign * cmath.exp(eta * (xred + omega / 2)) * base


def co_sigma(i: int, x: complex, lat: Lattice) -> complex:
    """sigma_i, normalized so sigma_i(0) = 1; zero at omega_i (i = 1, 2, 3)."""
    if i not in (1, 2, 3):
        raise ValueError("co-sigma index must be 1, 2, or 3")
    wi = lat.half_period(i)
    etai = lat.eta(i)
    return cmath.exp(-etai * complex(x)) * sigma(x + wi, lat) / sigma(wi, lat)


def phi_i(i: int, x: complex, alpha: complex, lat: Lattice) -> complex:
    """Building block sigma(x+omega_i-alpha)/sigma(x+omega_i) * exp(zeta(alpha) x)."""
    red, _, _ = lat.reduce(complex(alpha))
    if abs(red) < 1e-12 * max(abs(lat.omega1), abs(lat.omega3)):
        raise ValueError("translation parameter at a lattice point")
    wi = lat.half_period(i)
    za = zeta_fn(alpha, lat)
    return sigma(x + wi - alpha, lat) / sigma(x + wi, lat) * cmath.exp(za * complex(x))
