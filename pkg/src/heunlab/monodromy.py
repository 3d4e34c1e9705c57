"""Numerical monodromy of second-order Fuchsian equations.

Transfer matrices map (y, y') at a path's start to its end; loops based at
a common point give monodromy matrices in the basis of solutions normalized
to the identity at the base point, for which the transfer matrix and the
analytic-continuation matrix of the function basis coincide.  Paths are
polylines; loops are entered from the base point by a straight leg and
follow a polygonal circle.  Continuation itself is an adaptive RK5(4) run
at rtol 1e-12.

Loop composition order: with the base point placed to the lower left and
the finite singularities ordered left to right, the loop product
M(0) M(1) M(t) M(inf) is the one homotopic to a point; the representation
constructor verifies it.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .heun_core import INF, GeneralFuchsian


# ---------------------------------------------------------------------------
# path utilities and the transfer-matrix integrator
# ---------------------------------------------------------------------------


def segment_clearance(z0, z1, points):
    """Distance from the segment [z0, z1] to the nearest listed point."""
    best = np.inf
    for p in points:
        p = complex(p)
        d = z1 - z0
        if abs(d) == 0:
            best = min(best, abs(p - z0))
            continue
        s = ((p - z0) / d).real
        s = min(1.0, max(0.0, s))
        best = min(best, abs(z0 + s * d - p))
    return best


def _polyline_clear(pts, avoid, clearance) -> bool:
    for a, b in zip(pts[:-1], pts[1:]):
        d = b - a
        if abs(d) == 0:
            continue
        for p in avoid:
            p = complex(p)
            s = ((p - a) / d).real
            if s <= 1e-9 or s >= 1 - 1e-9:
                continue
            if abs(a + s * d - p) < clearance:
                return False
    return True


def route_leg(z0, z1, avoid, clearance):
    """Polyline from z0 to z1 keeping ``clearance`` from the avoid set.

    Detours bulge toward the lower half plane (the side where the base point
    sits in the standard arrangement), which pins the homotopy class of
    every leg; the monodromy product-relation check would catch a wrong
    choice.  Obstacles get one detour point each, placed along the fixed
    normal of the original direction; offsets escalate if needed, with a
    low-road fallback passing below the whole configuration.
    """
    z0, z1 = complex(z0), complex(z1)
    avoid = [complex(p) for p in avoid]
    if _polyline_clear([z0, z1], avoid, clearance):
        return [z0, z1]
    d0 = (z1 - z0) / abs(z1 - z0)
    n0 = 1j * d0
    if n0.imag > 0:
        n0 = -n0
    for scale in (1.7, 2.6, 3.8):
        detours = []
        for p in avoid:
            s = ((p - z0) / (z1 - z0)).real
            if s <= 0 or s >= 1:
                continue
            if abs(z0 + s * (z1 - z0) - p) < scale * clearance:
                detours.append((s, p + scale * clearance * n0))
        pts = [z0] + [w for _, w in sorted(detours, key=lambda sw: sw[0])] + [z1]
        if _polyline_clear(pts, avoid, clearance):
            return pts
    lows = [p.imag for p in avoid] + [z0.imag, z1.imag]
    y_low = min(lows) - 4 * clearance
    pts = [z0, complex(z0.real, y_low), complex(z1.real, y_low), z1]
    if _polyline_clear(pts, avoid, clearance):
        return pts
    raise ValueError("could not route a clear path between singularities")


def loop_waypoints(center, radius, base, n_arc: int = 16, orientation: int = +1, avoid=()):
    """Polyline from base around center (anticlockwise for orientation +1)."""
    center, base = complex(center), complex(base)
    approach = route_leg(base, center, avoid, 0.55 * radius)[:-1]
    u = (approach[-1] - center) / abs(approach[-1] - center)
    entry = center + radius * u
    th0 = cmath.phase(u)
    pts = approach + [entry]
    for k in range(1, n_arc + 1):
        pts.append(center + radius * cmath.exp(1j * (th0 + orientation * 2 * cmath.pi * k / n_arc)))
    pts.extend(reversed(approach))
    return pts


@dataclass
class TransferMatrix:
    """2x2 complex matrix sending (y, y')(start) to (y, y')(end)."""

    matrix: np.ndarray
    start: complex
    end: complex

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


def integrate_system(coeff_fun, waypoints, rtol: float = 1e-12, y0=None):
    """Continue the fundamental system of y'' + a1 y' + a2 y = 0 along a polyline.

    coeff_fun(z) must return (a1(z), a2(z)); y0 is a 2x2 fundamental matrix
    (identity by default) or a single (y, y') column.
    """
    Y = np.eye(2, dtype=complex) if y0 is None else np.asarray(y0, dtype=complex)
    shape = Y.shape
    for z0, z1 in zip(waypoints[:-1], waypoints[1:]):
        z0, z1 = complex(z0), complex(z1)
        dz = z1 - z0
        if dz == 0:
            continue

        def rhs(s, v):
            z = z0 + s * dz
            a1, a2 = coeff_fun(z)
            V = v.reshape(shape)
            out = np.empty_like(V)
            out[0] = V[1] * dz
            out[1] = -(a2 * V[0] + a1 * V[1]) * dz
            return out.reshape(-1)

        sol = solve_ivp(rhs, (0.0, 1.0), Y.reshape(-1), method="RK45", rtol=rtol, atol=1e-14, dense_output=False)
        if not sol.success:
            raise ArithmeticError(f"continuation failed on segment {z0} -> {z1}: {sol.message}")
        Y = sol.y[:, -1].reshape(shape)
    return Y


def integrate_along(eq: GeneralFuchsian, waypoints, rtol: float = 1e-12, clearance: float = None) -> TransferMatrix:
    """Transfer matrix of ``eq`` along the polyline ``waypoints``."""
    pts = [complex(p) for p in eq.sing]
    if clearance is None:
        clearance = 1e-3
    for z0, z1 in zip(waypoints[:-1], waypoints[1:]):
        c = segment_clearance(complex(z0), complex(z1), pts)
        if c < clearance:
            raise ValueError(f"path too close to a singularity near waypoint {z1} (clearance {c:.2e})")

    def coeff(z):
        return eq.a1(z), eq.a2(z)

    Y = integrate_system(coeff, waypoints, rtol=rtol)
    return TransferMatrix(Y, complex(waypoints[0]), complex(waypoints[-1]))


def wronskian_factor(eq: GeneralFuchsian, waypoints, n_nodes: int = 64) -> complex:
    """exp(-int a1 dw) along the path: the predicted transfer determinant."""
    xs, ws = np.polynomial.legendre.leggauss(n_nodes)
    acc = 0j
    for z0, z1 in zip(waypoints[:-1], waypoints[1:]):
        z0, z1 = complex(z0), complex(z1)
        dz = z1 - z0
        mid = (xs + 1) / 2
        for s, w in zip(mid, ws):
            acc += w * eq.a1(z0 + s * dz) * dz / 2
    return cmath.exp(-acc)


# ---------------------------------------------------------------------------
# monodromy representation of a Heun-type equation
# ---------------------------------------------------------------------------


@dataclass
class MonodromyRep:
    """Monodromy matrices at the base point o in the identity-normalized basis."""

    base: complex
    points: tuple
    matrices: dict
    loops: dict

    def matrix(self, p):
        return self.matrices[p]

    def product_residual(self) -> float:
        prod = np.eye(2, dtype=complex)
        for p in list(self.points) + [INF]:
            prod = prod @ self.matrices[p]
        return float(np.max(np.abs(prod - np.eye(2))))


def monodromy_rep(
    eq: GeneralFuchsian,
    base: complex = -0.75 - 0.75j,
    radius_factor: float = 1 / 3.0,
    rtol: float = 1e-13,
    n_arc: int = 16,
    check: bool = True,
) -> MonodromyRep:
    """Monodromy matrices around each finite singularity and infinity.

    Loops are anticlockwise circles of radius min(pairwise gap)*radius_factor
    entered from the base point; the infinity loop is a clockwise circle
    enclosing everything.  The product M(0) M(1) M(t)... M(inf) over the
    stored point order is checked against the identity.
    """
    pts = [complex(p) for p in eq.sing]
    base = complex(base)
    gaps = [abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1 :]]
    radius = min(gaps) * radius_factor
    mats = {}
    loops = {}
    order = sorted(range(len(pts)), key=lambda i: (pts[i].real, pts[i].imag))
    for i, p in enumerate(pts):
        others = [q for q in pts if q != p]
        wp = loop_waypoints(p, radius, base, n_arc=n_arc, avoid=others)
        for z0, z1 in zip(wp[:-1], wp[1:]):
            if segment_clearance(z0, z1, others) < 0.5 * radius:
                raise ValueError(f"loop leg to {p} passes a singularity too closely")
        loops[p] = wp
        mats[p] = integrate_along(eq, wp, rtol=rtol, clearance=0.4 * radius).matrix
    R = 2.0 * max(abs(p - base) for p in pts) + 2.0 + abs(base)
    centroid = sum(pts) / len(pts)
    # big clockwise circle entered radially outward through the base point
    base_out = centroid + (base - centroid) * (R + 1) / abs(base - centroid)
    wp_inf = [base] + loop_waypoints(centroid, R, base_out, n_arc=max(24, n_arc), orientation=-1) + [base]
    mats[INF] = integrate_along(eq, wp_inf, rtol=rtol, clearance=0.4 * radius).matrix
    loops[INF] = wp_inf
    ordered = tuple(pts[i] for i in order)
    rep = MonodromyRep(base, ordered, mats, loops)
    if check:
        res = rep.product_residual()
        if res > 1e-8:
            raise ArithmeticError(f"monodromy product relation fails: residual {res:.2e}")
    return rep


def eigenvalue_residual(mat, expected) -> float:
    """Distance between spectrum(mat) and the expected pair, as multisets."""
    ev = sorted(np.linalg.eigvals(mat), key=lambda z: (z.real, z.imag))
    ex = sorted([complex(x) for x in expected], key=lambda z: (z.real, z.imag))
    d1 = max(abs(a - b) for a, b in zip(ev, ex))
    d2 = max(abs(a - b) for a, b in zip(ev, ex[::-1]))
    return min(d1, d2)


# ---------------------------------------------------------------------------
# transformed-monodromy algebra and trace invariance
# ---------------------------------------------------------------------------


def predicted_monodromy(Ma, Mb, a_dir, b_dir, kappa):
    """Monodromy pair predicted from the source data, in the transform basis.

    Ma, Mb are source monodromy matrices in a basis (y, y2); a_dir and b_dir
    are the coefficient vectors of the solutions holomorphic at the two
    points in that basis (second components must not vanish: a vanishing
    second component means the transformand is holomorphic there and the
    transform is identically zero).  kappa is the transform exponent.
    """
    a1v, a2v = complex(a_dir[0]), complex(a_dir[1])
    b1v, b2v = complex(b_dir[0]), complex(b_dir[1])
    if abs(a2v) < 1e-13 or abs(b2v) < 1e-13:
        raise ValueError("transform vanishes: holomorphic direction has no y-component")
    ph = cmath.exp(2j * cmath.pi * kappa)
    MA = np.array(
        [[ph * (Ma[0, 0] + Ma[1, 1] - 1), Mb[0, 0] - 1 - (a1v / a2v) * Mb[1, 0]], [0, 1]],
        dtype=complex,
    )
    MB = np.array(
        [[1, 0], [ph * (Ma[0, 0] - 1 - (b1v / b2v) * Ma[1, 0]), ph * (Mb[0, 0] + Mb[1, 1] - 1)]],
        dtype=complex,
    )
    return MA, MB


def dependence_indicator(Ma, Mb, kappa) -> complex:
    """Degeneracy detector of the linearly-dependent case.

    Vanishing indicates the two transformed functions may be proportional
    (the algebra then routes through a third point; when no third point is
    independent the verdict is inconclusive).
    """
    ph = cmath.exp(2j * cmath.pi * kappa)
    P = np.asarray(Ma) @ np.asarray(Mb)
    return ph**2 * complex(np.linalg.det(P)) - ph * complex(np.trace(P)) + 1.0


def trace_invariance_check(source_eq, target_eq, phase, pairs, n_range, base=-0.75 - 0.75j, rtol=1e-12):
    """Report |tr((M^a M^b)^n) - phase^n tr((M'^a M'^b)^n)| over pairs and n.

    ``phase`` is exp(-2 pi i eta) for the algebraic-form transform and
    exp(2 pi i kappa2) for the deformed equation; the infinity-pair variant
    uses the reciprocal phase and is reported when a pair contains INF.
    """
    rep_s = monodromy_rep(source_eq, base=base, rtol=rtol)
    rep_t = monodromy_rep(target_eq, base=base, rtol=rtol)
    out = []
    for a, b in pairs:
        pa = INF if a == INF else complex(a)
        pb = INF if b == INF else complex(b)
        ph = phase if INF not in (pa, pb) else 1.0 / phase
        Ps = rep_s.matrix(pa) @ rep_s.matrix(pb)
        Pt = rep_t.matrix(pa) @ rep_t.matrix(pb)
        for n in n_range:
            ts = np.trace(np.linalg.matrix_power(Ps, n)) if n >= 0 else np.trace(np.linalg.matrix_power(np.linalg.inv(Ps), -n))
            tt = np.trace(np.linalg.matrix_power(Pt, n)) if n >= 0 else np.trace(np.linalg.matrix_power(np.linalg.inv(Pt), -n))
            out.append(((a, b), n, abs(tt - ph**n * ts), complex(tt), complex(ts)))
    return out


# ---------------------------------------------------------------------------
# period-shift monodromy of the elliptical representation
# ---------------------------------------------------------------------------


class PeriodPotentialCache:
    """Chebyshev panels of the potential along a fixed period segment.

    The potential along x0 + s*T (s in [0, 1]) is analytic, so a modest
    panel/degree budget reaches full precision; each trace evaluation then
    avoids theta series in the integrator's inner loop.
    """

    def __init__(self, op, x0, T, panels: int = 24, degree: int = 20):
        self.x0 = complex(x0)
        self.T = complex(T)
        self.panels = panels
        self.coeffs = []
        k = np.arange(degree + 1)
        nodes = np.cos(np.pi * (k + 0.5) / (degree + 1))
        Tmat = np.cos(np.outer(np.arange(degree + 1), np.arccos(nodes)))
        for p in range(panels):
            lo, hi = p / panels, (p + 1) / panels
            ss = lo + (nodes + 1) / 2 * (hi - lo)
            vals = np.array([op.potential(self.x0 + s * self.T) for s in ss])
            co = 2.0 / (degree + 1) * (Tmat @ vals)
            co[0] /= 2
            self.coeffs.append(co)

    def __call__(self, s: float) -> complex:
        p = min(int(s * self.panels), self.panels - 1)
        lo, hi = p / self.panels, (p + 1) / self.panels
        u = 2 * (s - lo) / (hi - lo) - 1
        co = self.coeffs[p]
        bk1 = bk2 = 0.0 + 0j
        for c in co[:0:-1]:
            bk1, bk2 = c + 2 * u * bk1 - bk2, bk1
        return co[0] + u * bk1 - bk2


def _default_shift_base(lat, k: int):
    return 0.5 * lat.omega3 if k == 1 else 0.5 * lat.omega1


def shift_monodromy_matrix(op, E, k: int, rtol: float = 1e-12, cache: PeriodPotentialCache = None):
    """Direct x-plane monodromy matrix of -f'' + (V - E) f = 0 for the
    period shift x -> x + 2 w_k, in the basis normalized at the strip base."""
    lat = op.lattice
    T = 2 * (lat.omega1 if k == 1 else lat.omega3)
    x0 = _default_shift_base(lat, k)
    if cache is None:
        cache = PeriodPotentialCache(op, x0, T)

    def rhs(s, v):
        V = cache(s)
        Y = v.reshape(2, 2)
        out = np.empty_like(Y)
        out[0] = Y[1] * T
        out[1] = (V - E) * Y[0] * T
        return out.reshape(-1)

    sol = solve_ivp(rhs, (0.0, 1.0), np.eye(2, dtype=complex).reshape(-1), method="RK45",
                    rtol=rtol, atol=1e-14, vectorized=False)
    if not sol.success:
        raise ArithmeticError("period-shift integration failed")
    Y = sol.y[:, -1].reshape(2, 2)
    return Y


def shift_monodromy(op, E, k: int, route: str = "x", rtol: float = 1e-12, cache=None):
    """Trace (and matrix, x-route) of the period-shift monodromy.

    route 'x': integrate the Schroedinger form along the period segment.
    route 'z': transport to the algebraic form; the shift by 2 w_1
    corresponds to the composite loop around t then 1 (2 w_3: around 0
    then 1), with the half-exponent gauge contributing the phase
    exp(i pi (a'_2 + a'_3)) (resp. exp(i pi (a'_1 + a'_2))).
    """
    if route == "x":
        Y = shift_monodromy_matrix(op, E, k, rtol=rtol, cache=cache)
        return complex(np.trace(Y)), Y
    if route != "z":
        raise ValueError("route must be 'x' or 'z'")
    from .elliptic_rep import algebraic_from_elliptic, heun_t

    lat = op.lattice
    choices = tuple(-op.l[i] for i in range(4))
    chart = algebraic_from_elliptic(op, choices, E=E)
    h = chart.heun
    eq = _heun_eq(h)
    rep = monodromy_rep(eq, rtol=max(rtol * 0.1, 2.4e-14))
    t = complex(heun_t(lat))
    a0p, a1p, a2p, a3p = [complex(a) for a in choices]
    if k == 1:
        comp = rep.matrix(t) @ rep.matrix(1 + 0j)
        phase = cmath.exp(1j * cmath.pi * (a2p + a3p))
    else:
        comp = rep.matrix(0j) @ rep.matrix(1 + 0j)
        phase = cmath.exp(1j * cmath.pi * (a1p + a2p))
    return phase * complex(np.trace(comp)), comp


def _heun_eq(h):
    from .heun_core import heun_to_fuchsian

    return heun_to_fuchsian(h)


def elliptic_trace_invariance(lp, alpha_choices, E, lat, ks=(1, 3), rtol: float = 1e-12):
    """Report of |tr M^(l') - tr M^(target)| for the coupling transform.

    target couplings are alpha'_i + d with d = -sum(alpha')/2; the
    eigenvalue E is shared.  Uses the direct x-route on both operators.
    """
    from .elliptic_rep import EllipticOperator

    d = -sum(alpha_choices) / 2
    target = tuple(a + d for a in alpha_choices)
    op_s = EllipticOperator(lp, lat, E=E)
    op_t = EllipticOperator(target, lat, E=E)
    out = []
    for k in ks:
        tr_s, _ = shift_monodromy(op_s, E, k, rtol=rtol)
        tr_t, _ = shift_monodromy(op_t, E, k, rtol=rtol)
        out.append((k, abs(tr_s - tr_t), tr_s, tr_t))
    return out
