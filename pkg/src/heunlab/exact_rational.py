"""Exact-rational half-period machinery on rational (g2, g3).

The branch values e_i are algebraic (roots of y^3 - (g2/4) y - (g3/4)), so
half-period expansions are carried out over Q[e]/(cubic) with Fraction
coefficients; sums over the remaining roots reduce by power sums, and the
product of the conjugate non-log factors is a Sylvester resultant.  Single
half-period site quadruples (m,0,0,0) additionally admit an exact spectral
curve: the product-equation ansatz collapses to polynomials in wp whose
coefficient system is solved by Cramer minors over Q[E].

These routines back the exact factorization identity; everything here is
independent of the floating-point collocation route, so agreement between
the two is a genuine cross-check.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import CPoly, poly_det, poly_gcd, poly_resultant

# ---------------------------------------------------------------------------
# the cubic quotient ring Q[e]/(e^3 - (g2/4) e - (g3/4))
# ---------------------------------------------------------------------------


class Cubic:
    """Element a + b e + c e^2 with e^3 = (g2/4) e + (g3/4), Fractions."""

    __slots__ = ("v", "g2", "g3")

    def __init__(self, v, g2, g3):
        self.v = tuple(Fraction(x) for x in v)
        self.g2 = Fraction(g2)
        self.g3 = Fraction(g3)

    @staticmethod
    def const(x, g2, g3):
        return Cubic((x, 0, 0), g2, g3)

    @staticmethod
    def gen(g2, g3):
        return Cubic((0, 1, 0), g2, g3)

    def __add__(self, o):
        if not isinstance(o, Cubic):
            o = Cubic.const(o, self.g2, self.g3)
        return Cubic(tuple(a + b for a, b in zip(self.v, o.v)), self.g2, self.g3)

    __radd__ = __add__

    def __neg__(self):
        return Cubic(tuple(-a for a in self.v), self.g2, self.g3)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Cubic):
            return Cubic(tuple(a * Fraction(o) for a in self.v), self.g2, self.g3)
        raw = [Fraction(0)] * 5
        for i, a in enumerate(self.v):
            for j, b in enumerate(o.v):
                raw[i + j] += a * b
        # reduce e^3 and e^4
        q, c = self.g2 / 4, self.g3 / 4
        raw[1] += raw[3] * q
        raw[0] += raw[3] * c
        raw[2] += raw[4] * q
        raw[1] += raw[4] * c
        return Cubic(raw[:3], self.g2, self.g3)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Cubic(tuple(a / Fraction(o) for a in self.v), self.g2, self.g3)

    def __eq__(self, o):
        if isinstance(o, Cubic):
            return self.v == o.v
        return self.v == (Fraction(o), 0, 0)

    def __complex__(self):
        raise TypeError("Cubic is symbolic; substitute a root first")

    def __repr__(self):
        return f"Cubic{self.v}"

    def is_rational(self):
        return self.v[1] == 0 and self.v[2] == 0

    def subs(self, e):
        return self.v[0] + self.v[1] * e + self.v[2] * e * e


# ---------------------------------------------------------------------------
# exact local expansions of wp
# ---------------------------------------------------------------------------


def wp_origin_series(g2, g3, K: int):
    """c_k with wp(s) = s^-2 + sum_{k>=1} c_k s^{2k} (c_0 := 0 slot unused)."""
    g2, g3 = Fraction(g2), Fraction(g3)
    c = [Fraction(0), g2 / 20, g3 / 28]
    for k in range(3, K + 1):
        acc = Fraction(0)
        for m in range(1, k - 1):
            acc += c[m] * c[k - 1 - m]
        c.append(Fraction(3, (2 * k + 3) * (k - 2)) * acc)
    return c[: K + 1]


def wp_halfperiod_series(g2, g3, K: int):
    """a_k as polynomials in e: wp(w_i + s) = e_i + sum_{k>=1} a_k(e_i) s^{2k}.

    Returned as CPoly in the variable e with Fraction coefficients.
    """
    g2 = Fraction(g2)
    a = [CPoly([Fraction(0)]), CPoly([-g2 / 4, Fraction(0), Fraction(3)])]
    for k in range(2, K + 1):
        acc = CPoly()
        for i in range(1, k - 1):
            acc = acc + a[i] * a[k - 1 - i]
        term = 6 * acc + 12 * (CPoly([Fraction(0), Fraction(1)]) * a[k - 1])
        a.append(term / Fraction(2 * k * (2 * k - 1)))
    return a[: K + 1]


def _pair_power_sums(g2, g3, M: int):
    """Power sums of the other two roots, as Cubic elements in e = e_i.

    They solve y^2 + e y + (e^2 - g2/4) = 0.
    """
    e = Cubic.gen(g2, g3)
    s1 = -e
    s2 = e * e - Cubic.const(Fraction(g2) / 4, g2, g3)
    p = [Cubic.const(2, g2, g3), s1]
    for _ in range(2, M + 1):
        p.append(s1 * p[-1] - s2 * p[-2])
    return p


def _all_power_sums(g2, g3, M: int):
    """Power sums of all three roots (rational)."""
    g2, g3 = Fraction(g2), Fraction(g3)
    p = [Fraction(3), Fraction(0), g2 / 2, 3 * g3 / 4]
    for _ in range(4, M + 1):
        p.append(g2 / 4 * p[-2] + g3 / 4 * p[-3])
    return p[: M + 1]


def _eval_poly_sum(poly: CPoly, psums):
    """sum over roots of poly(e), given power sums of those roots."""
    acc = None
    for m, co in enumerate(poly.coeffs):
        term = co * psums[m]
        acc = term if acc is None else acc + term
    if acc is None:
        return Fraction(0)
    return acc


def halfint_nonlog_poly_exact(l, g2, g3, i: int) -> list:
    """Monic non-log polynomial at omega_i, exact over Q[e_i] (or Q for i=0).

    Requires l_i in Z+1/2 (not -1/2) and the two remaining finite-site
    couplings equal (i >= 1) or all three equal (i = 0), which keeps the
    expansion coefficients symmetric in the unused roots.  Returns the
    ascending coefficient list; entries are Fractions for i = 0 and Cubic
    elements in e_i otherwise.
    """
    l = [Fraction(x) for x in l]
    g2, g3 = Fraction(g2), Fraction(g3)
    li = l[i]
    if (2 * li).denominator != 1 or li.denominator != 2:
        raise ValueError("l_i must lie in Z + 1/2")
    if li == Fraction(-1, 2):
        raise ValueError("l_i = -1/2 is always logarithmic")
    nstar = abs(li + Fraction(1, 2))
    assert nstar.denominator == 1
    nstar = int(nstar)
    j0 = -nstar + Fraction(1, 2)
    K = nstar + 1
    couplings = [x * (x + 1) for x in l]

    if i == 0:
        if not (l[1] == l[2] == l[3]):
            raise ValueError("exact route needs equal couplings at the three half-periods")
        corg = wp_origin_series(g2, g3, K)
        ahp = wp_halfperiod_series(g2, g3, K)
        ps = _all_power_sums(g2, g3, max(p.degree for p in ahp if not p.is_zero()) + 1)
        W = []
        for k in range(K + 1):
            wk = couplings[0] * corg[k] if k >= 1 else Fraction(0)
            wk += couplings[1] * _eval_poly_sum(ahp[k], ps)
            if k == 0:
                wk += couplings[1] * Fraction(0)  # the constant e-sum is p_1 = 0
            W.append(wk)
        # constant term k=0: sum of e_j over the three sites = 0; origin site none
        W[0] = couplings[1] * ps[1] * 1 + Fraction(0)
        ring_zero = Fraction(0)
        ring_one = Fraction(1)
        pole_coupling = couplings[0]
    else:
        others = [j for j in (1, 2, 3) if j != i]
        if l[others[0]] != l[others[1]]:
            raise ValueError("exact route needs equal couplings at the two remaining half-periods")
        corg = wp_origin_series(g2, g3, K)
        ahp = wp_halfperiod_series(g2, g3, K)
        maxdeg = max((p.degree for p in ahp if not p.is_zero()), default=0)
        pp = _pair_power_sums(g2, g3, maxdeg + 1)
        e = Cubic.gen(g2, g3)
        W = []
        c_other = couplings[others[0]]
        for k in range(K + 1):
            wk = Cubic.const(0, g2, g3)
            if k >= 1:
                wk = wk + Cubic.const(couplings[i] * corg[k], g2, g3)
            # site 0 contributes wp(w_i + s): polynomial a_k at e_i
            val0 = Cubic.const(0, g2, g3)
            for m, co in enumerate(ahp[k].coeffs):
                val0 = val0 + Cubic.const(co, g2, g3) * _cubic_pow(e, m)
            if k == 0:
                val0 = e  # wp(w_i) = e_i
            wk = wk + couplings[0] * val0
            # the two remaining sites: symmetric sum over the other roots
            if k == 0:
                wk = wk + c_other * (-e)  # e_j + e_k = -e_i
            else:
                wk = wk + c_other * _eval_poly_sum(ahp[k], pp)
            W.append(wk)
        ring_zero = Cubic.const(0, g2, g3)
        ring_one = Cubic.const(1, g2, g3)
        pole_coupling = couplings[i]

    # Frobenius-type recursion on f = sum ct_n s^{j0 + 2n}:
    # F(n) ct_n + sum_{k=0}^{n-1} (W_k - E [k=0]) ct_{n-1-k} = 0
    def F(n):
        idx = j0 + 2 * n
        return pole_coupling - idx * (idx - 1)

    Epoly = CPoly([ring_zero, ring_one])
    ct = [CPoly([ring_one])]
    for n in range(1, nstar):
        acc = CPoly()
        for k in range(0, n):
            co = CPoly([W[k]]) + (Epoly * (-1) if k == 0 else CPoly())
            acc = acc + co * ct[n - 1 - k]
        ct.append(acc * (-1) / F(n))
    bracket = CPoly()
    for k in range(0, nstar):
        co = CPoly([W[k]]) + (Epoly * (-1) if k == 0 else CPoly())
        bracket = bracket + co * ct[nstar - 1 - k]
    if bracket.degree != nstar:
        raise ArithmeticError("unexpected degree of the non-log condition")
    lead = bracket.coeffs[-1]
    if isinstance(lead, Cubic):
        if not lead.is_rational():
            raise ArithmeticError("leading coefficient unexpectedly irrational")
        lead = lead.v[0]
    return [c / lead for c in bracket.coeffs]


def _cubic_pow(x: Cubic, m: int) -> Cubic:
    out = Cubic.const(1, x.g2, x.g3)
    for _ in range(m):
        out = out * x
    return out


def conjugate_product(coeffs, g2, g3) -> CPoly:
    """prod over the three roots e_i of P(E; e_i), for Cubic-coefficient P.

    Computed as a Sylvester resultant in e against the monic cubic; the
    result is normalized monic (the raw resultant differs by a rational
    scale depending on conventions).
    """
    g2, g3 = Fraction(g2), Fraction(g3)
    deg_e = 0
    for c in coeffs:
        if isinstance(c, Cubic):
            for d in (2, 1):
                if c.v[d] != 0:
                    deg_e = max(deg_e, d)
    # P as a polynomial in e with CPoly-in-E coefficients
    pe = []
    for d in range(deg_e + 1):
        pe.append(CPoly([
            (c.v[d] if isinstance(c, Cubic) else (Fraction(c) if d == 0 else Fraction(0)))
            for c in coeffs
        ]))
    cubic = [CPoly([-g3 / 4]), CPoly([-g2 / 4]), CPoly([Fraction(0)]), CPoly([Fraction(1)])]
    if deg_e == 0:
        return (pe[0] * pe[0] * pe[0]).monic()
    res = poly_resultant(cubic, pe)
    return res.monic()


# ---------------------------------------------------------------------------
# exact spectral curve for single-site quadruples (m, 0, 0, 0)
# ---------------------------------------------------------------------------


def _lp_basis_rows(m: int, g2: Fraction, g3: Fraction):
    """Rows of the product-equation operator on the ansatz, over Q[E].

    Ansatz Xi = c0 + sum_{j} b_j wp^{m-j}; L[Xi]/wp' is a polynomial in wp
    whose wp^r coefficient is linear in the unknowns (c0, b_0..b_{m-1})
    with CPoly-in-E entries.  Returns the matrix rows[r][col].
    """
    cpl = Fraction(m * (m + 1))
    ncols = m + 1  # c0 then b_0..b_{m-1} multiplying wp^m..wp^1
    maxr = m + 2
    rows = [[CPoly() for _ in range(ncols)] for _ in range(maxr + 1)]

    def add(r, col, poly_in_E):
        if 0 <= r:
            rows[r][col] = rows[r][col] + poly_in_E

    one = CPoly([Fraction(1)])
    E = CPoly([Fraction(0), Fraction(1)])
    # c0 column: L[1]/wp' = -2 V'/wp' = -2 cpl
    add(0, 0, one * (-2 * cpl))
    for j in range(m):
        k = m - j
        col = 1 + j
        kq = Fraction(k)
        # wp^k''' / wp' = k(k-1)(k-2) wp^{k-3}(4wp^3-g2 wp-g3) + 3k(k-1) wp^{k-2}(6wp^2-g2/2) + 12k wp^k
        c3 = kq * (k - 1) * (k - 2)
        add(k, col, one * (4 * c3 + 18 * kq * (k - 1) + 12 * kq))
        add(k - 2, col, one * (-(g2 * c3) - Fraction(3, 2) * g2 * kq * (k - 1)))
        add(k - 3, col, one * (-(g3 * c3)))
        # -4 (cpl wp - E) * k wp^{k-1}
        add(k, col, one * (-4 * cpl * kq))
        add(k - 1, col, E * (4 * kq))
        # -2 cpl wp^k
        add(k, col, one * (-2 * cpl))
    return rows


def exact_single_site_curve(m: int, g2, g3):
    """(c0, b, Q): exact spectral data of the quadruple (m, 0, 0, 0).

    Null vector by Cramer minors over Q[E], verified against every row;
    Q from the quadratic expression, with the strong check that all
    positive wp-powers cancel identically.
    """
    g2, g3 = Fraction(g2), Fraction(g3)
    if m == 0:
        return CPoly([Fraction(1)]), [], CPoly([Fraction(0), Fraction(1)])
    rows = _lp_basis_rows(m, g2, g3)
    ncols = m + 1
    candidates = None
    import itertools

    for subset in itertools.combinations(range(len(rows)), ncols - 1):
        sub = [rows[r] for r in subset]
        vec = []
        sign = 1
        for col in range(ncols):
            minor = [[row[c] for c in range(ncols) if c != col] for row in sub]
            d = poly_det(minor) if minor and minor[0] else CPoly()
            vec.append(d * sign)
            sign = -sign
        if all(v.is_zero() for v in vec):
            continue
        ok = True
        for row in rows:
            acc = CPoly()
            for c in range(ncols):
                acc = acc + row[c] * vec[c]
            if not acc.is_zero():
                ok = False
                break
        if ok:
            candidates = vec
            break
    if candidates is None:
        raise ArithmeticError("no exact null vector found for the product equation")
    g = poly_gcd(candidates[0], candidates[1]) if len(candidates) > 1 else candidates[0].monic()
    for v in candidates[2:]:
        g = poly_gcd(g, v)
    vec = []
    for v in candidates:
        q, r = v.divmod(g)
        assert r.is_zero()
        vec.append(q)
    lead = vec[0].coeffs[-1]
    vec = [v / lead for v in vec]
    c0 = vec[0]
    b = vec[1:]  # b[j] multiplies wp^{m-j}

    # Xi as a polynomial in wp over Q[E]
    xi = [CPoly() for _ in range(m + 1)]
    xi[0] = c0
    for j in range(m):
        xi[m - j] = b[j]

    def pmul(A, B):
        out = [CPoly() for _ in range(len(A) + len(B) - 1)]
        for ia, a in enumerate(A):
            for ib, bb in enumerate(B):
                out[ia + ib] = out[ia + ib] + a * bb
        return out

    def pscale(A, s):
        return [a * s for a in A]

    def padd(A, B):
        n = max(len(A), len(B))
        return [(A[i] if i < len(A) else CPoly()) + (B[i] if i < len(B) else CPoly()) for i in range(n)]

    def pderiv_wp(A):  # d/dwp
        return [A[i] * Fraction(i) for i in range(1, len(A))] or [CPoly()]

    one = CPoly([Fraction(1)])
    E = CPoly([Fraction(0), Fraction(1)])
    dp2 = [one * (-g3), one * (-g2), CPoly(), one * 4]  # wp'^2
    ddp = [one * (-g2 / 2), CPoly(), one * 6]  # wp''
    cpl = Fraction(m * (m + 1))
    V = [CPoly(), one * cpl]
    xi1 = pderiv_wp(xi)
    xi2 = pderiv_wp(xi1)
    # Q = Xi^2 (E - V) + (1/2) Xi Xi'' - (1/4) (Xi')^2
    EminusV = padd([E], pscale(V, Fraction(-1)))
    term1 = pmul(pmul(xi, xi), EminusV)
    xi_xx = padd(pmul(xi2, dp2), pmul(xi1, ddp))
    term2 = pscale(pmul(xi, xi_xx), Fraction(1, 2))
    term3 = pscale(pmul(pmul(xi1, xi1), dp2), Fraction(-1, 4))
    Q = padd(padd(term1, term2), term3)
    for r in range(1, len(Q)):
        if not Q[r].is_zero():
            raise ArithmeticError("exact spectral expression failed to collapse")
    return c0, b, Q[0].monic()
