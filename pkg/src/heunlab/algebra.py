"""Complex polynomial and rational-function arithmetic.

Dense polynomials are stored as ascending coefficient lists.  Coefficients
may be binary64 complex numbers or exact ``fractions.Fraction`` scalars; the
arithmetic is generic, so recursion-heavy callers (Frobenius expansions,
apparency polynomials) get exact results whenever their inputs are rational.
Root finding goes through the companion matrix with Newton polishing.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

TRIM_RTOL = 1e-13


def _is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def _abs2(x) -> float:
    x = complex(x)
    return x.real * x.real + x.imag * x.imag


def _div(x, y):
    """Division that stays exact on exact operands (int/int would give float)."""
    if _is_exact(x) and _is_exact(y):
        return Fraction(x) / Fraction(y)
    return x / y


class CPoly:
    """Dense univariate polynomial, ascending coefficients.

    The zero polynomial is the empty coefficient list.  Trailing
    coefficients below ``TRIM_RTOL`` relative to the largest one are
    trimmed on construction; exact coefficients are only trimmed when
    identically zero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        if c and all(_is_exact(x) for x in c):
            while c and c[-1] == 0:
                c.pop()
        elif c:
            try:
                scale = max(abs(complex(x)) for x in c)
            except TypeError:
                # ring-element coefficients (e.g. algebraic numbers): trim
                # only exact zeros
                while c and c[-1] == 0:
                    c.pop()
                self.coeffs = c
                return
            if scale == 0.0:
                c = []
            else:
                while c and abs(complex(c[-1])) <= TRIM_RTOL * scale:
                    c.pop()
        self.coeffs = c

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return bool(self.coeffs) and all(_is_exact(x) for x in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"CPoly({self.coeffs!r})"

    @staticmethod
    def one():
        return CPoly([1])

    @staticmethod
    def x():
        return CPoly([0, 1])

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [0] * (n - len(self.coeffs))
        b = other.coeffs + [0] * (n - len(other.coeffs))
        return CPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return CPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return CPoly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, CPoly):
            return CPoly([other * x for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return CPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return CPoly([_div(x, scalar) for x in self.coeffs])

    def scale(self, s):
        return CPoly([x * s for x in self.coeffs])

    def shift(self, k: int):
        """Multiply by x**k."""
        if self.is_zero():
            return CPoly()
        return CPoly([0] * k + self.coeffs)

    def divmod(self, other: "CPoly"):
        """Polynomial division; exact for exact coefficients."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        q = [0] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.coeffs
        while len(rem) >= len(d):
            k = len(rem) - len(d)
            f = _div(rem[-1], d[-1])
            q[k] = f
            for i, b in enumerate(d):
                rem[k + i] -= f * b
            rem.pop()
        return CPoly(q), CPoly(rem)

    def monic(self) -> "CPoly":
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        lead = self.coeffs[-1]
        return CPoly([_div(c, lead) for c in self.coeffs])

    def deriv(self) -> "CPoly":
        return CPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose_linear(self, a, b) -> "CPoly":
        """p(a*x + b) as a polynomial in x."""
        acc = CPoly()
        lin = CPoly([b, a])
        for c in reversed(self.coeffs):
            acc = acc * lin + CPoly([c])
        return acc

    def reversed(self) -> "CPoly":
        """Coefficients reversed: x**deg * p(1/x)."""
        return CPoly(list(reversed(self.coeffs)))

    def to_complex(self) -> "CPoly":
        return CPoly([complex(c) for c in self.coeffs])


def poly_gcd(a: CPoly, b: CPoly) -> CPoly:
    """Monic gcd over an exact coefficient field (Euclid)."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


def poly_det(mat) -> CPoly:
    """Determinant of a small matrix with CPoly entries, by minor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = CPoly()
    sign = 1
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        acc = acc + sign * (mat[0][j] * poly_det(minor))
        sign = -sign
    return acc


def poly_resultant(a: CPoly, b: CPoly) -> CPoly:
    """Resultant in an outer variable of two polys whose coefficients are CPoly.

    ``a`` and ``b`` are given as lists of CPoly (ascending in the inner
    variable y); returns Res_y(a, b) as a CPoly in the outer variable via the
    Sylvester determinant.
    """
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = CPoly()
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(reversed(a)) + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(reversed(b)) + [zero] * (m - 1 - i))
    return poly_det([r[:size] for r in rows])


def poly_roots(p: CPoly):
    """All complex roots with multiplicity (companion matrix + Newton polish)."""
    if p.is_zero():
        raise ValueError("undefined roots: zero polynomial")
    cs = [complex(c) for c in p.coeffs]
    if len(cs) == 1:
        return []
    roots = np.roots(cs[::-1])
    dp = p.to_complex().deriv()
    polished = []
    scale = max(abs(c) for c in cs)
    for r in roots:
        r = complex(r)
        for _ in range(8):
            fr = p(r)
            dfr = dp(r)
            if abs(dfr) < 1e-30:
                break
            step = fr / dfr
            if abs(step) > 0.5 * (1.0 + abs(r)):
                break
            r2 = r - step
            if abs(p(r2)) <= abs(fr):
                r = r2
            if abs(step) < 1e-15 * (1.0 + abs(r)):
                break
        polished.append(r)
    for r in polished:
        mscale = scale * max(1.0, abs(r)) ** p.degree
        if abs(p(r)) > 1e-8 * mscale:
            raise ArithmeticError(f"root polishing failed at {r}: |p|={abs(p(r)):.3e}")
    return polished


def chebyshev_nodes(lo: float, hi: float, n: int):
    k = np.arange(n)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos((2 * k + 1) * np.pi / (2 * n))


def circle_nodes(center: complex, radius: float, n: int):
    k = np.arange(n)
    return center + radius * np.exp(2j * np.pi * (k + 0.37) / n)


def poly_interp(nodes, degree_bound: int, rtol: float = 1e-9) -> CPoly:
    """Interpolate a polynomial of degree <= degree_bound through (x, y) nodes.

    Over-determined systems are solved by least squares; a residual beyond
    ``rtol`` (relative to the data scale) means the nodes are not consistent
    with the degree bound and raises.
    """
    xs = np.asarray([complex(x) for x, _ in nodes])
    ys = np.asarray([complex(y) for _, y in nodes])
    if len(xs) < degree_bound + 1:
        raise ValueError("need at least degree_bound+1 nodes")
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if abs(xs[i] - xs[j]) < 1e-14 * (1.0 + abs(xs[i])):
                raise ValueError("duplicate interpolation nodes")
    V = np.vander(xs, degree_bound + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, ys, rcond=None)
    resid = np.abs(V @ coef - ys)
    scale = max(np.max(np.abs(ys)), 1e-300)
    if np.max(resid) > rtol * max(scale, 1.0):
        raise ValueError("degree bound violated: interpolation residual %.3e" % np.max(resid))
    return CPoly(list(coef))


class CRatFun:
    """Rational function num/den with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: CPoly, den: CPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        lead = den.coeffs[-1]
        self.num = CPoly([_div(c, lead) for c in num.coeffs])
        self.den = CPoly([_div(c, lead) for c in den.coeffs])

    def __repr__(self):
        return f"CRatFun({self.num!r}, {self.den!r})"

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __add__(self, other):
        if not isinstance(other, CRatFun):
            other = CRatFun(CPoly([other]), CPoly.one())
        return CRatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CRatFun(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, CRatFun):
            other = CRatFun(CPoly([other]), CPoly.one())
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CRatFun):
            return CRatFun(self.num * other, self.den)
        return CRatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def deriv(self) -> "CRatFun":
        return CRatFun(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def invert_variable(self) -> "CRatFun":
        """f(1/u) as a rational function of u."""
        dn, dd = self.num.degree, self.den.degree
        num, den = self.num.reversed(), self.den.reversed()
        if dn < dd:
            num = num.shift(dd - dn)
        elif dd < dn:
            den = den.shift(dn - dd)
        return CRatFun(num, den)

    @staticmethod
    def from_poly(p: CPoly) -> "CRatFun":
        return CRatFun(p, CPoly.one())


def _series_inverse(den_coeffs, order):
    """Power-series inverse of a unit: den[0] != 0."""
    d0 = den_coeffs[0]
    inv = [_div(1, d0)]
    for n in range(1, order + 1):
        acc = 0
        for k in range(1, min(n, len(den_coeffs) - 1) + 1):
            acc += den_coeffs[k] * inv[n - k]
        inv.append(_div(-acc, d0))
    return inv


def ratfun_series(f: CRatFun, center, order: int, offset: int = 0):
    """Laurent coefficients of f about ``center``.

    Returns ``coeffs`` so that f(w) = sum coeffs[i] * (w-center)**(i-offset).
    ``offset`` caps the admitted pole order (offset 1 for first-order
    coefficient functions, 2 for second-order, matching the local data of a
    regular singular point); a deeper pole raises.
    """
    num = f.num.compose_linear(1, center)
    den = f.den.compose_linear(1, center)

    def _valuation(p: CPoly) -> int:
        if p.is_zero():
            return 0
        if p.is_exact():
            tiny = lambda c: c == 0
        else:
            scale = max(abs(complex(c)) for c in p.coeffs)
            tiny = lambda c: abs(complex(c)) <= 1e-12 * scale
        v = 0
        while v < len(p.coeffs) and tiny(p.coeffs[v]):
            v += 1
        return v

    k = _valuation(den)
    m = _valuation(num) if not num.is_zero() else 0
    pole = k - m
    if pole > offset:
        raise ValueError("not a regular singular point: pole order %d > %d" % (pole, offset))
    den_shift = den.coeffs[k:]
    num_shift = num.coeffs[m:] if not num.is_zero() else []
    inv = _series_inverse(den_shift, order + offset)
    out = []
    for n in range(order + offset + 1):
        acc = 0
        for i in range(min(n, len(num_shift) - 1) + 1 if num_shift else 0):
            acc += num_shift[i] * inv[n - i]
        out.append(acc)
    # out[n] multiplies (w-c)**(n + m - k); align so index i <-> power i-offset
    lead = m - k  # actual leading power
    pad = lead + offset
    if pad > 0:
        out = [0] * pad + out
    elif pad < 0:
        out = out[-pad:]
    return out[: order + offset + 1]
