"""Truncated Taylor arithmetic for the derivative sums in the coverage formulas.

Several coverage and rate expressions take the form

    sum_{i=0}^{k-1} (-1)^i / i! * [d^i/ds^i F(s)]_{s=1}

for smooth F built from exp, powers, erfcx, Si/Ci and the hypergeometric
member hyp2f1_cov.  A TaylorJet carries the coefficients f^(i)(1)/i! up to a
fixed order, so those derivative sums reduce to an alternating sum of jet
coefficients.  All recurrences are the standard power-series ones and are
exact to the carried order; the expansion point is always s0 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .specfun import hyp2f1_cov

__all__ = [
    "TaylorJet",
    "jet_constant",
    "jet_variable",
    "jet_spow",
    "jet_exp",
    "jet_pow",
    "jet_recip",
    "jet_sqrt",
    "jet_div",
    "jet_sin_cos",
    "jet_si_ci",
    "jet_erfcx",
    "jet_hyp2f1_cov",
    "alternating_tail_sum",
]


@dataclass(frozen=True)
class TaylorJet:
    """Coefficients c[i] = f^(i)(1)/i!, i = 0..order, of a function around s = 1."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a jet needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def derivative(self, i: int) -> float:
        """i-th derivative at the expansion point."""
        if i > self.order:
            return 0.0
        return self.coeffs[i] * math.factorial(i)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, TaylorJet):
            _check_same_order(self, other)
            return _from_array(self.array() + other.array())
        return _from_array(self.array() + _const_array(float(other), self.order))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TaylorJet):
            _check_same_order(self, other)
            return _from_array(self.array() - other.array())
        return _from_array(self.array() - _const_array(float(other), self.order))

    def __rsub__(self, other):
        return _from_array(_const_array(float(other), self.order) - self.array())

    def __neg__(self):
        return _from_array(-self.array())

    def __mul__(self, other):
        if isinstance(other, TaylorJet):
            _check_same_order(self, other)
            a, b = self.array(), other.array()
            n = self.order + 1
            out = np.array([np.dot(a[: k + 1], b[k::-1]) for k in range(n)])
            return _from_array(out)
        return _from_array(self.array() * float(other))

    __rmul__ = __mul__


def _check_same_order(a: TaylorJet, b: TaylorJet) -> None:
    if a.order != b.order:
        raise ValueError(f"jet order mismatch: {a.order} vs {b.order}")


def _const_array(c: float, order: int) -> np.ndarray:
    out = np.zeros(order + 1)
    out[0] = c
    return out


def _from_array(a: np.ndarray) -> TaylorJet:
    return TaylorJet(tuple(float(v) for v in a))


def jet_constant(c: float, order: int) -> TaylorJet:
    return _from_array(_const_array(c, order))


def jet_variable(order: int) -> TaylorJet:
    """The identity function s, expanded around 1."""
    out = _const_array(1.0, order)
    if order >= 1:
        out[1] = 1.0
    return _from_array(out)


def jet_spow(q: float, order: int) -> TaylorJet:
    """s^q around s = 1: binomial coefficients C(q, k)."""
    out = np.empty(order + 1)
    out[0] = 1.0
    for k in range(1, order + 1):
        out[k] = out[k - 1] * (q - (k - 1)) / k
    return _from_array(out)


def jet_exp(v: TaylorJet) -> TaylorJet:
    """exp of a jet via the logarithmic-derivative recurrence."""
    a = v.array()
    n = v.order + 1
    e = np.empty(n)
    e[0] = math.exp(a[0])
    for k in range(1, n):
        e[k] = np.dot(np.arange(1, k + 1) * a[1 : k + 1], e[k - 1 :: -1]) / k
    return _from_array(e)


def jet_pow(f: TaylorJet, q: float) -> TaylorJet:
    """f^q for real q; needs f(1) > 0."""
    a = f.array()
    n = f.order + 1
    if a[0] <= 0.0:
        raise ValueError("jet_pow requires a positive leading coefficient")
    p = np.empty(n)
    p[0] = a[0] ** q
    for k in range(1, n):
        acc = 0.0
        for j in range(1, k + 1):
            acc += ((q + 1.0) * j - k) * a[j] * p[k - j]
        p[k] = acc / (k * a[0])
    return _from_array(p)


def jet_recip(f: TaylorJet) -> TaylorJet:
    """1/f; needs f(1) != 0."""
    a = f.array()
    n = f.order + 1
    if a[0] == 0.0:
        raise ValueError("jet_recip requires a nonzero leading coefficient")
    r = np.empty(n)
    r[0] = 1.0 / a[0]
    for k in range(1, n):
        r[k] = -np.dot(a[1 : k + 1], r[k - 1 :: -1]) / a[0]
    return _from_array(r)


def jet_sqrt(f: TaylorJet) -> TaylorJet:
    return jet_pow(f, 0.5)


def jet_div(a: TaylorJet, b: TaylorJet) -> TaylorJet:
    _check_same_order(a, b)
    aa, bb = a.array(), b.array()
    n = a.order + 1
    if bb[0] == 0.0:
        raise ValueError("jet_div requires a nonzero denominator at s = 1")
    r = np.empty(n)
    r[0] = aa[0] / bb[0]
    for k in range(1, n):
        r[k] = (aa[k] - np.dot(bb[1 : k + 1], r[k - 1 :: -1])) / bb[0]
    return _from_array(r)


def jet_sin_cos(u: TaylorJet) -> tuple[TaylorJet, TaylorJet]:
    """sin(u(s)) and cos(u(s)) by the coupled first-order recurrence."""
    a = u.array()
    n = u.order + 1
    s = np.empty(n)
    c = np.empty(n)
    s[0], c[0] = math.sin(a[0]), math.cos(a[0])
    ja = np.arange(1, n) * a[1:]
    for k in range(1, n):
        s[k] = np.dot(ja[:k], c[k - 1 :: -1]) / k
        c[k] = -np.dot(ja[:k], s[k - 1 :: -1]) / k
    return _from_array(s), _from_array(c)


def jet_si_ci(u: TaylorJet) -> tuple[TaylorJet, TaylorJet]:
    """Si(u(s)) and Ci(u(s)); needs u(1) > 0.

    Built from Si' = sin(x)/x and Ci' = cos(x)/x composed with u, then
    integrated coefficientwise.
    """
    a = u.array()
    if a[0] <= 0.0:
        raise ValueError("jet_si_ci requires u(1) > 0")
    n = u.order + 1
    sj, cj = jet_sin_cos(u)
    ds = jet_div(sj, u).array()
    dc = jet_div(cj, u).array()
    si = np.empty(n)
    ci = np.empty(n)
    si0, ci0 = _sp.sici(a[0])
    si[0], ci[0] = si0, ci0
    ja = np.arange(1, n) * a[1:]
    for k in range(1, n):
        si[k] = np.dot(ds[:k], ja[:k][::-1]) / k
        ci[k] = np.dot(dc[:k], ja[:k][::-1]) / k
    return _from_array(si), _from_array(ci)


def jet_erfcx(u: TaylorJet) -> TaylorJet:
    """erfcx(u(s)) = exp(u^2) erfc(u) via v' = (2 u v - 2/sqrt(pi)) u'."""
    a = u.array()
    n = u.order + 1
    v = np.empty(n)
    v[0] = _sp.erfcx(a[0])
    two_over_rtpi = 2.0 / math.sqrt(math.pi)
    ja = np.arange(1, n) * a[1:]
    for k in range(1, n):
        acc = 0.0
        for m in range(k):
            uv_m = np.dot(a[: m + 1], v[m::-1])
            g_m = 2.0 * uv_m - (two_over_rtpi if m == 0 else 0.0)
            acc += g_m * ja[k - 1 - m]
        v[k] = acc / k
    return _from_array(v)


def jet_hyp2f1_cov(alpha: float, c: float, order: int) -> TaylorJet:
    """Jet of s -> hyp2f1_cov(alpha, c*s) around s = 1, for c <= 0.

    With d = 2/alpha, the function g(z) = 2F1(1, -d; 1-d; z) satisfies
    z g'(z) = d g(z) - d/(1-z), and differentiating that identity gives a
    one-term recurrence for the scaled derivatives t_n = g^(n)(c) c^n / n!:

        t_{n+1} = ((d - n) t_n - (d/(1-c)) w^n) / (n + 1),   w = c/(1-c).

    |w| < 1 for every c <= 0, so the coefficients stay bounded and the
    absolute error of the recurrence does not grow.
    """
    if c > 0.0:
        raise ValueError(f"argument coefficient must be non-positive, got {c}")
    d = 2.0 / alpha
    n = order + 1
    t = np.empty(n)
    t[0] = hyp2f1_cov(alpha, c)
    if c == 0.0:
        t[1:] = 0.0
        return _from_array(t)
    w = c / (1.0 - c)
    scale = d / (1.0 - c)
    wn = 1.0
    for k in range(n - 1):
        t[k + 1] = ((d - k) * t[k] - scale * wn) / (k + 1)
        wn *= w
    return _from_array(t)


def alternating_tail_sum(f: TaylorJet) -> tuple[float, float]:
    """sum_i (-1)^i/i! d^i/ds^i f(s) at s=1 over all carried orders.

    Equals sum_i (-1)^i c_i in jet coefficients.  Returns the compensated
    (Kahan) sum together with the cancellation ratio sum_i |c_i| / |sum|,
    which bounds the relative roundoff amplification of the sum.
    """
    c = f.array()
    total = 0.0
    comp = 0.0
    absum = 0.0
    sign = 1.0
    for v in c:
        term = sign * v
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        absum += abs(v)
        sign = -sign
    ratio = absum / max(abs(total), np.finfo(float).tiny)
    return total, ratio
