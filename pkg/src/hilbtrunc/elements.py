"""Exact arithmetic for ambient Hilbert-space elements.

Two concrete representations are used throughout:

* `Seq` -- finitely supported vectors in the sequence space over the
  naturals (indices >= 1) or the integers.

* `Func` -- functions on an interval [a, b], stored as a vector of
  coefficients of the L2-normalized shifted Legendre polynomials plus a
  sparse combination of oscillatory terms x^m e^{i w x} (w != 0).  The
  class is closed under the model operators (integration from a,
  multiplication by x) and all inner products between catalogued parts
  have closed forms, so the experiment paths run without discretisation
  error.  Mixed Legendre x oscillatory products of high degree fall back
  to automatically-sized Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SpaceMismatchError, gauss_legendre

# Legendre degree up to which mixed Legendre/oscillatory inner products
# use the exact monomial expansion; beyond it the expansion coefficients
# overwhelm float64 and quadrature is more accurate.
_LEG_EXACT_DEGREE = 6

_SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------------------
# normalized shifted Legendre machinery
# ---------------------------------------------------------------------------

def legendre_values(interval, max_degree: int, x) -> np.ndarray:
    """Values of the orthonormal shifted Legendre family on `interval`.

    Row n of the returned (max_degree+1, len(x)) array is the degree-n
    polynomial, evaluated by the stable three-term recurrence.
    """
    a, b = interval
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = (2.0 * x - a - b) / (b - a)
    out = np.empty((max_degree + 1, t.size))
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = t
    for n in range(1, max_degree):
        out[n + 1] = ((2 * n + 1) * t * out[n] - n * out[n - 1]) / (n + 1)
    scale = np.sqrt((2.0 * np.arange(max_degree + 1) + 1.0) / (b - a))
    return out * scale[:, None]


def mult_x_leg(interval, coeffs: np.ndarray) -> np.ndarray:
    """Legendre coefficients of x*f given those of f (exact recurrence)."""
    a, b = interval
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    n = len(coeffs)
    if n == 0:
        return np.zeros(0, dtype=complex)
    out = np.zeros(n + 1, dtype=complex)
    idx = np.arange(n, dtype=float)
    up = (idx + 1.0) / np.sqrt((2 * idx + 1) * (2 * idx + 3))
    out[:n] += c * coeffs
    out[1 : n + 1] += h * up * coeffs
    if n > 1:
        j = np.arange(1, n, dtype=float)
        down = j / np.sqrt((2 * j - 1) * (2 * j + 1))
        out[: n - 1] += h * down * coeffs[1:]
    return out


def integrate_leg01(coeffs: np.ndarray) -> np.ndarray:
    """Legendre coefficients on [0, 1] of x -> integral_0^x f, exact.

    Uses the antiderivative identity for Legendre polynomials; the
    result of integrating a degree-d expansion has degree d+1.
    """
    n = len(coeffs)
    out = np.zeros(n + 1, dtype=complex)
    if n == 0:
        return out
    out[0] += 0.5 * coeffs[0]
    out[1] += coeffs[0] / (2.0 * _SQRT3)
    if n > 1:
        j = np.arange(1, n, dtype=float)
        up = 1.0 / (2.0 * np.sqrt((2 * j + 1) * (2 * j + 3)))
        down = 1.0 / (2.0 * np.sqrt((2 * j + 1) * (2 * j - 1)))
        out[2 : n + 1] += up * coeffs[1:]
        out[0 : n - 1] -= down * coeffs[1:]
    return out


_monomial_cache: dict = {}


def monomial_leg(interval, m: int) -> np.ndarray:
    """Legendre coefficients of x^m on `interval` (exact and stable)."""
    key = (interval, m)
    if key not in _monomial_cache:
        a, b = interval
        if m == 0:
            vec = np.array([math.sqrt(b - a)], dtype=complex)
        else:
            vec = mult_x_leg(interval, monomial_leg(interval, m - 1))
        vec.flags.writeable = False
        _monomial_cache[key] = vec
    return _monomial_cache[key]


_leg_monomial_cache: dict = {}


def _leg_monomial_coeffs(interval, n: int) -> np.ndarray:
    """Monomial coefficients of the degree-n normalized Legendre polynomial.

    Only trusted for small n (the conversion condition grows like 4^n).
    """
    key = (interval, n)
    if key not in _leg_monomial_cache:
        a, b = interval
        e = np.zeros(n + 1)
        e[n] = 1.0
        p_t = np.polynomial.Polynomial(np.polynomial.legendre.leg2poly(e))
        t_of_x = np.polynomial.Polynomial([-(a + b) / (b - a), 2.0 / (b - a)])
        p_x = p_t(t_of_x)
        coeffs = p_x.coef * math.sqrt((2 * n + 1) / (b - a))
        _leg_monomial_cache[key] = coeffs
    return _leg_monomial_cache[key]


# ---------------------------------------------------------------------------
# oscillatory primitives x^m e^{iwx}
# ---------------------------------------------------------------------------

def iosc(interval, m: int, w: float) -> complex:
    """Exact integral of x^m e^{iwx} over the interval."""
    a, b = interval
    if w == 0.0:
        return (b ** (m + 1) - a ** (m + 1)) / (m + 1)
    big = max(abs(a), abs(b))
    if abs(w) * big < 0.5:
        # short series in (iw); converges fast for small phases
        total = 0.0 + 0.0j
        term_pow = 1.0 + 0.0j
        for k in range(0, 80):
            inc = term_pow * (b ** (m + k + 1) - a ** (m + k + 1)) / (m + k + 1)
            total += inc
            if abs(inc) < 1e-18 * (1.0 + abs(total)):
                break
            term_pow *= 1j * w / (k + 1)
        return total
    if m >= 10 and m > 3.0 * abs(w) * (b - a):
        # recursion would amplify roundoff; integrate numerically instead
        order = 48 + m // 2 + int(0.5 * abs(w) * (b - a))
        rule = gauss_legendre(order, a, b)
        vals = rule.nodes ** m * np.exp(1j * w * rule.nodes)
        return complex(np.sum(rule.weights * vals))
    iw = 1j * w
    ea = np.exp(1j * w * a)
    eb = np.exp(1j * w * b)
    val = (eb - ea) / iw
    for k in range(1, m + 1):
        val = (b ** k * eb - a ** k * ea) / iw - (k / iw) * val
    return complex(val)


def osc_antiderivative(m: int, w: float):
    """Coefficients c with integral_0^x y^m e^{iwy} dy = sum c_j x^j e^{iwx} - c_0."""
    iw = 1j * w
    c = np.empty(m + 1, dtype=complex)
    c[m] = 1.0 / iw
    for j in range(m - 1, -1, -1):
        c[j] = -(j + 1) * c[j + 1] / iw
    return c


_leg_osc_cache: dict = {}


def leg_osc_integral(interval, n: int, m: int, w: float) -> complex:
    """Integral of L_n(x) * x^m e^{iwx} over the interval (L_n orthonormal)."""
    key = (interval, n, m, w)
    if key in _leg_osc_cache:
        return _leg_osc_cache[key]
    a, b = interval
    if n <= _LEG_EXACT_DEGREE:
        mono = _leg_monomial_coeffs(interval, n)
        val = sum(ck * iosc(interval, m + k, w) for k, ck in enumerate(mono) if ck)
    else:
        order = 64 + (n + m) // 2 + int(0.5 * abs(w) * (b - a))
        rule = gauss_legendre(order, a, b)
        lvals = legendre_values(interval, n, rule.nodes)[n]
        vals = lvals * rule.nodes ** m * np.exp(1j * w * rule.nodes)
        val = complex(np.sum(rule.weights * vals))
    _leg_osc_cache[key] = val
    return val


# ---------------------------------------------------------------------------
# function-space elements
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Func:
    """Function on an interval: Legendre part + oscillatory terms.

    `leg[n]` multiplies the orthonormal shifted Legendre polynomial of
    degree n; `osc[(m, w)]` multiplies x^m e^{iwx} with w != 0.
    """

    interval: tuple
    leg: np.ndarray
    osc: dict

    @staticmethod
    def zero(interval) -> "Func":
        return Func(interval, np.zeros(0, dtype=complex), {})

    @staticmethod
    def from_leg(interval, coeffs) -> "Func":
        return Func(interval, np.asarray(coeffs, dtype=complex), {})

    @staticmethod
    def from_poly(interval, monomial_coeffs) -> "Func":
        """Polynomial sum c_m x^m, converted exactly to Legendre form."""
        out = np.zeros(len(monomial_coeffs), dtype=complex)
        for m, cm in enumerate(monomial_coeffs):
            if cm == 0:
                continue
            vec = monomial_leg(interval, m)
            if len(vec) > len(out):
                grown = np.zeros(len(vec), dtype=complex)
                grown[: len(out)] = out
                out = grown
            out[: len(vec)] += cm * vec
        return Func(interval, out, {})

    @staticmethod
    def from_osc(interval, terms: dict) -> "Func":
        return Func(interval, np.zeros(0, dtype=complex), dict(terms))

    @staticmethod
    def from_callable(fn, interval, degree: int) -> "Func":
        """Project a callable onto the Legendre family up to `degree`.

        This is the sampled fallback for data with no catalogued form;
        the projection coefficients come from Gauss-Legendre quadrature
        of order degree + 16.  The result is flagged approximate.
        """
        a, b = interval
        rule = gauss_legendre(degree + 16, a, b)
        lvals = legendre_values(interval, degree, rule.nodes)
        fv = np.asarray(fn(rule.nodes), dtype=complex)
        coeffs = lvals @ (rule.weights * fv)
        out = Func(interval, coeffs, {})
        out.approximate = True
        return out

    def __post_init__(self):
        self.leg = np.asarray(self.leg, dtype=complex)
        self.approximate = getattr(self, "approximate", False)

    def _check(self, other: "Func"):
        if self.interval != other.interval:
            raise SpaceMismatchError(
                f"interval mismatch: {self.interval} vs {other.interval}"
            )

    def __add__(self, other: "Func") -> "Func":
        self._check(other)
        n = max(len(self.leg), len(other.leg))
        leg = np.zeros(n, dtype=complex)
        leg[: len(self.leg)] += self.leg
        leg[: len(other.leg)] += other.leg
        osc = dict(self.osc)
        for key, c in other.osc.items():
            osc[key] = osc.get(key, 0.0) + c
        out = Func(self.interval, leg, osc)
        out.approximate = self.approximate or other.approximate
        return out

    def __sub__(self, other: "Func") -> "Func":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "Func":
        out = Func(
            self.interval,
            scalar * self.leg,
            {k: scalar * c for k, c in self.osc.items()},
        )
        out.approximate = self.approximate
        return out

    def inner(self, other: "Func") -> complex:
        """L2 inner product, antilinear in self."""
        self._check(other)
        total = 0.0 + 0.0j
        nmin = min(len(self.leg), len(other.leg))
        if nmin:
            total += np.vdot(self.leg[:nmin], other.leg[:nmin])
        for (m2, w2), c2 in other.osc.items():
            if c2 == 0:
                continue
            for n, c1 in enumerate(self.leg):
                if c1 != 0:
                    total += np.conj(c1) * c2 * leg_osc_integral(
                        self.interval, n, m2, w2
                    )
        for (m1, w1), c1 in self.osc.items():
            if c1 == 0:
                continue
            for n, c2 in enumerate(other.leg):
                if c2 != 0:
                    total += np.conj(
                        c1 * leg_osc_integral(self.interval, n, m1, w1)
                    ) * c2
            for (m2, w2), c2 in other.osc.items():
                if c2 != 0:
                    total += np.conj(c1) * c2 * iosc(
                        self.interval, m1 + m2, w2 - w1
                    )
        return complex(total)

    def norm(self) -> float:
        if not self.osc:
            return float(np.linalg.norm(self.leg))
        val = self.inner(self)
        return math.sqrt(max(val.real, 0.0))

    def eval_at(self, x) -> np.ndarray:
        """Pointwise values (vectorized over x)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape, dtype=complex)
        if len(self.leg):
            lv = legendre_values(self.interval, len(self.leg) - 1, x)
            out += self.leg @ lv
        for (m, w), c in self.osc.items():
            out += c * x ** m * np.exp(1j * w * x)
        return out

    def compact(self) -> "Func":
        """Drop exactly-zero oscillatory terms and trailing zero Legendre tail."""
        osc = {k: c for k, c in self.osc.items() if c != 0}
        leg = self.leg
        n = len(leg)
        while n > 0 and leg[n - 1] == 0:
            n -= 1
        out = Func(self.interval, leg[:n].copy(), osc)
        out.approximate = self.approximate
        return out


# ---------------------------------------------------------------------------
# sequence-space elements
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Seq:
    """Finitely supported sequence over the naturals ("nat") or integers ("int")."""

    domain: str
    origin: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.domain not in ("nat", "int"):
            raise ValueError(f"unknown sequence domain {self.domain!r}")
        if self.domain == "nat" and self.origin < 1:
            raise ValueError("nat-indexed sequences start at index >= 1")

    @staticmethod
    def zero(domain="nat") -> "Seq":
        return Seq(domain, 1 if domain == "nat" else 0, np.zeros(0, dtype=complex))

    @staticmethod
    def basis_vector(index: int, domain="nat") -> "Seq":
        return Seq(domain, index, np.array([1.0], dtype=complex))

    def _check(self, other: "Seq"):
        if self.domain != other.domain:
            raise SpaceMismatchError(
                f"sequence domain mismatch: {self.domain} vs {other.domain}"
            )

    def component(self, index: int) -> complex:
        k = index - self.origin
        if 0 <= k < len(self.values):
            return complex(self.values[k])
        return 0.0

    def support(self):
        """Index range (lo, hi) inclusive of the stored window."""
        return self.origin, self.origin + len(self.values) - 1

    def __add__(self, other: "Seq") -> "Seq":
        self._check(other)
        if len(self.values) == 0:
            return Seq(self.domain, other.origin, other.values.copy())
        if len(other.values) == 0:
            return Seq(self.domain, self.origin, self.values.copy())
        lo = min(self.origin, other.origin)
        hi = max(self.origin + len(self.values), other.origin + len(other.values))
        out = np.zeros(hi - lo, dtype=complex)
        out[self.origin - lo : self.origin - lo + len(self.values)] += self.values
        out[other.origin - lo : other.origin - lo + len(other.values)] += other.values
        return Seq(self.domain, lo, out)

    def __sub__(self, other: "Seq") -> "Seq":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "Seq":
        return Seq(self.domain, self.origin, scalar * self.values)

    def inner(self, other: "Seq") -> complex:
        self._check(other)
        lo = max(self.origin, other.origin)
        hi = min(self.origin + len(self.values), other.origin + len(other.values))
        if hi <= lo:
            return 0.0 + 0.0j
        a = self.values[lo - self.origin : hi - self.origin]
        b = other.values[lo - other.origin : hi - other.origin]
        return complex(np.vdot(a, b))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def mapped(self, fn) -> "Seq":
        """Multiply each component by fn(index)."""
        idx = np.arange(self.origin, self.origin + len(self.values))
        return Seq(self.domain, self.origin, self.values * fn(idx))

    def shifted(self, step: int) -> "Seq":
        """Shift indices by `step`; nat-indexed content falling below 1 is dropped."""
        origin = self.origin + step
        values = self.values
        if self.domain == "nat" and origin < 1:
            cut = 1 - origin
            values = values[cut:]
            origin = 1
        return Seq(self.domain, origin, values.copy())


# ---------------------------------------------------------------------------
# generic dispatch helpers
# ---------------------------------------------------------------------------

def inner(u, v) -> complex:
    """Ambient inner product, antilinear in the first argument."""
    if type(u) is not type(v):
        raise SpaceMismatchError(
            f"cannot pair {type(u).__name__} with {type(v).__name__}"
        )
    return u.inner(v)


def norm(u) -> float:
    return u.norm()


def lincomb(coeffs, elements):
    """Sum of coeff * element over a nonempty list."""
    it = iter(zip(coeffs, elements))
    c0, e0 = next(it)
    acc = c0 * e0
    for c, e in it:
        acc = acc + c * e
    return acc
