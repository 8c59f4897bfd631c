"""Scalar backends and low-level number helpers.

Two public backends exist: ``exact`` (arbitrary-precision rationals via
:class:`fractions.Fraction`) and ``float`` (double-precision complex).
A third, ``series``, is registered by :mod:`polyspec.puiseux` for
polynomials with truncated-Puiseux-series coefficients.

A backend is described by a :class:`Domain`: a small bundle of ring
operations that :class:`polyspec.poly.Polynomial` dispatches through.
"""

from __future__ import annotations

import cmath
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import BackendMismatchError

EXACT = "exact"
FLOAT = "float"
SERIES = "series"


@dataclass(frozen=True)
class Domain:
    """Ring operations for one scalar backend."""

    name: str
    zero: object
    one: object
    from_int: Callable
    coerce: Callable
    is_zero: Callable
    add: Callable
    sub: Callable
    mul: Callable
    neg: Callable
    div: Callable

    def eq(self, x, y):
        return self.is_zero(self.sub(x, y))


def _coerce_exact(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise BackendMismatchError(
        f"exact backend accepts int/Fraction scalars, got {type(x).__name__}"
    )


def _coerce_float(x):
    if isinstance(x, complex):
        z = x
    elif isinstance(x, (int, float, Fraction)) and not isinstance(x, bool):
        z = complex(x)
    else:
        raise BackendMismatchError(
            f"float backend accepts numeric scalars, got {type(x).__name__}"
        )
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise OverflowError("non-finite complex scalar")
    return z


EXACT_DOMAIN = Domain(
    name=EXACT,
    zero=Fraction(0),
    one=Fraction(1),
    from_int=Fraction,
    coerce=_coerce_exact,
    is_zero=lambda x: x == 0,
    add=operator.add,
    sub=operator.sub,
    mul=operator.mul,
    neg=operator.neg,
    div=lambda a, b: Fraction(a) / Fraction(b),
)

FLOAT_DOMAIN = Domain(
    name=FLOAT,
    zero=0j,
    one=1 + 0j,
    from_int=lambda n: complex(n),
    coerce=_coerce_float,
    is_zero=lambda x: x == 0,
    add=operator.add,
    sub=operator.sub,
    mul=operator.mul,
    neg=operator.neg,
    div=operator.truediv,
)

_DOMAINS = {EXACT: EXACT_DOMAIN, FLOAT: FLOAT_DOMAIN}


def register_domain(domain: Domain):
    _DOMAINS[domain.name] = domain


def get_domain(name: str) -> Domain:
    try:
        return _DOMAINS[name]
    except KeyError:
        raise BackendMismatchError(f"unknown backend {name!r}") from None


# --- integer / rational roots ------------------------------------------------

def integer_nth_root(n: int, k: int):
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        raise ValueError("negative input")
    if n in (0, 1) or k == 1:
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float seed can be off for huge n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // k + 2)
    while lo <= hi:
        mid = (lo + hi) // 2
        m = mid**k
        if m == n:
            return mid
        if m < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_nth_root(q: Fraction, k: int):
    """Exact rational k-th root of q, or None if no such rational exists."""
    if k <= 0:
        raise ValueError("k must be positive")
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q
    num = integer_nth_root(q.numerator, k)
    den = integer_nth_root(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


# --- exact complex rationals (internal) --------------------------------------

class QC:
    """Gaussian rational a + b*i with Fraction parts.

    Internal helper: lets the float-backend spectral pipeline build dynatomic
    polynomials exactly from dyadic complex coefficients, where double
    precision would overflow.  Not a public scalar backend.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def from_complex(cls, z: complex) -> "QC":
        return cls(Fraction(z.real), Fraction(z.imag))

    def __add__(self, o):
        return QC(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return QC(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return QC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __truediv__(self, o):
        n = o.re * o.re + o.im * o.im
        return QC((self.re * o.re + self.im * o.im) / n,
                  (self.im * o.re - self.re * o.im) / n)

    def __eq__(self, o):
        return isinstance(o, QC) and self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __repr__(self):
        return f"QC({self.re}, {self.im})"


QC_DOMAIN = Domain(
    name="qc",
    zero=QC(0),
    one=QC(1),
    from_int=lambda n: QC(n),
    coerce=lambda x: x if isinstance(x, QC) else QC(Fraction(x)),
    is_zero=lambda x: x.is_zero(),
    add=operator.add,
    sub=operator.sub,
    mul=operator.mul,
    neg=operator.neg,
    div=operator.truediv,
)
register_domain(QC_DOMAIN)


# --- magnitude bookkeeping for huge exact numbers -----------------------------

def flog2_fraction(q: Fraction) -> float:
    """Accurate float log2|q|; -inf for 0."""
    if q == 0:
        return float("-inf")
    num, den = abs(q.numerator), q.denominator
    # scale both into float range before dividing
    nb, db = num.bit_length(), den.bit_length()
    num_m = num >> max(0, nb - 64) if nb > 64 else num
    den_m = den >> max(0, db - 64) if db > 64 else den
    return (math.log2(num_m) + max(0, nb - 64)) - (math.log2(den_m) + max(0, db - 64))


def flog2_qc(z: QC) -> float:
    if z.is_zero():
        return float("-inf")
    n2 = z.re * z.re + z.im * z.im
    return flog2_fraction(n2) / 2.0


def mantissa_exp2(z, target_exp: float) -> complex:
    """Value of z / 2**target_exp as a complex double (0 on deep underflow)."""
    if isinstance(z, QC):
        re, im = z.re, z.im
    elif isinstance(z, Fraction):
        re, im = z, Fraction(0)
    else:
        return complex(z) * math.ldexp(1.0, -int(round(target_exp)))

    def part(q: Fraction) -> float:
        if q == 0:
            return 0.0
        lg = flog2_fraction(q)
        sh = lg - target_exp
        if sh < -1030:
            return 0.0
        if sh > 1020:
            raise OverflowError("mantissa extraction overflow")
        # shift numerator/denominator so the quotient fits a double
        e = int(math.floor(target_exp))
        num, den = q.numerator, q.denominator
        if e >= 0:
            den = den << e
        else:
            num = num << (-e)
        nb, db = abs(num).bit_length(), den.bit_length()
        drop = max(nb, db) - 80
        if drop > 0:
            num = num >> drop if num >= 0 else -((-num) >> drop)
            den = den >> drop
            if den == 0:
                den = 1
        return num / den

    return complex(part(re), part(im))


def complex_nth_roots(w: complex, n: int):
    """All n-th roots of w, principal first."""
    if w == 0:
        return [0j] * n
    r = abs(w) ** (1.0 / n)
    theta = cmath.phase(w) / n
    step = 2.0 * math.pi / n
    return [r * cmath.exp(1j * (theta + k * step)) for k in range(n)]
