"""Truncated Puiseux series in 1/t and their Newton polygons.

An element is a finite sum ``sum c_e * t**e`` with rational coefficients
and rational exponents of bounded denominator, ordered by decreasing
exponent (the variable is large: ``|t| = exp(1)``).  The non-Archimedean
absolute value is ``exp(leading exponent)``, so ``log|a|`` is the leading
exponent itself, an exact rational.

Truncation model: every series carries a certification floor.  Terms with
exponent >= floor are exact; anything below the floor has been discarded
and is unknown.  A floor of None means the series is an exact Laurent
expression.  Arithmetic propagates floors pessimistically and errors
(:class:`WindowExhaustedError`) rather than silently losing a leading term:
a series whose stored terms all cancelled but whose floor is finite may be
nonzero below the floor, so its magnitude is unknowable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import config
from .errors import RamificationError, WindowExhaustedError
from .scalars import Domain, register_domain

_NEG_INF = None  # floor value meaning "exact"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class PuiseuxSeries:
    """Finitely many rational-exponent terms in t with a truncation window.

    Internally exponents are stored as integers scaled by ``ram`` (the
    ramification index, i.e. the common denominator of all exponents).
    """

    __slots__ = ("_terms", "ram", "_floor", "window")

    def __init__(self, terms=None, ram=1, floor=_NEG_INF, window=None):
        # terms: dict {scaled integer exponent: Fraction coefficient}
        self._terms = {} if terms is None else terms
        self.ram = ram
        self._floor = floor
        self.window = config.SERIES_WINDOW_DEFAULT if window is None else window
        if ram > config.SERIES_RAMIFICATION_CAP:
            raise RamificationError(
                f"exponent denominator {ram} exceeds cap "
                f"{config.SERIES_RAMIFICATION_CAP}"
            )

    # --- constructors ------------------------------------------------------
    @classmethod
    def from_terms(cls, mapping, window=None) -> "PuiseuxSeries":
        """Build from {exponent: coefficient} with Fraction-able entries."""
        ram = 1
        items = []
        for e, c in mapping.items():
            e = Fraction(e)
            c = Fraction(c)
            items.append((e, c))
            ram = _lcm(ram, e.denominator)
        if ram > config.SERIES_RAMIFICATION_CAP:
            raise RamificationError(
                f"exponent denominator {ram} exceeds cap "
                f"{config.SERIES_RAMIFICATION_CAP}"
            )
        terms = {}
        for e, c in items:
            if c != 0:
                key = int(e * ram)
                terms[key] = terms.get(key, Fraction(0)) + c
        terms = {k: v for k, v in terms.items() if v != 0}
        return cls(terms, ram, _NEG_INF, window)

    @classmethod
    def constant(cls, c, window=None) -> "PuiseuxSeries":
        c = Fraction(c)
        return cls({0: c} if c != 0 else {}, 1, _NEG_INF, window)

    @classmethod
    def generator(cls, window=None) -> "PuiseuxSeries":
        """The series t itself."""
        return cls({1: Fraction(1)}, 1, _NEG_INF, window)

    @classmethod
    def zero(cls, window=None) -> "PuiseuxSeries":
        return cls({}, 1, _NEG_INF, window)

    # --- bookkeeping --------------------------------------------------------
    def terms(self) -> dict:
        """Certified terms as {Fraction exponent: Fraction coefficient}."""
        return {Fraction(k, self.ram): v for k, v in sorted(self._terms.items(), reverse=True)}

    @property
    def floor(self):
        """Certification floor as a Fraction, or None when exact."""
        return None if self._floor is _NEG_INF else Fraction(self._floor, self.ram)

    def is_exact_zero(self) -> bool:
        return not self._terms and self._floor is _NEG_INF

    def is_certified_nonzero(self) -> bool:
        return bool(self._terms)

    def leading_exponent(self) -> Fraction:
        """log|self| as an exact rational; errors when uncertifiable."""
        if self._terms:
            return Fraction(max(self._terms), self.ram)
        if self._floor is _NEG_INF:
            raise ZeroDivisionError("the zero series has no leading exponent")
        raise WindowExhaustedError(
            "all certified terms cancelled; leading exponent unknown below "
            f"t^{Fraction(self._floor, self.ram)}"
        )

    def leading_coefficient(self) -> Fraction:
        self.leading_exponent()
        return self._terms[max(self._terms)]

    def abs_log(self) -> Fraction:
        """Exact log of the non-Archimedean absolute value (|t| = e)."""
        if self.is_exact_zero():
            raise ZeroDivisionError("the zero series has absolute value 0")
        return self.leading_exponent()

    def abs(self) -> float:
        if self.is_exact_zero():
            return 0.0
        return math.exp(float(self.abs_log()))

    # --- ramification alignment ----------------------------------------------
    def _aligned(self, other: "PuiseuxSeries"):
        ram = _lcm(self.ram, other.ram)
        if ram > config.SERIES_RAMIFICATION_CAP:
            raise RamificationError(f"combined ramification {ram} exceeds cap")
        return ram, self._rescaled(ram), other._rescaled(ram)

    def _rescaled(self, ram: int):
        if ram == self.ram:
            return self
        k = ram // self.ram
        terms = {e * k: c for e, c in self._terms.items()}
        floor = self._floor if self._floor is _NEG_INF else self._floor * k
        return PuiseuxSeries(terms, ram, floor, self.window)

    def _truncated(self, terms: dict, ram: int, floor, window) -> "PuiseuxSeries":
        terms = {e: c for e, c in terms.items() if c != 0}
        if floor is not _NEG_INF:
            terms = {e: c for e, c in terms.items() if e >= floor}
        # enforce the window below the current leading exponent; exactness is
        # only surrendered when a term is actually discarded
        if terms:
            win_floor = max(terms) - int(math.ceil(window * ram))
            if any(e < win_floor for e in terms):
                terms = {e: c for e, c in terms.items() if e >= win_floor}
                floor = win_floor if floor is _NEG_INF else max(floor, win_floor)
        return PuiseuxSeries(terms, ram, floor, window)

    # --- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.window)
        ram, a, b = self._aligned(other)
        terms = dict(a._terms)
        for e, c in b._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        if a._floor is _NEG_INF:
            floor = b._floor
        elif b._floor is _NEG_INF:
            floor = a._floor
        else:
            floor = max(a._floor, b._floor)
        return self._truncated(terms, ram, floor, max(a.window, b.window))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(
            {e: -c for e, c in self._terms.items()}, self.ram, self._floor, self.window
        )

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.window)
        return self + (-other)

    def __rsub__(self, other):
        return PuiseuxSeries.constant(other, self.window) + (-self)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.window)
        ram, a, b = self._aligned(other)
        terms = {}
        for ea, ca in a._terms.items():
            for eb, cb in b._terms.items():
                key = ea + eb
                prev = terms.get(key)
                terms[key] = ca * cb if prev is None else prev + ca * cb
        floor = _mul_floor(a, b)
        return self._truncated(terms, ram, floor, max(a.window, b.window))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.window)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return PuiseuxSeries.constant(other, self.window) * self.inverse()

    def inverse(self) -> "PuiseuxSeries":
        """Multiplicative inverse: 1/(lead*(1+x)) by geometric expansion."""
        if self.is_exact_zero():
            raise ZeroDivisionError("inverse of the zero series")
        if not self._terms:
            raise WindowExhaustedError("cannot invert a series with unknown leading term")
        lead_e = max(self._terms)
        lead_c = self._terms[lead_e]
        inv_lead = PuiseuxSeries({-lead_e: 1 / lead_c}, self.ram, _NEG_INF, self.window)
        if len(self._terms) == 1 and self._floor is _NEG_INF:
            return inv_lead
        x = self * inv_lead - PuiseuxSeries.constant(1, self.window)
        if not x._terms:
            # only uncertified mass below the floor remains
            one_fuzzy = PuiseuxSeries({0: Fraction(1)}, x.ram, x._floor, self.window)
            return one_fuzzy * inv_lead
        xe = Fraction(max(x._terms), x.ram)
        if xe >= 0:
            raise ArithmeticError("inverse expansion needs |x| < 1")
        steps = int(math.ceil(self.window / float(-xe))) + 1
        result = PuiseuxSeries.constant(1, self.window)
        power = PuiseuxSeries.constant(1, self.window)
        for k in range(1, steps + 1):
            power = power * x
            result = result + (-power if k % 2 == 1 else power)
        return result * inv_lead

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("series powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        result = PuiseuxSeries.constant(1, self.window)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # --- comparison / display ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.window)
        try:
            ram, a, b = self._aligned(other)
        except RamificationError:
            return False
        return a._terms == b._terms and a._floor == b._floor

    def __hash__(self):
        return hash((self.ram, tuple(sorted(self._terms.items())), self._floor))

    def __repr__(self):
        if not self._terms:
            body = "0" if self._floor is _NEG_INF else "O(...)"
        else:
            parts = []
            for e, c in sorted(self._terms.items(), reverse=True):
                exp = Fraction(e, self.ram)
                parts.append(f"{c}*t^{exp}")
            body = " + ".join(parts)
        if self._floor is not _NEG_INF:
            body += f" + O(t^{Fraction(self._floor, self.ram)})"
        return f"PuiseuxSeries({body})"


def _mul_floor(a: PuiseuxSeries, b: PuiseuxSeries):
    """Certification floor of a product from the operand floors.

    Unknown mass of one factor multiplied by the leading term of the other
    bounds everything that could be wrong in the product.  An exactly-zero
    factor annihilates the other's uncertainty.
    """
    fa, fb = a._floor, b._floor
    if fa is _NEG_INF and fb is _NEG_INF:
        return _NEG_INF
    la = max(a._terms) if a._terms else None
    lb = max(b._terms) if b._terms else None
    bounds = []
    if fb is not _NEG_INF:
        if la is not None:
            bounds.append(la + fb)
        elif fa is not _NEG_INF:
            bounds.append(fa + fb)
        else:
            return _NEG_INF  # a is exactly zero
    if fa is not _NEG_INF:
        if lb is not None:
            bounds.append(lb + fa)
        elif fb is not _NEG_INF:
            bounds.append(fa + fb)
        else:
            return _NEG_INF  # b is exactly zero
    return max(bounds) if bounds else _NEG_INF


def series_arith(a: PuiseuxSeries, b, op: str) -> PuiseuxSeries:
    """Dispatch helper: op in {'add', 'sub', 'mul', 'div', 'pow'}.

    For 'pow' the second operand must be an integer.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("pow exponent must be an integer")
        return a**b
    raise ValueError(f"unknown op {op!r}")


# --- scalar domain registration ------------------------------------------------

def _series_coerce(x):
    if isinstance(x, PuiseuxSeries):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return PuiseuxSeries.constant(x)
    raise TypeError(f"series backend accepts int/Fraction/PuiseuxSeries, got {type(x).__name__}")


SERIES_DOMAIN = Domain(
    name="series",
    zero=PuiseuxSeries.zero(),
    one=PuiseuxSeries.constant(1),
    from_int=lambda n: PuiseuxSeries.constant(n),
    coerce=_series_coerce,
    # zero within the certified window; exactness is tracked by the floor
    is_zero=lambda s: not s._terms,
    add=lambda a, b: a + b,
    sub=lambda a, b: a - b,
    mul=lambda a, b: a * b,
    neg=lambda a: -a,
    div=lambda a, b: a / b,
)
register_domain(SERIES_DOMAIN)


# --- Newton polygons --------------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Root log-magnitudes of a polynomial over the series field.

    ``segments`` lists (slope, length) pairs with slopes strictly decreasing;
    each slope s accounts for ``length`` roots with log|root| = s.
    ``zero_roots`` counts roots exactly at 0 (trailing zero coefficients),
    whose log-magnitude is -infinity.
    """

    segments: tuple
    zero_roots: int = 0

    def slope_multiset(self):
        out = []
        for s, length in self.segments:
            out.extend([s] * length)
        return out

    @property
    def max_slope(self):
        return self.segments[0][0] if self.segments else None


def newton_polygon(coeffs) -> NewtonPolygon:
    """Newton polygon from series coefficients (low-to-high in the variable).

    Accepts a sequence of :class:`PuiseuxSeries` or a Polynomial over the
    series backend.  Raises :class:`WindowExhaustedError` when a coefficient
    that could influence the hull has an uncertified valuation.
    """
    if hasattr(coeffs, "coeffs"):
        coeffs = coeffs.coeffs
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("empty polynomial")
    n = len(coeffs) - 1
    if not coeffs[-1].is_certified_nonzero():
        raise WindowExhaustedError("leading coefficient valuation uncertified")
    zero_roots = 0
    while zero_roots <= n and coeffs[zero_roots].is_exact_zero():
        zero_roots += 1
    coeffs = coeffs[zero_roots:]
    n = len(coeffs) - 1
    # reversed order: point k corresponds to the coefficient of degree n-k,
    # so hull slopes are the root log-magnitudes, in decreasing order
    pts = []
    uncertain = []  # (k, floor) for maybe-zero coefficients
    for k in range(n + 1):
        c = coeffs[n - k]
        if c.is_certified_nonzero():
            pts.append((k, c.leading_exponent()))
        elif not c.is_exact_zero():
            uncertain.append((k, c.floor))
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    # an uncertified coefficient only matters if it could rise above the hull
    for k, fl in uncertain:
        if _above_hull(hull, k, fl):
            raise WindowExhaustedError(
                f"coefficient {n - k + zero_roots} has uncertified valuation "
                "that could touch the Newton polygon"
            )
    segments = []
    for i in range(len(hull) - 1):
        (x1, y1), (x2, y2) = hull[i], hull[i + 1]
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    for i in range(len(segments) - 1):
        if segments[i][0] <= segments[i + 1][0]:
            raise ArithmeticError("hull slopes not strictly decreasing")
    return NewtonPolygon(segments=tuple(segments), zero_roots=zero_roots)


def _above_hull(hull, x, y) -> bool:
    if y is None:
        return False
    if not hull:
        return True
    if x <= hull[0][0]:
        return y > hull[0][1] if x == hull[0][0] else True
    if x >= hull[-1][0]:
        return y > hull[-1][1] if x == hull[-1][0] else True
    for i in range(len(hull) - 1):
        (x1, y1), (x2, y2) = hull[i], hull[i + 1]
        if x1 <= x <= x2:
            line = y1 + (y2 - y1) * (Fraction(x) - x1) / (x2 - x1)
            return y > line
    return False
