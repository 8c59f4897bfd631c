"""Exact escape rates and characteristic exponents over the series field.

Working over truncated Puiseux series in a large parameter t (|t| = e),
escape rates and multiplier magnitudes become exact rational numbers: the
maximal rate of a critically marked polynomial is the positive part of the
largest critical-point valuation, and the period-p exponents are Newton
polygon slopes of the multiplier polynomial over the series field.

The multiplier polynomial is built by the trace route (powers of the
iterate derivative reduced modulo the dynatomic polynomial, then Newton's
identities); every division involved is by a constant or an integer, so the
computation is exact whenever the windows hold, and the driver doubles the
window and retries on exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import config
from .errors import DegreeError, WindowExhaustedError
from .escape import sharp_family_data, theorem_b_constant
from .poly import Polynomial, derivative, iterates
from .puiseux import SERIES_DOMAIN, NewtonPolygon, PuiseuxSeries, newton_polygon
from .spectra import cycle_counts, dynatomic, _chi_powersum


def series_polynomial(coeffs) -> Polynomial:
    """Polynomial in z with PuiseuxSeries coefficients."""
    return Polynomial(coeffs, SERIES_DOMAIN)


def nonarch_escape(c, d: int) -> Fraction:
    """Maximal escape rate of the critically marked polynomial with critical
    vector c: ``max(0, max_j log|c_j|)``, an exact rational.

    Raises :class:`WindowExhaustedError` on entries whose leading term is
    not certified.
    """
    c = list(c)
    if len(c) != d - 1:
        raise DegreeError(f"expected {d - 1} critical entries, got {len(c)}")
    best = Fraction(0)
    for entry in c:
        if not isinstance(entry, PuiseuxSeries):
            entry = PuiseuxSeries.constant(entry)
        if entry.is_exact_zero():
            continue
        if not entry.is_certified_nonzero():
            raise WindowExhaustedError("critical entry has uncertified valuation")
        best = max(best, entry.leading_exponent())
    return best


@dataclass(frozen=True)
class SeriesExponents:
    """Period-p characteristic exponents over the series field."""

    p: int
    max_exponent: Fraction | None  # None when every multiplier is 0
    slopes: tuple  # (Fraction exponent, multiplicity), already divided by p
    zero_multipliers: int
    polygon: NewtonPolygon


def nonarch_char_exponent(f: Polynomial, p: int) -> SeriesExponents:
    """Exact period-p exponents of a series-backend polynomial.

    Builds the dynatomic and multiplier polynomials over the series field
    and reads root log-magnitudes off the Newton polygon; the maximum,
    divided by p, is the characteristic exponent, and the full slope
    multiset (divided by p) is exposed alongside.
    """
    if f.backend != "series":
        raise DegreeError("nonarch_char_exponent needs series coefficients")
    if p not in (1, 2):
        raise DegreeError("series-field exponents implemented for p in {1, 2}")
    d = f.degree
    if d > 5:
        raise DegreeError("series-field exponents implemented for d <= 5")
    counts = cycle_counts(d, p)
    phi = dynatomic(f, p)
    if phi.degree != counts.nu:
        raise ArithmeticError("dynatomic degree mismatch over the series field")
    g = derivative(iterates(f, p)[-1])
    chi = _chi_powersum(phi, g, counts)
    if chi.degree != counts.N:
        raise ArithmeticError("multiplier polynomial degree mismatch")
    polygon = newton_polygon(chi)
    slopes = tuple((s / p, length) for s, length in polygon.segments)
    max_exp = polygon.max_slope / p if polygon.segments else None
    return SeriesExponents(
        p=p,
        max_exponent=max_exp,
        slopes=slopes,
        zero_multipliers=polygon.zero_roots,
        polygon=polygon,
    )


# --- sharpness verification ---------------------------------------------------------


@dataclass(frozen=True)
class SharpnessReport:
    kind: int
    d: int
    M: Fraction
    M1: Fraction
    M2: Fraction
    expected: tuple
    period2_slopes: tuple
    window_used: int
    passed: bool


def expected_sharpness(kind: int, d: int):
    """Exact (M, M1, M2) for the two families."""
    if kind == 1:
        return (Fraction(1), Fraction(0), theorem_b_constant(d))
    if kind == 2:
        ratio = Fraction(d - 1, d - 2)
        return (Fraction(1), ratio, ratio)
    raise ValueError("kind must be 1 or 2")


def verify_sharpness(kind: int, d: int) -> SharpnessReport:
    """Exact check that a sharpness family attains its advertised exponents.

    Instantiates the family at the series generator t, computes the exact
    maximal escape rate from the critical vector and the period-1/2
    exponents through the series-field multiplier polynomials, and compares
    against the exact rational targets.  The truncation window doubles on
    exhaustion up to the configured cap.
    """
    if d not in (4, 5):
        raise DegreeError("sharpness verification covers d in {4, 5}")
    window = config.SERIES_WINDOW_DEFAULT
    last_exc = None
    while window <= config.SERIES_WINDOW_CAP:
        try:
            return _verify_sharpness_at_window(kind, d, window)
        except WindowExhaustedError as exc:
            last_exc = exc
            window *= 2
    raise WindowExhaustedError(
        f"window cap {config.SERIES_WINDOW_CAP} reached: {last_exc}"
    )


def _verify_sharpness_at_window(kind: int, d: int, window: int) -> SharpnessReport:
    t = PuiseuxSeries.generator(window=window)
    f, crit = sharp_family_data(kind, d, t)
    # structural guarantees of the critically marked form
    lead = f.leading_coefficient()
    if not (lead - PuiseuxSeries.constant(Fraction(1, d), window)).is_exact_zero():
        raise ArithmeticError("family member is not critically marked (leading coeff)")
    if not f.coefficient(0).is_exact_zero():
        raise ArithmeticError("family member does not fix the origin")
    m_rate = nonarch_escape(crit, d)
    e1 = nonarch_char_exponent(f, 1)
    e2 = nonarch_char_exponent(f, 2)
    m1 = e1.max_exponent if e1.max_exponent is not None else Fraction(0)
    m2 = e2.max_exponent if e2.max_exponent is not None else Fraction(0)
    expected = expected_sharpness(kind, d)
    passed = (m_rate, m1, m2) == expected
    return SharpnessReport(
        kind=kind,
        d=d,
        M=m_rate,
        M1=m1,
        M2=m2,
        expected=expected,
        period2_slopes=e2.slopes,
        window_used=window,
        passed=passed,
    )
