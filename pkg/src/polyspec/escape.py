"""Green functions, escape rates and the small-cycle inequality checkers.

The Green function ``g(z) = lim d^-n log+ |f^n(z)|`` measures escape speed;
its maximum M over the critical points controls degeneration of the
conjugacy class.  The checkers compare M against the characteristic
exponents ``max (1/p) log |multiplier|`` at periods 1 and 2 (lower bounds,
piecewise in the degree) and at arbitrary periods (upper bound with the
constant 2*log d, and a matching lower bound through the minimal rate m).

Every Green value carries an a-priori tail bound: once an orbit passes the
escape radius the remaining correction is geometrically dominated, so the
reported error is rigorous up to floating point roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import config
from .errors import DegreeError, PolyspecError
from .poly import Polynomial, derivative
from .roots import complex_roots
from .scalars import FLOAT
from .spectra import spectrum


# --- Green function -----------------------------------------------------------


def escape_radius(f: Polynomial) -> float:
    """Radius beyond which |f(w)| >= max(2|w|, |a_d| |w|^d / 2).

    With S the sum of the lower coefficient magnitudes and |w| >= 1, the
    lower-order part is at most S*|w|**(d-1), so ``|w| >= 2S/|a_d|`` keeps
    the top term dominant with a factor-2 margin, and
    ``|w| >= (4/|a_d|)**(1/(d-1))`` upgrades that margin to doubling.
    """
    d = f.degree
    if d < 2:
        raise DegreeError("escape radius needs deg(f) >= 2")
    a = [abs(complex(c)) for c in f.coeffs]
    s = sum(a[:-1])
    return max(2.0, 2.0 * s / a[-1], (4.0 / a[-1]) ** (1.0 / (d - 1)))


def green(f: Polynomial, z, tol: float | None = None):
    """Green value at z with a rigorous tail bound.

    Returns ``(value, error_bound, escaped)``.  A bounded orbit (no escape
    within the iteration cap) reports ``(0.0, 0.0, False)``: the value is
    exact whenever the orbit truly stays bounded, but membership in the
    filled Julia set is only asserted at the cap's resolution.
    """
    tol = config.GREEN_DEFAULT_TOL if tol is None else tol
    if f.backend != FLOAT:
        f = f.to_float()
    d = f.degree
    if d < 2:
        raise DegreeError("green needs deg(f) >= 2")
    coeffs = tuple(complex(c) for c in f.coeffs)
    a_d = abs(coeffs[-1])
    s_low = sum(abs(c) for c in coeffs[:-1])
    radius = escape_radius(f)
    w = complex(z)
    n = 0
    while abs(w) <= radius:
        if n >= config.GREEN_ITERATION_CAP:
            return 0.0, 0.0, False
        w = _horner(coeffs, w)
        n += 1

    # escaped; keep iterating until the geometric tail is below tol.
    # past the radius each step at least doubles |w|, so the correction
    # sum_{m>n} d^-m log(1+delta_m) is dominated by a geometric series
    log_ad = math.log(a_d)
    inv_d = 1.0 / d
    scale = inv_d**n
    q = 2.0 * (1.0 + s_low) / max(a_d, 1e-300)
    while True:
        tail = scale * inv_d * (q / abs(w)) / (1.0 - 0.5 / d)
        if tail <= tol or abs(w) >= config.GREEN_LOG_SWITCH:
            break
        w = _horner(coeffs, w)
        n += 1
        scale *= inv_d
    value = scale * (math.log(abs(w)) + log_ad / (d - 1))
    err = tail + 1e-14 * (1.0 + abs(value))
    return value, err, True


def _horner(coeffs: tuple, w: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * w + c
    return acc


@dataclass(frozen=True)
class EscapeReport:
    """Escape rates of the critical points (natural-log units)."""

    M: float  # maximal escape rate
    m: float  # minimal escape rate
    per_critical: tuple  # (critical point, green value, error bound)

    @property
    def error(self) -> float:
        return max((e for _, _, e in self.per_critical), default=0.0)


def escape_rates(f: Polynomial, tol: float | None = None) -> EscapeReport:
    """Green values at all critical points (with multiplicity)."""
    if f.backend != FLOAT:
        f = f.to_float()
    crit = complex_roots(derivative(f))
    rows = []
    for c in crit:
        val, err, _ = green(f, c, tol=tol)
        rows.append((complex(c), val, err))
    values = [v for _, v, _ in rows]
    return EscapeReport(M=max(values), m=min(values), per_critical=tuple(rows))


# --- characteristic exponents ----------------------------------------------------


@dataclass(frozen=True)
class ExponentReport:
    p: int
    Mp: float  # max (1/p) log |lambda|; -inf when every multiplier vanishes
    mp: float  # min (1/p) log+ |lambda|
    spectrum: object


def char_exponents(f: Polynomial, p: int, rng=None) -> ExponentReport:
    """Max and min characteristic exponents at period p."""
    spec = spectrum(f if f.backend == FLOAT else f.to_float(), p, rng=rng)
    mags = np.array([abs(v) for v in spec.values])
    with np.errstate(divide="ignore"):
        logs = np.where(mags > 0, np.log(np.where(mags > 0, mags, 1.0)), -np.inf)
    mp_val = float(np.max(logs) / p) if len(logs) else float("-inf")
    mp_min = float(np.min(np.maximum(logs, 0.0)) / p)
    return ExponentReport(p=p, Mp=mp_val, mp=mp_min, spectrum=spec)


def theorem_b_constant(d: int) -> Fraction:
    """Sharp period-2 constant: 2(d-1)/d for even d, 2d/(d+1) for odd d."""
    if d < 2:
        raise DegreeError("constant defined for d >= 2")
    return Fraction(2 * (d - 1), d) if d % 2 == 0 else Fraction(2 * d, d + 1)


@dataclass(frozen=True)
class TheoremBReport:
    d: int
    M: float
    M1: float
    M2: float | None
    C_d: float | None
    slack: float
    budget: float
    passed: bool
    description: str


def theorem_b_check(f: Polynomial, rng=None, budget: float | None = None) -> TheoremBReport:
    """Evaluate the piecewise lower bound on small-cycle exponents.

    d = 2: M1 >= M; d = 3: M1 >= 2M; d >= 4: the disjunction
    ``M1 >= (d-1)/(d-2) M or M2 >= C_d M``.  ``slack`` is the amount by
    which the binding inequality is satisfied; a pass requires
    ``slack >= -budget`` where budget covers Green and multiplier error.
    """
    if f.backend != FLOAT:
        f = f.to_float()
    d = f.degree
    rates = escape_rates(f)
    m_f = rates.M
    e1 = char_exponents(f, 1, rng=rng)
    if budget is None:
        budget = rates.error + 1e-9 * (1.0 + abs(m_f))
    if d == 2:
        slack = e1.Mp - m_f
        return TheoremBReport(d, m_f, e1.Mp, None, None, slack, budget,
                              slack >= -budget, "M1 >= M")
    if d == 3:
        slack = e1.Mp - 2.0 * m_f
        return TheoremBReport(d, m_f, e1.Mp, None, None, slack, budget,
                              slack >= -budget, "M1 >= 2M")
    e2 = char_exponents(f, 2, rng=rng)
    c_d = float(theorem_b_constant(d))
    ratio1 = (d - 1) / (d - 2)
    slack = max(e1.Mp - ratio1 * m_f, e2.Mp - c_d * m_f)
    return TheoremBReport(
        d, m_f, e1.Mp, e2.Mp, c_d, slack, budget, slack >= -budget,
        "M1 >= (d-1)/(d-2) M or M2 >= C_d M",
    )


@dataclass(frozen=True)
class PeriodBoundsReport:
    d: int
    p: int
    M: float
    m: float
    Mp: float
    mp: float
    upper_slack: float
    lower_slack: float | None  # None when m == 0 (hypothesis vacuous)
    budget: float
    passed: bool


def appendix_a_check(f: Polynomial, p: int, rng=None, budget: float | None = None) -> PeriodBoundsReport:
    """Two-sided period-p bounds: Mp <= (d-1)M + 2 log d and mp >= (d-1)m.

    The additive constant 2*log d is the known sharp Archimedean constant
    for the upper bound; the lower bound is asserted only when every
    critical point escapes (m > 0), being vacuous otherwise.
    """
    if f.backend != FLOAT:
        f = f.to_float()
    d = f.degree
    rates = escape_rates(f)
    exps = char_exponents(f, p, rng=rng)
    if budget is None:
        budget = rates.error + 1e-9 * (1.0 + abs(rates.M))
    upper_slack = (d - 1) * rates.M + 2.0 * math.log(d) - exps.Mp
    lower_slack = None
    passed = upper_slack >= -budget
    if rates.m > budget:
        lower_slack = exps.mp - (d - 1) * rates.m
        passed = passed and lower_slack >= -budget
    return PeriodBoundsReport(
        d=d, p=p, M=rates.M, m=rates.m, Mp=exps.Mp, mp=exps.mp,
        upper_slack=upper_slack, lower_slack=lower_slack, budget=budget, passed=passed,
    )


def component_count(f: Polynomial) -> int:
    """Predicted number of components of the open sublevel set at height M.

    Counts the critical points attaining the maximal rate (with
    multiplicity) and returns that count plus one; only defined when M > 0
    (otherwise the filled Julia set is connected and there is no prediction).
    """
    if f.backend != FLOAT:
        f = f.to_float()
    rates = escape_rates(f)
    if rates.M <= 0.0:
        raise PolyspecError("M = 0: connected filled Julia set, no prediction")
    tol = config.COMPONENT_ATTAINMENT_TOL * max(1.0, rates.M)
    attained = sum(1 for _, v, _ in rates.per_critical if abs(v - rates.M) <= tol)
    return attained + 1


# --- sharpness families -----------------------------------------------------------


def sharp_family_data(kind: int, d: int, t):
    """One member of a sharpness family plus its critical vector.

    Kind 2 is ``z^2 (z-t)^(d-2) / d`` (critical points 0, t x (d-3), 2t/d);
    kind 1 is the two-basin family with critical points 0 x (d0-1),
    t x (d1-1) and a balanced simple critical point, built so the origin is
    fixed and t is fixed.  Both are critically marked: leading coefficient
    1/d and value 0 at the origin.  Works over any scalar backend
    containing t and 1/t.
    """
    if d < 4:
        raise DegreeError("sharpness families are defined for d >= 4")
    probe = Polynomial([t], _domain_of(t))
    dom = probe.domain
    t = dom.coerce(t)
    ident = Polynomial.identity(dom)
    tp = Polynomial([t], dom)
    if kind == 2:
        f = (ident**2) * ((ident - tp) ** (d - 2)) * Polynomial([dom.div(dom.one, dom.from_int(d))], dom)
        two_over_d = dom.div(dom.from_int(2), dom.from_int(d))
        crit = [dom.zero] + [t] * (d - 3) + [dom.mul(two_over_d, t)]
        return f, tuple(crit)
    if kind == 1:
        d0, d1 = (d // 2, d // 2) if d % 2 == 0 else ((d - 1) // 2, (d + 1) // 2)
        t_inv = dom.div(dom.one, t)
        omega = dom.add(
            dom.mul(dom.coerce(Fraction(d0, d)), t),
            dom.mul(
                dom.coerce(
                    Fraction(
                        (-1) ** d1 * math.factorial(d - 1),
                        math.factorial(d0 - 1) * math.factorial(d1 - 1),
                    )
                ),
                _power(dom, t_inv, d - 2),
            ),
        )
        omega_p = Polynomial([omega], dom)
        f = Polynomial.zero(dom)
        for j in range(d1):
            b_j = Fraction(
                (-1) ** j * math.factorial(d0 - 1) * math.factorial(d1 - 1),
                math.factorial(d0 + 1 + j) * math.factorial(d1 - 1 - j),
            )
            term = (
                (ident ** (d0 + j))
                * ((ident - tp) ** (d1 - 1 - j))
                * (ident * dom.from_int(d0) - omega_p * dom.from_int(d0 + 1 + j))
            )
            f = f + term * dom.coerce(b_j)
        crit = [dom.zero] * (d0 - 1) + [t] * (d1 - 1) + [omega]
        return f, tuple(crit)
    raise ValueError("kind must be 1 or 2")


def sharp_family(kind: int, d: int, t) -> Polynomial:
    """The sharpness family member at parameter t (see sharp_family_data)."""
    return sharp_family_data(kind, d, t)[0]


def _domain_of(t):
    from .scalars import get_domain

    if isinstance(t, Fraction) or (isinstance(t, int) and not isinstance(t, bool)):
        return get_domain("exact")
    if isinstance(t, (float, complex)):
        return get_domain("float")
    return get_domain("series")


def _power(dom, x, n):
    out = dom.one
    for _ in range(n):
        out = dom.mul(out, x)
    return out


def _exact_family_exponent(f_exact: Polynomial, p: int, rng=None) -> float:
    """Max (1/p) log |multiplier| from the exact multiplier polynomial.

    The sharpness families rely on exact critical-orbit relations
    (superattracting fixed points); rounding the coefficients splits those
    into spurious repelling pairs, so the multiplier polynomial must be
    computed in rational arithmetic before taking float roots.
    """
    from .spectra import multiplier_poly

    chi = multiplier_poly(f_exact, p, method="powersum")
    vals = complex_roots(chi.to_float(), rng=rng)
    mags = [abs(v) for v in vals if abs(v) > 0]
    if not mags:
        return float("-inf")
    return max(math.log(m) for m in mags) / p


def slope_fit(kind: int, d: int, quantity: str, t_values, rng=None):
    """Least-squares growth rate of an escape quantity along a family.

    ``quantity`` is one of 'M', 'M1', 'M2'.  Evaluates the family at each
    grid value (exactly representable: integers or rationals), regresses
    the quantity against log t, and drops the smallest grid point to
    suppress the bounded additive correction.  Multiplier exponents come
    from exact multiplier polynomials (see ``_exact_family_exponent``);
    the maximal escape rate is computed by floating Green iteration, which
    is stable under coefficient rounding.  Returns ``(slope, rows)`` with
    one (t, M, M1, M2) row per grid point.
    """
    if quantity not in ("M", "M1", "M2"):
        raise ValueError("quantity must be 'M', 'M1' or 'M2'")
    rows = []
    for t in t_values:
        t_ex = Fraction(t)
        f_ex = sharp_family(kind, d, t_ex)
        rates = escape_rates(f_ex.to_float())
        m1 = _exact_family_exponent(f_ex, 1, rng=rng)
        m2 = _exact_family_exponent(f_ex, 2, rng=rng)
        rows.append((complex(t), rates.M, m1, m2))
    usable = sorted(rows, key=lambda r: abs(r[0]))[1:]
    if len(usable) < 2:
        raise ValueError("need at least three grid points")
    xs = np.array([math.log(abs(r[0])) for r in usable])
    col = {"M": 1, "M1": 2, "M2": 3}[quantity]
    ys = np.array([r[col] for r in usable])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope, rows
