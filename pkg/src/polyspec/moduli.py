"""Normal forms, conjugacy classes and explicit moduli reconstructions.

Affine conjugation ``f -> phi . f = phi o f o phi^(-1)`` preserves all
dynamical invariants.  Two canonical representatives are used throughout:

* monic centered: leading coefficient 1, no z^(d-1) term; unique up to the
  order-(d-1) root-of-unity action on the remaining coefficients;
* critically marked: leading coefficient 1/d and fixed origin, so the
  derivative factors as the product of (z - c_j) over the critical points.

For degrees 2 and 3 the period-1 symmetric functions determine the class
exactly; for degree 4 the class is recovered from the period-1 and period-2
symmetric functions by explicit elimination formulas, with the composition
locus (where two classes share a spectrum) handled separately.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import config
from .errors import DegreeError, NormalFormError, ReconstructionError
from .poly import Polynomial, compose, derivative
from .roots import complex_roots, multiset_match
from .scalars import EXACT, FLOAT, rational_nth_root
from .spectra import mult_morphism


@dataclass(frozen=True)
class NormalFormRecord:
    """A normalized polynomial plus the affine change that produced it.

    ``change = (alpha, beta)`` encodes ``phi(z) = alpha*z + beta`` with
    ``poly = phi . original``.
    """

    form: str  # 'monic_centered' | 'critically_marked'
    poly: Polynomial
    change: tuple
    critical: tuple | None = None


def affine_conjugate(f: Polynomial, alpha, beta) -> Polynomial:
    """phi . f for phi(z) = alpha*z + beta."""
    dom = f.domain
    alpha = dom.coerce(alpha)
    beta = dom.coerce(beta)
    inv = Polynomial([dom.div(dom.neg(beta), alpha), dom.div(dom.one, alpha)], dom)
    inner = compose(f, inv)
    return inner * alpha + Polynomial([beta], dom)


def to_monic_centered(f: Polynomial) -> NormalFormRecord:
    """Conjugate f to a monic centered representative.

    The scaling satisfies ``alpha**(d-1) = a_d``; the float backend takes
    the principal root, the exact backend requires ``a_d`` to be a perfect
    (d-1)-th rational power.
    """
    d = f.degree
    if d < 2:
        raise DegreeError("normal forms require deg(f) >= 2")
    dom = f.domain
    a_d = f.leading_coefficient()
    a_d1 = f.coefficient(d - 1)
    if f.backend == EXACT:
        xi = rational_nth_root(a_d, d - 1)
        if xi is None:
            raise NormalFormError(
                f"{a_d} has no exact rational {d - 1}-th root; "
                "use the float backend"
            )
    elif f.backend == FLOAT:
        xi = complex(a_d) ** (1.0 / (d - 1))
    else:
        raise NormalFormError("monic centered form needs exact or float backend")
    beta = dom.div(dom.mul(dom.coerce(xi), a_d1), dom.mul(dom.from_int(d), a_d))
    g = affine_conjugate(f, xi, beta)
    _check_monic_centered(g)
    return NormalFormRecord(form="monic_centered", poly=g, change=(xi, beta))


def _check_monic_centered(g: Polynomial):
    d = g.degree
    lc = g.leading_coefficient()
    sub = g.coefficient(d - 1)
    if g.backend == FLOAT:
        scale = max(1.0, max(abs(c) for c in g.coeffs))
        if abs(lc - 1) > 1e-10 * scale or abs(sub) > 1e-10 * scale:
            raise NormalFormError("normalization failed the monic centered check")
    else:
        if lc != 1 or sub != 0:
            raise NormalFormError("normalization failed the monic centered check")


def is_monic_centered(f: Polynomial, tol: float = 1e-9) -> bool:
    d = f.degree
    if d < 2:
        return False
    if f.backend == EXACT:
        return f.leading_coefficient() == 1 and f.coefficient(d - 1) == 0
    scale = max(1.0, max(abs(c) for c in f.coeffs))
    return (
        abs(f.leading_coefficient() - 1) <= tol * scale
        and abs(f.coefficient(d - 1)) <= tol * scale
    )


# --- critically marked (Ingram) form ------------------------------------------


def ingram_from_critical(c, domain=None) -> Polynomial:
    """The critically marked polynomial with critical points c_1..c_(d-1).

    Leading coefficient 1/d, fixed origin, derivative prod(z - c_j).  Works
    over any backend whose scalars contain the entries of c.
    """
    c = list(c)
    d = len(c) + 1
    if d < 2:
        raise DegreeError("need at least one critical point")
    if domain is None:
        if all(isinstance(x, (int, Fraction)) for x in c):
            dom = Polynomial.exact([0, 1]).domain
        else:
            dom = Polynomial.floating([0, 1]).domain
    else:
        dom = Polynomial([], domain).domain if isinstance(domain, str) else domain
    ident = Polynomial.identity(dom)
    deriv = Polynomial([dom.one], dom)
    for cj in c:
        deriv = deriv * (ident - Polynomial([dom.coerce(cj)], dom))
    coeffs = [dom.zero] * (d + 1)
    for j, aj in enumerate(deriv.coeffs):
        coeffs[j + 1] = dom.div(aj, dom.from_int(j + 1))
    return Polynomial(coeffs, dom)


def ingram_form(f: Polynomial) -> NormalFormRecord:
    """Conjugate a float-backend polynomial to critically marked form.

    ``phi(z) = alpha*(z - w)`` with ``alpha**(d-1) = d*a_d`` (principal
    root) and w a fixed point of f; the result fixes 0 and has leading
    coefficient 1/d.  The record carries the critical vector sorted by
    (magnitude, argument).
    """
    d = f.degree
    if d < 2:
        raise DegreeError("normal forms require deg(f) >= 2")
    if f.backend != FLOAT:
        f = f.to_float()
    dom = f.domain
    a_d = complex(f.leading_coefficient())
    alpha = (d * a_d) ** (1.0 / (d - 1))
    fixed = complex_roots(f - Polynomial.identity(dom))
    w = sorted(fixed, key=lambda z: (abs(z), cmath.phase(z)))[0]
    g = affine_conjugate(f, alpha, -alpha * w)
    scale = max(1.0, max(abs(cc) for cc in g.coeffs))
    if abs(g.coefficient(0)) > 1e-9 * scale or abs(g.leading_coefficient() - 1.0 / d) > 1e-9 * abs(
        g.leading_coefficient()
    ):
        raise NormalFormError("critically marked normalization failed")
    crit = complex_roots(derivative(g))
    crit = tuple(sorted(crit, key=lambda z: (abs(z), cmath.phase(z))))
    return NormalFormRecord(
        form="critically_marked", poly=g, change=(alpha, -alpha * w), critical=crit
    )


# --- root-of-unity orbit --------------------------------------------------------


def mu_orbit(f: Polynomial):
    """Orbit of a monic centered f under the order-(d-1) scaling action.

    The unit ``omega`` acts by ``b_j -> omega**(1-j) * b_j``.  Exact inputs
    are supported for d <= 3 (the units are rational there); larger degrees
    use the float backend.
    """
    d = f.degree
    if not is_monic_centered(f):
        raise NormalFormError("mu_orbit requires a monic centered polynomial")
    n = d - 1
    if f.backend == EXACT:
        if n > 2:
            raise NormalFormError(
                "exact backend supports the unit action only for d <= 3"
            )
        units = [Fraction(1)] if n == 1 else [Fraction(1), Fraction(-1)]
    else:
        units = [cmath.exp(2j * cmath.pi * k / n) for k in range(n)]
    dom = f.domain
    orbit = []
    for w in units:
        coeffs = list(f.coeffs)
        for j in range(d - 1):
            coeffs[j] = dom.mul(dom.coerce(w ** (1 - j)), coeffs[j])
        orbit.append(Polynomial(coeffs, dom))
    return orbit


def same_class(f: Polynomial, g: Polynomial, tol: float | None = None) -> bool:
    """Whether f and g are affinely conjugate (float backend).

    Compares the monic centered form of g against the full unit orbit of
    the monic centered form of f, coefficientwise; trying the whole orbit
    makes the branch chosen inside ``to_monic_centered`` irrelevant.
    """
    tol = config.SAME_CLASS_TOL if tol is None else tol
    if f.degree != g.degree:
        return False
    mf = to_monic_centered(f.to_float()).poly
    mg = to_monic_centered(g.to_float()).poly
    scale = max(
        [1.0]
        + [abs(c) for c in mf.coeffs]
        + [abs(c) for c in mg.coeffs]
    )
    for cand in mu_orbit(mf):
        dev = max(
            abs(complex(cand.coefficient(j)) - complex(mg.coefficient(j)))
            for j in range(f.degree + 1)
        )
        if dev <= tol * scale:
            return True
    return False


# --- explicit low-degree isomorphisms ---------------------------------------------


def low_degree_class_from_spectrum(d: int, sigma):
    """Moduli coordinates from the period-1 symmetric functions (d = 2, 3).

    Degree 2 returns ``(a_0,)`` for the representative z^2 + a_0; degree 3
    returns ``(alpha, beta) = (a_1, a_0**2)`` for z^3 + a_1 z + a_0.
    """
    sigma = list(sigma)
    if d == 2:
        if len(sigma) != 2:
            raise ValueError("degree 2 expects two symmetric functions")
        return (sigma[1] / 4,)
    if d == 3:
        if len(sigma) != 3:
            raise ValueError("degree 3 expects three symmetric functions")
        s1, s3 = sigma[0], sigma[2]
        alpha = -s1 / 3 + 2
        beta = (
            Fraction(4, 729) * s1**3
            - Fraction(4, 81) * s1**2
            + Fraction(1, 9) * s1
            + Fraction(1, 27) * s3
            - Fraction(2, 27)
            if isinstance(s1, Fraction)
            else (4 / 729) * s1**3 - (4 / 81) * s1**2 + (1 / 9) * s1 + (1 / 27) * s3 - 2 / 27
        )
        return (alpha, beta)
    raise DegreeError("explicit inversion exists only for d in {2, 3}")


def low_degree_sigma_from_class(d: int, coords):
    """Forward direction of the low-degree isomorphisms."""
    if d == 2:
        (a0,) = coords
        return (a0 - a0 + 2, 4 * a0)
    if d == 3:
        alpha, beta = coords
        s1 = -3 * alpha + 6
        s2 = -6 * alpha + 9
        s3 = 4 * alpha**3 - 12 * alpha**2 + 9 * alpha + 27 * beta
        return (s1, s2, s3)
    raise DegreeError("explicit isomorphisms exist only for d in {2, 3}")


# --- quartic invariants -------------------------------------------------------------


@dataclass(frozen=True)
class QuarticInvariants:
    """Generators of the ring of conjugacy invariants of monic centered quartics.

    For z^4 + a_2 z^2 + a_1 z + a_0: alpha = a_1, beta = a_0**3,
    gamma = a_2**3, delta = a_0*a_2; always beta*gamma == delta**3.
    """

    alpha: object
    beta: object
    gamma: object
    delta: object

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta)


def quartic_invariants(f: Polynomial) -> QuarticInvariants:
    if f.degree != 4 or not is_monic_centered(f):
        raise NormalFormError("quartic invariants need a monic centered quartic")
    a0, a1, a2 = f.coefficient(0), f.coefficient(1), f.coefficient(2)
    return QuarticInvariants(alpha=a1, beta=a0**3, gamma=a2**3, delta=a0 * a2)


def quartic_sigma_from_invariants(inv: QuarticInvariants):
    """(s1, s2, s4, t2) of a quartic class from its invariants.

    These four polynomial expressions generate the reconstruction below and
    are validated exactly against spectra computed from scratch.
    """
    a, b, g, dl = inv.alpha, inv.beta, inv.gamma, inv.delta
    s1 = -8 * a + 12
    s2 = 18 * a**2 - 60 * a + 4 * g - 16 * dl + 48
    s4 = (
        -27 * a**4
        + 108 * a**3
        - 4 * a**2 * g
        + 144 * a**2 * dl
        - 144 * a**2
        + 8 * a * g
        - 288 * a * dl
        + 16 * g * dl
        - 128 * dl**2
        + 64 * a
        + 256 * b
        + 128 * dl
    )
    t2 = (
        27 * a**4
        + 324 * a**3
        + 4 * a**2 * g
        - 144 * a**2 * dl
        + 1440 * a**2
        + 24 * a * g
        - 864 * a * dl
        - 16 * g * dl
        + 128 * dl**2
        + 2880 * a
        - 256 * b
        + 96 * g
        - 512 * dl
        + 3840
    )
    return (s1, s2, s4, t2)


def quartic_relations(inv: QuarticInvariants, s1, s2, s4, t2):
    """The five elimination relations; all exactly zero on genuine spectra.

    Returned in the order (alpha), (delta1), (delta2), (beta), (gamma).
    """
    a, b, g, dl = inv.alpha, inv.beta, inv.gamma, inv.delta
    rel_alpha = a - (_frac(-1, 8, a) * s1 + _frac(3, 2, a))
    rel_delta1 = (
        2048 * (s1 - 12) * dl
        - 9 * s1**3
        + 660 * s1**2
        - 16 * s1 * s2
        - 19952 * s1
        + 576 * s2
        - 16 * s4
        - 16 * t2
        + 202944
    )
    rel_delta2 = (
        1048576 * dl**2
        + 512 * (315 * s1**2 + 4 * s2**2 - 3624 * s1 - 352 * s2 - 12 * s4 + 4 * t2 - 9552) * dl
        - 9 * s1**2 * s2**2
        + 3672 * s1**2 * s2
        + 81 * s1**2 * s4
        - 63 * s1**2 * t2
        - 24 * s1 * s2**2
        - 344240 * s1**2
        - 124416 * s1 * s2
        + 1168 * s1 * s4
        + 784 * s1 * t2
        + 4848 * s2**2
        - 672 * s2 * s4
        - 160 * s2 * t2
        + s4**2
        + 2 * s4 * t2
        + t2**2
        + 7144320 * s1
        + 1537152 * s2
        - 12432 * s4
        - 11664 * t2
        - 12936960
    )
    rel_beta = b - (
        _frac(-3, 2048, b) * dl * s1**2
        + _frac(3, 65536, b) * s1**2 * s2
        + _frac(1, 4, b) * dl**2
        + _frac(31, 256, b) * dl * s1
        - _frac(1, 64, b) * dl * s2
        + _frac(103, 16384, b) * s1**2
        - _frac(1, 2048, b) * s1 * s2
        - _frac(1, 65536, b) * s1 * s4
        - _frac(1, 65536, b) * s1 * t2
        - _frac(127, 128, b) * dl
        - _frac(1007, 2048, b) * s1
        + _frac(69, 4096, b) * s2
        + _frac(55, 16384, b) * s4
        - _frac(9, 16384, b) * t2
        + _frac(7131, 1024, b)
    )
    rel_gamma = g - (
        _frac(-9, 128, g) * s1**2 + 4 * dl - _frac(3, 16, g) * s1 + _frac(1, 4, g) * s2 + _frac(3, 8, g)
    )
    return (rel_alpha, rel_delta1, rel_delta2, rel_beta, rel_gamma)


def _frac(num, den, like):
    """Rational constant in the arithmetic of `like` (Fraction or complex)."""
    if isinstance(like, Fraction):
        return Fraction(num, den)
    return num / den


def quartic_reconstruct(s1, s2, s4, t2, forward_tol: float = 1e-6):
    """Quartic invariants from (s1, s2, s4, t2); at most two candidates.

    Off the composition locus (s1 != 12) the class is unique and delta
    comes from a linear relation; on the locus the quadratic relation gives
    both members of a composition pair.  Candidates are validated against
    beta*gamma == delta**3 and by re-deriving the four inputs from the
    candidate invariants (exact on the exact backend).
    """
    exact = isinstance(s1, Fraction)
    twelve = Fraction(12) if exact else 12.0
    deltas = []
    if (s1 != twelve) if exact else abs(s1 - 12) > 1e-9 * max(1.0, abs(s1)):
        num = (
            9 * s1**3
            - 660 * s1**2
            + 16 * s1 * s2
            + 19952 * s1
            - 576 * s2
            + 16 * s4
            + 16 * t2
            - 202944
        )
        deltas.append(num / (2048 * (s1 - twelve)))
    else:
        a_q = Fraction(1048576) if exact else 1048576.0
        b_q = 512 * (315 * s1**2 + 4 * s2**2 - 3624 * s1 - 352 * s2 - 12 * s4 + 4 * t2 - 9552)
        c_q = (
            -9 * s1**2 * s2**2
            + 3672 * s1**2 * s2
            + 81 * s1**2 * s4
            - 63 * s1**2 * t2
            - 24 * s1 * s2**2
            - 344240 * s1**2
            - 124416 * s1 * s2
            + 1168 * s1 * s4
            + 784 * s1 * t2
            + 4848 * s2**2
            - 672 * s2 * s4
            - 160 * s2 * t2
            + s4**2
            + 2 * s4 * t2
            + t2**2
            + 7144320 * s1
            + 1537152 * s2
            - 12432 * s4
            - 11664 * t2
            - 12936960
        )
        disc = b_q**2 - 4 * a_q * c_q
        if exact:
            root = rational_nth_root(disc, 2) if disc >= 0 else None
            if root is None:
                return ()
            deltas.extend([(-b_q + root) / (2 * a_q), (-b_q - root) / (2 * a_q)])
        else:
            root = complex(disc) ** 0.5
            deltas.extend([(-b_q + root) / (2 * a_q), (-b_q - root) / (2 * a_q)])

    alpha = _frac(-1, 8, s1) * s1 + _frac(3, 2, s1)
    candidates = []
    for dl in deltas:
        beta = (
            _frac(-3, 2048, dl) * dl * s1**2
            + _frac(3, 65536, dl) * s1**2 * s2
            + _frac(1, 4, dl) * dl**2
            + _frac(31, 256, dl) * dl * s1
            - _frac(1, 64, dl) * dl * s2
            + _frac(103, 16384, dl) * s1**2
            - _frac(1, 2048, dl) * s1 * s2
            - _frac(1, 65536, dl) * s1 * s4
            - _frac(1, 65536, dl) * s1 * t2
            - _frac(127, 128, dl) * dl
            - _frac(1007, 2048, dl) * s1
            + _frac(69, 4096, dl) * s2
            + _frac(55, 16384, dl) * s4
            - _frac(9, 16384, dl) * t2
            + _frac(7131, 1024, dl)
        )
        gamma = _frac(-9, 128, dl) * s1**2 + 4 * dl - _frac(3, 16, dl) * s1 + _frac(1, 4, dl) * s2 + _frac(3, 8, dl)
        cand = QuarticInvariants(alpha=alpha, beta=beta, gamma=gamma, delta=dl)
        if _validate_candidate(cand, (s1, s2, s4, t2), exact, forward_tol):
            candidates.append(cand)
    if not candidates:
        raise ReconstructionError("no candidate passed validation")
    return tuple(candidates)


def _validate_candidate(cand, target, exact, tol):
    b, g, dl = cand.beta, cand.gamma, cand.delta
    fwd = quartic_sigma_from_invariants(cand)
    if exact:
        return b * g == dl**3 and fwd == tuple(target)
    scale = max([1.0] + [abs(complex(x)) for x in target] + [abs(complex(dl)) ** 3])
    ok_syzygy = abs(complex(b) * complex(g) - complex(dl) ** 3) <= tol * scale
    ok_fwd = all(abs(complex(x) - complex(y)) <= tol * scale for x, y in zip(fwd, target))
    return ok_syzygy and ok_fwd


# --- composition pairs ----------------------------------------------------------------


def compose_pair(h1: Polynomial, h2: Polynomial):
    """(h1 o h2, h2 o h1): isospectral for every period."""
    if h1.degree < 2 or h2.degree < 2:
        raise DegreeError("composition pairs need both degrees >= 2")
    return compose(h1, h2), compose(h2, h1)


def quartic_decompose(f: Polynomial):
    """Split a monic centered quartic with a_1 = 0 into two quadratics.

    Returns (h1, h2) with h_i = z^2 + c_i and h1 o h2 == f, via
    ``c_2 = a_2/2`` and ``c_1 = a_0 - c_2**2``.
    """
    if f.degree != 4 or not is_monic_centered(f):
        raise NormalFormError("decomposition needs a monic centered quartic")
    a0, a1, a2 = f.coefficient(0), f.coefficient(1), f.coefficient(2)
    if f.backend == FLOAT:
        scale = max(1.0, max(abs(c) for c in f.coeffs))
        if abs(a1) > config.QUARTIC_A1_TOL * scale:
            raise NormalFormError(f"a_1 = {a1} is not zero within tolerance")
    elif a1 != 0:
        raise NormalFormError("decomposition requires a_1 = 0")
    dom = f.domain
    c2 = dom.div(a2, dom.from_int(2))
    c1 = dom.sub(a0, dom.mul(c2, c2))
    h1 = Polynomial([c1, dom.zero, dom.one], dom)
    h2 = Polynomial([c2, dom.zero, dom.one], dom)
    return h1, h2


def spectra_match(f: Polynomial, g: Polynomial, periods, tol: float = 1e-7, rng=None) -> bool:
    """Float check that f and g share multiplier multisets for the periods."""
    from .spectra import spectrum

    for p in periods:
        sf = spectrum(f.to_float(), p, rng=rng)
        sg = spectrum(g.to_float(), p, rng=rng)
        if not multiset_match(sf.values, sg.values, tol=tol):
            return False
    return True
