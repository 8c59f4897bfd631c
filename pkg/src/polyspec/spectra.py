"""Dynatomic polynomials, multiplier polynomials and multiplier spectra.

For a degree-d polynomial f and period p, the period-p dynatomic polynomial
divides ``f^p(z) - z`` and isolates genuine period-p behaviour via Moebius
inversion over the divisors of p.  Its roots, grouped into cycles, carry the
multiplier multiset; equivalently the multiplier polynomial chi (monic in
lambda, degree nu/p) has those multipliers as roots, with multiplicity.

Three routes to chi are implemented and cross-checked:

* ``interp``:    the defining normalized resultant, evaluated at deg+1
                 nodes and interpolated (exact and float backends);
* ``powersum``:  traces of powers of the iterate derivative modulo the
                 dynatomic polynomial, converted by Newton's identities
                 (any backend; the only practical route for large degrees
                 and for series coefficients);
* ``cycles``:    float only; locate the periodic points numerically, group
                 them into cycles and multiply derivatives along each orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import config
from .errors import CycleGroupingError, DegreeError, RootFindingError
from .poly import (
    Polynomial,
    derivative,
    divmod_poly,
    exact_div,
    iterates,
    poly_pth_root,
    resultant_in_lambda,
)
from .roots import band_seeds, complex_roots
from .scalars import EXACT, FLOAT, flog2_fraction, flog2_qc, mantissa_exp2


# --- combinatorics ------------------------------------------------------------


def _moebius(n: int) -> int:
    if n == 1:
        return 1
    result, m = 1, n
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


def _divisors(n: int):
    return [k for k in range(1, n + 1) if n % k == 0]


@dataclass(frozen=True)
class CycleCounts:
    """Point, cycle and normalization counts at one degree and period."""

    d: int
    p: int
    nu: int  # periodic points counted by the dynatomic polynomial
    N: int  # cycles: nu / p
    m: int  # resultant normalization exponent


def cycle_counts(d: int, p: int) -> CycleCounts:
    if d < 2 or p < 1:
        raise DegreeError("cycle counts need d >= 2 and p >= 1")
    nu = sum(_moebius(p // k) * d**k for k in _divisors(p))
    if nu % p != 0:
        raise ArithmeticError(f"nu={nu} not divisible by p={p}")
    m = d - 1 if p == 1 else nu * (d**p - 1) // (d - 1)
    return CycleCounts(d=d, p=p, nu=nu, N=nu // p, m=m)


# --- dynatomic polynomials ------------------------------------------------------


def dynatomic(f: Polynomial, p: int) -> Polynomial:
    """Period-p dynatomic polynomial of f by exact division."""
    return dynatomic_family(f, p)[p]


def dynatomic_family(f: Polynomial, p: int) -> dict:
    """All dynatomic polynomials for periods dividing p."""
    d = f.degree
    if d < 2:
        raise DegreeError("dynatomic polynomials need deg(f) >= 2")
    its = iterates(f, p)
    ident = Polynomial.identity(f.domain)
    phi = {}
    for k in _divisors(p):
        num = its[k - 1] - ident
        den = None
        for j in _divisors(k):
            if j < k:
                den = phi[j] if den is None else den * phi[j]
        phi[k] = num if den is None else exact_div(num, den)
    return phi


# --- multiplier polynomials ---------------------------------------------------


def _sigma_from_chi(chi: Polynomial):
    """sigma_j = (-1)^j coefficient of lambda^(N-j)."""
    n = chi.degree
    return tuple((-1) ** j * chi.coefficient(n - j) for j in range(1, n + 1))


def _chi_interp(f: Polynomial, phi: Polynomial, g: Polynomial, counts: CycleCounts) -> Polynomial:
    dom = f.domain
    r = resultant_in_lambda(phi, g)
    if dom.name == EXACT:
        a_d = f.leading_coefficient()
        scale = a_d ** (-counts.m)
        r = r * scale
        if r.leading_coefficient() != 1:
            raise ArithmeticError("normalized resultant is not monic")
    else:
        r = r * (1.0 / r.leading_coefficient())
    return poly_pth_root(r, counts.p)


def _chi_powersum(phi: Polynomial, g: Polynomial, counts: CycleCounts) -> Polynomial:
    dom = phi.domain
    nu, p, n_cycles = counts.nu, counts.p, counts.N
    lc = phi.leading_coefficient()
    inv_needed = not dom.is_zero(dom.sub(lc, dom.one))
    psi = Polynomial([dom.div(c, lc) for c in phi.coeffs], dom) if inv_needed else phi
    a = psi.coeffs  # monic, a[nu] == 1

    # power sums of the dynatomic roots (Newton's identities)
    q = [dom.zero] * nu
    q[0] = dom.from_int(nu)
    for k in range(1, nu):
        acc = dom.mul(dom.from_int(k), a[nu - k])
        for i in range(1, k):
            acc = dom.add(acc, dom.mul(a[nu - i], q[k - i]))
        q[k] = dom.neg(acc)

    # traces of g^k modulo psi
    u = divmod_poly(g, psi)[1]
    traces = []
    for k in range(1, n_cycles + 1):
        t = dom.zero
        for i, ui in enumerate(u.coeffs):
            t = dom.add(t, dom.mul(ui, q[i]))
        traces.append(dom.div(t, dom.from_int(p)))
        if k < n_cycles:
            u = divmod_poly(u * g, psi)[1]

    # elementary symmetric functions of the multipliers (inverse Newton)
    e = [dom.one]
    for k in range(1, n_cycles + 1):
        acc = dom.zero
        sign = 1
        for i in range(1, k + 1):
            term = dom.mul(e[k - i], traces[i - 1])
            acc = dom.add(acc, term) if sign > 0 else dom.sub(acc, term)
            sign = -sign
        e.append(dom.div(acc, dom.from_int(k)))

    coeffs = [dom.zero] * (n_cycles + 1)
    for k in range(n_cycles + 1):
        coeffs[n_cycles - k] = e[k] if k % 2 == 0 else dom.neg(e[k])
    return Polynomial(coeffs, dom)


def multiplier_poly(f: Polynomial, p: int, method: str | None = None, rng=None) -> Polynomial:
    """Monic period-p multiplier polynomial of f (in the variable lambda)."""
    d = f.degree
    if d < 2:
        raise DegreeError("multiplier polynomials need deg(f) >= 2")
    counts = cycle_counts(d, p)
    if method is None:
        if f.backend == EXACT:
            method = "interp" if counts.nu <= config.INTERP_MAX_NU_EXACT else "powersum"
        elif f.backend == FLOAT:
            method = "interp" if counts.nu <= config.INTERP_MAX_NU_FLOAT else "cycles"
        else:
            method = "powersum"
    if method == "cycles":
        if f.backend != FLOAT:
            raise DegreeError("the cycle route needs the float backend")
        _, mults = periodic_cycles(f, p, rng=rng)
        dom = f.domain
        chi = Polynomial([dom.one], dom)
        for lam in mults:
            chi = chi * Polynomial([-lam, dom.one], dom)
        return chi
    phi = dynatomic(f, p)
    if phi.degree != counts.nu:
        raise ArithmeticError(
            f"dynatomic degree {phi.degree} != expected {counts.nu}"
        )
    g = derivative(iterates(f, p)[-1])
    if method == "interp":
        return _chi_interp(f, phi, g, counts)
    if method == "powersum":
        return _chi_powersum(phi, g, counts)
    raise ValueError(f"unknown method {method!r}")


# --- periodic points on the float backend --------------------------------------


def _orbit_tables(f: Polynomial, fp: Polynomial, z: np.ndarray, p: int):
    """Orbit values f^k(z) and derivative products along the orbit."""
    coeffs = np.array([complex(c) for c in f.coeffs], dtype=complex)[::-1]
    dcoeffs = np.array([complex(c) for c in fp.coeffs], dtype=complex)[::-1]
    orbit = [z]
    dprod = [np.ones_like(z)]
    for _ in range(p):
        dprod.append(dprod[-1] * np.polyval(dcoeffs, orbit[-1]))
        orbit.append(np.polyval(coeffs, orbit[-1]))
    return orbit, dprod


def _periodic_points_float(f: Polynomial, p: int, rng=None) -> np.ndarray:
    """All roots of the period-p dynatomic polynomial of a float-backend f.

    The dynatomic polynomial is built in exact Gaussian-rational arithmetic
    (float coefficients are dyadic, so this is lossless) because its
    coefficients routinely overflow doubles; seeds come from the coefficient
    scale diagram and are polished by Newton iteration on the orbit-evaluated
    dynatomic quotient, which never materializes the huge coefficients.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    counts = cycle_counts(f.degree, p)
    f_qc = f.to_exact_qc()
    phi = dynatomic(f_qc, p)
    if phi.degree != counts.nu:
        raise ArithmeticError("dynatomic degree mismatch")

    coeffs = list(phi.coeffs)
    nzero = 0
    while coeffs and coeffs[0].is_zero():
        nzero += 1
        coeffs.pop(0)
    exps = np.array([flog2_qc(c) for c in coeffs])
    mants = np.array(
        [
            mantissa_exp2(c, exps[i]) if np.isfinite(exps[i]) else 0j
            for i, c in enumerate(coeffs)
        ],
        dtype=complex,
    )
    seeds = band_seeds(mants, exps, rng)

    fp = derivative(f)
    divs = _divisors(p)
    mob = {k: _moebius(p // k) for k in divs}
    zeros = np.zeros(nzero, dtype=complex)
    z = seeds.copy()
    # simultaneous (Aberth-style) refinement of the orbit-quotient Newton
    # step: the mutual repulsion keeps two seeds from collapsing onto one
    # root when the band seeding puts them in a shared Newton basin
    for it in range(80):
        with np.errstate(over="ignore", invalid="ignore"):
            orbit, dprod = _orbit_tables(f, fp, z, p)
        logderiv = np.zeros_like(z)
        bad = np.zeros(z.shape, dtype=bool)
        for k in divs:
            if mob[k] == 0:
                continue
            hk = orbit[k] - z
            hkd = dprod[k] - 1.0
            tiny = (np.abs(hk) == 0.0) | ~np.isfinite(hk) | ~np.isfinite(hkd)
            bad |= tiny
            hk = np.where(tiny, 1.0, hk)
            hkd = np.where(tiny, 1.0, hkd)
            logderiv = logderiv + mob[k] * (hkd / hk)
        logderiv = np.where(bad | (logderiv == 0), 1e-300, logderiv)
        w = 1.0 / logderiv  # Newton step of the dynatomic quotient
        all_pts = np.concatenate([z, zeros]) if nzero else z
        diff = z[:, None] - all_pts[None, :]
        diff[np.arange(len(z)), np.arange(len(z))] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            srep = np.sum(1.0 / diff, axis=1) - 1.0
        srep = np.where(np.isfinite(srep), srep, 0.0)
        denom = 1.0 - w * srep
        denom = np.where((denom == 0) | ~np.isfinite(denom), 1.0, denom)
        step = np.where(bad, 0.0, w / denom)
        lim = 0.25 * (1e-12 + np.abs(z))
        factor = np.where(np.abs(step) > lim, lim / np.maximum(np.abs(step), 1e-300), 1.0)
        z = z - step * factor
        if np.max(np.abs(step)) <= 1e-14 * np.max(1e-12 + np.abs(z)):
            break

    points = np.concatenate([zeros, z])
    if len(points) != counts.nu:
        raise RootFindingError(
            f"found {len(points)} periodic points, expected {counts.nu}"
        )
    return points


def _check_separation(points: np.ndarray):
    n = len(points)
    if n < 2:
        return
    dist = np.abs(points[:, None] - points[None, :])
    np.fill_diagonal(dist, np.inf)
    scale = np.maximum(np.abs(points)[:, None], np.abs(points)[None, :])
    rel = dist / np.maximum(scale, 1e-30)
    if np.min(rel) < config.NEAR_PARABOLIC_TOL:
        raise CycleGroupingError(
            f"two periodic points within relative distance {np.min(rel):.2e}"
        )


def _check_periods(f: Polynomial, points: np.ndarray, p: int, strict: bool = True):
    fp = derivative(f)
    with np.errstate(over="ignore", invalid="ignore"):
        orbit, _ = _orbit_tables(f, fp, points, p)
    # backward error: the orbit closes up to the roundoff of the final
    # polynomial evaluation, sum_j |a_j| |z_(p-1)|^j
    absc = np.array([abs(complex(c)) for c in f.coeffs])
    prev = np.abs(orbit[p - 1])
    eval_scale = (prev[:, None] ** np.arange(len(absc))[None, :]) @ absc
    eval_scale = np.maximum(eval_scale, np.abs(points)) + 1e-300
    ret = np.abs(orbit[p] - points) / eval_scale
    if not np.all(np.isfinite(ret)) or np.max(ret) > 1e-8:
        worst = np.max(ret[np.isfinite(ret)]) if np.any(np.isfinite(ret)) else np.inf
        raise RootFindingError(
            f"periodic-point polish failed to close orbits (worst {worst:.2e})"
        )
    early_tol = config.NEAR_PARABOLIC_TOL if strict else 1e-11
    pos_scale = np.maximum(np.abs(points), 1e-300)
    for k in range(1, p):
        if p % k == 0:
            early = np.abs(orbit[k] - points) / np.maximum(pos_scale, np.abs(orbit[k]))
            if np.min(early) < early_tol:
                raise CycleGroupingError(
                    f"dynatomic root returns after {k} < {p} steps "
                    "(parabolic degeneracy)"
                )


def periodic_cycles(f: Polynomial, p: int, rng=None):
    """Period-p cycles of a float-backend polynomial and their multipliers.

    Returns ``(cycles, multipliers)`` where cycles is a list of length-p
    point tuples (one representative orbit each) and multipliers the product
    of f' along each orbit.  A pure double-precision lane handles the
    well-separated case; when periodic points collide to double resolution
    or orbits cannot be followed accurately (deep contraction), the work is
    redone at escalating precision.  Raises :class:`CycleGroupingError`
    for genuine degeneracies (parabolic / multiple dynatomic roots).
    """
    if f.backend != FLOAT:
        f = f.to_float()
    counts = cycle_counts(f.degree, p)
    points = _periodic_points_float(f, p, rng=rng)
    try:
        _check_separation(points)
        _check_periods(f, points, p, strict=True)
        return _cycles_double(f, p, points, counts)
    except (CycleGroupingError, RootFindingError):
        return _cycles_highprec(f, p, points, counts)


def _cycles_double(f: Polynomial, p: int, points: np.ndarray, counts: CycleCounts):
    fp = derivative(f)
    fc = np.array([complex(c) for c in f.coeffs], dtype=complex)[::-1]
    dfc = np.array([complex(c) for c in fp.coeffs], dtype=complex)[::-1]
    n = len(points)
    used = np.zeros(n, dtype=bool)
    cycles = []
    multipliers = []
    for i in range(n):
        if used[i]:
            continue
        idx = [i]
        used[i] = True
        w = points[i]
        lam = 1.0 + 0j
        for _ in range(p - 1):
            lam *= np.polyval(dfc, w)
            w = np.polyval(fc, w)
            dist = np.abs(points - w)
            dist[used] = np.inf
            j = int(np.argmin(dist))
            scale = max(1e-30, abs(w))
            # located points are pairwise separated by the near-parabolic
            # guard, so a single nearest point within a fraction of that
            # separation is an unambiguous match
            if dist[j] > 0.1 * config.NEAR_PARABOLIC_TOL * scale:
                raise CycleGroupingError("orbit left the located point set")
            used[j] = True
            idx.append(j)
            w = points[j]
        lam *= np.polyval(dfc, w)
        back = np.polyval(fc, w)
        if abs(back - points[idx[0]]) > 1e-6 * max(1.0, abs(points[idx[0]])):
            raise CycleGroupingError("orbit failed to close into a cycle")
        cycles.append(tuple(points[k] for k in idx))
        multipliers.append(complex(lam))
    if len(cycles) != counts.N:
        raise CycleGroupingError(f"grouped {len(cycles)} cycles, expected {counts.N}")
    return cycles, np.array(multipliers, dtype=complex)


# --- spectra -----------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierSpectrum:
    """Multiset of period-p multipliers (roots of the multiplier polynomial).

    When f has a parabolic cycle of period properly dividing p, the multiset
    contains the corresponding lambda = 1 entries exactly as the multiplier
    polynomial does; the float backend reports this union-of-roots multiset
    and never certifies absence of parabolics.
    """

    d: int
    p: int
    values: tuple

    def __len__(self):
        return len(self.values)


def _mp_context_coeffs(f: Polynomial):
    """Exact mpmath copies of the (dyadic) float coefficients."""
    import mpmath as mp

    out = []
    for c in f.coeffs:
        z = complex(c)
        out.append(mp.mpc(z.real, z.imag))
    return out


def _mp_orbit_quotient_step(coeffs_mp, dcoeffs_mp, z, p, divs, mob):
    """Newton step of the dynatomic quotient at one mpmath point."""
    import mpmath as mp

    orbit = [z]
    dprod = [mp.mpc(1)]
    for _ in range(p):
        dprod.append(dprod[-1] * mp.polyval(dcoeffs_mp, orbit[-1]))
        orbit.append(mp.polyval(coeffs_mp, orbit[-1]))
    logderiv = mp.mpc(0)
    for k in divs:
        if mob[k] == 0:
            continue
        hk = orbit[k] - z
        if hk == 0:
            return None
        logderiv += mob[k] * ((dprod[k] - 1) / hk)
    if logderiv == 0:
        return None
    return 1 / logderiv


def _cycles_highprec(f: Polynomial, p: int, points: np.ndarray, counts: CycleCounts):
    """Refine, pair and differentiate orbits in high-precision arithmetic.

    Double precision locates all dynatomic roots but cannot follow orbits
    through deeply contracted regions (error grows by the multiplier along
    the orbit), and distinct periodic points may coincide to double
    resolution.  Working at a precision covering the amplification bound
    exp(p((d-1)M + 2 log d)) plus the cluster splitting depth makes the
    orbit pairing and the multiplier products well-defined again.
    """
    import mpmath as mp

    divs = _divisors(p)
    mob = {k: _moebius(p // k) for k in divs}
    n = len(points)
    for prec in (360, 720, 1440):
        with mp.workprec(prec):
            coeffs_mp = list(reversed(_mp_context_coeffs(f)))
            dcoeffs_mp = [c * (len(coeffs_mp) - 1 - i) for i, c in enumerate(coeffs_mp[:-1])]
            pts = [mp.mpc(z.real, z.imag) for z in points]
            # anything the double lane could not certifiably separate is
            # treated as a cluster and refined with mutual repulsion;
            # well-separated points get plain Newton
            groups = _clusters(points, tol=1e-4)
            clustered = set()
            for g in groups:
                clustered.update(g)
            for _ in range(prec // 8):
                moved = mp.mpf(0)
                for i in range(n):
                    if i in clustered:
                        continue
                    w = _mp_orbit_quotient_step(coeffs_mp, dcoeffs_mp, pts[i], p, divs, mob)
                    if w is None:
                        continue
                    pts[i] -= w
                    moved = max(moved, abs(w) / max(mp.mpf(1e-300), abs(pts[i])))
                if moved < mp.mpf(2) ** (-prec + 10):
                    break
            ok = True
            for g in groups:
                if not _refine_cluster_mp(coeffs_mp, dcoeffs_mp, pts, g, p, divs, mob, prec):
                    ok = False
                    break
            if ok:
                # refinement may reveal duplicates among formerly "separated"
                # points; regroup at working precision and retry once
                bad = _mp_duplicate_groups(pts, prec)
                if bad:
                    for g in bad:
                        if not _refine_cluster_mp(
                            coeffs_mp, dcoeffs_mp, pts, g, p, divs, mob, prec
                        ):
                            ok = False
                            break
                    ok = ok and not _mp_duplicate_groups(pts, prec)
            if not ok:
                continue  # escalate precision
            result = _pair_and_differentiate_mp(coeffs_mp, dcoeffs_mp, pts, p, counts, prec)
            if result is not None:
                return result
    raise CycleGroupingError(
        "periodic points could not be resolved at high precision "
        "(parabolic degeneracy or multiple dynatomic root)"
    )


def _mp_duplicate_groups(pts, prec):
    import mpmath as mp

    n = len(pts)
    floor = mp.mpf(2) ** (-prec // 2 + 20)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            s = max(abs(pts[i]), abs(pts[j]), mp.mpf(1e-300))
            if abs(pts[i] - pts[j]) < floor * s:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _clusters(points: np.ndarray, tol: float = 1e-8):
    n = len(points)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            s = max(abs(points[i]), abs(points[j]), 1e-300)
            if abs(points[i] - points[j]) < tol * s:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _refine_cluster_mp(coeffs_mp, dcoeffs_mp, pts, group, p, divs, mob, prec):
    """Split a cluster of numerically coincident roots by mutual repulsion."""
    import mpmath as mp

    k = len(group)
    center = sum(pts[i] for i in group) / k
    diam = max(abs(pts[i] - center) for i in group)
    spread = max(diam, max(mp.mpf(1e-300), abs(center)) * mp.mpf(2) ** (-30))
    for idx, i in enumerate(group):
        pts[i] = center + spread * mp.exp(2j * mp.pi * (idx + mp.mpf(1) / 3) / k)
    for _ in range(prec):
        worst = mp.mpf(0)
        for i in group:
            w = _mp_orbit_quotient_step(coeffs_mp, dcoeffs_mp, pts[i], p, divs, mob)
            if w is None:
                return False
            rep = mp.mpc(0)
            for j in group:
                if j != i and pts[i] != pts[j]:
                    rep += 1 / (pts[i] - pts[j])
            denom = 1 - w * rep
            if denom == 0:
                return False
            corr = w / denom
            pts[i] -= corr
            worst = max(worst, abs(corr) / max(mp.mpf(1e-300), abs(pts[i])))
        if worst < mp.mpf(2) ** (-prec // 2):
            break
    sep_floor = mp.mpf(2) ** (-prec // 2 + 20)
    for a in range(k):
        for b in range(a + 1, k):
            i, j = group[a], group[b]
            if abs(pts[i] - pts[j]) <= sep_floor * max(abs(pts[i]), abs(pts[j]), mp.mpf(1e-300)):
                return False  # unresolved at this precision
    return True


def _pair_and_differentiate_mp(coeffs_mp, dcoeffs_mp, pts, p, counts, prec):
    import mpmath as mp

    n = len(pts)
    used = [False] * n
    cycles = []
    multipliers = []
    margin = mp.mpf(2) ** (-40)
    for i in range(n):
        if used[i]:
            continue
        idx = [i]
        used[i] = True
        w = pts[i]
        lam = mp.mpc(1)
        closed = True
        for _ in range(p - 1):
            lam *= mp.polyval(dcoeffs_mp, w)
            w = mp.polyval(coeffs_mp, w)
            best, second, bj = mp.inf, mp.inf, -1
            for j in range(n):
                if used[j]:
                    continue
                dist = abs(pts[j] - w)
                if dist < best:
                    best, second, bj = dist, best, j
                elif dist < second:
                    second = dist
            scale = max(abs(w), mp.mpf(1e-300))
            if bj < 0 or best > margin * scale or (second < mp.inf and second < 4 * best):
                closed = False
                break
            used[bj] = True
            idx.append(bj)
            w = pts[bj]
        if not closed:
            return None
        lam *= mp.polyval(dcoeffs_mp, w)
        back = mp.polyval(coeffs_mp, w)
        if abs(back - pts[idx[0]]) > margin * max(mp.mpf(1), abs(pts[idx[0]])):
            return None
        cycles.append(tuple(complex(pts[q]) for q in idx))
        multipliers.append(complex(lam))
    if len(cycles) != counts.N:
        return None
    return cycles, np.array(multipliers, dtype=complex)


def spectrum(f: Polynomial, p: int, rng=None) -> MultiplierSpectrum:
    """Multiplier multiset of f at period p (complex values)."""
    d = f.degree
    counts = cycle_counts(d, p)
    if f.backend == EXACT:
        chi = multiplier_poly(f, p)
        values = complex_roots(chi.to_float(), rng=rng)
    elif f.backend == FLOAT:
        try:
            _, values = periodic_cycles(f, p, rng=rng)
        except (CycleGroupingError, RootFindingError):
            # genuine degeneracy (e.g. parabolic shorter cycles): realize the
            # union-of-roots contract through an exact lift of the dyadic
            # coefficients, feasible at moderate dynatomic degrees
            if counts.nu > config.INTERP_MAX_NU_FLOAT:
                raise
            if all(complex(c).imag == 0 for c in f.coeffs):
                lift = Polynomial([Fraction(complex(c).real) for c in f.coeffs], "exact")
            else:
                lift = f.to_exact_qc()
            phi = dynatomic(lift, p)
            g = derivative(iterates(lift, p)[-1])
            chi = _chi_powersum(phi, g, counts).to_float()
            values = complex_roots(chi, rng=rng)
    else:
        raise DegreeError("spectrum needs the exact or float backend")
    if len(values) != counts.N:
        raise ArithmeticError(f"spectrum size {len(values)} != N = {counts.N}")
    return MultiplierSpectrum(d=d, p=p, values=tuple(complex(v) for v in values))


def mult_morphism(f: Polynomial, max_period: int):
    """Elementary symmetric functions of the multiplier multisets.

    Returns one vector per period ``p = 1..max_period``; entry ``j-1`` holds
    the j-th elementary symmetric function, read off the multiplier
    polynomial without any root finding (exact on the exact backend).
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    out = []
    for p in range(1, max_period + 1):
        chi = multiplier_poly(f, p)
        out.append(_sigma_from_chi(chi))
    return tuple(out)


def sigma_from_chi(chi: Polynomial):
    return _sigma_from_chi(chi)


def fixed_point_relation_residual(f: Polynomial):
    """Residual of the rational fixed-point relation among period-1 sigmas.

    For every degree-d polynomial the weighted alternating sum
    ``d + sum_j (-1)^j (d-j) sigma_j`` vanishes; the return value is exactly
    zero on the exact backend and numerically tiny on the float backend.
    """
    d = f.degree
    sigma = mult_morphism(f, 1)[0]
    if f.backend == EXACT:
        total = Fraction(d)
        for j in range(1, d + 1):
            total += (-1) ** j * (d - j) * sigma[j - 1]
        return total
    total = complex(d)
    for j in range(1, d + 1):
        total += (-1) ** j * (d - j) * sigma[j - 1]
    return total
