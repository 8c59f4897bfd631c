"""Simultaneous complex root finding and tolerance-aware multiset matching.

The core finder is Aberth-Ehrlich iteration started from a randomly
perturbed circle, followed by Newton polishing.  For polynomials whose
coefficients span many orders of magnitude the roots cluster at separated
scales; ``band_seeds`` splits the coefficient Newton diagram into scale
bands and runs Aberth per band, which keeps everything inside double range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import config
from .errors import RootFindingError
from .poly import Polynomial


def _as_coeff_array(f) -> np.ndarray:
    if isinstance(f, Polynomial):
        coeffs = [complex(c) for c in f.to_float().coeffs]
    else:
        coeffs = [complex(c) for c in f]
    arr = np.array(coeffs, dtype=complex)
    while arr.size and arr[-1] == 0:
        arr = arr[:-1]
    return arr


def _aberth_core(coeffs: np.ndarray, rng, max_iter: int) -> np.ndarray:
    """All roots of a polynomial with unit-scale coefficients (low-to-high)."""
    n = len(coeffs) - 1
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    c = coeffs / coeffs[-1]
    dc = c[1:] * np.arange(1, n + 1)
    radius = 1.0 + np.max(np.abs(c[:-1]))
    angles = 2 * np.pi * (np.arange(n) + 0.35) / n + 0.12 * rng.standard_normal(n)
    z = radius * np.exp(1j * angles)
    chi = c[::-1]  # high-to-low for polyval
    dchi = dc[::-1]
    for _ in range(max_iter):
        p = np.polyval(chi, z)
        dp = np.polyval(dchi, z)
        dp = np.where(dp == 0, 1e-300, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(1.0 / diff, axis=1) - 1.0
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1e-300, denom)
        corr = w / denom
        z = z - corr
        if np.max(np.abs(corr)) <= 1e-14 * np.max(1.0 + np.abs(z)):
            break
    # Newton polish
    for _ in range(config.NEWTON_POLISH_STEPS):
        p = np.polyval(chi, z)
        dp = np.polyval(dchi, z)
        step = np.where(dp != 0, p / np.where(dp == 0, 1.0, dp), 0.0)
        big = np.abs(step) > 0.5 * (1.0 + np.abs(z))
        step = np.where(big, 0.0, step)
        z = z - step
    return z


def upper_hull(points):
    """Upper convex hull of (x, y) points sorted by x; collinear merged."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def band_seeds(mantissas: np.ndarray, exps: np.ndarray, rng) -> np.ndarray:
    """Approximate roots from the coefficient scale diagram.

    ``coefficient[i] == mantissas[i] * 2**exps[i]``; zero coefficients carry
    ``exps[i] == -inf``.  Trailing/leading structure must already be
    stripped (nonzero constant and leading terms).
    """
    n = len(mantissas) - 1
    finite = [(i, exps[i]) for i in range(n + 1) if np.isfinite(exps[i])]
    hull = upper_hull(finite)
    seeds = []
    for k in range(len(hull) - 1):
        a, ya = hull[k]
        b, yb = hull[k + 1]
        slope = (yb - ya) / (b - a)
        idx = np.arange(a, b + 1)
        shift = exps[a : b + 1] - slope * idx
        shift = shift - np.max(shift[np.isfinite(shift)])
        vals = np.where(
            np.isfinite(shift), mantissas[a : b + 1] * np.exp2(np.where(np.isfinite(shift), shift, 0.0)), 0.0
        )
        w = _aberth_core(vals.astype(complex), rng, config.ABERTH_MAX_ITER)
        # a hull segment of slope m accounts for its length in roots of
        # magnitude 2**(-m)
        seeds.extend(w * 2.0**-slope)
    return np.array(seeds, dtype=complex)


def _mant_exp_from_complex(coeffs: np.ndarray):
    mags = np.abs(coeffs)
    with np.errstate(divide="ignore"):
        exps = np.where(mags > 0, np.log2(np.where(mags > 0, mags, 1.0)), -np.inf)
    mants = np.where(mags > 0, coeffs / np.exp2(np.where(mags > 0, exps, 0.0)), 0.0)
    return mants, exps


def _scaled_terms(mants: np.ndarray, exps: np.ndarray, z: np.ndarray):
    """Term table for p(z): mantissas and log2 magnitudes, overflow-free."""
    mag = np.abs(z)
    with np.errstate(divide="ignore"):
        s = np.where(mag > 0, np.log2(np.where(mag > 0, mag, 1.0)), -np.inf)
    zn = np.where(mag > 0, z / np.exp2(np.where(np.isfinite(s), s, 0.0)), 0.0)
    i = np.arange(len(mants))
    # log2 |term_ij| = exps[j] + j * s_i
    logt = exps[None, :] + i[None, :] * s[:, None]
    logt = np.where(np.isfinite(logt), logt, -np.inf)
    zpow = zn[:, None] ** i[None, :]
    return zpow * mants[None, :], logt


def _scaled_newton_steps(mants, exps, dmants, dexps, z):
    """p(z)/p'(z) computed in a per-point scaled frame (no overflow)."""
    tm, tl = _scaled_terms(mants, exps, z)
    dm, dl = _scaled_terms(dmants, dexps, z)
    top = np.maximum(
        np.max(np.where(np.isfinite(tl), tl, -np.inf), axis=1),
        np.max(np.where(np.isfinite(dl), dl, -np.inf), axis=1),
    )
    p = np.sum(tm * np.exp2(np.clip(tl - top[:, None], -1060, 0)), axis=1)
    dp = np.sum(dm * np.exp2(np.clip(dl - top[:, None], -1060, 0)), axis=1)
    dp = np.where(dp == 0, 1e-300, dp)
    return p / dp


def _scaled_rel_residuals(mants, exps, z):
    """|p(z)| / sum |c_k||z|^k, overflow-free."""
    tm, tl = _scaled_terms(mants, exps, z)
    top = np.max(np.where(np.isfinite(tl), tl, -np.inf), axis=1)
    w = np.exp2(np.clip(tl - top[:, None], -1060, 0))
    p = np.abs(np.sum(tm * w, axis=1))
    scale = np.sum(np.abs(tm) * w, axis=1)
    return p / np.maximum(scale, 1e-300)


def roots_from_scaled(mants, exps, rng=None, residual_tol: float = 1e-7, max_iter: int | None = None):
    """Roots of a polynomial given as mantissa/exponent coefficient arrays.

    Same banded Aberth pipeline as :func:`complex_roots`, but the
    coefficients never need to fit doubles (only the roots do).  The looser
    default residual tolerance reflects inputs that are themselves accurate
    to ~1e-13 relative.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    max_iter = config.ABERTH_MAX_ITER if max_iter is None else max_iter
    mants = np.asarray(mants, dtype=complex)
    exps = np.asarray(exps, dtype=float)
    keep = len(mants)
    while keep > 1 and not np.isfinite(exps[keep - 1]):
        keep -= 1
    mants, exps = mants[:keep], exps[:keep]
    if keep <= 1:
        raise RootFindingError("degree < 1 after trailing zeros")
    nzero = 0
    while nzero < len(mants) and not np.isfinite(exps[nzero]):
        nzero += 1
    roots = [0j] * nzero
    mants, exps = mants[nzero:], exps[nzero:]
    if len(mants) > 1:
        z = band_seeds(mants, exps, rng)
        z = _aberth_scaled_me(mants, exps, z, max_iter)
        rel = _scaled_rel_residuals(mants, exps, z)
        worst = float(np.max(rel)) if len(rel) else 0.0
        if worst > residual_tol:
            raise RootFindingError(
                f"root finder did not converge (worst residual {worst:.3e})",
                worst_residual=worst,
            )
        roots.extend(z.tolist())
    return np.array(roots, dtype=complex)


def complex_roots(f, rng=None, residual_tol: float | None = None, max_iter: int | None = None):
    """All roots of f with multiplicity, as a complex numpy array.

    Aberth-Ehrlich simultaneous iteration seeded from the coefficient scale
    diagram (one perturbed circle per scale band), with all evaluations in
    per-point scaled frames so coefficient ranges never overflow doubles.
    Raises :class:`RootFindingError` when any residual exceeds
    ``residual_tol`` times the local coefficient scale ``sum_k |c_k||r|^k``.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    residual_tol = config.ROOT_RESIDUAL_TOL if residual_tol is None else residual_tol
    max_iter = config.ABERTH_MAX_ITER if max_iter is None else max_iter
    coeffs = _as_coeff_array(f)
    if len(coeffs) <= 1:
        raise RootFindingError("root finding requires degree >= 1")
    nzero = 0
    while coeffs[0] == 0:
        nzero += 1
        coeffs = coeffs[1:]
    roots = [0j] * nzero
    if len(coeffs) > 1:
        mants, exps = _mant_exp_from_complex(coeffs)
        z = band_seeds(mants, exps, rng)
        z = _aberth_scaled(coeffs, mants, exps, z, max_iter)
        rel = _scaled_rel_residuals(mants, exps, z)
        worst = float(np.max(rel)) if len(rel) else 0.0
        if worst > residual_tol:
            raise RootFindingError(
                f"root finder did not converge (worst residual {worst:.3e})",
                worst_residual=worst,
            )
        roots.extend(z.tolist())
    return np.array(roots, dtype=complex)


def _aberth_scaled(coeffs, mants, exps, z, max_iter):
    deriv = coeffs[1:] * np.arange(1, len(coeffs))
    dmants, dexps = _mant_exp_from_complex(deriv)
    return _aberth_scaled_loop(mants, exps, dmants, dexps, z, max_iter)


def _aberth_scaled_me(mants, exps, z, max_iter):
    idx = np.arange(1, len(mants))
    dmants = mants[1:] * idx
    dexps = exps[1:].copy()
    dmants, dexps = _renorm(dmants, dexps)
    return _aberth_scaled_loop(mants, exps, dmants, dexps, z, max_iter)


def _renorm(m, e):
    am = np.abs(m)
    zero = (am == 0) | ~np.isfinite(e)
    lg = np.floor(np.log2(np.where(zero, 1.0, am)))
    return np.where(zero, 0.0, m / np.exp2(lg)), np.where(zero, -np.inf, e + lg)


def _aberth_scaled_loop(mants, exps, dmants, dexps, z, max_iter):
    for _ in range(max_iter):
        w = _scaled_newton_steps(mants, exps, dmants, dexps, z)
        w = np.where(np.isfinite(w), w, 0.0)
        diff = z[:, None] - z[None, :]
        diff[np.arange(len(z)), np.arange(len(z))] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(1.0 / diff, axis=1) - 1.0
        s = np.where(np.isfinite(s), s, 0.0)
        denom = 1.0 - w * s
        denom = np.where((denom == 0) | ~np.isfinite(denom), 1.0, denom)
        corr = w / denom
        lim = 0.7 * (1e-300 + np.abs(z))
        with np.errstate(over="ignore"):
            factor = np.where(
                np.abs(corr) > lim, lim / np.maximum(np.abs(corr), 1e-300), 1.0
            )
        z = z - corr * factor
        if np.max(np.abs(corr)) <= 1e-15 * np.max(1e-300 + np.abs(z)):
            break
    return z


# --- multiset matching --------------------------------------------------------


@dataclass(frozen=True)
class MatchResult:
    """Outcome of a minimum-cost perfect matching between two multisets."""

    matched: bool
    pairs: tuple
    max_distance: float  # normalized by max(1, largest magnitude)
    tol: float

    def __bool__(self):
        return self.matched


def multiset_match(a, b, tol: float | None = None) -> MatchResult:
    """Match two scalar multisets up to a tolerance.

    Solves the assignment problem on pairwise absolute distances after
    normalizing by ``max(1, largest magnitude in either multiset)`` and
    accepts when the largest matched distance is below ``tol``.
    """
    tol = config.MULTISET_TOL if tol is None else tol
    av = np.array([complex(x) for x in a], dtype=complex)
    bv = np.array([complex(x) for x in b], dtype=complex)
    if av.shape != bv.shape:
        raise ValueError(f"cardinality mismatch: {len(av)} vs {len(bv)}")
    if av.size == 0:
        return MatchResult(True, (), 0.0, tol)
    scale = max(1.0, float(np.max(np.abs(av))), float(np.max(np.abs(bv))))
    dist = np.abs(av[:, None] - bv[None, :]) / scale
    rows, cols = linear_sum_assignment(dist)
    maxd = float(dist[rows, cols].max())
    return MatchResult(maxd < tol, tuple(zip(rows.tolist(), cols.tolist())), maxd, tol)
