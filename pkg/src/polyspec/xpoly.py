"""Extended-exponent polynomial arithmetic (mantissa/exponent pairs).

Dynatomic and multiplier polynomials of polynomials with large coefficients
have coefficient ranges far beyond double precision even when every root
magnitude fits comfortably.  This kernel represents each coefficient as
``mantissa * 2**exponent`` with a complex double mantissa and a float
exponent, keeps ~1e-13 relative accuracy per coefficient, and never
overflows.  It exists to evaluate multiplier polynomials of deeply
contracted polynomials whose periodic points cannot be resolved pointwise
in double precision; the root magnitudes read off the result are accurate
because the scale structure is ultrametric (no systematic cancellation
across scales).

Zero coefficients carry ``exponent == -inf`` and mantissa 0.
"""

from __future__ import annotations

import numpy as np

from .scalars import QC, flog2_fraction, flog2_qc, mantissa_exp2

_NEG = -np.inf


def normalize(m: np.ndarray, e: np.ndarray):
    am = np.abs(m)
    zero = (am == 0) | ~np.isfinite(am) | ~np.isfinite(e)
    safe = np.where(zero, 1.0, am)
    lg = np.floor(np.log2(safe))
    m2 = np.where(zero, 0.0, m / np.exp2(lg))
    e2 = np.where(zero, _NEG, e + lg)
    return m2.astype(complex), e2.astype(float)


def from_coeffs(coeffs):
    """(m, e) arrays from exact rational / Gaussian rational / complex."""
    es, ms = [], []
    for c in coeffs:
        if isinstance(c, QC):
            lg = flog2_qc(c)
        elif hasattr(c, "denominator"):
            lg = flog2_fraction(c)
        else:
            c = complex(c)
            lg = np.log2(abs(c)) if c != 0 else _NEG
        if not np.isfinite(lg):
            es.append(_NEG)
            ms.append(0j)
        else:
            es.append(float(np.floor(lg)))
            ms.append(mantissa_exp2(c, float(np.floor(lg))))
    return normalize(np.array(ms, dtype=complex), np.array(es, dtype=float))


def log2_abs(m: np.ndarray, e: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        lg = np.where(np.abs(m) > 0, np.log2(np.where(np.abs(m) > 0, np.abs(m), 1.0)), _NEG)
    return np.where(np.isfinite(e), e + lg, _NEG)


def _dot(ma, ea, mb, eb):
    """Scaled inner product sum_i ma[i] mb[i] 2^(ea[i]+eb[i]) -> (m, e)."""
    ee = ea + eb
    finite = np.isfinite(ee) & (ma != 0) & (mb != 0)
    if not np.any(finite):
        return 0j, _NEG
    top = np.max(ee[finite])
    w = np.where(finite, np.exp2(np.clip(ee - top, -1060, 0)), 0.0)
    val = np.sum(ma * mb * w)
    return val, top


def xmul(ma, ea, mb, eb):
    """Full product of two coefficient vectors (dense convolution)."""
    na, nb = len(ma), len(mb)
    out_m = np.zeros(na + nb - 1, dtype=complex)
    out_e = np.full(na + nb - 1, _NEG)
    mbr, ebr = mb[::-1], eb[::-1]
    for k in range(na + nb - 1):
        i0 = max(0, k - nb + 1)
        i1 = min(na - 1, k)
        v, t = _dot(ma[i0 : i1 + 1], ea[i0 : i1 + 1],
                    mbr[nb - 1 - (k - i0) : nb - (k - i1)], ebr[nb - 1 - (k - i0) : nb - (k - i1)])
        out_m[k], out_e[k] = v, t
    return normalize(out_m, out_e)


def _monicize(m, e):
    return normalize(m / m[-1], e - e[-1])


def reduction_rows(psi_m, psi_e, count: int):
    """Rows r_i = z**(n+i) mod psi for a monic psi of degree n."""
    n = len(psi_m) - 1
    rows_m = np.zeros((count, n), dtype=complex)
    rows_e = np.full((count, n), _NEG)
    cur_m = -psi_m[:n].copy()
    cur_e = psi_e[:n].copy()
    rows_m[0], rows_e[0] = cur_m, cur_e
    for i in range(1, count):
        # multiply by z: shift, then fold the overflow through row 0
        top_m, top_e = cur_m[n - 1], cur_e[n - 1]
        sh_m = np.concatenate([[0j], cur_m[: n - 1]])
        sh_e = np.concatenate([[_NEG], cur_e[: n - 1]])
        add_m = top_m * rows_m[0]
        add_e = top_e + rows_e[0]
        cur_m, cur_e = _add_vec(sh_m, sh_e, add_m, add_e)
        rows_m[i], rows_e[i] = cur_m, cur_e
    return rows_m, rows_e


def _add_vec(ma, ea, mb, eb):
    top = np.maximum(np.where(np.isfinite(ea), ea, -1e300), np.where(np.isfinite(eb), eb, -1e300))
    both_zero = ~np.isfinite(ea) & ~np.isfinite(eb)
    wa = np.where(np.isfinite(ea), np.exp2(np.clip(ea - top, -1060, 0)), 0.0)
    wb = np.where(np.isfinite(eb), np.exp2(np.clip(eb - top, -1060, 0)), 0.0)
    m = ma * wa + mb * wb
    e = np.where(both_zero, _NEG, top)
    return normalize(m, e)


def reduce_with_rows(pm, pe, n, rows_m, rows_e):
    """Reduce a product (degree < n + count) modulo psi via precomputed rows."""
    if len(pm) <= n:
        out_m = np.zeros(n, dtype=complex)
        out_e = np.full(n, _NEG)
        out_m[: len(pm)], out_e[: len(pe)] = pm, pe
        return normalize(out_m, out_e)
    low_m, low_e = pm[:n].copy(), pe[:n].copy()
    hi_m, hi_e = pm[n:], pe[n:]
    k = len(hi_m)
    # column-wise scaled sum: low_j + sum_i hi_i rows[i, j]
    ee = hi_e[:, None] + rows_e[:k]
    mm = hi_m[:, None] * rows_m[:k]
    stack_e = np.vstack([low_e[None, :], ee])
    stack_m = np.vstack([low_m[None, :], mm])
    finite = np.isfinite(stack_e)
    top = np.max(np.where(finite, stack_e, -1e300), axis=0)
    allzero = ~np.any(finite, axis=0)
    w = np.where(finite, np.exp2(np.clip(stack_e - top[None, :], -1060, 0)), 0.0)
    m = np.sum(stack_m * w, axis=0)
    e = np.where(allzero, _NEG, top)
    return normalize(m, e)


# --- scalar helpers ------------------------------------------------------------


def xs_add(a, b):
    (ma, ea), (mb, eb) = a, b
    if not np.isfinite(ea):
        return b
    if not np.isfinite(eb):
        return a
    top = max(ea, eb)
    m = ma * (2.0 ** min(0.0, ea - top)) + mb * (2.0 ** min(0.0, eb - top))
    if m == 0:
        return (0j, _NEG)
    lg = np.floor(np.log2(abs(m)))
    return (m / 2.0**lg, top + lg)


def xs_mul(a, b):
    (ma, ea), (mb, eb) = a, b
    if not (np.isfinite(ea) and np.isfinite(eb)):
        return (0j, _NEG)
    m = ma * mb
    lg = np.floor(np.log2(abs(m)))
    return (m / 2.0**lg, ea + eb + lg)


def xs_div(a, b):
    (ma, ea), (mb, eb) = a, b
    if not np.isfinite(eb) or mb == 0:
        raise ZeroDivisionError("extended-float division by zero")
    if not np.isfinite(ea):
        return (0j, _NEG)
    m = ma / mb
    lg = np.floor(np.log2(abs(m)))
    return (m / 2.0**lg, ea - eb + lg)


def xs_neg(a):
    return (-a[0], a[1])


def xs_from_int(n: int):
    if n == 0:
        return (0j, _NEG)
    lg = np.floor(np.log2(abs(n)))
    return (n / 2.0**lg + 0j, float(lg))


# --- the multiplier polynomial ---------------------------------------------------


def chi_coefficients(phi_coeffs, g_coeffs, p: int, n_cycles: int):
    """(m, e) coefficient arrays of the monic multiplier polynomial.

    ``phi_coeffs`` and ``g_coeffs`` are exact coefficient sequences
    (Fractions or Gaussian rationals) of the dynatomic polynomial and the
    iterate derivative; the trace/Newton-identity route is evaluated in
    extended-exponent floats.
    """
    pm, pe = from_coeffs(phi_coeffs)
    gm, ge = from_coeffs(g_coeffs)
    nu = len(pm) - 1
    pm, pe = _monicize(pm, pe)

    # power sums of dynatomic roots via Newton's identities
    q = [(0j, _NEG)] * nu
    q[0] = xs_from_int(nu)
    a_m, a_e = pm, pe
    for k in range(1, nu):
        acc = xs_mul(xs_from_int(k), (a_m[nu - k], a_e[nu - k]))
        if k > 1:
            idx = np.arange(1, k)
            va_m = a_m[nu - idx]
            va_e = a_e[nu - idx]
            vq_m = np.array([q[k - int(i)][0] for i in idx], dtype=complex)
            vq_e = np.array([q[k - int(i)][1] for i in idx], dtype=float)
            v, t = _dot(va_m, va_e, vq_m, vq_e)
            acc = xs_add(acc, (v, t))
        q[k] = xs_neg(acc)
    q_m = np.array([x[0] for x in q], dtype=complex)
    q_e = np.array([x[1] for x in q], dtype=float)

    rows_m, rows_e = reduction_rows(pm, pe, len(gm))
    # u = g mod psi
    um, ue = reduce_with_rows(gm, ge, nu, rows_m, rows_e)
    traces = []
    inv_p = xs_from_int(p)
    for k in range(1, n_cycles + 1):
        v, t = _dot(um, ue, q_m, q_e)
        traces.append(xs_div((v, t), inv_p))
        if k < n_cycles:
            prod_m, prod_e = xmul(um, ue, gm, ge)
            um, ue = reduce_with_rows(prod_m, prod_e, nu, rows_m, rows_e)

    # inverse Newton identities for the elementary symmetric functions
    es = [(1.0 + 0j, 0.0)]
    for k in range(1, n_cycles + 1):
        acc = (0j, _NEG)
        sign = 1
        for i in range(1, k + 1):
            term = xs_mul(es[k - i], traces[i - 1])
            acc = xs_add(acc, term if sign > 0 else xs_neg(term))
            sign = -sign
        es.append(xs_div(acc, xs_from_int(k)))

    out_m = np.zeros(n_cycles + 1, dtype=complex)
    out_e = np.full(n_cycles + 1, _NEG)
    for k in range(n_cycles + 1):
        m, e = es[k]
        if k % 2 == 1:
            m = -m
        out_m[n_cycles - k], out_e[n_cycles - k] = m, e
    return normalize(out_m, out_e)
