"""Differentials of multiplier maps at the power map and their symmetries.

At the power map ``z**d`` (monic centered coordinates, coefficients
a_0..a_(d-2)) the multipliers at fixed points and 2-cycles are holomorphic
functions of the coefficients, and their Jacobians have closed forms built
from roots of unity.  This module constructs those matrices, inverts the
period-1 block through an explicit interpolation formula, assembles the
combined period-2 sensitivity matrix, and verifies the permutation
equivariance that pins down the residual symmetry group as the cyclic
group generated by the rotation sigma_0.

Everything is validated numerically: the closed forms against
finite-difference Jacobians obtained by Newton continuation of the
periodic points, and the equivariance identity entrywise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeError, PolyspecError
from .poly import Polynomial, derivative, iterate
from .roots import multiset_match


def gorbovickis_differential(d: int, p: int, z0: complex, k: int) -> complex:
    """d(multiplier)/d(a_k) at the power map, along a tracked period-p point.

    ``z0`` must be a periodic point of ``z**d`` with exact period p (a root
    of unity of order dividing d**p - 1 but no smaller d**q - 1); ``k``
    indexes the monic centered coefficient a_k, 0 <= k <= d-2.
    """
    if not 0 <= k <= d - 2:
        raise ValueError("k must lie in 0..d-2")
    if abs(abs(z0) - 1.0) > 1e-8:
        raise PolyspecError("z0 must lie on the unit circle")
    if abs(z0 ** (d**p - 1) - 1.0) > 1e-8:
        raise PolyspecError(f"z0 is not periodic with period {p}")
    for q in range(1, p):
        if p % q == 0 and abs(z0 ** (d**q - 1) - 1.0) < 1e-8:
            raise PolyspecError(f"z0 has period {q} < {p}")
    total = 0j
    for j in range(p):
        total += z0 ** (d**j * (k - d))
    return d ** (p - 1) * (k - d) * total


@dataclass(frozen=True)
class JacobianBundle:
    """Closed-form multiplier Jacobians at the power map of degree d."""

    d: int
    A1: np.ndarray  # period-1 block, (d-1) x (d-1)
    A1inv: np.ndarray
    A2: np.ndarray  # period-2 block, d(d-1)/2 x (d-1)
    A: np.ndarray  # A2 @ A1inv
    cycle_reps: np.ndarray  # representatives w_j of the 2-cycles
    rep_exponents: tuple  # exponents r with w_j = beta**r


def _two_cycle_exponents(d: int):
    """Exponents of beta = exp(2 pi i/(d^2-1)) for one point per 2-cycle.

    The first d-1 representatives are beta * alpha**j (exponents
    j(d+1) + 1); the remainder are the numerically smallest unvisited
    exponents, each new cycle {r, r*d mod d^2-1}.
    """
    modulus = d * d - 1
    visited = set()
    reps = []
    for j in range(d - 1):
        r = (j * (d + 1) + 1) % modulus
        if r % (d + 1) == 0 or r in visited:
            raise PolyspecError("bad primary representative enumeration")
        reps.append(r)
        visited.update({r, (r * d) % modulus})
    for r in range(1, modulus):
        if r % (d + 1) == 0 or r in visited:
            continue
        reps.append(r)
        visited.update({r, (r * d) % modulus})
    if len(reps) != d * (d - 1) // 2:
        raise PolyspecError("cycle representative count mismatch")
    return tuple(reps)


def lagrange_basis_coeffs(d: int) -> np.ndarray:
    """Coefficients of P_k(T) = alpha^k prod_{j != k} (T - a^j)/(a^k - a^j)."""
    alpha = np.exp(2j * np.pi / (d - 1))
    n = d - 1
    out = np.zeros((n, n), dtype=complex)  # out[j, k] = coeff of T^j in P_k
    for k in range(n):
        poly = np.array([1.0 + 0j])
        denom = 1.0 + 0j
        for j in range(n):
            if j == k:
                continue
            poly = np.convolve(poly, np.array([1.0, -(alpha**j)]))
            denom *= alpha**k - alpha**j
        poly = alpha**k * poly / denom
        out[:, k] = poly[::-1]  # low-to-high
    return out


def build_jacobians(d: int) -> JacobianBundle:
    """Assemble A1, its interpolation-formula inverse, A2 and A = A2 A1^-1.

    The inverse comes from the coefficient extraction
    ``P_k(T) = sum_j (j - d) B[j, k] T^j`` and is cross-checked against
    direct numerical inversion.
    """
    if not 3 <= d <= 8:
        raise DegreeError("jacobian bundle supported for 3 <= d <= 8")
    n = d - 1
    alpha = np.exp(2j * np.pi / (d - 1))
    j_idx = np.arange(n)[:, None]
    k_idx = np.arange(n)[None, :]
    a1 = (k_idx - d) * alpha ** (j_idx * (k_idx - 1))

    basis = lagrange_basis_coeffs(d)
    a1inv = basis / (np.arange(n)[:, None] - d)

    if np.max(np.abs(a1 @ a1inv - np.eye(n))) > 1e-10:
        raise PolyspecError("interpolation inverse failed the identity check")
    direct = np.linalg.inv(a1)
    if np.max(np.abs(a1inv - direct)) > 1e-8 * np.max(np.abs(direct)):
        raise PolyspecError("interpolation inverse disagrees with direct inversion")

    reps = _two_cycle_exponents(d)
    beta = np.exp(2j * np.pi / (d * d - 1))
    w = beta ** np.array(reps)
    rows = d * (d - 1) // 2
    kk = np.arange(n)[None, :]
    ww = w[:, None]
    a2 = d * (kk - d) * (ww ** (kk - d) + ww ** (d * (kk - d)))
    if a2.shape != (rows, n):
        raise PolyspecError("period-2 matrix shape mismatch")
    a = a2 @ a1inv
    return JacobianBundle(
        d=d, A1=a1, A1inv=a1inv, A2=a2, A=a, cycle_reps=w, rep_exponents=reps
    )


# --- permutation actions ----------------------------------------------------------


def permute_columns(mat: np.ndarray, sigma) -> np.ndarray:
    """Column action: column k of the result is column sigma^-1(k)."""
    n = mat.shape[1]
    inv = _inverse_perm(sigma, n)
    return mat[:, inv]


def permute_rows(mat: np.ndarray, tau) -> np.ndarray:
    """Row action: row j of the result is row tau^-1(j)."""
    n = mat.shape[0]
    inv = _inverse_perm(tau, n)
    return mat[inv, :]


def _inverse_perm(perm, n):
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    inv = [0] * n
    for i, v in enumerate(perm):
        inv[v] = i
    return inv


def rotation_sigma0(d: int):
    """The cyclic shift j -> j+1 on the d-1 period-1 indices."""
    n = d - 1
    return tuple((j + 1) % n for j in range(n))


def cycle_rotation_tau0(bundle: JacobianBundle):
    """Permutation of 2-cycle representatives induced by multiplying by alpha.

    alpha * w_j lies in the cycle of w_{tau0(j)}; on the first d-1 indices
    this restricts to the shift j -> j+1 mod (d-1).
    """
    d = bundle.d
    modulus = d * d - 1
    reps = bundle.rep_exponents
    cycle_of = {}
    for idx, r in enumerate(reps):
        cycle_of[r] = idx
        cycle_of[(r * d) % modulus] = idx
    tau = []
    for r in reps:
        shifted = (r + d + 1) % modulus
        tau.append(cycle_of[shifted])
    if sorted(tau) != list(range(len(reps))):
        raise PolyspecError("alpha action is not a permutation of the cycles")
    return tuple(tau)


def _perm_power(perm, k):
    n = len(perm)
    out = list(range(n))
    for _ in range(k % _perm_order(perm)):
        out = [perm[v] for v in out]
    return tuple(out)


def _perm_order(perm):
    n = len(perm)
    order = 1
    cur = tuple(perm)
    ident = tuple(range(n))
    while cur != ident:
        cur = tuple(perm[v] for v in cur)
        order += 1
    return order


@dataclass(frozen=True)
class EquivarianceReport:
    d: int
    max_deviation: float
    tau0: tuple
    passed: bool


def check_equivariance(bundle: JacobianBundle, tol: float = 1e-9) -> EquivarianceReport:
    """Verify sigma0^-k (columns) = tau0^k (rows) on A for every k."""
    d = bundle.d
    sigma0 = rotation_sigma0(d)
    tau0 = cycle_rotation_tau0(bundle)
    if tau0[: d - 1] != tuple((j + 1) % (d - 1) for j in range(d - 1)):
        raise PolyspecError("tau0 does not restrict to the expected shift")
    worst = 0.0
    for k in range(d - 1):
        lhs = permute_columns(bundle.A, _perm_inverse_power(sigma0, k))
        rhs = permute_rows(bundle.A, _perm_power(tau0, k))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return EquivarianceReport(d=d, max_deviation=worst, tau0=tau0, passed=worst <= tol)


def _perm_inverse_power(perm, k):
    inv = tuple(_inverse_perm(perm, len(perm)))
    return _perm_power(inv, k)


def stabilizer_bruteforce(bundle: JacobianBundle, tol: float = 1e-8):
    """All column permutations of A matched by some row permutation.

    A row permutation exists iff the rows of the column-permuted matrix
    equal the rows of A as a multiset of vectors, decided by a
    minimum-cost matching on row distances; the search space is the
    small symmetric group on d-1 column indices only.
    """
    d = bundle.d
    if d > 5:
        raise DegreeError("brute force intended for d <= 5")
    a = bundle.A
    scale = float(np.max(np.abs(a)))
    found = []
    for perm in itertools.permutations(range(d - 1)):
        cand = permute_columns(a, perm)
        rows_a = [tuple(row) for row in a]
        rows_c = [tuple(row) for row in cand]
        # match rows as a multiset via the assignment machinery on
        # max-entry distances
        dist = np.array(
            [
                [float(np.max(np.abs(np.array(ra) - np.array(rc)))) for rc in rows_c]
                for ra in rows_a
            ]
        )
        from scipy.optimize import linear_sum_assignment

        r_idx, c_idx = linear_sum_assignment(dist)
        if float(dist[r_idx, c_idx].max()) <= tol * max(1.0, scale):
            found.append(perm)
    return tuple(found)


def expected_stabilizer(d: int):
    """The cyclic group generated by the index rotation."""
    sigma0 = rotation_sigma0(d)
    out = set()
    cur = tuple(range(d - 1))
    for _ in range(_perm_order(sigma0)):
        out.add(cur)
        cur = tuple(sigma0[v] for v in cur)
    return tuple(sorted(out))


# --- finite-difference validation ---------------------------------------------------


def _track_periodic_point(coeffs_low, d: int, p: int, z_start: complex) -> complex:
    """Newton continuation of a period-p point of z**d + sum a_k z^k."""
    f = Polynomial.floating(list(coeffs_low) + [0.0] * (d - len(coeffs_low)) + [1.0])
    fp = iterate(f, p)
    g = fp - Polynomial.identity(f.domain)
    gp = derivative(g)
    z = complex(z_start)
    for _ in range(50):
        step = g(z) / gp(z)
        z -= step
        if abs(step) <= 1e-15 * (1.0 + abs(z)):
            break
    return z


def finite_difference_jacobian(d: int, p: int, step: float = 1e-6) -> np.ndarray:
    """Central finite differences of the period-p multipliers at z**d.

    Rows follow the same representative order as :func:`build_jacobians`;
    used to validate the closed-form matrices entrywise.
    """
    if p == 1:
        base_points = [np.exp(2j * np.pi * j / (d - 1)) for j in range(d - 1)]
    elif p == 2:
        beta = np.exp(2j * np.pi / (d * d - 1))
        base_points = [beta**r for r in _two_cycle_exponents(d)]
    else:
        raise ValueError("finite differences implemented for p in {1, 2}")
    rows = len(base_points)
    out = np.zeros((rows, d - 1), dtype=complex)
    for k in range(d - 1):
        for sgn_idx, sgn in enumerate((1.0, -1.0)):
            coeffs = [0.0] * (d - 1)
            coeffs[k] = sgn * step
            for j, z0 in enumerate(base_points):
                z = _track_periodic_point(coeffs, d, p, z0)
                f = Polynomial.floating(list(coeffs) + [0.0] * (d - len(coeffs)) + [1.0])
                fp = derivative(f)
                lam = 1.0 + 0j
                w = z
                for _ in range(p):
                    lam *= fp(w)
                    w = f(w)
                out[j, k] += lam if sgn > 0 else -lam
    return out / (2.0 * step)
