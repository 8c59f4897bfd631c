"""Dense univariate polynomials over pluggable scalar backends.

Coefficients are stored low-to-high; index ``j`` holds the coefficient of
``z**j``.  The zero polynomial has an empty coefficient tuple and degree -1.
All operations are pure: no method mutates its operands.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import config
from .errors import (
    BackendMismatchError,
    DegreeError,
    DegreeOverflowError,
    ExactDivisionError,
    NotPthPowerError,
)
from .scalars import (
    EXACT,
    EXACT_DOMAIN,
    FLOAT,
    FLOAT_DOMAIN,
    QC,
    QC_DOMAIN,
    Domain,
    get_domain,
)


class Polynomial:
    """Immutable dense polynomial over one scalar backend."""

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs, domain: Domain | str = EXACT):
        if isinstance(domain, str):
            domain = get_domain(domain)
        cs = [domain.coerce(c) for c in coeffs]
        while cs and domain.is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    # --- constructors ---------------------------------------------------
    @classmethod
    def exact(cls, coeffs) -> "Polynomial":
        return cls(coeffs, EXACT_DOMAIN)

    @classmethod
    def floating(cls, coeffs) -> "Polynomial":
        return cls(coeffs, FLOAT_DOMAIN)

    @classmethod
    def zero(cls, domain=EXACT_DOMAIN) -> "Polynomial":
        return cls((), domain)

    @classmethod
    def identity(cls, domain=EXACT_DOMAIN) -> "Polynomial":
        if isinstance(domain, str):
            domain = get_domain(domain)
        return cls((domain.zero, domain.one), domain)

    @classmethod
    def monomial(cls, degree: int, coeff, domain=EXACT_DOMAIN) -> "Polynomial":
        if isinstance(domain, str):
            domain = get_domain(domain)
        return cls([domain.zero] * degree + [coeff], domain)

    # --- basic queries ---------------------------------------------------
    @property
    def backend(self) -> str:
        return self.domain.name

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self):
        if not self.coeffs:
            raise DegreeError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, j: int):
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else self.domain.zero

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.backend == other.backend
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.backend, self.coeffs))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r}, backend={self.backend!r})"

    # --- ring operations --------------------------------------------------
    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.domain is not self.domain:
            raise BackendMismatchError(
                f"backend mismatch: {self.backend} vs {other.backend}"
            )

    def __add__(self, other):
        self._check(other)
        dom = self.domain
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        add = dom.add
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return Polynomial(out, dom)

    def __neg__(self):
        neg = self.domain.neg
        return Polynomial([neg(c) for c in self.coeffs], self.domain)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.domain.coerce(other)
            mul = self.domain.mul
            return Polynomial([mul(x, c) for x in self.coeffs], self.domain)
        self._check(other)
        dom = self.domain
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero(dom)
        out = [dom.zero] * (len(a) + len(b) - 1)
        add, mul = dom.add, dom.mul
        for i, ai in enumerate(a):
            if dom.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = add(out[i + j], mul(ai, bj))
        return Polynomial(out, dom)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial([self.domain.one], self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def scale(self, c):
        return self * c

    # --- evaluation -------------------------------------------------------
    def __call__(self, x):
        if isinstance(x, Polynomial):
            return compose(self, x)
        dom = self.domain
        x = dom.coerce(x)
        acc = dom.zero
        add, mul = dom.add, dom.mul
        for c in reversed(self.coeffs):
            acc = add(mul(acc, x), c)
        return acc

    # --- conversions --------------------------------------------------------
    def to_float(self) -> "Polynomial":
        if self.backend == FLOAT:
            return self
        if self.backend == EXACT:
            return Polynomial([complex(c) for c in self.coeffs], FLOAT_DOMAIN)
        if self.backend == "qc":
            return Polynomial(
                [complex(float(c.re), float(c.im)) for c in self.coeffs], FLOAT_DOMAIN
            )
        raise BackendMismatchError(f"cannot convert {self.backend} to float")

    def to_exact_qc(self) -> "Polynomial":
        """Exact Gaussian-rational copy (floats are dyadic, so lossless)."""
        if self.backend == "qc":
            return self
        if self.backend == EXACT:
            return Polynomial([QC(c) for c in self.coeffs], QC_DOMAIN)
        if self.backend == FLOAT:
            return Polynomial([QC.from_complex(c) for c in self.coeffs], QC_DOMAIN)
        raise BackendMismatchError(f"cannot convert {self.backend} to exact form")


# --- calculus and composition --------------------------------------------


def derivative(f: Polynomial) -> Polynomial:
    dom = f.domain
    if f.degree < 1:
        return Polynomial.zero(dom)
    mul = dom.mul
    return Polynomial(
        [mul(dom.from_int(j), f.coeffs[j]) for j in range(1, len(f.coeffs))], dom
    )


def compose(f: Polynomial, g: Polynomial) -> Polynomial:
    """Return f(g(z))."""
    f._check(g)
    dom = f.domain
    if f.is_zero():
        return Polynomial.zero(dom)
    if f.degree >= 1 and g.is_zero():
        raise DegreeError("composition with the zero polynomial")
    acc = Polynomial([f.coeffs[-1]], dom)
    for j in range(f.degree - 1, -1, -1):
        acc = acc * g + Polynomial([f.coeffs[j]], dom)
    return acc


def iterate(f: Polynomial, n: int) -> Polynomial:
    """n-fold composition of f with itself; the 0th iterate is z."""
    if n < 0:
        raise ValueError("iterate count must be nonnegative")
    dom = f.domain
    if n == 0:
        return Polynomial.identity(dom)
    d = f.degree
    if d < 1:
        raise DegreeError("iterate requires degree >= 1")
    if d**n > config.ITERATE_DEGREE_CAP:
        raise DegreeOverflowError(
            f"deg(f)={d} iterated {n} times exceeds the degree cap "
            f"{config.ITERATE_DEGREE_CAP}"
        )
    result = f
    for _ in range(n - 1):
        result = compose(f, result)
    return result


def iterates(f: Polynomial, n: int) -> list:
    """[f, f^2, ..., f^n] computed incrementally."""
    out = [f]
    for _ in range(n - 1):
        out.append(compose(f, out[-1]))
    return out


# --- division ---------------------------------------------------------------


def divmod_poly(a: Polynomial, b: Polynomial):
    a._check(b)
    dom = a.domain
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.degree < b.degree:
        return Polynomial.zero(dom), a
    rem = list(a.coeffs)
    bc = b.coeffs
    lb = bc[-1]
    lb_is_one = dom.is_zero(dom.sub(lb, dom.one))
    db = len(bc) - 1
    q = [dom.zero] * (len(rem) - db)
    sub, mul, div = dom.sub, dom.mul, dom.div
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if dom.is_zero(c):
            continue
        t = c if lb_is_one else div(c, lb)
        q[k - db] = t
        for j in range(db + 1):
            rem[k - db + j] = sub(rem[k - db + j], mul(t, bc[j]))
    return Polynomial(q, dom), Polynomial(rem[:db], dom)


def _coeff_scale(f: Polynomial) -> float:
    return max([1.0] + [abs(c) for c in f.coeffs]) if f.backend == FLOAT else 1.0


def exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    """Divide a by b, requiring the division to be exact.

    On the exact and series backends the remainder must vanish identically;
    on the float backend every remainder coefficient must be below
    ``config.EXACT_DIV_REL_TOL`` times the dividend's coefficient scale.
    """
    q, r = divmod_poly(a, b)
    if a.backend == FLOAT:
        scale = _coeff_scale(a)
        worst = max((abs(c) for c in r.coeffs), default=0.0)
        if worst > config.EXACT_DIV_REL_TOL * scale:
            raise ExactDivisionError(
                f"inexact division: remainder magnitude {worst:.3e} "
                f"exceeds {config.EXACT_DIV_REL_TOL:.1e} x scale {scale:.3e}"
            )
    else:
        if not r.is_zero():
            raise ExactDivisionError("inexact division: nonzero remainder")
    return q


# --- resultants ---------------------------------------------------------------


def sylvester_matrix(p_coeffs, q_coeffs):
    """Sylvester matrix rows (lists), coefficients given low-to-high."""
    n = len(p_coeffs) - 1
    m = len(q_coeffs) - 1
    size = n + m
    rows = []
    p_rev = list(reversed(p_coeffs))
    q_rev = list(reversed(q_coeffs))
    for i in range(m):
        rows.append([0] * i + p_rev + [0] * (m - 1 - i))
    for i in range(n):
        rows.append([0] * i + q_rev + [0] * (n - 1 - i))
    assert all(len(r) == size for r in rows)
    return rows


def _bareiss_int(rows):
    """Fraction-free determinant of an integer matrix (destructive)."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            ri, rk = rows[i], rows[k]
            rik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - rik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def _bareiss_generic(rows, dom_sub, dom_mul, entry_div, entry_neg, entry_is_zero):
    n = len(rows)
    flip = False
    prev = None
    for k in range(n - 1):
        if entry_is_zero(rows[k][k]):
            for i in range(k + 1, n):
                if not entry_is_zero(rows[i][k]):
                    rows[k], rows[i] = rows[i], rows[k]
                    flip = not flip
                    break
            else:
                return None  # determinant is zero
        pivot = rows[k][k]
        for i in range(k + 1, n):
            ri, rk = rows[i], rows[k]
            rik = ri[k]
            for j in range(k + 1, n):
                num = dom_sub(dom_mul(ri[j], pivot), dom_mul(rik, rk[j]))
                ri[j] = num if prev is None else entry_div(num, prev)
            ri[k] = None
        prev = pivot
    det = rows[n - 1][n - 1]
    return entry_neg(det) if flip else det


def _resultant_exact(p: Polynomial, q: Polynomial) -> Fraction:
    pc, qc = list(p.coeffs), list(q.coeffs)
    n, m = len(pc) - 1, len(qc) - 1
    lp = math.lcm(*[c.denominator for c in pc])
    lq = math.lcm(*[c.denominator for c in qc])
    pi = [int(c * lp) for c in pc]
    qi = [int(c * lq) for c in qc]
    rows = sylvester_matrix(pi, qi)
    det = _bareiss_int(rows)
    return Fraction(det, lp**m * lq**n)


def resultant(p: Polynomial, q: Polynomial):
    """Resultant of p and q with respect to z.

    Convention: ``res(p, q) = lc(p)**deg(q) * prod(q(r) for roots r of p)``,
    realized as the Sylvester-matrix determinant (fraction-free elimination
    on the exact backend, LU on the float backend).
    """
    p._check(q)
    if p.degree < 1:
        raise DegreeError("resultant requires deg(p) >= 1")
    if q.is_zero():
        return p.domain.zero
    if q.degree == 0:
        return _pow_scalar(p.domain, q.coeffs[0], p.degree)
    if p.backend == EXACT:
        return _resultant_exact(p, q)
    if p.backend == FLOAT:
        rows = sylvester_matrix(list(p.coeffs), list(q.coeffs))
        return complex(np.linalg.det(np.array(rows, dtype=complex)))
    # generic backend: fraction-free elimination with true scalar division
    dom = p.domain
    rows = sylvester_matrix(list(p.coeffs), list(q.coeffs))
    rows = [[dom.coerce(x) if isinstance(x, int) else x for x in row] for row in rows]
    det = _bareiss_generic(rows, dom.sub, dom.mul, dom.div, dom.neg, dom.is_zero)
    return dom.zero if det is None else det


def _pow_scalar(dom, c, k):
    out = dom.one
    for _ in range(k):
        out = dom.mul(out, c)
    return out


# --- resultant in a spectator variable ---------------------------------------


def lagrange_interpolate(xs, ys, dom) -> Polynomial:
    """Exact polynomial through (xs[i], ys[i]) via Newton's divided differences."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = dom.div(dom.sub(coef[i], coef[i - 1]), dom.sub(xs[i], xs[i - j]))
    # expand Newton form
    poly = Polynomial([coef[-1]], dom)
    for i in range(n - 2, -1, -1):
        shift = Polynomial([dom.neg(xs[i]), dom.one], dom)
        poly = poly * shift + Polynomial([coef[i]], dom)
    return poly


def resultant_in_lambda(p: Polynomial, g: Polynomial, method: str | None = None) -> Polynomial:
    """res_z(p(z), lambda - g(z)) as a polynomial in lambda.

    The result has degree deg(p) with leading coefficient lc(p)**deg(g).
    Methods: 'interp' (evaluation at deg(p)+1 nodes, default on exact/float)
    or 'bareiss' (entry-wise fraction-free elimination, any backend).
    """
    p._check(g)
    if p.degree < 1 or g.degree < 1:
        raise DegreeError("resultant_in_lambda requires both degrees >= 1")
    dom = p.domain
    if method is None:
        method = "interp" if dom.name in (EXACT, FLOAT) else "bareiss"
    if method == "bareiss":
        return _resultant_lambda_bareiss(p, g)
    if dom.name == EXACT:
        nodes = [Fraction(k) for k in range(p.degree + 1)]
        vals = []
        for x in nodes:
            q = Polynomial([x - g.coeffs[0]] + [-c for c in g.coeffs[1:]], dom)
            vals.append(resultant(p, q))
        return lagrange_interpolate(nodes, vals, dom)
    if dom.name == FLOAT:
        n = p.degree
        count = n + 1
        radius = 1.0 + max(abs(c) for c in g.coeffs) ** (1.0 / max(1, g.degree))
        nodes = radius * np.exp(2j * np.pi * np.arange(count) / count)
        vals = np.empty(count, dtype=complex)
        for k, x in enumerate(nodes):
            q = Polynomial([x - g.coeffs[0]] + [-c for c in g.coeffs[1:]], dom)
            vals[k] = resultant(p, q)
        coeffs = np.fft.ifft(vals) / radius ** np.arange(count)
        return Polynomial([complex(c) for c in coeffs], dom)
    raise BackendMismatchError(f"no interpolation path for backend {dom.name}")


def _resultant_lambda_bareiss(p: Polynomial, g: Polynomial) -> Polynomial:
    dom = p.domain
    lam = Polynomial.identity(dom)
    p_rows = [Polynomial([c], dom) for c in p.coeffs]
    q_rows = [lam - Polynomial([g.coeffs[0]], dom)] + [
        Polynomial([dom.neg(c)], dom) for c in g.coeffs[1:]
    ]
    rows = sylvester_matrix(p_rows, q_rows)
    zero = Polynomial.zero(dom)
    rows = [[zero if isinstance(x, int) else x for x in row] for row in rows]
    det = _bareiss_generic(
        rows,
        lambda a, b: a - b,
        lambda a, b: a * b,
        lambda a, b: exact_div(a, b),
        lambda a: -a,
        lambda a: a.is_zero(),
    )
    return zero if det is None else det


# --- p-th roots ---------------------------------------------------------------


def poly_pth_root(q: Polynomial, p: int) -> Polynomial:
    """Monic p-th root of a monic polynomial by coefficient matching.

    Matches coefficients from the top degree down; raises
    :class:`NotPthPowerError` when the residual q - r**p is nonzero (above
    ``config.PTH_ROOT_REL_TOL`` times the coefficient scale on floats).
    """
    if p <= 0:
        raise ValueError("p must be positive")
    dom = q.domain
    if q.is_zero():
        raise DegreeError("zero polynomial has no monic p-th root")
    if not dom.is_zero(dom.sub(q.leading_coefficient(), dom.one)):
        raise NotPthPowerError("input must be monic")
    if q.degree % p != 0:
        raise NotPthPowerError(f"degree {q.degree} not divisible by {p}")
    if p == 1:
        return q
    n = q.degree // p
    r = [dom.zero] * n + [dom.one]
    p_frac = dom.from_int(p)
    for j in range(1, n + 1):
        rp = Polynomial(r, dom) ** p
        target = q.coefficient(q.degree - j)
        have = rp.coefficient(q.degree - j)
        r[n - j] = dom.div(dom.sub(target, have), p_frac)
    root = Polynomial(r, dom)
    residual = root**p - q
    if q.backend == FLOAT:
        scale = _coeff_scale(q)
        worst = max((abs(c) for c in residual.coeffs), default=0.0)
        if worst > config.PTH_ROOT_REL_TOL * scale:
            raise NotPthPowerError(
                f"not a {p}-th power: residual {worst:.3e} exceeds tolerance"
            )
    elif not residual.is_zero():
        raise NotPthPowerError(f"not a {p}-th power: nonzero residual")
    return root
