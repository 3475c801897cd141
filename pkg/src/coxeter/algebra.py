"""Exact arithmetic in the real cyclotomic field containing cos(pi/m) values.

A :class:`FieldContext` fixes a conductor ``L`` and works in Q(psi) with
``psi = 2*cos(pi/L)``, whose minimal polynomial over Z is computed from the
cyclotomic polynomial of ``2L`` and certified against a shrinking rational
interval at construction time.  Elements are power-basis vectors of exact
rationals, so every sign and zero test is exact.  Inertia of symmetric
matrices is computed by exact congruence reduction (Sylvester's law).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .diagram import CoxeterDiagram, DiagramError

__all__ = [
    "FieldContext",
    "AlgebraicReal",
    "SymMatrix",
    "InertiaSignature",
    "field_for_labels",
    "field_for_diagram",
    "weight_of_label",
    "gram_matrix",
    "determinant",
    "inertia",
]


# -- integer polynomial helpers (dense little-endian coefficient lists) -----

def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (remainder must vanish)."""
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    out = [0] * (len(a) - db)
    for k in range(len(out) - 1, -1, -1):
        q, r = divmod(a[db + k], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[k] = q
        if q:
            for i, bi in enumerate(b):
                a[k + i] -= q * bi
    if any(a[: db]):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return out


def _cyclotomic(n: int) -> list[int]:
    """Coefficients of the n-th cyclotomic polynomial via the Moebius product."""
    result = [1]
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    # x^n - 1 = prod_{d|n} Phi_d; peel off smaller divisors recursively
    for d in divisors:
        if d == n:
            continue
        result = _poly_mul(result, _cyclotomic(d))
    xn1 = [-1] + [0] * (n - 1) + [1]
    return _poly_divexact(xn1, result)


@lru_cache(maxsize=None)
def _cyclotomic_cached(n: int) -> tuple[int, ...]:
    return tuple(_cyclotomic(n))


def minimal_polynomial_2cos(L: int) -> tuple[int, ...]:
    """Monic integer minimal polynomial of 2*cos(pi/L).

    Derived from the palindromic cyclotomic polynomial of 2L via the
    Chebyshev-type substitution z^k + z^-k -> V_k(z + 1/z).
    """
    if L == 1:
        return (2, 1)  # 2cos(pi) = -2
    if L == 2:
        return (0, 1)  # 2cos(pi/2) = 0
    n = 2 * L
    phi = list(_cyclotomic_cached(n))
    m = (len(phi) - 1) // 2
    # V_k(y) with 2cos(k t) = V_k(2cos t): V_0 = 2, V_1 = y
    v_prev, v_cur = [2], [0, 1]
    out = [phi[m] * c for c in [1]] + [0] * m
    out = [phi[m]] + [0] * m
    for k in range(1, m + 1):
        vk = v_cur if k == 1 else None
        if k >= 2:
            vk = [0] + v_cur
            for i, c in enumerate(v_prev):
                vk[i] -= c
            v_prev, v_cur = v_cur, vk
        coeff = phi[m + k]
        if coeff:
            for i, c in enumerate(v_cur):
                out[i] += coeff * c
    return tuple(out)


def _eval_fraction(poly: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


class FieldContext:
    """The real cyclotomic field Q(2*cos(pi/L)).

    ``minimal_polynomial`` is monic with integer coefficients; ``interval`` is a
    certified rational enclosure of psi = 2*cos(pi/L) that contains no other
    root of the minimal polynomial, refined on demand by exact bisection.
    """

    __slots__ = ("L", "minpoly", "degree", "_interval", "_float", "_powers", "_weight_cache")

    def __init__(self, L: int):
        if L < 1:
            raise ValueError("conductor must be >= 1")
        self.L = L
        self.minpoly = minimal_polynomial_2cos(L)
        self.degree = len(self.minpoly) - 1
        self._float = 2.0 * math.cos(math.pi / L)
        self._interval = self._initial_interval()
        self._powers = self._power_table()
        self._weight_cache: dict[int, AlgebraicReal] = {}
        self._verify()

    def _initial_interval(self) -> tuple[Fraction, Fraction]:
        # Nearest other root of the minimal polynomial is ~ 8*pi^2/L^2 away,
        # vastly wider than float error; +-2^-40 is a safe isolating width.
        eps = Fraction(1, 1 << 40)
        center = Fraction(self._float).limit_denominator(1 << 50)
        lo, hi = center - eps, center + eps
        return (lo, hi)

    def _verify(self):
        lo, hi = self._interval
        flo = _eval_fraction(self.minpoly, lo)
        fhi = _eval_fraction(self.minpoly, hi)
        if flo == 0 or fhi == 0 or (flo < 0) == (fhi < 0):
            raise ArithmeticError(
                f"certified interval for 2cos(pi/{self.L}) failed sign verification"
            )

    def refine_interval(self):
        lo, hi = self._interval
        mid = (lo + hi) / 2
        fmid = _eval_fraction(self.minpoly, mid)
        if fmid == 0:
            # psi is irrational for L >= 4; rational mid can only be the root
            # for L in {1,2,3} which are handled by exact rational coefficients
            width = (hi - lo) / 4
            self._interval = (mid - width, mid + width)
            return
        flo = _eval_fraction(self.minpoly, lo)
        if (flo < 0) != (fmid < 0):
            self._interval = (lo, mid)
        else:
            self._interval = (mid, hi)

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self._interval

    def _power_table(self) -> list[tuple[Fraction, ...]]:
        """psi^k reduced to the power basis, for k up to 2*(degree-1)."""
        deg = self.degree
        table: list[tuple[Fraction, ...]] = []
        for k in range(deg):
            row = [Fraction(0)] * deg
            row[k] = Fraction(1)
            table.append(tuple(row))
        # psi^deg = -(minpoly - x^deg)
        top = [Fraction(-c) for c in self.minpoly[:-1]]
        for k in range(deg, 2 * deg - 1):
            prev = table[k - 1]
            shifted = [Fraction(0)] + list(prev[:-1])
            carry = prev[-1]
            if carry:
                for i in range(deg):
                    shifted[i] += carry * top[i]
            table.append(tuple(shifted))
        return table

    # -- element constructors -------------------------------------------

    def zero(self) -> "AlgebraicReal":
        return AlgebraicReal(self, (Fraction(0),) * self.degree)

    def one(self) -> "AlgebraicReal":
        return self.from_rational(Fraction(1))

    def from_rational(self, q) -> "AlgebraicReal":
        q = Fraction(q)
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = q
        return AlgebraicReal(self, tuple(coeffs))

    def psi(self) -> "AlgebraicReal":
        if self.degree == 1:
            # psi itself is rational (L <= 3): root of the linear minpoly
            c0, c1 = self.minpoly
            return self.from_rational(Fraction(-c0, c1))
        coeffs = [Fraction(0)] * self.degree
        coeffs[1] = Fraction(1)
        return AlgebraicReal(self, tuple(coeffs))

    def two_cos_pi_over(self, m: int) -> "AlgebraicReal":
        """2*cos(pi/m) for m dividing L (m = 2 is always available)."""
        if m == 2:
            return self.zero()
        if m < 1 or self.L % m:
            raise ValueError(f"label {m} does not divide conductor {self.L}")
        k = self.L // m
        # 2cos(k * pi/L) = V_k(psi)
        v_prev, v_cur = self.from_rational(2), self.psi()
        if k == 0:
            return v_prev
        for _ in range(k - 1):
            v_prev, v_cur = v_cur, self.psi() * v_cur - v_prev
        return v_cur

    def cos_pi_over(self, m: int) -> "AlgebraicReal":
        if m in self._weight_cache:
            return self._weight_cache[m]
        val = self.two_cos_pi_over(m) / self.from_rational(2)
        self._weight_cache[m] = val
        return val

    def __repr__(self) -> str:
        return f"FieldContext(L={self.L}, degree={self.degree})"


@lru_cache(maxsize=64)
def _context_cached(L: int) -> FieldContext:
    return FieldContext(L)


def field_for_labels(labels: Iterable[int]) -> FieldContext:
    """Context whose conductor is the lcm of the given finite labels."""
    L = 1
    for m in labels:
        if m >= 3:
            L = math.lcm(L, m)
    return _context_cached(L)


def field_for_diagram(diagram: CoxeterDiagram) -> FieldContext:
    return field_for_labels(diagram.finite_labels())


class AlgebraicReal:
    """Element of a :class:`FieldContext`, exact power-basis representation."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: tuple[Fraction, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "AlgebraicReal":
        if isinstance(other, AlgebraicReal):
            if other.ctx is not self.ctx:
                raise ValueError("mixed field contexts")
            return other
        return self.ctx.from_rational(other)

    def __add__(self, other):
        o = self._coerce(other)
        return AlgebraicReal(self.ctx, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        deg = self.ctx.degree
        a, b = self.coeffs, o.coeffs
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:deg])
        powers = self.ctx._powers
        for k in range(deg, 2 * deg - 1):
            ck = conv[k]
            if ck:
                row = powers[k]
                for i in range(deg):
                    if row[i]:
                        out[i] += ck * row[i]
        return AlgebraicReal(self.ctx, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicReal":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        deg = self.ctx.degree
        if deg == 1:
            return self.ctx.from_rational(1 / self.coeffs[0])
        # work in Q[x]: r0 = minpoly, r1 = self
        r0 = [Fraction(c) for c in self.ctx.minpoly]
        r1 = list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def trimmed(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        r0, r1 = trimmed(r0), trimmed(r1)
        while True:
            if not r1:
                raise ZeroDivisionError("element not invertible (shares factor with modulus)")
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1] + [Fraction(0)] * deg
                return AlgebraicReal(self.ctx, tuple(coeffs[:deg]))
            # divide r0 by r1
            q = [Fraction(0)] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for k in range(len(q) - 1, -1, -1):
                factor = rem[len(r1) - 1 + k] / r1[-1]
                q[k] = factor
                if factor:
                    for i, c in enumerate(r1):
                        rem[k + i] -= factor * c
            rem = trimmed(rem)
            # s_new = s0 - q*s1
            qs1 = [Fraction(0)] * (len(q) + len(s1) - 1)
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] += qi * sj
            s_new = [Fraction(0)] * max(len(s0), len(qs1))
            for i, c in enumerate(s0):
                s_new[i] += c
            for i, c in enumerate(qs1):
                s_new[i] -= c
            r0, r1 = trimmed(list(r1)), rem
            s0, s1 = s1, trimmed(s_new)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def sign(self) -> int:
        """Exact sign: zero iff the reduced coefficient vector vanishes."""
        if self.is_zero():
            return 0
        # fast float path with a conservative error bound
        x = self.ctx._float
        val = 0.0
        mag = 0.0
        for c in reversed(self.coeffs):
            fc = float(c)
            val = val * x + fc
            mag = mag * abs(x) + abs(fc)
        if abs(val) > mag * 1e-12 + 1e-300:
            return 1 if val > 0 else -1
        # certified interval arithmetic, refined until separation
        for _ in range(4096):
            lo, hi = self._interval_value()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.ctx.refine_interval()
        raise ArithmeticError("sign determination did not converge")

    def _interval_value(self) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        ilo, ihi = self.ctx.interval
        for c in reversed(self.coeffs):
            # multiply [lo,hi] by [ilo,ihi], then add c
            cands = (lo * ilo, lo * ihi, hi * ilo, hi * ihi)
            lo, hi = min(cands) + c, max(cands) + c
        return lo, hi

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicReal) and other.ctx is not self.ctx:
            return NotImplemented
        return (self - self._coerce(other)).is_zero()

    def __hash__(self):
        return hash((self.ctx.L, self.coeffs))

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        x = self.ctx._float
        val = 0.0
        for c in reversed(self.coeffs):
            val = val * x + float(c)
        return val

    def as_rational(self) -> Fraction:
        if any(self.coeffs[1:]):
            raise ValueError("element is irrational")
        return self.coeffs[0]

    def __repr__(self) -> str:
        return f"AlgebraicReal({float(self):.6g}, L={self.ctx.L})"


@dataclass(frozen=True)
class InertiaSignature:
    """Sylvester inertia (n_plus, n_zero, n_minus)."""

    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def dimension(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_plus, self.n_zero, self.n_minus)

    def __iter__(self):
        return iter(self.as_tuple())


class SymMatrix:
    """Symmetric matrix of :class:`AlgebraicReal` entries (upper triangle stored)."""

    __slots__ = ("n", "ctx", "_upper")

    def __init__(self, ctx: FieldContext, n: int, upper: Sequence[AlgebraicReal]):
        if len(upper) != n * (n + 1) // 2:
            raise ValueError("upper triangle has wrong length")
        self.ctx = ctx
        self.n = n
        self._upper = list(upper)

    @staticmethod
    def from_rows(ctx: FieldContext, rows: Sequence[Sequence[AlgebraicReal]]) -> "SymMatrix":
        n = len(rows)
        upper = [rows[i][j] for i in range(n) for j in range(i, n)]
        return SymMatrix(ctx, n, upper)

    def entry(self, i: int, j: int) -> AlgebraicReal:
        if i > j:
            i, j = j, i
        return self._upper[i * self.n - i * (i - 1) // 2 + (j - i)]

    def rows(self) -> list[list[AlgebraicReal]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def principal_submatrix(self, subset: Sequence[int]) -> "SymMatrix":
        verts = sorted(subset)
        rows = [[self.entry(i, j) for j in verts] for i in verts]
        return SymMatrix.from_rows(self.ctx, rows)

    def float_array(self):
        import numpy as np

        return np.array([[float(self.entry(i, j)) for j in range(self.n)] for i in range(self.n)])


def weight_of_label(m: int, ctx: FieldContext) -> AlgebraicReal:
    """Exact cos(pi/m); m must divide the conductor (m = 2 gives 0)."""
    return ctx.cos_pi_over(m)


def gram_matrix(diagram: CoxeterDiagram, ctx: FieldContext | None = None) -> SymMatrix:
    """Matrix with unit diagonal and entries -w_ij from the edge labels."""
    if ctx is None:
        ctx = field_for_diagram(diagram)
    n = diagram.n
    one, zero = ctx.one(), ctx.zero()
    rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for (i, j), lab in diagram.edges.items():
        if lab.kind == "finite":
            w = ctx.cos_pi_over(lab.m)
        elif lab.kind == "bold":
            w = ctx.one()
        else:
            if lab.weight is None:
                raise DiagramError("weightless dotted edge has no numeric value")
            w = ctx.from_rational(lab.weight)
        rows[i][j] = rows[j][i] = -w
    return SymMatrix.from_rows(ctx, rows)


def determinant(matrix: SymMatrix) -> AlgebraicReal:
    """Exact determinant by fraction-managed Gaussian elimination."""
    n = matrix.n
    ctx = matrix.ctx
    if n == 0:
        return ctx.one()
    a = [row[:] for row in matrix.rows()]
    det = ctx.one()
    sign_flips = 0
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            return ctx.zero()
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign_flips ^= 1
        pivot = a[col][col]
        det = det * pivot
        inv = pivot.inverse()
        for r in range(col + 1, n):
            factor = a[r][col]
            if factor.is_zero():
                continue
            scale = factor * inv
            for c in range(col, n):
                a[r][c] = a[r][c] - scale * a[col][c]
    return -det if sign_flips else det


def inertia(matrix: SymMatrix) -> InertiaSignature:
    """Exact Sylvester inertia by symmetric congruence reduction.

    Nonzero diagonal pivots contribute their sign; a zero diagonal with a
    nonzero off-diagonal entry in the active block is a hyperbolic 2x2 step
    contributing (+1, -1); an all-zero active block is the kernel.
    """
    ctx = matrix.ctx
    a = {(i, j): matrix.entry(i, j) for i in range(matrix.n) for j in range(matrix.n)}
    active = list(range(matrix.n))
    n_plus = n_minus = 0
    while active:
        pivot = next((p for p in active if not a[(p, p)].is_zero()), None)
        if pivot is not None:
            d = a[(pivot, pivot)]
            if d.sign() > 0:
                n_plus += 1
            else:
                n_minus += 1
            inv = d.inverse()
            rest = [q for q in active if q != pivot]
            for r in rest:
                arp = a[(r, pivot)]
                if arp.is_zero():
                    continue
                scale = arp * inv
                for s in rest:
                    if s < r:
                        continue
                    val = a[(r, s)] - scale * a[(pivot, s)]
                    a[(r, s)] = a[(s, r)] = val
            active = rest
            continue
        off = None
        for idx, p in enumerate(active):
            for q in active[idx + 1:]:
                if not a[(p, q)].is_zero():
                    off = (p, q)
                    break
            if off:
                break
        if off is None:
            return InertiaSignature(n_plus, len(active), n_minus)
        p, q = off
        b = a[(p, q)]
        inv = b.inverse()
        n_plus += 1
        n_minus += 1
        rest = [r for r in active if r not in (p, q)]
        xp = {r: a[(p, r)] for r in rest}
        yq = {r: a[(q, r)] for r in rest}
        for i_r, r in enumerate(rest):
            for s in rest[i_r:]:
                val = a[(r, s)] - (xp[r] * yq[s] + xp[s] * yq[r]) * inv
                a[(r, s)] = a[(s, r)] = val
        active = rest
    return InertiaSignature(n_plus, 0, n_minus)


def sign(x: AlgebraicReal) -> int:
    """Exact sign of a field element (-1, 0 or +1)."""
    return x.sign()
