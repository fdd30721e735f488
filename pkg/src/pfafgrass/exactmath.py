"""Exact arithmetic over Q and cyclotomic fields Q(zeta_n), and exact linear algebra.

Elements of Q(zeta_n) are stored on the reduced power basis
{zeta_n^i : 0 <= i < phi(n)} modulo the n-th cyclotomic polynomial, with
gmpy2.mpq coefficients.  All values are immutable; mixed field orders are
never promoted silently (callers embed explicitly via cyc_embed).
"""

from __future__ import annotations

import cmath
from functools import lru_cache
from math import gcd

from gmpy2 import mpq, mpz

from .errors import (
    DivisionByZero,
    NonDivisibleOrder,
    NotFiniteOrder,
    OrderMismatch,
)

Q0 = mpq(0)
Q1 = mpq(1)


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_int(num, den):
    # exact division of integer polynomial lists (ascending coeffs), den monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        out[i - dn] = c
        if c:
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
    assert all(c == 0 for c in num[:dn]), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, ascending, monic; via divisor recursion."""
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0] = -1
    poly[n] = 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_rows(n: int):
    """Row e-phi(n) expresses zeta_n^e on the power basis, for phi(n) <= e < n."""
    phi = euler_phi(n)
    top = cyclotomic_polynomial(n)
    # zeta^phi = -(c_0 + ... + c_{phi-1} zeta^{phi-1})
    base = [-c for c in top[:phi]]
    rows = [tuple(base)]
    for _ in range(phi + 1, n):
        prev = rows[-1]
        row = [0] + list(prev[:-1])
        if prev[-1]:
            lead = prev[-1]
            row = [r + lead * b for r, b in zip(row, base)]
        rows.append(tuple(row))
    return tuple(rows)


def _reduce_vec(n: int, vec):
    """Reduce a coefficient vector of length <= n to the power basis."""
    phi = euler_phi(n)
    out = list(vec[:phi]) + [Q0] * (phi - len(vec[:phi]))
    if len(vec) > phi:
        rows = _reduction_rows(n)
        for e in range(phi, len(vec)):
            c = vec[e]
            if c:
                row = rows[e - phi]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
    return out


class CycNum:
    """Element of Q(zeta_n) in canonical reduced form."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs):
        self.n = n
        phi = euler_phi(n)
        c = [mpq(x) for x in coeffs]
        if len(c) < phi:
            c += [Q0] * (phi - len(c))
        elif len(c) > phi:
            c = _reduce_vec(n, c)
        object.__setattr__  # immutable by convention; slots only
        self.c = tuple(c)

    # --- constructors -------------------------------------------------
    @staticmethod
    def from_rat(n: int, value) -> "CycNum":
        return CycNum(n, [mpq(value)])

    @staticmethod
    def zeta(n: int, k: int = 1) -> "CycNum":
        k %= n
        vec = [Q0] * (k + 1)
        vec[k] = Q1
        return CycNum(n, vec)

    @staticmethod
    def zero(n: int) -> "CycNum":
        return CycNum(n, [])

    @staticmethod
    def one(n: int) -> "CycNum":
        return CycNum(n, [Q1])

    # --- basic structure ----------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rat(self):
        if not self.is_rational():
            raise ValueError("not a rational element: %r" % (self,))
        return self.c[0]

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.n != self.n:
                raise OrderMismatch(
                    "field orders %d and %d; embed first" % (self.n, other.n)
                )
            return other
        if isinstance(other, (int, type(mpq(0)), type(mpz(0)))):
            return CycNum.from_rat(self.n, other)
        return NotImplemented

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CycNum(self.n, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.n, [-a for a in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return CycNum(self.n, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, n = self.c, o.c, self.n
        if not any(a) or not any(b):
            return CycNum.zero(n)
        conv = [Q0] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        if k >= n:
                            k -= n
                        conv[k] += ai * bj
        return CycNum(n, _reduce_vec(n, conv))

    __rmul__ = __mul__

    def inv(self) -> "CycNum":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_%d)" % self.n)
        if self.is_rational():
            return CycNum.from_rat(self.n, Q1 / self.c[0])
        # extended Euclid in Q[x] against Phi_n
        phi_poly = [mpq(c) for c in cyclotomic_polynomial(self.n)]
        a = list(self.c)
        while a and not a[-1]:
            a.pop()
        # invariants: s * self = r  (mod Phi)
        r0, s0 = phi_poly, [Q0]
        r1, s1 = a, [Q1]
        while True:
            if len(r1) == 1:
                break
            # r0 = q*r1 + r2
            q = [Q0] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for i in range(len(rem) - 1, len(r1) - 2, -1):
                coef = rem[i] / r1[-1]
                q[i - (len(r1) - 1)] = coef
                if coef:
                    for j, d in enumerate(r1):
                        rem[i - (len(r1) - 1) + j] -= coef * d
            while rem and not rem[-1]:
                rem.pop()
            if not rem:
                raise DivisionByZero("element not invertible (degenerate)")
            s2 = list(s0) + [Q0] * max(0, len(q) + len(s1) - 1 - len(s0))
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        s2[i + j] -= qi * sj
            while s2 and not s2[-1]:
                s2.pop()
            r0, s0, r1, s1 = r1, s1, rem, s2
        lead = r1[0]
        out = [x / lead for x in s1]
        return CycNum(self.n, _reduce_vec(self.n, out))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = CycNum.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- symmetries -----------------------------------------------------
    def galois(self, k: int) -> "CycNum":
        """Apply zeta_n -> zeta_n^k; requires gcd(k, n) = 1."""
        n = self.n
        k %= n
        if gcd(k, n) != 1:
            raise ValueError("galois exponent %d not coprime to %d" % (k, n))
        conv = [Q0] * n
        for i, ci in enumerate(self.c):
            if ci:
                conv[(i * k) % n] += ci
        return CycNum(n, _reduce_vec(n, conv))

    def conj(self) -> "CycNum":
        """Complex conjugation zeta -> zeta^{-1}."""
        if self.n <= 2:
            return self
        return self.galois(self.n - 1)

    def embed(self, n: int) -> "CycNum":
        """Image under zeta_m -> zeta_n^{n/m} for m | n."""
        m = self.n
        if n == m:
            return self
        if n % m != 0:
            raise NonDivisibleOrder("order %d does not divide %d" % (m, n))
        step = n // m
        conv = [Q0] * n
        for i, ci in enumerate(self.c):
            if ci:
                conv[(i * step) % n] += ci
        return CycNum(n, _reduce_vec(n, conv))

    # --- equality, hashing, display --------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.n == other.n and self.c == other.c
        if isinstance(other, (int, type(mpq(0)), type(mpz(0)))):
            return self.is_rational() and self.c[0] == mpq(other)
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.n, self.c))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, ci in enumerate(self.c):
            if not ci:
                continue
            if i == 0:
                parts.append(str(ci))
            elif i == 1:
                parts.append("%s*z%d" % (ci, self.n) if ci != 1 else "z%d" % self.n)
            else:
                parts.append(
                    "%s*z%d^%d" % (ci, self.n, i) if ci != 1 else "z%d^%d" % (self.n, i)
                )
        return " + ".join(parts).replace("+ -", "- ")

    def approx(self) -> complex:
        """Floating approximation. Debug printing only, never authoritative."""
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(float(ci) * z**i for i, ci in enumerate(self.c) if ci)

    # --- serialization ---------------------------------------------------
    def to_json(self):
        return {"n": self.n, "c": [str(x) for x in self.c]}

    @staticmethod
    def from_json(obj) -> "CycNum":
        return CycNum(obj["n"], [mpq(s) for s in obj["c"]])

    def to_str(self) -> str:
        """Compact string form "n:c0,c1,..."; bit-exact round-trip."""
        return "%d:%s" % (self.n, ",".join(str(x) for x in self.c))

    @staticmethod
    def from_str(s: str) -> "CycNum":
        ns, _, cs = s.partition(":")
        return CycNum(int(ns), [mpq(x) for x in cs.split(",")] if cs else [])


def cyc(n: int, value) -> CycNum:
    """Rational constant in Q(zeta_n)."""
    return CycNum.from_rat(n, value)


def zeta(n: int, k: int = 1) -> CycNum:
    return CycNum.zeta(n, k)


def cyc_embed(x: CycNum, n: int) -> CycNum:
    return x.embed(n)


def common_order(*orders: int) -> int:
    out = 1
    for n in orders:
        out = out * n // gcd(out, n)
    return out


# ---------------------------------------------------------------------------
# matrices


class Mat:
    """Dense matrix over one cyclotomic field Q(zeta_n)."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows):
        self.n = n
        fixed = []
        for row in rows:
            out = []
            for x in row:
                if isinstance(x, CycNum):
                    if x.n != n:
                        raise OrderMismatch("entry order %d in Mat order %d" % (x.n, n))
                    out.append(x)
                else:
                    out.append(CycNum.from_rat(n, x))
            fixed.append(tuple(out))
        self.rows = tuple(fixed)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @staticmethod
    def identity(n: int, size: int) -> "Mat":
        one = CycNum.one(n)
        zero = CycNum.zero(n)
        return Mat(n, [[one if i == j else zero for j in range(size)] for i in range(size)])

    @staticmethod
    def zero(n: int, nrows: int, ncols: int) -> "Mat":
        z = CycNum.zero(n)
        return Mat(n, [[z] * ncols for _ in range(nrows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Mat) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __add__(self, other):
        return Mat(self.n, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat(self.n, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat(self.n, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if other.n != self.n:
                raise OrderMismatch("matrix orders %d, %d" % (self.n, other.n))
            bt = list(zip(*other.rows))
            out = []
            for row in self.rows:
                new = []
                for col in bt:
                    acc = CycNum.zero(self.n)
                    for a, b in zip(row, col):
                        if a and b:
                            acc = acc + a * b
                    new.append(acc)
                out.append(new)
            return Mat(self.n, out)
        # scalar
        s = other if isinstance(other, CycNum) else CycNum.from_rat(self.n, other)
        return Mat(self.n, [[a * s for a in r] for r in self.rows])

    __rmul__ = __mul__

    def mul_vec(self, vec):
        out = []
        for row in self.rows:
            acc = CycNum.zero(self.n)
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Mat":
        return Mat(self.n, list(zip(*self.rows)))

    def trace(self) -> CycNum:
        acc = CycNum.zero(self.n)
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.rows[i][i]
        return acc

    def embed(self, n: int) -> "Mat":
        return Mat(n, [[x.embed(n) for x in row] for row in self.rows])

    def map_entries(self, fn) -> "Mat":
        return Mat(self.n, [[fn(x) for x in row] for row in self.rows])

    def is_scalar(self) -> bool:
        if self.nrows != self.ncols:
            return False
        d = self.rows[0][0]
        for i in range(self.nrows):
            for j in range(self.ncols):
                if i == j:
                    if self.rows[i][j] != d:
                        return False
                elif self.rows[i][j]:
                    return False
        return True

    def inverse(self) -> "Mat":
        size = self.nrows
        if size != self.ncols:
            raise ValueError("inverse of non-square matrix")
        n = self.n
        aug = [list(row) + list(Mat.identity(n, size).rows[i]) for i, row in enumerate(self.rows)]
        r, _, rank = _rref_rows(n, aug)
        if rank < size:
            raise DivisionByZero("matrix not invertible")
        return Mat(n, [row[size:] for row in r])

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.n, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def multiplicative_order(self, bound: int = 5280) -> int:
        acc = self
        ident = Mat.identity(self.n, self.nrows)
        for k in range(1, bound + 1):
            if acc == ident:
                return k
            acc = acc * self
        raise NotFiniteOrder("no power up to %d equals the identity" % bound)

    def to_json(self):
        return {"n": self.n, "rows": [[x.to_str() for x in row] for row in self.rows]}

    @staticmethod
    def from_json(obj) -> "Mat":
        return Mat(obj["n"], [[CycNum.from_str(s) for s in row] for row in obj["rows"]])

    def __repr__(self):
        return "Mat(%d, %s)" % (self.n, [[repr(x) for x in row] for row in self.rows])


def _rref_rows(n: int, rows):
    """In-place reduced row echelon; returns (rows, pivot columns, rank)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][col].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows, pivots, r


def rref(m: Mat):
    """Reduced row echelon form; returns (Mat, pivot columns, rank)."""
    rows, pivots, rank = _rref_rows(m.n, m.rows)
    return Mat(m.n, rows), tuple(pivots), rank


def kernel(m: Mat) -> "Subspace":
    """Right kernel {v : M v = 0} as a canonical Subspace."""
    _, pivots, rank = rref(m)
    reduced, pivots, rank = rref(m)
    ncols = m.ncols
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        vec = [CycNum.zero(m.n)] * ncols
        vec[j] = CycNum.one(m.n)
        for r, p in enumerate(pivots):
            vec[p] = -reduced.rows[r][j]
        basis.append(vec)
    return Subspace(ncols, Mat(m.n, basis) if basis else Mat(m.n, []), order=m.n)


def eigenspace(m: Mat, e: CycNum, order_bound: int = 5280) -> "Subspace":
    """Kernel of M - e*I for a finite-order matrix M with e a root of unity."""
    k = m.multiplicative_order(order_bound)
    if not (e**k == CycNum.one(e.n)):
        raise ValueError("eigenvalue is not a k-th root of unity for k = %d" % k)
    shifted = m - Mat.identity(m.n, m.nrows) * e
    return kernel(shifted)


class Subspace:
    """Linear subspace in canonical RREF-basis form; equality is canonical."""

    __slots__ = ("ambient_dim", "basis", "n")

    def __init__(self, ambient_dim: int, basis: Mat, order: int | None = None):
        self.ambient_dim = ambient_dim
        if basis.nrows:
            reduced, _, rank = rref(basis)
            self.basis = Mat(basis.n, reduced.rows[:rank])
            self.n = basis.n
        else:
            self.basis = basis
            self.n = basis.n if basis.rows else (order if order is not None else 1)

    @property
    def dim(self):
        return self.basis.nrows

    def contains_vector(self, vec) -> bool:
        rows = [list(r) for r in self.basis.rows] + [list(vec)]
        _, _, rank = _rref_rows(self.n, rows)
        return rank == self.dim

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(row) for row in other.basis.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis.rows == other.basis.rows
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.rows))

    def __repr__(self):
        return "Subspace(dim %d of %d)" % (self.dim, self.ambient_dim)


# ---------------------------------------------------------------------------
# modular fingerprints (fast dedup keys for group enumeration)


def _is_probable_prime(m: int) -> bool:
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % p == 0:
            return m == p
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _fingerprint_ctx(n: int, which: int):
    """(prime, root of Phi_n mod prime); deterministic per (n, which)."""
    start = (1 << 31) + which * (1 << 27)
    q = start - ((start - 1) % n)  # q = 1 mod n
    while not _is_probable_prime(q):
        q += n
    phi = cyclotomic_polynomial(n)
    g = 2
    root = None
    while root is None:
        ok = True
        # candidate n-th roots of unity: g^((q-1)/n)
        cand = pow(g, (q - 1) // n, q)
        val = 0
        for c in reversed(phi):
            val = (val * cand + c) % q
        if val == 0:
            root = cand
        else:
            g += 1
            if g > 10000:
                raise RuntimeError("no root of Phi_%d mod %d found" % (n, q))
    return q, root


def cyc_to_mod(x: CycNum, which: int = 0):
    """Image of x in F_q under zeta -> fixed root; None if a denominator dies."""
    q, root = _fingerprint_ctx(x.n, which)
    acc = 0
    pw = 1
    for c in x.c:
        if c:
            den = int(c.denominator) % q
            if den == 0:
                return None
            acc = (acc + int(c.numerator) * pow(den, q - 2, q) % q * pw) % q
        pw = pw * root % q
    return acc


def mat_fingerprint(m: Mat):
    """Pair of modular images of all entries; collision odds < 2^-60 per pair."""
    out = []
    for which in (0, 1):
        q, root = _fingerprint_ctx(m.n, which)
        vals = []
        for row in m.rows:
            for x in row:
                v = cyc_to_mod(x, which)
                if v is None:
                    return None
                vals.append(v)
        out.append(tuple(vals))
    return (out[0], out[1])
