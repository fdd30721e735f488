"""Sparse multivariate polynomials over cyclotomic fields.

Pfaffians, Pluecker relations, linear substitutions, Jacobians, Hessians and
hypersurface interpolation.  Terms are kept in a dict keyed by exponent
tuples; printed and compared in graded reverse lexicographic order unless an
ideal operation installs a different order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from gmpy2 import mpq

from .errors import DimensionMismatch, OddSize, UnsupportedDimension
from .exactmath import CycNum, Mat

# --- monomial orders --------------------------------------------------------


def key_grevlex(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


class Grevlex:
    name = "grevlex"

    @staticmethod
    def key(exp):
        return (sum(exp), tuple(-e for e in reversed(exp)))


class BlockElim:
    """Eliminate the first `nelim` variables: block grevlex order."""

    def __init__(self, nelim):
        self.nelim = nelim
        self.name = "elim%d" % nelim

    def key(self, exp):
        head, tail = exp[: self.nelim], exp[self.nelim :]
        return (key_grevlex(head), key_grevlex(tail))


GREVLEX = Grevlex()


# --- polynomials ------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial over Q(zeta_n); immutable by convention."""

    __slots__ = ("n", "nvars", "names", "terms")

    def __init__(self, n, nvars, names, terms):
        self.n = n
        self.nvars = nvars
        self.names = tuple(names)
        clean = {}
        for exp, c in terms.items():
            if not isinstance(c, CycNum):
                c = CycNum.from_rat(n, c)
            if c:
                clean[tuple(exp)] = c
        self.terms = clean

    # constructors
    @staticmethod
    def zero(n, nvars, names):
        return MultiPoly(n, nvars, names, {})

    @staticmethod
    def constant(n, nvars, names, value):
        return MultiPoly(n, nvars, names, {(0,) * nvars: value})

    @staticmethod
    def variable(n, nvars, names, i):
        exp = [0] * nvars
        exp[i] = 1
        return MultiPoly(n, nvars, names, {tuple(exp): CycNum.one(n)})

    def ring_like(self, terms):
        return MultiPoly(self.n, self.nvars, self.names, terms)

    # structure
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def total_terms(self):
        return len(self.terms)

    def _check(self, other):
        if self.nvars != other.nvars or self.n != other.n:
            raise DimensionMismatch(
                "polynomials in different rings: (%d vars, z%d) vs (%d vars, z%d)"
                % (self.nvars, self.n, other.nvars, other.n)
            )

    # arithmetic
    def __add__(self, other):
        if isinstance(other, (int, CycNum, type(mpq(0)))):
            other = MultiPoly.constant(self.n, self.nvars, self.names, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = terms.get(e)
            acc = c if acc is None else acc + c
            if acc:
                terms[e] = acc
            elif e in terms:
                del terms[e]
        return self.ring_like(terms)

    def __neg__(self):
        return self.ring_like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, CycNum, type(mpq(0)))):
            other = MultiPoly.constant(self.n, self.nvars, self.names, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, CycNum, type(mpq(0)))):
            c0 = other if isinstance(other, CycNum) else CycNum.from_rat(self.n, other)
            if not c0:
                return MultiPoly.zero(self.n, self.nvars, self.names)
            return self.ring_like({e: c * c0 for e, c in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc = out.get(e)
                acc = prod if acc is None else acc + prod
                if acc:
                    out[e] = acc
                elif e in out:
                    del out[e]
        return self.ring_like(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = MultiPoly.constant(self.n, self.nvars, self.names, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.n == other.n
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.nvars, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    # leading data
    def leading_exp(self, order=GREVLEX):
        return max(self.terms, key=order.key)

    def leading_coeff(self, order=GREVLEX):
        return self.terms[self.leading_exp(order)]

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        if lc == 1:
            return self
        inv = lc.inv()
        return self.ring_like({e: c * inv for e, c in self.terms.items()})

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # calculus
    def partial(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return self.ring_like(out)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise DimensionMismatch("point length %d != %d vars" % (len(point), self.nvars))
        pt = [p if isinstance(p, CycNum) else CycNum.from_rat(self.n, p) for p in point]
        acc = CycNum.zero(self.n)
        cache = {}
        for e, c in self.terms.items():
            val = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = pt[i] ** k
                        cache[key] = pw
                    val = val * pw
            acc = acc + val
        return acc

    def embed(self, n):
        return MultiPoly(n, self.nvars, self.names, {e: c.embed(n) for e, c in self.terms.items()})

    def map_coeffs(self, fn):
        return self.ring_like({e: fn(c) for e, c in self.terms.items()})

    def rename(self, names):
        return MultiPoly(self.n, self.nvars, names, self.terms)

    def demote_order(self):
        """Drop to Q(zeta_1) when all coefficients are rational."""
        if self.n == 1 or not all(c.is_rational() for c in self.terms.values()):
            return self
        return MultiPoly(1, self.nvars, self.names, {e: CycNum.from_rat(1, c.rat()) for e, c in self.terms.items()})

    # display / serialization
    def __repr__(self):
        return self.to_str()

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                "%s^%d" % (self.names[i], k) if k > 1 else self.names[i]
                for i, k in enumerate(e)
                if k
            )
            if c.is_rational():
                cs = str(c.rat())
            else:
                cs = "{%s}" % c.to_str()
            if mono:
                part = mono if cs == "1" else ("-" + mono if cs == "-1" else cs + "*" + mono)
            else:
                part = cs
            parts.append(part)
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    @staticmethod
    def from_str(s, n, nvars, names):
        """Inverse of to_str for the same ring header."""
        index = {name: i for i, name in enumerate(names)}
        s = s.strip()
        if s == "0":
            return MultiPoly.zero(n, nvars, names)
        # re-split on top-level +/- signs
        chunks = []
        cur = ""
        depth = 0
        sign = 1
        i = 0
        while i < len(s):
            ch = s[i]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
            if depth == 0 and ch in "+-" and cur.strip():
                chunks.append((sign, cur.strip()))
                sign = 1 if ch == "+" else -1
                cur = ""
            elif depth == 0 and ch in "+-" and not cur.strip():
                sign = sign * (1 if ch == "+" else -1)
            else:
                cur += ch
            i += 1
        if cur.strip():
            chunks.append((sign, cur.strip()))
        terms = {}
        for sgn, chunk in chunks:
            coeff = CycNum.from_rat(n, sgn)
            exp = [0] * nvars
            for factor in chunk.split("*"):
                factor = factor.strip()
                if not factor:
                    continue
                if factor.startswith("{"):
                    coeff = coeff * CycNum.from_str(factor[1:-1])
                elif factor[0].isdigit() or factor[0] in "-/":
                    coeff = coeff * CycNum.from_rat(n, mpq(factor))
                else:
                    if "^" in factor:
                        name, _, kk = factor.partition("^")
                        exp[index[name]] += int(kk)
                    else:
                        exp[index[factor]] += 1
            key = tuple(exp)
            acc = terms.get(key)
            acc = coeff if acc is None else acc + coeff
            if acc:
                terms[key] = acc
            elif key in terms:
                del terms[key]
        return MultiPoly(n, nvars, names, terms)


def default_names(prefix, nvars):
    return tuple("%s%d" % (prefix, i + 1) for i in range(nvars))


def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d, grevlex-descending."""
    out = []

    def rec(pos, remaining, cur):
        if pos == nvars - 1:
            out.append(tuple(cur + [remaining]))
            return
        for k in range(remaining, -1, -1):
            rec(pos + 1, remaining - k, cur + [k])

    rec(0, d, [])
    out.sort(key=key_grevlex, reverse=True)
    return out


# --- linear data ------------------------------------------------------------


class LinearChange:
    """Rows express each new basis vector in old coordinates (full row rank)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Mat):
        self.matrix = matrix

    @property
    def nvars_new(self):
        return self.matrix.nrows

    @property
    def nvars_old(self):
        return self.matrix.ncols

    def compose(self, inner: "LinearChange") -> "LinearChange":
        # self maps mid -> new?  substitute(substitute(p, L1), L2) == substitute(p, L2 o L1)
        return LinearChange(self.matrix * inner.matrix)


def substitute(p: MultiPoly, change: LinearChange, names=None) -> MultiPoly:
    """Restrict p along x_old = sum_k x_new,k * row_k."""
    m = change.matrix
    if m.ncols != p.nvars:
        raise DimensionMismatch("change has %d old vars, poly has %d" % (m.ncols, p.nvars))
    nnew = m.nrows
    if names is None:
        names = default_names("t", nnew)
    n = p.n
    if m.n != n:
        raise DimensionMismatch("field orders differ: poly z%d vs change z%d" % (n, m.n))
    # linear form for each old variable
    forms = []
    for i in range(p.nvars):
        terms = {}
        for k in range(nnew):
            c = m.rows[k][i]
            if c:
                e = [0] * nnew
                e[k] = 1
                terms[tuple(e)] = c
        forms.append(MultiPoly(n, nnew, names, terms))
    one = MultiPoly.constant(n, nnew, names, 1)
    power_cache = {}

    def var_power(i, k):
        if k == 0:
            return one
        key = (i, k)
        got = power_cache.get(key)
        if got is None:
            got = forms[i] * var_power(i, k - 1)
            power_cache[key] = got
        return got

    acc = MultiPoly.zero(n, nnew, names)
    for e, c in p.terms.items():
        term = MultiPoly.constant(n, nnew, names, c)
        for i, k in enumerate(e):
            if k:
                term = term * var_power(i, k)
        acc = acc + term
    return acc


def jacobian(polys):
    """Matrix of partials d p_i / d x_j as nested lists of MultiPoly."""
    return [[p.partial(j) for j in range(p.nvars)] for p in polys]


def hessian(p: MultiPoly):
    firsts = [p.partial(i) for i in range(p.nvars)]
    return [[fi.partial(j) for j in range(p.nvars)] for fi in firsts]


def eval_poly_matrix(rows, point, n):
    return Mat(n, [[q.evaluate(point) for q in row] for row in rows])


# --- pfaffian ---------------------------------------------------------------


def pfaffian_of_entries(entry, size, zero, mul3=None):
    """Pfaffian via signed perfect matchings; entry(i, j) gives M[i][j] for i<j."""
    if size % 2 != 0:
        raise OddSize("pfaffian needs even size, got %d" % size)

    def rec(indices):
        if not indices:
            return None  # sentinel for empty product
        i = indices[0]
        total = zero
        for pos in range(1, len(indices)):
            j = indices[pos]
            sign = 1 if pos % 2 == 1 else -1
            sub = rec(indices[1:pos] + indices[pos + 1 :])
            piece = entry(i, j)
            if sub is not None:
                piece = piece * sub
            total = total + piece if sign == 1 else total - piece
        return total

    result = rec(tuple(range(size)))
    return zero if result is None else result


class SkewLinearMatrix:
    """Skew matrix with linear-form entries; strict upper triangle stored."""

    __slots__ = ("size", "upper", "n", "nvars", "names")

    def __init__(self, size, upper):
        self.size = size
        self.upper = {k: v for k, v in upper.items()}
        probe = next(iter(self.upper.values()))
        self.n = probe.n
        self.nvars = probe.nvars
        self.names = probe.names

    @staticmethod
    def from_form_basis(mats, names=None):
        """Sum_i y_i * mats[i] for skew matrices mats over one field."""
        k = len(mats)
        size = mats[0].nrows
        n = mats[0].n
        if names is None:
            names = default_names("y", k)
        upper = {}
        for i in range(size):
            for j in range(i + 1, size):
                terms = {}
                for v, m in enumerate(mats):
                    c = m.rows[i][j]
                    if c:
                        e = [0] * k
                        e[v] = 1
                        terms[tuple(e)] = c
                upper[(i, j)] = MultiPoly(n, k, names, terms)
        return SkewLinearMatrix(size, upper)

    def entry(self, i, j):
        if i == j:
            return MultiPoly.zero(self.n, self.nvars, self.names)
        if i < j:
            return self.upper[(i, j)]
        return -self.upper[(j, i)]

    def pfaffian(self) -> MultiPoly:
        zero = MultiPoly.zero(self.n, self.nvars, self.names)
        return pfaffian_of_entries(self.entry, self.size, zero)

    def determinant(self) -> MultiPoly:
        # expansion by minors; exact, used only for small property checks
        size = self.size
        rows = [[self.entry(i, j) for j in range(size)] for i in range(size)]
        return _det_expand(rows)


def _det_expand(rows):
    size = len(rows)
    if size == 1:
        return rows[0][0]
    acc = None
    for j in range(size):
        a = rows[0][j]
        if not a:
            continue
        minor = [[rows[i][k] for k in range(size) if k != j] for i in range(1, size)]
        piece = a * _det_expand(minor)
        if j % 2 == 1:
            piece = -piece
        acc = piece if acc is None else acc + piece
    if acc is None:
        r = rows[0][0]
        return r.ring_like({})
    return acc


def mat_pfaffian(m: Mat) -> CycNum:
    """Pfaffian of a constant skew matrix."""
    if m.nrows % 2 != 0:
        raise OddSize("pfaffian needs even size, got %d" % m.nrows)
    return pfaffian_of_entries(lambda i, j: m.rows[i][j], m.nrows, CycNum.zero(m.n))


def mat_det(m: Mat) -> CycNum:
    det, _, _ = _rref_track_det(m)
    return det


def _rref_track_det(m: Mat):
    # fraction-free style determinant via Gaussian elimination with pivots
    size = m.nrows
    rows = [list(r) for r in m.rows]
    det = CycNum.one(m.n)
    for col in range(size):
        piv = None
        for i in range(col, size):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            return CycNum.zero(m.n), None, col
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = rows[col][col].inv()
        rows[col] = [x * inv for x in rows[col]]
        for i in range(col + 1, size):
            if rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    return det, None, size


# --- pluecker ---------------------------------------------------------------


@lru_cache(maxsize=None)
def pair_index_map(n=6):
    """Lex-ordered pairs (i<j) of range(n) -> coordinate index."""
    pairs = list(combinations(range(n), 2))
    return {p: k for k, p in enumerate(pairs)}


def plucker_quadrics(k=2, nv=6, field_order=1, names=None):
    """The 15 quadrics p_ij p_kl - p_ik p_jl + p_il p_jk cutting Gr(2,6)."""
    if (k, nv) != (2, 6):
        raise UnsupportedDimension("only Gr(2,6) supported, got Gr(%d,%d)" % (k, nv))
    idx = pair_index_map(nv)
    nvars = len(idx)
    if names is None:
        names = tuple("p%d%d" % (i + 1, j + 1) for (i, j) in sorted(idx, key=idx.get))
    out = []
    one = CycNum.one(field_order)

    def term(a, b, sign):
        e = [0] * nvars
        e[idx[a]] += 1
        e[idx[b]] += 1
        return tuple(e), (one if sign > 0 else -one)

    for quad in combinations(range(nv), 4):
        i, j, l, m = quad
        terms = {}
        for (a, b, sign) in (
            ((i, j), (l, m), 1),
            ((i, l), (j, m), -1),
            ((i, m), (j, l), 1),
        ):
            e, c = term(a, b, sign)
            terms[e] = terms.get(e, CycNum.zero(field_order)) + c
        out.append(MultiPoly(field_order, nvars, names, terms))
    return out


def wedge_coords(v, w, n):
    """Pluecker coordinates of v wedge w, pairs in lex order."""
    size = len(v)
    out = []
    for i in range(size):
        for j in range(i + 1, size):
            out.append(v[i] * w[j] - v[j] * w[i])
    return tuple(out)


def lambda2_matrix(m: Mat) -> Mat:
    """Induced action on wedge^2 with the lex pair basis e_i ^ e_j."""
    size = m.nrows
    pairs = list(combinations(range(size), 2))
    idx = {p: k for k, p in enumerate(pairs)}
    rows = [[CycNum.zero(m.n) for _ in pairs] for _ in pairs]
    # column (k,l) of wedge = coords of (M e_k) ^ (M e_l)
    for (k, l) in pairs:
        col = idx[(k, l)]
        for (i, j) in pairs:
            val = m.rows[i][k] * m.rows[j][l] - m.rows[i][l] * m.rows[j][k]
            rows[idx[(i, j)]][col] = val
    return Mat(m.n, rows)


# --- interpolation ----------------------------------------------------------


def interpolate_hypersurface(points, degree, nvars, field_order, names=None):
    """Unique (up to scalar) degree-d form vanishing on the points, or None."""
    if names is None:
        names = default_names("v", nvars)
    monos = monomials_of_degree(nvars, degree)
    rows = []
    for pt in points:
        pt = [p if isinstance(p, CycNum) else CycNum.from_rat(field_order, p) for p in pt]
        row = []
        cache = {}
        for e in monos:
            val = CycNum.one(field_order)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = pt[i] ** k
                        cache[key] = pw
                    val = val * pw
            row.append(val)
        rows.append(row)
    from .exactmath import kernel as mat_kernel

    ker = mat_kernel(Mat(field_order, rows))
    if ker.dim != 1:
        return None
    coeffs = ker.basis.rows[0]
    terms = {e: c for e, c in zip(monos, coeffs) if c}
    poly = MultiPoly(field_order, nvars, names, terms)
    return poly.monic()
