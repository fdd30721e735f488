"""Buchberger-based ideal engine.

Normal forms, membership, elimination, saturation, projective emptiness and
Hilbert dimension/degree.  Determinism contract: normal selection strategy
with degree-then-grevlex pair ordering, product and chain criteria, and a
pair-reduction step budget.  Reduced bases are monic, auto-reduced and
sorted, hence unique for a fixed order.
"""

from __future__ import annotations

import heapq
from math import factorial

from gmpy2 import mpq

from .errors import PointNotOnVariety, StepBudgetExceeded
from .exactmath import CycNum, Mat, rref
from .polyring import (
    GREVLEX,
    BlockElim,
    Grevlex,
    MultiPoly,
    jacobian,
    key_grevlex,
)

DEFAULT_STEP_BUDGET = 200_000


class Ideal:
    """Generator list over one polynomial ring with a cached reduced GB."""

    __slots__ = ("n", "nvars", "names", "gens", "_gb")

    def __init__(self, n, nvars, names, gens):
        self.n = n
        self.nvars = nvars
        self.names = tuple(names)
        self.gens = [g for g in gens if g]
        self._gb = {}

    @staticmethod
    def from_polys(polys, ring=None):
        if not polys and ring is None:
            raise ValueError("empty ideal needs an explicit ring")
        if ring is None:
            p = polys[0]
            ring = (p.n, p.nvars, p.names)
        return Ideal(ring[0], ring[1], ring[2], list(polys))

    def ring(self):
        return (self.n, self.nvars, self.names)

    def zero_poly(self):
        return MultiPoly.zero(self.n, self.nvars, self.names)

    def groebner(self, order=GREVLEX, budget=DEFAULT_STEP_BUDGET):
        key = order.name
        got = self._gb.get(key)
        if got is None:
            got = reduced_groebner(self.gens, self.ring(), order, budget)
            self._gb[key] = got
        return got

    def __repr__(self):
        return "Ideal(z%d, %d gens in %s)" % (self.n, len(self.gens), ",".join(self.names))

    def to_json(self):
        return {
            "field_order": self.n,
            "nvars": self.nvars,
            "names": list(self.names),
            "polys": [g.to_str() for g in self.gens],
        }

    @staticmethod
    def from_json(obj):
        n, nv, names = obj["field_order"], obj["nvars"], tuple(obj["names"])
        return Ideal(n, nv, names, [MultiPoly.from_str(s, n, nv, names) for s in obj["polys"]])


# --- core reduction ---------------------------------------------------------


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _exp_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _exp_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Budget:
    __slots__ = ("left",)

    def __init__(self, steps):
        self.left = steps

    def spend(self, basis_size=None):
        self.left -= 1
        if self.left < 0:
            raise StepBudgetExceeded("pair-reduction step budget exhausted", basis_size=basis_size)


def _normal_form_terms(terms, basis, order, budget=None):
    """Fully reduce a term dict modulo basis = [(lead_exp, lc_inv, terms)]."""
    work = dict(terms)
    remainder = {}
    okey = order.key
    while work:
        e = max(work, key=okey)
        c = work.pop(e)
        if not c:
            continue
        hit = None
        for lead, lc_inv, gterms in basis:
            if _divides(lead, e):
                hit = (lead, lc_inv, gterms)
                break
        if hit is None:
            remainder[e] = c
            continue
        if budget is not None:
            budget.spend()
        lead, lc_inv, gterms = hit
        shift = _exp_sub(e, lead)
        factor = c * lc_inv
        for ge, gc in gterms:
            ne = tuple(a + b for a, b in zip(ge, shift))
            if ne == e:
                continue
            prod = factor * gc
            acc = work.get(ne)
            acc = -prod if acc is None else acc - prod
            if acc:
                work[ne] = acc
            elif ne in work:
                del work[ne]
    return remainder


def _prep(poly_terms, order):
    lead = max(poly_terms, key=order.key)
    lc = poly_terms[lead]
    return (lead, lc.inv(), tuple(poly_terms.items()))


def _maybe_demote(gens, ring):
    """Rational-coefficient systems compute over Q and lift back afterwards."""
    n = ring[0]
    if n == 1:
        return gens, ring, None
    if all(c.is_rational() for g in gens for c in g.terms.values()):
        demoted = [g.demote_order() for g in gens]
        return demoted, (1, ring[1], ring[2]), n
    return gens, ring, None


def reduced_groebner(gens, ring, order=GREVLEX, budget_steps=DEFAULT_STEP_BUDGET):
    """Unique reduced Groebner basis (monic, auto-reduced, sorted ascending)."""
    gens, work_ring, lift_to = _maybe_demote([g for g in gens if g], ring)
    n, nvars, names = work_ring
    budget = _Budget(budget_steps)
    basis = []  # list of term dicts
    for g in gens:
        nf = _normal_form_terms(g.terms, [_prep(b, order) for b in basis], order, budget)
        if nf:
            basis.append(nf)
    prepped = [_prep(b, order) for b in basis]
    leads = [p[0] for p in prepped]

    pairs = []
    done = set()

    def push_pair(i, j):
        lcm = _exp_lcm(leads[i], leads[j])
        heapq.heappush(pairs, (sum(lcm), key_grevlex(lcm), i, j, lcm))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            push_pair(i, j)

    while pairs:
        _, _, i, j, lcm = heapq.heappop(pairs)
        if (i, j) in done:
            continue
        done.add((i, j))
        # product criterion
        if lcm == tuple(a + b for a, b in zip(leads[i], leads[j])):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(leads[k], lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in done and b in done:
                    skip = True
                    break
        if skip:
            continue
        # s-polynomial
        li, lj = prepped[i], prepped[j]
        si = _exp_sub(lcm, li[0])
        sj = _exp_sub(lcm, lj[0])
        s = {}
        for ge, gc in li[2]:
            ne = tuple(a + b for a, b in zip(ge, si))
            s[ne] = s.get(ne, CycNum.zero(n)) + gc * li[1]
        for ge, gc in lj[2]:
            ne = tuple(a + b for a, b in zip(ge, sj))
            acc = s.get(ne, CycNum.zero(n)) - gc * lj[1]
            if acc:
                s[ne] = acc
            elif ne in s:
                del s[ne]
        s = {e: c for e, c in s.items() if c}
        nf = _normal_form_terms(s, prepped, order, budget)
        if nf:
            idx = len(basis)
            basis.append(nf)
            prepped.append(_prep(nf, order))
            leads.append(prepped[-1][0])
            for t in range(idx):
                push_pair(t, idx)

    # inter-reduce to the unique reduced basis
    # drop elements whose lead is divisible by another lead
    keep = []
    for i, lead in enumerate(leads):
        redundant = False
        for j, other in enumerate(leads):
            if i != j and _divides(other, lead):
                if other != lead or j < i:
                    redundant = True
                    break
        if not redundant:
            keep.append(i)
    reduced = []
    for pos, i in enumerate(keep):
        others = [_prep(basis[k], order) for k in keep if k != i]
        nf = _normal_form_terms(basis[i], others, order, None)
        if nf:
            reduced.append(nf)
    out = []
    for terms in reduced:
        lead = max(terms, key=order.key)
        inv = terms[lead].inv()
        out.append(MultiPoly(n, nvars, names, {e: c * inv for e, c in terms.items()}))
    out.sort(key=lambda p: order.key(p.leading_exp(order)))
    if lift_to is not None:
        out = [p.embed(lift_to) for p in out]
    return out


def normal_form(p: MultiPoly, gb, order=GREVLEX) -> MultiPoly:
    if not gb:
        return p
    if p.n != gb[0].n:
        if p.n == 1:
            p = p.embed(gb[0].n)
        elif gb[0].n == 1:
            gb = [g.embed(p.n) for g in gb]
    basis = [_prep(g.terms, order) for g in gb]
    nf = _normal_form_terms(p.terms, basis, order, None)
    return MultiPoly(p.n, p.nvars, p.names, nf)


def contains(ideal: Ideal, p: MultiPoly, order=GREVLEX, budget=DEFAULT_STEP_BUDGET) -> bool:
    gb = ideal.groebner(order, budget)
    if not gb:
        return p.is_zero()
    return normal_form(p, gb, order).is_zero()


def ideal_equal(a: Ideal, b: Ideal, budget=DEFAULT_STEP_BUDGET) -> bool:
    return all(contains(a, g, budget=budget) for g in b.gens) and all(
        contains(b, g, budget=budget) for g in a.gens
    )


# --- hilbert data -----------------------------------------------------------


class HilbertData:
    __slots__ = ("dimension", "degree", "numerator", "nvars")

    def __init__(self, dimension, degree, numerator, nvars):
        self.dimension = dimension  # projective dimension; -1 for empty
        self.degree = degree
        self.numerator = numerator  # coeffs of N(t) with HS = N/(1-t)^nvars
        self.nvars = nvars

    def hilbert_polynomial_at(self, m):
        """Value of the Hilbert polynomial at integer m (exact)."""
        # HS = Q(t)/(1-t)^(dim+1) after cancellation
        q = _cancel_ones(list(self.numerator), self.nvars)[0]
        d = self.dimension
        if d < 0:
            return mpq(0)
        total = mpq(0)
        for j, qj in enumerate(q):
            if qj:
                prod = mpq(1)
                for i in range(1, d + 1):
                    prod *= mpq(m - j + i)
                prod /= factorial(d)
                total += qj * prod
        return total

    def __repr__(self):
        return "HilbertData(dim=%d, deg=%d)" % (self.dimension, self.degree)


def _cancel_ones(numer, nvars):
    """Divide N(t) by (1-t) while possible; returns (Q coeffs, power removed)."""
    removed = 0
    coeffs = list(numer)
    while coeffs and sum(coeffs) == 0:
        # divide by (1 - t): q_k = sum_{i<=k} n_i
        acc = 0
        out = []
        for c in coeffs[:-1]:
            acc += c
            out.append(acc)
        coeffs = out
        removed += 1
        if not coeffs:
            break
    return coeffs, removed


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def _hilbert_numerator(gens, nvars):
    """Numerator of the Hilbert series of S/(monomial ideal), dense int list."""
    gens = _minimalize(gens)
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # base case: pairwise disjoint supports -> product of (1 - t^deg)
    supports = [tuple(i for i, e in enumerate(g) if e) for g in gens]
    disjoint = True
    seen = set()
    for s in supports:
        for i in s:
            if i in seen:
                disjoint = False
                break
            seen.add(i)
        if not disjoint:
            break
    if disjoint:
        result = [1]
        for g in gens:
            d = sum(g)
            new = result + [0] * d
            for i, c in enumerate(result):
                new[i + d] -= c
            result = new
        return result
    # pivot: variable occurring most often, power 1
    counts = [0] * nvars
    for g in gens:
        for i, e in enumerate(g):
            if e:
                counts[i] += 1
    piv = counts.index(max(counts))
    pvec = tuple(1 if i == piv else 0 for i in range(nvars))
    # I + (x_piv)
    plus_gens = [pvec]
    for g in gens:
        if g[piv] == 0:
            plus_gens.append(g)
    # I : x_piv
    colon = []
    for g in gens:
        if g[piv]:
            ng = list(g)
            ng[piv] -= 1
            colon.append(tuple(ng))
        else:
            colon.append(g)
    a = _hilbert_numerator(plus_gens, nvars)
    b = _hilbert_numerator(colon, nvars)
    out = [0] * max(len(a), len(b) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + 1] += c
    return out


def dim_degree(ideal: Ideal, order=GREVLEX, budget=DEFAULT_STEP_BUDGET) -> HilbertData:
    """Projective dimension, degree and Hilbert numerator from the lead ideal."""
    gb = ideal.groebner(order, budget)
    nvars = ideal.nvars
    if not gb:
        # zero ideal: all of P^{nvars-1}
        numer = [1]
        return HilbertData(nvars - 1, 1, numer, nvars)
    leads = [g.leading_exp(order) for g in gb]
    numer = _hilbert_numerator(leads, nvars)
    q, removed = _cancel_ones(numer, nvars)
    if not q:
        # N == 0: unit ideal
        return HilbertData(-1, 0, numer, nvars)
    pole = nvars - removed  # HS = Q/(1-t)^pole with Q(1) != 0
    dim_proj = pole - 1
    if dim_proj < 0:
        # finite-length module: projectively empty
        return HilbertData(-1, 0, numer, nvars)
    degree = sum(q)
    return HilbertData(dim_proj, int(degree), numer, nvars)


def projective_is_empty(ideal: Ideal, order=GREVLEX, budget=DEFAULT_STEP_BUDGET) -> bool:
    """True iff V(I) is empty in projective space (gens homogeneous)."""
    gb = ideal.groebner(order, budget)
    if not gb:
        return False
    if any(g.degree() == 0 for g in gb):
        return True
    leads = [g.leading_exp(order) for g in gb]
    # normal-form certificate: some pure power of each variable reduces to 0
    bound = sum(sum(l) for l in leads)
    certified = True
    for i in range(ideal.nvars):
        hit = False
        for k in range(1, bound + 1):
            exp = [0] * ideal.nvars
            exp[i] = k
            p = MultiPoly(ideal.n, ideal.nvars, ideal.names, {tuple(exp): CycNum.one(ideal.n)})
            if normal_form(p, gb, order).is_zero():
                hit = True
                break
        if not hit:
            certified = False
            break
    if certified:
        return True
    # escalate: affine dimension of the lead-term ideal
    pure = [False] * ideal.nvars
    for l in leads:
        nz = [i for i, e in enumerate(l) if e]
        if len(nz) == 1:
            pure[nz[0]] = True
    return all(pure)


# --- ideal operations -------------------------------------------------------


def sum_ideal(a: Ideal, b: Ideal) -> Ideal:
    return Ideal(a.n, a.nvars, a.names, list(a.gens) + list(b.gens))


def _with_extra_var(ideal: Ideal, varname="t_sat"):
    names = (varname,) + ideal.names
    nv = ideal.nvars + 1
    gens = []
    for g in ideal.gens:
        gens.append(MultiPoly(ideal.n, nv, names, {(0,) + e: c for e, c in g.terms.items()}))
    return gens, names, nv


def eliminate(ideal: Ideal, var_indices, budget=DEFAULT_STEP_BUDGET) -> Ideal:
    """Eliminate the named variable indices via a block order."""
    var_indices = sorted(set(var_indices))
    keep = [i for i in range(ideal.nvars) if i not in var_indices]
    perm = var_indices + keep
    names_perm = tuple(ideal.names[i] for i in perm)
    gens = []
    for g in ideal.gens:
        gens.append(
            MultiPoly(ideal.n, ideal.nvars, names_perm, {tuple(e[i] for i in perm): c for e, c in g.terms.items()})
        )
    order = BlockElim(len(var_indices))
    gb = reduced_groebner(gens, (ideal.n, ideal.nvars, names_perm), order, budget)
    k = len(var_indices)
    out = []
    kept_names = tuple(ideal.names[i] for i in keep)
    for g in gb:
        if all(all(e[i] == 0 for i in range(k)) for e in g.terms):
            out.append(
                MultiPoly(ideal.n, len(keep), kept_names, {e[k:]: c for e, c in g.terms.items()})
            )
    return Ideal(ideal.n, len(keep), kept_names, out)


def saturate_single(ideal: Ideal, g: MultiPoly, budget=DEFAULT_STEP_BUDGET) -> Ideal:
    """I : g^infty via the Rabinowitsch variable."""
    gens, names, nv = _with_extra_var(ideal)
    gshift = MultiPoly(ideal.n, nv, names, {(0,) + e: c for e, c in g.terms.items()})
    t = MultiPoly.variable(ideal.n, nv, names, 0)
    one = MultiPoly.constant(ideal.n, nv, names, 1)
    gens = gens + [one - t * gshift]
    big = Ideal(ideal.n, nv, names, gens)
    return eliminate(big, [0], budget)


def saturate(ideal: Ideal, j: Ideal, budget=DEFAULT_STEP_BUDGET) -> Ideal:
    """I : J^infty as the intersection of the single-generator saturations."""
    outs = None
    for g in j.gens:
        part = saturate_single(ideal, g, budget)
        outs = part if outs is None else intersect(outs, part, budget)
    if outs is None:
        return ideal
    return outs


def intersect(a: Ideal, b: Ideal, budget=DEFAULT_STEP_BUDGET) -> Ideal:
    """I cap J via t*I + (1-t)*J and elimination of t."""
    gens_a, names, nv = _with_extra_var(a)
    t = MultiPoly.variable(a.n, nv, names, 0)
    one = MultiPoly.constant(a.n, nv, names, 1)
    gens = [t * g for g in gens_a]
    for g in b.gens:
        shifted = MultiPoly(a.n, nv, names, {(0,) + e: c for e, c in g.terms.items()})
        gens.append((one - t) * shifted)
    big = Ideal(a.n, nv, names, gens)
    return eliminate(big, [0], budget)


def jacobian_ideal(p: MultiPoly, include_poly=True) -> Ideal:
    gens = [p.partial(i) for i in range(p.nvars)]
    if include_poly:
        gens = [p] + gens
    return Ideal(p.n, p.nvars, p.names, gens)


def is_singular_at(ideal: Ideal, point, dim=None, budget=DEFAULT_STEP_BUDGET) -> bool:
    """Jacobian rank test at an exact projective point on V(I)."""
    pt = [x if isinstance(x, CycNum) else CycNum.from_rat(ideal.n, x) for x in point]
    for g in ideal.gens:
        if not g.evaluate(pt).is_zero():
            raise PointNotOnVariety("point does not satisfy all generators")
    if dim is None:
        dim = dim_degree(ideal, budget=budget).dimension
    codim = (ideal.nvars - 1) - dim
    jac = jacobian(ideal.gens)
    rows = [[q.evaluate(pt) for q in row] for row in jac]
    _, _, rank = rref(Mat(ideal.n, rows))
    return rank < codim
