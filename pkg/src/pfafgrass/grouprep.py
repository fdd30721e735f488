"""Finite matrix groups over cyclotomic fields.

Enumeration (breadth-first, deterministic), conjugacy, centralizers and
normalizers, abelian subgroups up to conjugacy, character rows, isotypic
projectors and seeded sampling of invariant subspaces.

Element deduplication and the product table run on modular fingerprints
(two fixed ~2^31 primes); exact matrices are stored once per element.
"""

from __future__ import annotations

import random
from math import gcd

from gmpy2 import mpq

from .errors import (
    ClosureBoundExceeded,
    InconsistentCenterSpec,
    NonIntegralMultiplicity,
    NotASubgroup,
    TargetExceedsMultiplicity,
)
from .exactmath import CycNum, Mat, Subspace, _fingerprint_ctx, cyc_to_mod, rref

DEFAULT_CLOSURE_BOUND = 5000


# --- modular matrix helpers --------------------------------------------------


def _mod_image(mat: Mat, which: int):
    q, _ = _fingerprint_ctx(mat.n, which)
    out = []
    for row in mat.rows:
        for x in row:
            v = cyc_to_mod(x, which)
            if v is None:
                return None
            out.append(v)
    return tuple(out)


def _mod_mul(a, b, size, q):
    out = [0] * (size * size)
    for i in range(size):
        base = i * size
        for k in range(size):
            aik = a[base + k]
            if aik:
                kb = k * size
                for j in range(size):
                    out[base + j] = (out[base + j] + aik * b[kb + j]) % q
    return tuple(out)


class GroupElements:
    """Enumerated finite matrix group with fast index arithmetic."""

    def __init__(self, name, mats, words, parents, gens_idx, field_order):
        self.name = name
        self.mats = mats  # exact matrices, index 0 = identity
        self.words = words  # generator words (tuples of generator indices)
        self.parents = parents  # (parent_index, gen_index) or None for identity
        self.gens_idx = gens_idx  # element indices of the generators
        self.n = field_order
        size = mats[0].nrows
        self.size = size
        self.q = [_fingerprint_ctx(field_order, w)[0] for w in (0, 1)]
        self.mod = [[_mod_image(m, w) for m in mats] for w in (0, 1)]
        self._index = {}
        for i in range(len(mats)):
            self._index[(self.mod[0][i], self.mod[1][i])] = i
        self._inv = None
        self._orders = None
        self._classes = None
        self._class_of = None

    def __len__(self):
        return len(self.mats)

    @property
    def order(self):
        return len(self.mats)

    def index_of_mat(self, mat: Mat):
        key = (_mod_image(mat, 0), _mod_image(mat, 1))
        return self._index.get(key)

    def product(self, i, j):
        key = tuple(
            _mod_mul(self.mod[w][i], self.mod[w][j], self.size, self.q[w]) for w in (0, 1)
        )
        return self._index[key]

    def inverse(self, i):
        if self._inv is None:
            self._inv = [None] * len(self)
            for a in range(len(self)):
                if self._inv[a] is None:
                    # find b with a*b = 0
                    for b in range(len(self)):
                        if self.product(a, b) == 0:
                            self._inv[a] = b
                            self._inv[b] = a
                            break
        return self._inv[i]

    def conjugate(self, g, x):
        """g x g^-1 by index."""
        return self.product(self.product(g, x), self.inverse(g))

    def element_order(self, i):
        if self._orders is None:
            self._orders = [None] * len(self)
            self._orders[0] = 1
        if self._orders[i] is None:
            k = 1
            acc = i
            while acc != 0:
                acc = self.product(acc, i)
                k += 1
            self._orders[i] = k
        return self._orders[i]

    def evaluate_word(self, word):
        """Element index of a generator word like (0, 1, 0)."""
        acc = 0
        for g in word:
            acc = self.product(acc, self.gens_idx[g])
        return acc

    def conjugacy_classes(self):
        """Partition into classes; representatives are least indices."""
        if self._classes is not None:
            return self._classes
        seen = [False] * len(self)
        classes = []
        class_of = [None] * len(self)
        for i in range(len(self)):
            if seen[i]:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                x = frontier.pop()
                for gidx in self.gens_idx:
                    y = self.conjugate(gidx, x)
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
            orbit = sorted(orbit)
            cid = len(classes)
            for x in orbit:
                seen[x] = True
                class_of[x] = cid
            classes.append(tuple(orbit))
        self._classes = classes
        self._class_of = class_of
        return classes

    def class_of(self, i):
        self.conjugacy_classes()
        return self._class_of[i]

    def class_reps(self):
        return [c[0] for c in self.conjugacy_classes()]

    # --- subgroup machinery -------------------------------------------------

    def subgroup_closure(self, seed):
        out = {0}
        frontier = list(dict.fromkeys(seed))
        for s in frontier:
            out.add(s)
        while frontier:
            x = frontier.pop()
            for y in list(out):
                for z in (self.product(x, y), self.product(y, x)):
                    if z not in out:
                        out.add(z)
                        frontier.append(z)
        return tuple(sorted(out))

    def is_subgroup(self, idxs):
        s = set(idxs)
        if 0 not in s:
            return False
        return all(self.product(a, b) in s for a in s for b in s)

    def centralizer(self, idxs):
        gens = list(idxs)
        out = []
        for g in range(len(self)):
            if all(self.product(g, h) == self.product(h, g) for h in gens):
                out.append(g)
        return tuple(out)

    def normalizer(self, subgroup):
        if not self.is_subgroup(subgroup):
            raise NotASubgroup("normalizer input is not closed")
        s = set(subgroup)
        out = []
        for g in range(len(self)):
            gi = self.inverse(g)
            if all(self.product(self.product(g, h), gi) in s for h in subgroup):
                out.append(g)
        return tuple(out)

    def center(self):
        return self.centralizer(self.gens_idx)

    def is_abelian_set(self, idxs):
        return all(
            self.product(a, b) == self.product(b, a) for a in idxs for b in idxs
        )

    def subgroup_conj_canonical(self, subgroup):
        """Lex-least conjugate of the subgroup (as a sorted index tuple)."""
        best = tuple(sorted(subgroup))
        seen = {best}
        frontier = [best]
        while frontier:
            cur = frontier.pop()
            for g in self.gens_idx:
                img = tuple(sorted(self.conjugate(g, x) for x in cur))
                if img not in seen:
                    seen.add(img)
                    frontier.append(img)
                    if img < best:
                        best = img
        return best

    def abelian_subgroups_up_to_conj(self, max_order=None):
        """Conjugacy classes of abelian subgroups, as canonical index tuples."""
        found = set()
        queue = []
        # cyclic subgroups first
        cyclic = set()
        for x in range(len(self)):
            sub = self.subgroup_closure([x])
            cyclic.add(sub)
        for sub in sorted(cyclic):
            canon = self.subgroup_conj_canonical(sub)
            if canon not in found:
                found.add(canon)
                queue.append(canon)
        # grow by commuting elements
        pos = 0
        while pos < len(queue):
            h = queue[pos]
            pos += 1
            cent = self.centralizer(h)
            for z in cent:
                if z in h:
                    continue
                sub = self.subgroup_closure(list(h) + [z])
                if max_order is not None and len(sub) > max_order:
                    continue
                if not self.is_abelian_set(sub):
                    continue
                canon = self.subgroup_conj_canonical(sub)
                if canon not in found:
                    found.add(canon)
                    queue.append(canon)
        return sorted(found, key=lambda s: (len(s), s))


def enumerate_group(name, gens, field_order, bound=DEFAULT_CLOSURE_BOUND) -> GroupElements:
    """BFS over generator words with lexicographic tie-break."""
    size = gens[0].nrows
    ident = Mat.identity(field_order, size)
    mats = [ident]
    words = [()]
    parents = [None]
    index = {}

    def key_of(m):
        return (_mod_image(m, 0), _mod_image(m, 1))

    index[key_of(ident)] = 0
    frontier = [0]
    gen_elt_idx = [None] * len(gens)
    while frontier:
        new_frontier = []
        for i in frontier:
            for gi, g in enumerate(gens):
                prod = mats[i] * g
                key = key_of(prod)
                if key not in index:
                    if len(mats) >= bound:
                        raise ClosureBoundExceeded(
                            "group closure exceeded %d elements" % bound
                        )
                    index[key] = len(mats)
                    mats.append(prod)
                    words.append(words[i] + (gi,))
                    parents.append((i, gi))
                    new_frontier.append(len(mats) - 1)
        frontier = new_frontier
    ge = GroupElements(name, mats, words, parents, [], field_order)
    # generator element indices
    ge.gens_idx = [ge.index_of_mat(g) for g in gens]
    return ge


# --- representations ---------------------------------------------------------


class RepData:
    """Matrices assigned to the generators of an enumerated group."""

    __slots__ = ("name", "gen_mats", "dim", "n")

    def __init__(self, name, gen_mats):
        self.name = name
        self.gen_mats = list(gen_mats)
        self.dim = gen_mats[0].nrows
        self.n = gen_mats[0].n

    def matrices_over(self, elements: GroupElements):
        """One matrix per element, following the BFS parent links."""
        out = [Mat.identity(self.n, self.dim)]
        for i in range(1, len(elements)):
            parent, gi = elements.parents[i]
            out.append(out[parent] * self.gen_mats[gi])
        return out

    def verify_homomorphism(self, elements: GroupElements, samples=100, seed=0):
        """rho(w1) rho(w2) == rho(w1 w2) on random word pairs."""
        mats = self.matrices_over(elements)
        rng = random.Random(seed)
        m = len(elements)
        for _ in range(samples):
            i = rng.randrange(m)
            j = rng.randrange(m)
            k = elements.product(i, j)
            if mats[i] * mats[j] != mats[k]:
                return False
        return True


class CharRow:
    """One character: values per conjugacy class, in the class-rep order."""

    __slots__ = ("label", "values", "class_reps", "dim")

    def __init__(self, label, values, class_reps):
        self.label = label
        self.values = list(values)
        self.class_reps = list(class_reps)
        d = self.values[0]
        self.dim = int(d.rat()) if d.is_rational() else None

    def value_at_class(self, cid):
        return self.values[cid]

    def __repr__(self):
        return "CharRow(%s, dim %s)" % (self.label, self.dim)


def char_of_rep(rep: RepData, elements: GroupElements, label=None) -> CharRow:
    mats = rep.matrices_over(elements)
    reps = elements.class_reps()
    values = [mats[r].trace() for r in reps]
    return CharRow(label or rep.name, values, reps)


def char_from_traces(elements, trace_fn, label):
    reps = elements.class_reps()
    return CharRow(label, [trace_fn(r) for r in reps], reps)


def power_class_map(elements: GroupElements, k=2):
    """Class id of g^k for a representative of each class."""
    out = []
    for r in elements.class_reps():
        acc = 0
        for _ in range(k):
            acc = elements.product(acc, r)
        out.append(elements.class_of(acc))
    return out


def exterior_square_char(c: CharRow, elements: GroupElements, label=None) -> CharRow:
    sq = power_class_map(elements, 2)
    two = mpq(1, 2)
    values = []
    for cid in range(len(c.values)):
        v = c.values[cid]
        vsq = c.values[sq[cid]]
        values.append((v * v - vsq) * CycNum.from_rat(v.n, two))
    return CharRow(label or ("L2(%s)" % c.label), values, c.class_reps)


def sym_square_char(c: CharRow, elements: GroupElements, label=None) -> CharRow:
    sq = power_class_map(elements, 2)
    two = mpq(1, 2)
    values = []
    for cid in range(len(c.values)):
        v = c.values[cid]
        vsq = c.values[sq[cid]]
        values.append((v * v + vsq) * CycNum.from_rat(v.n, two))
    return CharRow(label or ("S2(%s)" % c.label), values, c.class_reps)


def product_char(a: CharRow, b: CharRow, label=None) -> CharRow:
    values = [x * y for x, y in zip(a.values, b.values)]
    return CharRow(label or ("%s*%s" % (a.label, b.label)), values, a.class_reps)


def conj_char(a: CharRow, label=None) -> CharRow:
    return CharRow(label or ("%s~" % a.label), [v.conj() for v in a.values], a.class_reps)


def inner_product(a: CharRow, b: CharRow, elements: GroupElements) -> CycNum:
    classes = elements.conjugacy_classes()
    n = a.values[0].n
    acc = CycNum.zero(n)
    for cid, cls in enumerate(classes):
        acc = acc + a.values[cid] * b.values[cid].conj() * len(cls)
    return acc * CycNum.from_rat(n, mpq(1, len(elements)))


def decompose(c: CharRow, table, elements: GroupElements):
    """Multiplicity of each table row inside c; all must be non-negative ints."""
    mults = []
    for row in table:
        ip = inner_product(c, row, elements)
        if not ip.is_rational():
            raise NonIntegralMultiplicity("inner product is irrational for %s" % row.label)
        v = ip.rat()
        if v.denominator != 1 or v < 0:
            raise NonIntegralMultiplicity(
                "multiplicity %s on %s is not a non-negative integer" % (v, row.label)
            )
        mults.append(int(v))
    total = sum(m * row.dim for m, row in zip(mults, table))
    if total != c.dim:
        raise NonIntegralMultiplicity(
            "multiplicities cover dim %d of %d (missing constituents?)" % (total, c.dim)
        )
    return mults


def isotypic_projector(rep_mats, irr: CharRow, elements: GroupElements) -> Mat:
    """(dim irr / |G|) sum_g conj(chi(g)) rho(g)."""
    n = rep_mats[0].n
    size = rep_mats[0].nrows
    acc = Mat.zero(n, size, size)
    for i in range(len(elements)):
        chi = irr.values[elements.class_of(i)].conj()
        if chi:
            acc = acc + rep_mats[i] * chi
    return acc * CycNum.from_rat(n, mpq(irr.dim, len(elements)))


def hom_basis(model: RepData, rep_mats_gens, elements: GroupElements):
    """Basis of equivariant maps model -> ambient as (ambient x model) matrices.

    Solves F rho_model(g) = rho(g) F for the generators; exact linear algebra.
    """
    d = model.dim
    ambient = rep_mats_gens[0].nrows
    n = rep_mats_gens[0].n
    nu = ambient * d
    rows = []
    for gm, am in zip(model.gen_mats, rep_mats_gens):
        # equation entries: sum_k F[i][k] gm[k][j] - am[i][k] F[k][j] = 0
        for i in range(ambient):
            for j in range(d):
                row = [CycNum.zero(n)] * nu
                for k in range(d):
                    row[i * d + k] = row[i * d + k] + gm.rows[k][j]
                for k in range(ambient):
                    row[k * d + j] = row[k * d + j] - am.rows[i][k]
                rows.append(row)
    from .exactmath import kernel as mat_kernel

    ker = mat_kernel(Mat(n, rows))
    mats = []
    for vec in ker.basis.rows:
        mats.append(Mat(n, [[vec[i * d + j] for j in range(d)] for i in range(ambient)]))
    return mats


def sample_invariant_subspace(
    rep_mats,
    elements: GroupElements,
    table,
    target,
    seed,
    models=None,
    rep_char=None,
) -> Subspace:
    """Seeded pseudo-random invariant subspace of prescribed isotypic type.

    target: dict irrep-label -> number of copies.  Multiplicity-one and
    full-multiplicity pieces come from the isotypic projector image; proper
    sub-multiplicity pieces of d >= 2 irreps need an explicit model rep.
    """
    rng = random.Random(seed)
    n = rep_mats[0].n
    ambient = rep_mats[0].nrows
    by_label = {row.label: row for row in table}
    if rep_char is None:
        reps = elements.class_reps()
        rep_char = CharRow("ambient", [rep_mats[r].trace() for r in reps], reps)
    mults = {}
    for label, k in target.items():
        row = by_label[label]
        ip = inner_product(rep_char, row, elements)
        m = int(ip.rat())
        if k > m:
            raise TargetExceedsMultiplicity("%s: want %d copies, have %d" % (label, k, m))
        mults[label] = m
    rows_out = []
    for label in sorted(target):
        k = target[label]
        if k == 0:
            continue
        row = by_label[label]
        m = mults[label]
        proj = isotypic_projector(rep_mats, row, elements)
        image, _, rank = rref(proj.transpose())
        iso_rows = list(image.rows[:rank])  # dim = d*m
        if k == m:
            rows_out.extend(iso_rows)
            continue
        if row.dim == 1:
            for _ in range(64):
                cand = []
                for _ in range(k):
                    coeffs = [rng.randint(-20, 20) for _ in iso_rows]
                    vec = [CycNum.zero(n)] * ambient
                    for c, r in zip(coeffs, iso_rows):
                        if c:
                            for i in range(ambient):
                                vec[i] = vec[i] + r[i] * c
                    cand.append(vec)
                _, _, rk = rref(Mat(n, cand))
                if rk == k:
                    rows_out.extend(cand)
                    break
            else:
                raise TargetExceedsMultiplicity("could not sample %d independent copies" % k)
            continue
        if models is None or label not in models:
            raise TargetExceedsMultiplicity(
                "irrep %s needs an explicit model for sub-multiplicity sampling" % label
            )
        model = models[label]
        gen_mats = [rep_mats[elements.gens_idx[gi]] for gi in range(len(model.gen_mats))]
        homs = hom_basis(model, gen_mats, elements)
        if len(homs) != m:
            raise TargetExceedsMultiplicity(
                "hom space for %s has dim %d, expected multiplicity %d" % (label, len(homs), m)
            )
        for _ in range(64):
            cand_rows = []
            for _ in range(k):
                coeffs = [rng.randint(-20, 20) for _ in homs]
                f = None
                for c, h in zip(coeffs, homs):
                    if c:
                        piece = h * c
                        f = piece if f is None else f + piece
                if f is None:
                    continue
                # columns of f span one copy
                for j in range(model.dim):
                    cand_rows.append([f.rows[i][j] for i in range(ambient)])
            if not cand_rows:
                continue
            _, _, rk = rref(Mat(n, cand_rows))
            if rk == k * model.dim:
                rows_out.extend(cand_rows)
                break
        else:
            raise TargetExceedsMultiplicity("could not sample %d copies of %s" % (k, label))
    sub = Subspace(ambient, Mat(n, rows_out))
    return sub


def subspace_is_invariant(sub: Subspace, rep_mats_gens) -> bool:
    for g in rep_mats_gens:
        for row in sub.basis.rows:
            if not sub.contains_vector(g.mul_vec(row)):
                return False
    return True


def projectively_faithful(rep_mats, elements: GroupElements, kernel_idxs) -> bool:
    """Scalar-acting elements coincide exactly with the declared kernel."""
    kernel_set = set(kernel_idxs)
    if not elements.is_subgroup(sorted(kernel_set | {0})):
        raise InconsistentCenterSpec("declared kernel is not a subgroup")
    scalars = set()
    for i in range(len(elements)):
        if rep_mats[i].is_scalar():
            scalars.add(i)
    return scalars == (kernel_set | {0})


# --- small-group classification ----------------------------------------------


def _abelian_types(order):
    """All abelian iso types of the given order, as sorted factor tuples."""

    def partitions_product(m):
        # multisets of integers > 1 with product m
        out = []

        def rec(m, start, cur):
            if m == 1:
                out.append(tuple(sorted(cur)))
                return
            d = start
            while d <= m:
                if m % d == 0:
                    rec(m // d, d, cur + [d])
                d += 1

        rec(m, 2, [])
        return out

    # refine to prime-power cyclic factor multisets (every abelian type)
    types = set()
    for combo in partitions_product(order):
        ok = True
        for c in combo:
            # cyclic factors may be any integers; canonicalize via prime powers
            pass
        types.add(combo)
    # keep only multisets where each factor is a prime power
    def is_prime_power(m):
        p = 2
        while p * p <= m:
            if m % p == 0:
                while m % p == 0:
                    m //= p
                return m == 1
            p += 1
        return m > 1

    return [t for t in types if all(is_prime_power(c) for c in t)]


def _order_signature(elements, idxs):
    sig = {}
    for i in idxs:
        o = elements.element_order(i)
        sig[o] = sig.get(o, 0) + 1
    return tuple(sorted(sig.items()))


def _abelian_type_signature(factors):
    """Element-order counts of a direct product of cyclic prime-power groups."""
    from itertools import product as iproduct
    from math import lcm

    sig = {}
    ranges = [range(f) for f in factors]
    for combo in iproduct(*ranges):
        o = 1
        for f, k in zip(factors, combo):
            if k:
                o = lcm(o, f // gcd(f, k))
        sig[o] = sig.get(o, 0) + 1
    return tuple(sorted(sig.items()))


def _format_abelian(factors):
    # group equal prime-power factors; C2^2 style for elementary pieces
    from math import lcm

    if len(factors) == 1:
        return "C%d" % factors[0]
    # cyclic if factors are pairwise coprime
    total = 1
    cop = True
    for f in factors:
        if gcd(total, f) != 1:
            cop = False
            break
        total *= f
    if cop:
        return "C%d" % total
    counts = {}
    for f in sorted(factors):
        counts[f] = counts.get(f, 0) + 1
    # merge coprime singletons into one cyclic factor for familiar labels
    parts = []
    for f, c in sorted(counts.items()):
        parts.append("C%d^%d" % (f, c) if c > 1 else "C%d" % f)
    return "x".join(parts)


def derived_subgroup(elements: GroupElements, idxs):
    comms = set()
    idxs = list(idxs)
    for a in idxs:
        ai = elements.inverse(a)
        for b in idxs:
            bi = elements.inverse(b)
            c = elements.product(elements.product(a, b), elements.product(ai, bi))
            comms.add(c)
    return elements.subgroup_closure(sorted(comms))


def classify_small_group(elements: GroupElements, idxs) -> str:
    """Isomorphism label for |H| <= 48 by order data and derived subgroup."""
    order = len(idxs)
    if order == 1:
        return "1"
    abelian = elements.is_abelian_set(idxs)
    sig = _order_signature(elements, idxs)
    if abelian:
        for typ in _abelian_types(order):
            if _abelian_type_signature(typ) == sig:
                return _format_abelian(typ)
        return "A?%d%s" % (order, sig)
    der = derived_subgroup(elements, idxs)
    dern = len(der)
    orders = dict(sig)
    involutions = orders.get(2, 0)
    max_order = max(orders)
    if order == 6:
        return "S3"
    if order == 8:
        return "D4" if involutions == 5 else "Q8"
    if order == 10:
        return "D5"
    if order == 12:
        if dern == 4:
            return "A4"
        return "D6" if involutions == 7 else "Dic3"
    if order == 24 and dern == 12:
        # S4 has trivial center; SL(2,3) has center of order 2
        center = [g for g in idxs if all(elements.product(g, h) == elements.product(h, g) for h in idxs)]
        if len(center) == 1:
            return "S4"
        return "SL(2,3)"
    if order == 60 and dern == 60:
        return "A5"
    # dihedral: cyclic index-2 subgroup + many involutions
    if order % 2 == 0:
        m = order // 2
        if m in orders or any(o == m for o in orders):
            if involutions >= m // 2 + 1 and max_order <= m:
                return "D%d" % m
    if max_order * 2 == order and involutions > 1:
        return "D%d" % (order // 2)
    return "G%d(der%d,%s)" % (order, dern, "".join("%d:%d;" % kv for kv in sig))


# --- group data files ---------------------------------------------------------


class GroupData:
    """Deserialized group file: generators, center words, characters, reps."""

    def __init__(self, name, field_order, generators, gap_id=None, center_words=None,
                 char_table=None, reps=None, irrep_models=None, meta=None):
        self.name = name
        self.field_order = field_order
        self.generators = generators
        self.gap_id = gap_id
        self.center_words = center_words or []
        self.char_table = char_table  # (class_words, rows-as-(label, [CycNum]))
        self.reps = reps or {}
        self.irrep_models = irrep_models or {}
        self.meta = meta or {}
        self._elements = None

    def elements(self, bound=DEFAULT_CLOSURE_BOUND) -> GroupElements:
        if self._elements is None:
            self._elements = enumerate_group(self.name, self.generators, self.field_order, bound)
        return self._elements

    def center_kernel_idxs(self):
        el = self.elements()
        idxs = set()
        for word in self.center_words:
            idxs.add(el.evaluate_word(word))
        return el.subgroup_closure(sorted(idxs | {0}))

    def char_rows(self) -> list:
        """CharRows aligned to the enumerated class order."""
        el = self.elements()
        class_words, rows = self.char_table
        rep_idx = [el.evaluate_word(w) for w in class_words]
        # map file class order to enumerated class ids
        cid_of_file = [el.class_of(i) for i in rep_idx]
        ncls = len(el.conjugacy_classes())
        if sorted(cid_of_file) != list(range(ncls)):
            raise ValueError("char table class words do not hit every class once")
        out = []
        for label, values in rows:
            by_cid = [None] * ncls
            for v, cid in zip(values, cid_of_file):
                by_cid[cid] = v
            out.append(CharRow(label, by_cid, el.class_reps()))
        return out

    def rep(self, name) -> RepData:
        if name == "natural":
            return RepData("natural", self.generators)
        return RepData(name, self.reps[name])

    def to_json(self):
        obj = {
            "name": self.name,
            "field_order": self.field_order,
            "generators": [m.to_json()["rows"] for m in self.generators],
        }
        if self.gap_id:
            obj["gap_id"] = list(self.gap_id)
        if self.center_words:
            obj["center_words"] = [["g%d" % (g + 1) for g in w] for w in self.center_words]
        if self.char_table:
            class_words, rows = self.char_table
            obj["char_table"] = {
                "class_words": [["g%d" % (g + 1) for g in w] for w in class_words],
                "rows": [{"label": lab, "values": [v.to_str() for v in vals]} for lab, vals in rows],
            }
        if self.reps:
            obj["reps"] = {k: [m.to_json()["rows"] for m in v] for k, v in self.reps.items()}
        if self.irrep_models:
            obj["irrep_models"] = {
                k: [m.to_json()["rows"] for m in v] for k, v in self.irrep_models.items()
            }
        if self.meta:
            obj["meta"] = self.meta
        return obj

    @staticmethod
    def _parse_word(tokens):
        return tuple(int(t[1:]) - 1 for t in tokens)

    @staticmethod
    def from_json(obj) -> "GroupData":
        n = obj["field_order"]

        def mat(rows):
            return Mat(n, [[CycNum.from_str(s) for s in row] for row in rows])

        gens = [mat(rows) for rows in obj["generators"]]
        center_words = [GroupData._parse_word(w) for w in obj.get("center_words", [])]
        char_table = None
        if "char_table" in obj:
            ct = obj["char_table"]
            class_words = [GroupData._parse_word(w) for w in ct["class_words"]]
            rows = [
                (r["label"], [CycNum.from_str(s) for s in r["values"]]) for r in ct["rows"]
            ]
            char_table = (class_words, rows)
        reps = {k: [mat(rows) for rows in v] for k, v in obj.get("reps", {}).items()}
        models = {k: [mat(rows) for rows in v] for k, v in obj.get("irrep_models", {}).items()}
        return GroupData(
            obj["name"],
            n,
            gens,
            gap_id=tuple(obj["gap_id"]) if "gap_id" in obj else None,
            center_words=center_words,
            char_table=char_table,
            reps=reps,
            irrep_models=models,
            meta=obj.get("meta", {}),
        )
