"""Finite posets and lattices with exact Moebius functions.

Posets keep an explicit label list and a dense boolean order matrix
``leq[i, j] == (elements[i] <= elements[j])``.  Everything built here is
desk-scale, so the dense representation keeps the Moebius recursion trivial.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np


class StructureError(ValueError):
    """Input does not have the required order-theoretic structure."""


class DomainError(ValueError):
    """Operation called outside its domain (e.g. x not <= y)."""


def _closure(leq):
    leq = leq.copy()
    for k in range(leq.shape[0]):
        leq |= np.outer(leq[:, k], leq[k, :])
    return leq


class FinitePoset:
    """A finite partial order on opaque labels.

    Build from explicit ``pairs`` (closed reflexively and transitively) or from
    a ready ``matrix``.  ``rank`` may be supplied; otherwise the height
    (longest chain down to a minimal element) is used.
    """

    def __init__(self, elements, pairs=(), *, matrix=None, rank=None, check=True):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise StructureError("duplicate labels")
        n = len(self.elements)
        if matrix is None:
            leq = np.eye(n, dtype=bool)
            for a, b in pairs:
                leq[self.index[a], self.index[b]] = True
            leq = _closure(leq)
        else:
            leq = np.array(matrix, dtype=bool).reshape(n, n)
            if check:
                leq = leq | np.eye(n, dtype=bool)
        if check and n:
            if not np.array_equal(leq, _closure(leq)):
                raise StructureError("relation is not transitive")
            both = leq & leq.T
            if (both & ~np.eye(n, dtype=bool)).any():
                raise StructureError("relation is not antisymmetric")
        leq.flags.writeable = False
        self.leq = leq
        self._rank = None if rank is None else dict(rank)
        if self._rank is not None and check:
            self._check_rank(self._rank)

    @classmethod
    def from_relation(cls, elements, le, **kw):
        """Build from a predicate ``le(a, b)`` evaluated on all pairs."""
        elements = list(elements)
        n = len(elements)
        m = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                m[i, j] = i == j or bool(le(a, b))
        return cls(elements, matrix=m, **kw)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"{type(self).__name__}({len(self)} elements)"

    def le(self, x, y):
        return bool(self.leq[self.index[x], self.index[y]])

    def lt(self, x, y):
        return x != y and self.le(x, y)

    @cached_property
    def lt_matrix(self):
        return self.leq & ~np.eye(len(self), dtype=bool)

    @cached_property
    def cover_matrix(self):
        lt = self.lt_matrix.astype(np.int64)
        between = (lt @ lt) > 0
        return self.lt_matrix & ~between

    def covers(self, x, y):
        """True iff y covers x."""
        return bool(self.cover_matrix[self.index[x], self.index[y]])

    @cached_property
    def linear_extension(self):
        # number of elements below is a valid sort key for a linear extension
        below = self.leq.sum(axis=0)
        return [int(i) for i in np.argsort(below, kind="stable")]

    @cached_property
    def height(self):
        h = np.zeros(len(self), dtype=np.int64)
        lt = self.lt_matrix
        for j in self.linear_extension:
            preds = np.nonzero(lt[:, j])[0]
            if len(preds):
                h[j] = h[preds].max() + 1
        return h

    def rank(self, x):
        if self._rank is not None:
            return self._rank[x]
        return int(self.height[self.index[x]])

    @property
    def ranks(self):
        return {x: self.rank(x) for x in self.elements}

    def length(self):
        return max((self.rank(x) for x in self.elements), default=0)

    def _check_rank(self, rank):
        for i, j in zip(*np.nonzero(self.cover_matrix)):
            a, b = self.elements[i], self.elements[j]
            if rank[b] != rank[a] + 1:
                raise StructureError(f"rank does not step by one on cover {a} < {b}")

    def is_ranked(self):
        """Every covering relation raises the height by exactly one."""
        h = self.height
        i, j = np.nonzero(self.cover_matrix)
        return bool(np.all(h[j] == h[i] + 1))

    def minimal(self):
        return [self.elements[j] for j in range(len(self)) if not self.lt_matrix[:, j].any()]

    def maximal(self):
        return [self.elements[i] for i in range(len(self)) if not self.lt_matrix[i, :].any()]

    def up(self, x):
        return [self.elements[j] for j in np.nonzero(self.leq[self.index[x]])[0]]

    def down(self, x):
        return [self.elements[i] for i in np.nonzero(self.leq[:, self.index[x]])[0]]

    def interval(self, x, y):
        i, j = self.index[x], self.index[y]
        return [self.elements[k] for k in np.nonzero(self.leq[i] & self.leq[:, j])[0]]

    def subposet(self, labels):
        labels = list(labels)
        idx = [self.index[x] for x in labels]
        return FinitePoset(labels, matrix=self.leq[np.ix_(idx, idx)], check=False)

    def opposite(self):
        return FinitePoset(self.elements, matrix=self.leq.T, check=False)

    def with_bounds(self, bottom="0^", top="1^"):
        """P-hat: adjoin a new minimum and maximum."""
        n = len(self)
        m = np.zeros((n + 2, n + 2), dtype=bool)
        m[1:n + 1, 1:n + 1] = self.leq
        m[0, :] = True
        m[:, n + 1] = True
        return FinitePoset((bottom,) + self.elements + (top,), matrix=m, check=False)

    def with_bottom(self, bottom="0^"):
        n = len(self)
        m = np.zeros((n + 1, n + 1), dtype=bool)
        m[1:, 1:] = self.leq
        m[0, :] = True
        return FinitePoset((bottom,) + self.elements, matrix=m, check=False)

    @cached_property
    def mobius_matrix(self):
        """Integer matrix mu[i, j] = mu(elements[i], elements[j]) (0 if i !<= j)."""
        n = len(self)
        order = self.linear_extension
        pos = np.empty(n, dtype=np.int64)
        pos[order] = np.arange(n)
        zeta = self.leq[np.ix_(order, order)].astype(np.int64)
        mu = np.zeros((n, n), dtype=np.int64)
        # column-by-column back substitution on the unitriangular zeta matrix
        for j in range(n):
            col = -(mu[:, :j] @ zeta[:j, j])
            col[j] = 1
            col[j + 1:] = 0
            mu[:, j] = col
        mu = mu[np.ix_(pos, pos)]
        mu[~self.leq] = 0
        mu.flags.writeable = False
        return mu

    def mobius(self, x, y):
        if not self.le(x, y):
            raise DomainError(f"{x} is not <= {y}")
        return int(self.mobius_matrix[self.index[x], self.index[y]])


def mobius(p, x, y):
    """mu_p(x, y) by the recursion mu(x,x)=1, sum_{x<=z<=y} mu(x,z)=0."""
    return p.mobius(x, y)


def mobius_number(p):
    """mu of p with a new bottom and top adjoined (reduced Euler characteristic).

    Counted from chains: mu = sum_i (-1)^(i+1) c_i where c_i is the number of
    i-element chains of p (c_0 = 1 for the empty chain).
    """
    # g[x] = sum over chains with top element x of (-1)^(#elements)
    g = {}
    for j in p.linear_extension:
        below = np.nonzero(p.lt_matrix[:, j])[0]
        g[j] = -(1 + sum(g[i] for i in below))
    return -1 - sum(g.values())


class FiniteLattice(FinitePoset):
    """A finite poset in which every pair has a join and a meet."""

    def __init__(self, elements, pairs=(), **kw):
        super().__init__(elements, pairs, **kw)
        if not len(self):
            raise StructureError("empty lattice")
        self.join_table = self._bound_table(self.leq)
        self.meet_table = self._bound_table(self.leq.T)
        mins, maxs = self.minimal(), self.maximal()
        if len(mins) != 1 or len(maxs) != 1:
            raise StructureError("lattice needs a unique bottom and top")
        self.bottom, self.top = mins[0], maxs[0]

    @classmethod
    def from_poset(cls, p):
        return cls(p.elements, matrix=p.leq, rank=p._rank, check=False)

    def _bound_table(self, leq):
        # least upper bound w.r.t. ``leq``: the upper bound lying below all others
        n = len(self)
        h = leq.sum(axis=0)  # elements below, strictly monotone along the order
        out = np.empty((n, n), dtype=np.int64)
        big = n + 1
        for i in range(n):
            ub = leq[i][None, :] & leq  # row j: common upper bounds of i, j
            if not ub.any(axis=1).all():
                raise StructureError("some pair has no upper bound")
            k = np.where(ub, h[None, :], big).argmin(axis=1)
            bad = (ub & ~leq[k]).any(axis=1)
            if bad.any():
                j = int(np.nonzero(bad)[0][0])
                raise StructureError(
                    f"no least bound for {self.elements[i]}, {self.elements[j]}")
            out[i] = k
        out.flags.writeable = False
        return out

    def join(self, x, y):
        return self.elements[self.join_table[self.index[x], self.index[y]]]

    def meet(self, x, y):
        return self.elements[self.meet_table[self.index[x], self.index[y]]]

    def opposite(self):
        return FiniteLattice(self.elements, matrix=self.leq.T, check=False)

    def sublattice_interval(self, x, y):
        return FiniteLattice.from_poset(self.subposet(self.interval(x, y)))


def is_lattice(p):
    try:
        FiniteLattice.from_poset(p)
    except StructureError:
        return False
    return True


def interval_label(x, y):
    return f"[{x},{y}]"


class IntervalLattice(FiniteLattice):
    """Int(L): pairs (x, y) with x <= y in ``base``, ordered componentwise."""

    def __init__(self, base):
        if not isinstance(base, FiniteLattice):
            try:
                base = FiniteLattice.from_poset(base)
            except StructureError as exc:
                raise StructureError(f"base is not a lattice: {exc}") from None
        self.base = base
        b = base.leq
        pairs = [(i, j) for i in range(len(base)) for j in range(len(base)) if b[i, j]]
        self.pairs = [(base.elements[i], base.elements[j]) for i, j in pairs]
        first = np.array([i for i, _ in pairs])
        second = np.array([j for _, j in pairs])
        m = b[np.ix_(first, first)] & b[np.ix_(second, second)]
        labels = [interval_label(x, y) for x, y in self.pairs]
        super().__init__(labels, matrix=m, check=False)
        self.pair_of = dict(zip(labels, self.pairs))
        self.label_of = dict(zip(self.pairs, labels))
        self._verify_componentwise()

    def _verify_componentwise(self):
        base = self.base
        for a, b in product(self.pairs, repeat=2):
            la, lb = self.label_of[a], self.label_of[b]
            j = (base.join(a[0], b[0]), base.join(a[1], b[1]))
            m = (base.meet(a[0], b[0]), base.meet(a[1], b[1]))
            if self.pair_of[self.join(la, lb)] != j or self.pair_of[self.meet(la, lb)] != m:
                raise StructureError("interval lattice operations are not componentwise")


def interval_lattice(lattice):
    return IntervalLattice(lattice)


def mobius_interval_lattice(il, a, b):
    """Moebius function of Int(L) from that of L.

    mu((x,y),(x',y')) = mu_L(x,x') mu_L(y,y') when x' <= y, else 0.
    ``a`` and ``b`` are pairs or interval labels.
    """
    a = il.pair_of.get(a, a)
    b = il.pair_of.get(b, b)
    (x, y), (x2, y2) = a, b
    base = il.base
    if not (base.le(x, x2) and base.le(y, y2)):
        raise DomainError(f"{a} is not <= {b} in Int(L)")
    if not base.le(x2, y):
        return 0
    return base.mobius(x, x2) * base.mobius(y, y2)


def check_semimodular(lattice):
    """x meet y covered by x implies y covered by x join y, for all x, y."""
    cov = lattice.cover_matrix
    meet, join = lattice.meet_table, lattice.join_table
    n = len(lattice)
    xs = np.arange(n)[:, None]
    ys = np.arange(n)[None, :]
    hyp = cov[meet, xs]
    concl = cov[ys, join]
    return bool(np.all(~hyp | concl))


def check_eulerian_with_bounds(p):
    """Is P-hat Eulerian, i.e. mu(x,y) = (-1)^(rk y - rk x) for all x <= y?"""
    hat = p.with_bounds()
    if not hat.is_ranked():
        raise DomainError("poset is not ranked")
    h = hat.height
    expected = np.where((h[None, :] - h[:, None]) % 2 == 0, 1, -1)
    mu = hat.mobius_matrix
    return bool(np.all(mu[hat.leq] == expected[hat.leq]))


def is_atomistic(lattice):
    atoms = [a for a in lattice.elements if lattice.covers(lattice.bottom, a)]
    for x in lattice.elements:
        j = lattice.bottom
        for a in atoms:
            if lattice.le(a, x):
                j = lattice.join(j, a)
        if j != x:
            return False
    return True


@dataclass
class ZaslavskyReport:
    conditions: dict
    max_count: int
    mobius_sum: int
    details: dict = field(default_factory=dict)

    @property
    def identity_holds(self):
        return self.max_count == self.mobius_sum

    @property
    def ok(self):
        return all(self.conditions.values()) and self.identity_holds


def generalized_zaslavsky_check(f, p, q):
    """Verify the hypotheses and conclusion of the generalized Zaslavsky formula.

    ``f`` maps labels of ``p`` to labels of ``q``.  Ranks are heights (minimal
    elements have rank 0).  Condition (5) reads mu_P(S) as the Moebius number
    of the subposet S with bounds adjoined.  Failures are reported, not raised.
    """
    cond = {}
    details = {}
    ranked = p.is_ranked() and q.is_ranked()
    r = p.length()
    cond["1_ranked_same_length"] = ranked and r == q.length()
    qmax = q.maximal()
    cond["2_unique_max"] = len(qmax) == 1
    try:
        cond["3_eulerian"] = check_eulerian_with_bounds(p)
    except DomainError:
        cond["3_eulerian"] = False

    total = all(x in f for x in p.elements)
    image = {f[x] for x in p.elements} if total else set()
    surjective = image == set(q.elements)
    order_pres = total and all(
        q.le(f[a], f[b]) for a in p.elements for b in p.up(a))
    rank_pres = total and all(p.rank(x) == q.rank(f[x]) for x in p.elements)
    cond["4_order_rank_surjective"] = order_pres and rank_pres and surjective
    details["order_preserving"] = order_pres
    details["rank_preserving"] = rank_pres
    details["surjective"] = surjective

    ok5 = total
    if total:
        for x in q.elements:
            below = set(q.down(x))
            fib = p.subposet([y for y in p.elements if f[y] in below])
            if mobius_number(fib) != (-1) ** q.rank(x):
                ok5 = False
                details.setdefault("5_failures", []).append(x)
    cond["5_fiber_mobius"] = ok5

    if cond["2_unique_max"]:
        top = qmax[0]
        cond["6_sign_alternation"] = all(
            (-1) ** (r - q.rank(x)) * q.mobius(x, top) >= 0 for x in q.down(top))
        qhat = q.with_bottom()
        mob_sum = sum(abs(qhat.mobius(x, top)) for x in qhat.down(top))
    else:
        cond["6_sign_alternation"] = False
        mob_sum = 0
    return ZaslavskyReport(cond, len(p.maximal()), mob_sum, details)


# --- small standard lattices -------------------------------------------------

def chain(n):
    """The chain 0 < 1 < ... < n-1."""
    labels = [str(i) for i in range(n)]
    return FiniteLattice(labels, matrix=np.triu(np.ones((n, n), dtype=bool)), check=False)


def boolean_lattice(r):
    subsets = list(product((0, 1), repeat=r))
    labels = ["{" + ",".join(str(i + 1) for i in range(r) if s[i]) + "}" for s in subsets]
    arr = np.array(subsets, dtype=bool).reshape(len(subsets), r)
    m = np.all(~arr[:, None, :] | arr[None, :, :], axis=2)
    return FiniteLattice(labels, matrix=m, check=False)


def pentagon():
    """N_5: 0 < a < b < 1 and 0 < c < 1."""
    return FiniteLattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def antichain(n):
    return FinitePoset([str(i) for i in range(n)])


# --- isomorphism ----------------------------------------------------------

def _signature(p, i):
    return (int(p.height[i]), int(p.leq[i].sum()), int(p.leq[:, i].sum()),
            int(p.cover_matrix[i].sum()), int(p.cover_matrix[:, i].sum()))


def find_isomorphism(p, q):
    """A label map p -> q that is an order isomorphism, or None.

    Plain backtracking over elements in a linear extension, candidates
    filtered by (height, up/down degree) signatures.
    """
    if len(p) != len(q):
        return None
    sp = [_signature(p, i) for i in range(len(p))]
    sq = [_signature(q, i) for i in range(len(q))]
    if sorted(sp) != sorted(sq):
        return None
    order = p.linear_extension
    assign = {}
    used = set()

    def ok(i, j):
        for a, b in assign.items():
            if p.leq[a, i] != q.leq[b, j] or p.leq[i, a] != q.leq[j, b]:
                return False
        return True

    def go(k):
        if k == len(order):
            return True
        i = order[k]
        for j in range(len(q)):
            if j in used or sq[j] != sp[i] or not ok(i, j):
                continue
            assign[i] = j
            used.add(j)
            if go(k + 1):
                return True
            del assign[i]
            used.discard(j)
        return False

    if not go(0):
        return None
    return {p.elements[i]: q.elements[j] for i, j in assign.items()}


def is_order_isomorphism(p, q, mapping):
    """Check an explicit bijection ``mapping`` from p's labels onto q's labels."""
    if len(p) != len(q) or set(mapping) != set(p.elements):
        return False
    if set(mapping.values()) != set(q.elements):
        return False
    idx = [q.index[mapping[x]] for x in p.elements]
    return bool(np.array_equal(p.leq, q.leq[np.ix_(idx, idx)]))
