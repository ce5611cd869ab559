"""Left-regular band semigroups: axioms, intrinsic order, support lattice."""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .poset import FiniteLattice, FinitePoset, StructureError, interval_label

TABLE_LIMIT = 4096


class LrbSemigroup:
    """A finite semigroup with identity given by labels and a composition.

    ``compose`` is either an ``(n, n)`` integer table of element indices or a
    function on labels.  Functions are tabulated when ``n <= TABLE_LIMIT``;
    above that the rule is kept and memoized.
    """

    def __init__(self, elements, compose, identity=None, name=""):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise StructureError("duplicate element labels")
        self.name = name
        self._rule = None
        self._memo = {}
        n = len(self.elements)
        if callable(compose):
            if n <= TABLE_LIMIT:
                table = np.empty((n, n), dtype=np.int64)
                for i, a in enumerate(self.elements):
                    for j, b in enumerate(self.elements):
                        table[i, j] = self._lookup(compose(a, b))
                self.table = table
            else:
                self.table = None
                self._rule = compose
        else:
            self.table = np.asarray(compose, dtype=np.int64).reshape(n, n)
        if self.table is not None:
            self.table.flags.writeable = False
        self.identity = identity if identity is not None else self._find_identity()

    def _lookup(self, label):
        try:
            return self.index[label]
        except KeyError:
            raise StructureError(f"composition leaves the element set: {label}") from None

    def _find_identity(self):
        n = len(self)
        if self.table is not None:
            ar = np.arange(n)
            hits = np.nonzero((self.table == ar[None, :]).all(axis=1)
                              & (self.table == ar[:, None]).all(axis=0))[0]
            if len(hits) != 1:
                raise StructureError("no identity element")
            return self.elements[int(hits[0])]
        for e in self.elements:
            if all(self.compose(e, x) == x and self.compose(x, e) == x for x in self.elements):
                return e
        raise StructureError("no identity element")

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"LrbSemigroup({self.name or '?'}, {len(self)} elements)"

    def mul(self, i, j):
        """Composition on indices."""
        if self.table is not None:
            return int(self.table[i, j])
        key = (i, j)
        if key not in self._memo:
            self._memo[key] = self._lookup(self._rule(self.elements[i], self.elements[j]))
        return self._memo[key]

    def compose(self, *labels):
        """Left-to-right product of the given labels."""
        acc = self.index[labels[0]]
        for x in labels[1:]:
            acc = self.mul(acc, self.index[x])
        return self.elements[acc]

    @cached_property
    def full_table(self):
        if self.table is not None:
            return self.table
        n = len(self)
        return np.array([[self.mul(i, j) for j in range(n)] for i in range(n)], dtype=np.int64)

    def restrict(self, labels, name=""):
        """Sub-semigroup on ``labels``; raises if not closed under composition."""
        labels = list(labels)
        idx = np.array([self.index[x] for x in labels], dtype=np.int64)
        sub = self.full_table[np.ix_(idx, idx)]
        back = -np.ones(len(self), dtype=np.int64)
        back[idx] = np.arange(len(idx))
        new = back[sub]
        if (new < 0).any():
            raise StructureError("subset is not closed under composition")
        return LrbSemigroup(labels, new, name=name or self.name)

    @cached_property
    def maximal_indices(self):
        """Elements c with c x = c for every x."""
        t = self.full_table
        ar = np.arange(len(self))
        return [int(i) for i in np.nonzero((t == ar[:, None]).all(axis=1))[0]]

    def maximal(self):
        return [self.elements[i] for i in self.maximal_indices]


@dataclass
class AxiomReport:
    passed: dict
    counterexamples: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.passed.values())


def verify_lrb(s, chunk=64):
    """Check idempotence, xyx = xy, two-sided identity and associativity."""
    t = s.full_table
    n = len(s)
    ar = np.arange(n)
    passed, cex = {}, {}

    diag = t[ar, ar]
    bad = np.nonzero(diag != ar)[0]
    passed["idempotent"] = not len(bad)
    if len(bad):
        cex["idempotent"] = (s.elements[bad[0]],)

    xyx = t[t, ar[:, None]]
    bad = np.argwhere(xyx != t)
    passed["xyx=xy"] = not len(bad)
    if len(bad):
        i, j = bad[0]
        cex["xyx=xy"] = (s.elements[i], s.elements[j])

    e = s.index[s.identity]
    passed["identity"] = bool((t[e] == ar).all() and (t[:, e] == ar).all())
    if not passed["identity"]:
        cex["identity"] = (s.identity,)

    passed["associative"] = True
    for start in range(0, n, chunk):
        rows = t[start:start + chunk]             # (x y) for x in chunk
        left = t[rows]                            # ((x y) z)[x, y, z]
        right = t[start:start + chunk][:, t]      # (x (y z))[x, y, z]
        bad = np.argwhere(left != right)
        if len(bad):
            i, j, k = bad[0]
            passed["associative"] = False
            cex["associative"] = (s.elements[start + i], s.elements[j], s.elements[k])
            break
    return AxiomReport(passed, cex)


def intrinsic_order(s):
    """x <= y iff x y = y."""
    t = s.full_table
    ar = np.arange(len(s))
    m = t == ar[None, :]
    both = m & m.T & ~np.eye(len(s), dtype=bool)
    if both.any():
        raise StructureError("x y = y fails antisymmetry: not an LRB")
    return FinitePoset(s.elements, matrix=m, check=True)


@dataclass
class SupportStructure:
    """The support lattice and the map ``supp`` (element label -> lattice label)."""
    lattice: FiniteLattice
    supp: dict
    semigroup: "LrbSemigroup"

    def fiber(self, label):
        return [x for x in self.semigroup.elements if self.supp[x] == label]

    def below(self, label):
        return [x for x in self.semigroup.elements if self.lattice.le(self.supp[x], label)]

    def relabel(self, mapping):
        lat = self.lattice
        new = FiniteLattice([mapping[x] for x in lat.elements], matrix=lat.leq, check=False)
        return SupportStructure(new, {k: mapping[v] for k, v in self.supp.items()}, self.semigroup)


def build_support(s, labeler=None):
    """Quotient by x ~ y iff (x y = x and y x = y), ordered by [x] <= [y] iff y x = y.

    ``labeler`` optionally names classes (e.g. a producer's claimed support
    map); it must be constant on classes and injective across them.
    """
    t = s.full_table
    n = len(s)
    ar = np.arange(n)
    absorbs = t == ar[:, None]          # absorbs[y, x]: y x = y
    equiv = absorbs & absorbs.T
    cls = -np.ones(n, dtype=np.int64)
    reps = []
    for i in range(n):
        if cls[i] < 0:
            members = np.nonzero(equiv[i])[0]
            cls[members] = len(reps)
            reps.append(i)
    if labeler is None:
        names = [f"supp({s.elements[r]})" for r in reps]
    else:
        names = []
        for c, r in enumerate(reps):
            lab = labeler(s.elements[r])
            for m in np.nonzero(cls == c)[0]:
                if labeler(s.elements[m]) != lab:
                    raise StructureError("labeler is not constant on support classes")
            names.append(lab)
        if len(set(names)) != len(names):
            raise StructureError("labeler identifies distinct support classes")
    reps = np.array(reps)
    # [x] <= [y] iff y x = y
    m = absorbs[np.ix_(reps, reps)].T
    try:
        lattice = FiniteLattice(names, matrix=m, check=True)
    except StructureError as exc:
        raise StructureError(f"support quotient is not a lattice: {exc}") from None
    supp = {s.elements[i]: names[cls[i]] for i in range(n)}
    st = SupportStructure(lattice, supp, s)
    _check_support_laws(st)
    return st


def _check_support_laws(st):
    s, lat = st.semigroup, st.lattice
    t = s.full_table
    n = len(s)
    sidx = np.array([lat.index[st.supp[x]] for x in s.elements])
    joined = lat.join_table[sidx[:, None], sidx[None, :]]
    if not np.array_equal(sidx[t], joined):
        raise StructureError("supp(xy) != supp(x) v supp(y)")
    ar = np.arange(n)
    le = lat.leq[sidx[:, None], sidx[None, :]]
    absorbs = t.T == ar[None, :]        # [x, y]: y x = y
    if not np.array_equal(le, absorbs):
        raise StructureError("supp(x) <= supp(y) does not match y x = y")


def up_set_semigroup(s, x):
    """Sigma_{>= x} = {y : x y = y}."""
    i = s.index[x]
    labels = [s.elements[j] for j in range(len(s)) if s.mul(i, j) == j]
    return s.restrict(labels, name=f"{s.name}>={x}")


def fiber_semigroup(s, X, support=None):
    """Fib(X) = {y : supp(y) <= X}."""
    support = support or build_support(s)
    return s.restrict(support.below(X), name=f"{s.name}|Fib({X})")


def complexify_lrb(s):
    """Intervals [x, y] (x <= y) with [x,y][z,w] = [xz, xzyw]."""
    t = s.full_table
    n = len(s)
    ar = np.arange(n)
    le = t == ar[None, :]
    pairs = [(i, j) for i in range(n) for j in range(n) if le[i, j]]
    where = {p: k for k, p in enumerate(pairs)}
    labels = [interval_label(s.elements[i], s.elements[j]) for i, j in pairs]
    m = len(pairs)
    table = np.empty((m, m), dtype=np.int64)
    for a, (x, y) in enumerate(pairs):
        for b, (z, w) in enumerate(pairs):
            xz = t[x, z]
            table[a, b] = where[(xz, t[t[xz, y], w])]
    c = LrbSemigroup(labels, table, name=f"C({s.name})")
    c.pairs = [(s.elements[i], s.elements[j]) for i, j in pairs]
    return c


def is_left_ideal(s, labels):
    idx = {s.index[x] for x in labels}
    return all(s.mul(i, c) in idx for i in range(len(s)) for c in idx)


def chamber_counts(s, support):
    """c_Y = |max(Sigma_{>= y})| for each lattice label Y (representative-independent)."""
    t = s.full_table
    maxes = np.array(s.maximal_indices)
    out = {}
    for y in range(len(s)):
        count = int((t[y, maxes] == maxes).sum())
        lab = support.supp[s.elements[y]]
        if out.setdefault(lab, count) != count:
            raise StructureError(f"c_Y depends on the representative of {lab}")
    return out


def find_semigroup_isomorphism(s1, s2):
    """Bijection of labels preserving composition, or None (backtracking)."""
    if len(s1) != len(s2):
        return None
    t1, t2 = s1.full_table, s2.full_table
    o1, o2 = intrinsic_order(s1), intrinsic_order(s2)

    def sig(s, o, i):
        t = s.full_table
        ar = np.arange(len(s))
        return (int(o.height[i]), int(o.leq[i].sum()), int(o.leq[:, i].sum()),
                int((t[i] == ar).sum()), int((t[:, i] == i).sum()))

    g1 = [sig(s1, o1, i) for i in range(len(s1))]
    g2 = [sig(s2, o2, i) for i in range(len(s2))]
    if sorted(g1) != sorted(g2):
        return None
    order = o1.linear_extension
    f = {}
    used = set()

    def consistent():
        for a, b in product(f, repeat=2):
            c = t1[a, b]
            if c in f and t2[f[a], f[b]] != f[c]:
                return False
            # images must respect products already fixed
            if c not in f and t2[f[a], f[b]] in used:
                return False
        return True

    def go(k):
        if k == len(order):
            return True
        i = order[k]
        for j in range(len(s2)):
            if j in used or g2[j] != g1[i]:
                continue
            f[i] = j
            used.add(j)
            if consistent() and go(k + 1):
                return True
            del f[i]
            used.discard(j)
        return False

    if not go(0):
        return None
    return {s1.elements[i]: s2.elements[j] for i, j in f.items()}


def is_semigroup_isomorphism(s1, s2, mapping):
    if set(mapping) != set(s1.elements) or set(mapping.values()) != set(s2.elements):
        return False
    idx = np.array([s2.index[mapping[x]] for x in s1.elements])
    return bool(np.array_equal(idx[s1.full_table], s2.full_table[np.ix_(idx, idx)]))
