"""Ordered set partitions, the braid face semigroup and library walks.

An ordered partition of [n] is a tuple of blocks, each block a sorted tuple
of ints.  Text form: ``"257|3|146"`` (blocks joined by ``|``; books are
comma-separated inside a block once any label has two digits).  An interval
[Y, X] of ordered partitions (X refining Y) is written with double bars
between the blocks of Y: ``"37|1||256|4"``.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, permutations
from math import factorial, prod

from .lrb import LrbSemigroup
from .poset import FiniteLattice, interval_label
from .weights import WeightDistribution


class PartitionError(ValueError):
    pass


class CapacityError(ValueError):
    pass


# --- text formats -------------------------------------------------------------

def _wide(blocks):
    return any(x >= 10 for b in blocks for x in b)


def format_block(block, wide=False):
    return ",".join(map(str, block)) if wide else "".join(map(str, block))


def format_ordered(p):
    wide = _wide(p)
    return "|".join(format_block(b, wide) for b in p)


def _parse_block(text, wide):
    text = text.strip()
    if not text:
        raise PartitionError("empty block")
    if wide:
        return tuple(sorted(int(x) for x in text.split(",")))
    return tuple(sorted(int(c) for c in text))


def parse_ordered(text):
    wide = "," in text
    p = tuple(_parse_block(b, wide) for b in text.split("|"))
    _check_disjoint(p)
    return p


def format_interval(coarse, fine):
    """Group the blocks of ``fine`` by the blocks of ``coarse``."""
    wide = _wide(fine)
    groups = _group_fine(coarse, fine)
    return "||".join("|".join(format_block(b, wide) for b in g) for g in groups)


def parse_interval(text):
    wide = "," in text
    groups = [[_parse_block(b, wide) for b in g.split("|")] for g in text.split("||")]
    fine = tuple(b for g in groups for b in g)
    coarse = tuple(tuple(sorted(x for b in g for x in b)) for g in groups)
    _check_disjoint(fine)
    return coarse, fine


def _check_disjoint(p):
    seen = set()
    for b in p:
        if not b:
            raise PartitionError("empty block")
        if seen & set(b):
            raise PartitionError("blocks overlap")
        seen |= set(b)


def ground(p):
    return frozenset(x for b in p for x in b)


def _group_fine(coarse, fine):
    groups, k = [], 0
    for cb in coarse:
        g, got = [], set()
        while k < len(fine) and set(fine[k]) <= set(cb):
            g.append(fine[k])
            got |= set(fine[k])
            k += 1
        if got != set(cb):
            raise PartitionError("fine partition does not refine coarse in block order")
        groups.append(g)
    if k != len(fine):
        raise PartitionError("fine partition does not refine coarse in block order")
    return groups


def format_set_partition(blocks):
    blocks = canonical_set_partition(blocks)
    wide = _wide(blocks)
    return "|".join(format_block(b, wide) for b in blocks)


def canonical_set_partition(blocks):
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def parse_set_partition(text):
    return canonical_set_partition(parse_ordered(text))


# --- composition --------------------------------------------------------------

def compose_ordered_partitions(x, y):
    """Blocks X_i & Y_j (nonempty) in lexicographic order of (i, j)."""
    if ground(x) != ground(y):
        raise PartitionError("ground sets differ")
    out = []
    for bx in x:
        sx = set(bx)
        for by in y:
            c = tuple(v for v in by if v in sx)
            if c:
                out.append(tuple(sorted(c)))
    return tuple(out)


def compose_many(*ps):
    return reduce(compose_ordered_partitions, ps)


def refines(fine, coarse):
    """True iff ``fine`` >= ``coarse`` in the face order (coarse o fine == fine)."""
    return compose_ordered_partitions(coarse, fine) == fine


def support(p):
    """Forget the block order."""
    return canonical_set_partition(p)


def compose_intervals(a, b):
    """[Y,X] o [R,S] = [Y o R, Y o R o X o S]."""
    (y, x), (r, s) = a, b
    yr = compose_ordered_partitions(y, r)
    return yr, compose_many(yr, x, s)


def braid_interval_compose(a, b):
    """Interval composition read off the double-bar computation table.

    Rows are the fine blocks of ``a`` grouped by its coarse blocks, columns
    those of ``b``.  Coarse boxes (coarse_i & coarse_j) are ordered
    lexicographically, and inside each box the single-bar boxes
    (fine_a & fine_b) are ordered lexicographically; empty boxes are skipped.
    """
    (y, x), (r, s) = a, b
    ga, gb = _group_fine(y, x), _group_fine(r, s)
    coarse, fine = [], []
    for rows in ga:
        for cols in gb:
            box = []
            for fx in rows:
                for fs in cols:
                    cell = tuple(sorted(set(fx) & set(fs)))
                    if cell:
                        box.append(cell)
            if box:
                coarse.append(tuple(sorted(v for c in box for v in c)))
                fine.extend(box)
    return tuple(coarse), tuple(fine)


# --- enumeration --------------------------------------------------------------

def ordered_partitions(items):
    """All ordered set partitions of ``items`` (canonical order: first block first)."""
    items = tuple(sorted(items))
    if not items:
        yield ()
        return
    n = len(items)
    for size in range(1, n + 1):
        for first in combinations(items, size):
            rest = tuple(v for v in items if v not in first)
            for tail in ordered_partitions(rest):
                yield (first,) + tail


def set_partitions(items):
    items = list(items)
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield canonical_set_partition(part[:k] + ((head,) + part[k],) + part[k + 1:])
        yield canonical_set_partition(((head,),) + part)


def coarsens(a, b):
    """Set partitions: every block of b lies inside a block of a."""
    return all(any(set(bb) <= set(ab) for ab in a) for bb in b)


def partition_lattice(n):
    """Pi_n with the one-block partition at the bottom and singletons on top.

    This is the intersection lattice of the braid arrangement ordered by
    inclusion of subspaces, i.e. the support lattice of the braid faces.
    """
    parts = sorted(set_partitions(range(1, n + 1)), key=lambda p: (len(p), p))
    labels = [format_set_partition(p) for p in parts]
    lat = FiniteLattice.from_relation(parts, coarsens)
    return FiniteLattice(labels, matrix=lat.leq, check=False)


def refinements(q):
    """Ordered partitions t with q o t = t, i.e. refining q in block order."""
    def go(k):
        if k == len(q):
            yield ()
            return
        for head in ordered_partitions(q[k]):
            for tail in go(k + 1):
                yield head + tail
    yield from go(0)


# --- braid face semigroup -----------------------------------------------------

def braid_face_semigroup(n, limit=7):
    if n > limit:
        raise CapacityError(f"n={n} exceeds braid capacity {limit}")
    faces = sorted(ordered_partitions(range(1, n + 1)), key=lambda p: (len(p), p))
    labels = [format_ordered(p) for p in faces]
    where = {p: i for i, p in enumerate(faces)}
    table = [[where[compose_ordered_partitions(a, b)] for b in faces] for a in faces]
    s = LrbSemigroup(labels, table, name=f"B{n}")
    s.claimed_support = lambda lab: format_set_partition(support(parse_ordered(lab)))
    s.claimed_lattice = lambda: partition_lattice(n)
    return s


def apply_face(order, face):
    """Act with an ordered partition on a shelf order (a permutation)."""
    perm = tuple((b,) for b in order)
    return tuple(b[0] for b in compose_ordered_partitions(face, perm))


def two_block(n, e):
    e = tuple(sorted(e))
    rest = tuple(v for v in range(1, n + 1) if v not in e)
    return tuple(b for b in (e, rest) if b)


def tsetlin_distribution(n, book_weights):
    """Weight w_i on <i | [n] - i>; zero elsewhere."""
    w = {int(k): Fraction(v) for k, v in book_weights.items()}
    out, names = {}, {}
    for i, wi in sorted(w.items()):
        lab = format_ordered(two_block(n, [i]))
        out[lab] = out.get(lab, Fraction(0)) + wi
        names[lab] = f"w_{i}"
    return WeightDistribution(out, names)


def subset_label(e):
    e = sorted(e)
    return ",".join(map(str, e))


def weight_name(e):
    """w_3 for a singleton, w_{1,3} otherwise."""
    e = sorted(e)
    return f"w_{e[0]}" if len(e) == 1 else f"w_{{{subset_label(e)}}}"


def subset_distribution(n, subset_weights):
    """Weight w_E on <E | [n] - E>; E empty or everything acts as the identity."""
    w = {frozenset(k): Fraction(v) for k, v in subset_weights.items()}
    out, names = {}, {}
    for e, we in sorted(w.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        lab = format_ordered(two_block(n, e))
        out[lab] = out.get(lab, Fraction(0)) + we
        names.setdefault(lab, weight_name(e))
    return WeightDistribution(out, names)


# --- libraries ----------------------------------------------------------------

def normalize_classes(classes):
    return canonical_set_partition(classes)


@dataclass(frozen=True)
class LibraryState:
    """Books on shelves; ``shelves`` top-first, each shelf one class in order."""
    classes: tuple
    shelves: tuple

    def __post_init__(self):
        classes = normalize_classes(self.classes)
        shelves = tuple(tuple(s) for s in self.shelves)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "shelves", shelves)
        books = [b for s in shelves for b in s]
        if sorted(books) != sorted(b for c in classes for b in c) or len(set(books)) != len(books):
            raise PartitionError("every book must appear exactly once")
        cls = {tuple(sorted(s)) for s in shelves}
        if cls != set(classes):
            raise PartitionError("each shelf must hold exactly one class")

    @property
    def n(self):
        return sum(len(s) for s in self.shelves)

    def to_interval(self):
        p = tuple(tuple(sorted(s)) for s in self.shelves)
        s = tuple((b,) for shelf in self.shelves for b in shelf)
        return p, s

    @classmethod
    def from_interval(cls, classes, p, s):
        order = [b[0] for b in s]
        shelves = tuple(tuple(x for x in order if x in set(blk)) for blk in p)
        return cls(classes, shelves)

    def label(self):
        return format_interval(*self.to_interval())

    def to_json(self):
        return json.dumps({"classes": [list(c) for c in self.classes],
                           "shelves": [list(s) for s in self.shelves]})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        return cls(tuple(tuple(c) for c in d["classes"]), tuple(tuple(s) for s in d["shelves"]))

    def render(self):
        return "\n".join(" ".join(map(str, s)) for s in self.shelves)


def in_library_fiber(classes, q, t):
    classes = normalize_classes(classes)
    unions_ok = all(any(set(c) <= set(b) for b in q) for c in classes)
    try:
        _group_fine(q, t)
    except PartitionError:
        return False
    return unions_ok


def apply_interval(state, q, t):
    """[p, s] -> [q o p, q o p o t o s]."""
    if not in_library_fiber(state.classes, q, t):
        raise PartitionError("interval is not in the fiber of this library")
    p, s = state.to_interval()
    qp, qpts = compose_intervals((q, t), (p, s))
    return LibraryState.from_interval(state.classes, qp, qpts)


def borrow_interval(classes, e):
    """[q_E, t_E] for the borrowed set E."""
    classes = normalize_classes(classes)
    n = sum(len(c) for c in classes)
    e = set(e)
    k = sorted(x for c in classes if e & set(c) for x in c)
    rest = tuple(v for v in range(1, n + 1) if v not in k)
    q = tuple(b for b in (tuple(k), rest) if b)
    t = tuple(b for b in (tuple(sorted(e)), tuple(x for x in k if x not in e), rest) if b)
    return q, t


def apply_borrow(state, e):
    q, t = borrow_interval(state.classes, e)
    return apply_interval(state, q, t)


def library_fiber(classes, limit=7):
    """Fib([pi, 1]): intervals [q, t] with q's blocks unions of classes."""
    classes = normalize_classes(classes)
    n = sum(len(c) for c in classes)
    if n > limit:
        raise CapacityError(f"n={n} exceeds library capacity {limit}")
    elems = []
    for order in ordered_partitions(range(len(classes))):
        q = tuple(tuple(sorted(x for i in blk for x in classes[i])) for blk in order)
        for t in refinements(q):
            elems.append((q, t))
    elems.sort(key=lambda qt: (len(qt[0]), len(qt[1]), qt))
    labels = [format_interval(q, t) for q, t in elems]
    where = {qt: i for i, qt in enumerate(elems)}
    table = [[where[compose_intervals(a, b)] for b in elems] for a in elems]
    s = LrbSemigroup(labels, table, name="library(" + format_set_partition(classes) + ")")
    s.classes = classes
    s.claimed_support = lambda lab: interval_label(
        *(format_set_partition(support(x)) for x in parse_interval(lab)))
    return s


def library_states(classes):
    """All library configurations (maximal elements of the fiber)."""
    classes = normalize_classes(classes)
    out = []
    for order in permutations(range(len(classes))):
        def go(k):
            if k == len(order):
                yield ()
                return
            for perm in permutations(classes[order[k]]):
                for tail in go(k + 1):
                    yield (perm,) + tail
        out.extend(LibraryState(classes, sh) for sh in go(0))
    return out


def library_subset_distribution(classes, subset_weights):
    """Weight w_E on the interval [q_E, t_E] of the library fiber."""
    classes = normalize_classes(classes)
    w = {frozenset(k): Fraction(v) for k, v in subset_weights.items()}
    out, names = {}, {}
    for e, we in sorted(w.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        lab = format_interval(*borrow_interval(classes, e))
        out[lab] = out.get(lab, Fraction(0)) + we
        names[lab] = (names[lab] + "+" if lab in names else "") + weight_name(e)
    return WeightDistribution(out, names)


@dataclass
class LibraryEigen:
    alpha: tuple
    beta: tuple
    subsets: list
    multiplicity: int

    def label(self):
        return interval_label(format_set_partition(self.alpha), format_set_partition(self.beta))


def _is_union_of(sub, blocks):
    sub = set(sub)
    return all(set(b) <= sub or not set(b) & sub for b in blocks)


def library_spectrum_labels(classes, include_trivial=False):
    """Eigenvalue index pairs (alpha, beta) with alpha <= pi <= beta.

    ``subsets`` lists the E contributing w_E; multiplicity is
    prod (p_i - 1)! prod (q_j - 1)! with p the block sizes of beta and q the
    number of classes inside each block of alpha.
    """
    classes = normalize_classes(classes)
    n = sum(len(c) for c in classes)
    ground_set = list(range(1, n + 1))
    subsets = [frozenset(c) for r in range(n + 1) for c in combinations(ground_set, r)]
    if not include_trivial:
        subsets = [e for e in subsets if 0 < len(e) < n]
    alphas = []
    for grouping in set_partitions(range(len(classes))):
        alphas.append(canonical_set_partition(
            tuple(x for i in g for x in classes[i]) for g in grouping))
    betas = []

    def refine(k):
        if k == len(classes):
            yield ()
            return
        for sp in set_partitions(classes[k]):
            for tail in refine(k + 1):
                yield sp + tail
    betas = [canonical_set_partition(b) for b in refine(0)]
    rows = []
    for a in sorted(alphas, key=lambda p: (len(p), p)):
        qsizes = [sum(1 for c in classes if set(c) <= set(blk)) for blk in a]
        for b in sorted(betas, key=lambda p: (len(p), p)):
            contrib = []
            for e in subsets:
                if not _is_union_of(e, b):
                    continue
                k = {x for c in classes if set(c) & e for x in c}
                if _is_union_of(k, a):
                    contrib.append(e)
            mult = prod(factorial(len(blk) - 1) for blk in b) * prod(factorial(q - 1) for q in qsizes)
            rows.append(LibraryEigen(a, b, contrib, mult))
    return rows
