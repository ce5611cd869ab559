"""Central real hyperplane arrangements over the rationals.

Faces are sign vectors: tuples over {-1, 0, 1}, written as strings over
``"0+-"``.  Realizability of a sign pattern is decided exactly with
Fourier-Motzkin elimination, so no tolerances appear anywhere.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd

from .linalg import rank, to_fraction
from .lrb import LrbSemigroup
from .partitions import CapacityError, format_ordered, ordered_partitions
from .poset import (FiniteLattice, FinitePoset, check_semimodular, generalized_zaslavsky_check,
                    is_atomistic)

SIGN_CHARS = {0: "0", 1: "+", -1: "-"}
CHAR_SIGNS = {v: k for k, v in SIGN_CHARS.items()}


class ArrangementError(ValueError):
    pass


def format_sign(v):
    return "".join(SIGN_CHARS[x] for x in v)


def parse_sign(text):
    try:
        return tuple(CHAR_SIGNS[c] for c in text)
    except KeyError:
        raise ArrangementError(f"bad sign vector {text!r}") from None


def compose_sign(x, y):
    """Entrywise: x_i if x_i != 0 else y_i."""
    if len(x) != len(y):
        raise ArrangementError("length mismatch")
    return tuple(a if a else b for a, b in zip(x, y))


def sign_le(x, y):
    """Componentwise order with 0 below both + and -."""
    return all(a == 0 or a == b for a, b in zip(x, y))


def zero_set(x):
    return frozenset(i + 1 for i, v in enumerate(x) if v == 0)


def format_flat(hyperplanes):
    return "{" + ",".join(map(str, sorted(hyperplanes))) + "}"


# --- exact feasibility ----------------------------------------------------------

def _primitive(row):
    den = 1
    for x in row:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


def _eliminate_equalities(equalities, strict):
    eqs = [list(map(Fraction, r)) for r in equalities]
    strict = [list(map(Fraction, r)) for r in strict]
    while eqs:
        row = eqs.pop()
        piv = next((c for c, v in enumerate(row) if v != 0), None)
        if piv is None:
            continue
        def sub(r):
            f = r[piv] / row[piv]
            return [a - f * b for a, b in zip(r, row)]
        eqs = [sub(r) for r in eqs]
        strict = [sub(r) for r in strict]
    return strict


def strictly_feasible(equalities, strict):
    """Is {x : a.x = 0 for a in equalities, b.x > 0 for b in strict} nonempty?

    Equalities are substituted away; the homogeneous strict system is then
    decided by Fourier-Motzkin: it is feasible iff elimination of every
    variable leaves no inequality (each leftover would read 0 > 0).
    """
    rows = {_primitive(r) for r in _eliminate_equalities(equalities, strict)}
    if not rows:
        return True
    dim = len(next(iter(rows)))
    for c in range(dim):
        if any(all(v == 0 for v in r) for r in rows):
            return False
        pos = [r for r in rows if r[c] > 0]
        neg = [r for r in rows if r[c] < 0]
        keep = {r for r in rows if r[c] == 0}
        for p in pos:
            for q in neg:
                comb = tuple(-q[c] * a + p[c] * b for a, b in zip(p, q))
                keep.add(_primitive([Fraction(v) for v in comb]))
        rows = keep
        if not rows:
            return True
    return not rows


# --- arrangements ------------------------------------------------------------

@dataclass(frozen=True)
class RealArrangement:
    """Hyperplanes ker(l_i) of nonzero, pairwise non-parallel rational forms."""
    dimension: int
    forms: tuple

    def __post_init__(self):
        forms = tuple(tuple(to_fraction(c) for c in f) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        for i, f in enumerate(forms):
            if len(f) != self.dimension:
                raise ArrangementError(f"form {i + 1} has length {len(f)} != {self.dimension}")
            if all(c == 0 for c in f):
                raise ArrangementError(f"form {i + 1} is zero")
        for i in range(len(forms)):
            for j in range(i):
                if rank([forms[i], forms[j]]) < 2:
                    raise ArrangementError(f"forms {j + 1} and {i + 1} are parallel")

    @property
    def size(self):
        return len(self.forms)

    @property
    def essential(self):
        return rank(self.forms) == self.dimension if self.forms else self.dimension == 0

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        return cls(int(d["dimension"]), tuple(tuple(r) for r in d["forms"]))

    def to_json(self):
        from .linalg import format_fraction
        return json.dumps({"dimension": self.dimension,
                           "forms": [[format_fraction(c) for c in f] for f in self.forms]})

    @cached_property
    def faces(self):
        return enumerate_faces(self)


def braid_arrangement(n):
    """x_i - x_j for i < j, in the order (1,2), (1,3), ..., (n-1,n)."""
    forms = []
    for i in range(n):
        for j in range(i + 1, n):
            f = [0] * n
            f[i], f[j] = 1, -1
            forms.append(f)
    return RealArrangement(n, tuple(map(tuple, forms)))


def braid_pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def sign_of_point(a, x):
    if len(x) != a.dimension:
        raise ArrangementError("dimension mismatch")
    x = [to_fraction(v) for v in x]
    out = []
    for f in a.forms:
        v = sum(c * xi for c, xi in zip(f, x))
        out.append((v > 0) - (v < 0))
    return tuple(out)


MAX_HYPERPLANES = 12


def enumerate_faces(a, max_hyperplanes=MAX_HYPERPLANES):
    """All realizable sign vectors, sorted by (number of nonzeros, string).

    Built hyperplane by hyperplane: a pattern on the first k forms is only
    extended if it is realizable.
    """
    if a.size > max_hyperplanes:
        raise CapacityError(f"{a.size} hyperplanes exceed the bound {max_hyperplanes}")
    partial = [()]
    for k, form in enumerate(a.forms):
        nxt = []
        for pat in partial:
            for s in (0, 1, -1):
                cand = pat + (s,)
                eqs = [a.forms[i] for i in range(k + 1) if cand[i] == 0]
                strict = [tuple(cand[i] * c for c in a.forms[i]) for i in range(k + 1) if cand[i]]
                if strictly_feasible(eqs, strict):
                    nxt.append(cand)
        partial = nxt
    return sorted(partial, key=lambda v: (sum(1 for x in v if x), format_sign(v)))


def span_map(a, x):
    """The flat spanned by face x, named by its hyperplane set {i : x_i = 0}."""
    if x not in set(a.faces):
        raise ArrangementError(f"{format_sign(x)} is not a face")
    return zero_set(x)


def intersection_lattice(a):
    """Flats ordered by inclusion of subspaces (reverse inclusion of hyperplane sets).

    Bottom is the common intersection, top the ambient space.  The opposite
    lattice is checked to be geometric (semimodular and atomistic).
    """
    flats = sorted({zero_set(x) for x in a.faces}, key=lambda z: (-len(z), sorted(z)))
    labels = [format_flat(z) for z in flats]
    lat = FiniteLattice.from_relation(flats, lambda u, v: u >= v)
    lat = FiniteLattice(labels, matrix=lat.leq, check=False)
    op = lat.opposite()
    if not (check_semimodular(op) and is_atomistic(op)):
        raise ArrangementError("intersection lattice is not geometric")
    return lat


def face_semigroup(a):
    faces = a.faces
    labels = [format_sign(x) for x in faces]
    where = {x: i for i, x in enumerate(faces)}
    table = [[where[compose_sign(x, y)] for y in faces] for x in faces]
    s = LrbSemigroup(labels, table, name="F(A)")
    s.claimed_support = lambda lab: format_flat(zero_set(parse_sign(lab)))
    s.claimed_lattice = lambda: intersection_lattice(a)
    return s


def zaslavsky_count(a):
    """(number of regions, sum over flats of |mu(x, top)|)."""
    regions = sum(1 for x in a.faces if all(x))
    lat = intersection_lattice(a)
    mob = sum(abs(lat.mobius(x, lat.top)) for x in lat.elements)
    return regions, mob


def braid_face_to_sign(p, n):
    """Ordered partition of [n] -> sign vector of the braid arrangement."""
    pos = {v: k for k, b in enumerate(p) for v in b}
    return tuple((pos[j] > pos[i]) - (pos[j] < pos[i]) for i, j in braid_pairs(n))


def random_arrangement(rng, dimension=3, max_size=6, coeff=3):
    """Random central arrangement with distinct non-parallel rational forms."""
    size = rng.randint(1, max_size)
    forms = []
    while len(forms) < size:
        f = tuple(Fraction(rng.randint(-coeff, coeff), rng.randint(1, 2)) for _ in range(dimension))
        if all(c == 0 for c in f):
            continue
        if any(rank([f, g]) < 2 for g in forms):
            continue
        forms.append(f)
    return RealArrangement(dimension, tuple(forms))


@dataclass
class KEqualReport:
    n: int
    k: int
    faces: list
    f_vector: dict

    @property
    def euler_characteristic(self):
        return sum((-1) ** d * c for d, c in self.f_vector.items())

    @property
    def count(self):
        return len(self.faces)


def kequal_subcomplex(n, k):
    """Faces of the permutohedron (ordered partitions of [n]) with all blocks < k.

    A face with block sizes b_1..b_e has dimension sum (b_i - 1).
    """
    if not (2 <= k <= n <= 8):
        raise ValueError("need 2 <= k <= n <= 8")
    kept = [p for p in ordered_partitions(range(1, n + 1)) if all(len(b) < k for b in p)]
    kept.sort(key=lambda p: (sum(len(b) - 1 for b in p), p))
    fv = {}
    for p in kept:
        d = sum(len(b) - 1 for b in p)
        fv[d] = fv.get(d, 0) + 1
    return KEqualReport(n, k, [format_ordered(p) for p in kept], dict(sorted(fv.items())))


def sign_vectors_closed(faces):
    fs = set(faces)
    return all(compose_sign(x, y) in fs for x, y in product(faces, repeat=2))


def face_poset(a):
    faces = a.faces
    return FinitePoset.from_relation([format_sign(x) for x in faces],
                                     lambda u, v: sign_le(parse_sign(u), parse_sign(v)))


def span_zaslavsky_check(a):
    """Generalized Zaslavsky hypotheses for the span map F_A -> L_A.

    The minimal face and the bottom flat are removed first (the formula adds
    a bottom back to Q), so P is the face poset of the sphere.
    """
    faces = face_poset(a)
    lat = intersection_lattice(a)
    p = faces.subposet([x for x in faces.elements if x != faces.minimal()[0]])
    q = lat.subposet([x for x in lat.elements if x != lat.bottom])
    f = {x: format_flat(zero_set(parse_sign(x))) for x in p.elements}
    return generalized_zaslavsky_check(f, p, q)
