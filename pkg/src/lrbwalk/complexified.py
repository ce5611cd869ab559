"""Complex sign vectors and complexified real arrangements.

Letters are ``0 + - i j`` with the level order 0 < {+, -} < {i, j}; inside
a level the two letters are incomparable.  A complexified arrangement is
handled through intervals [Y, X] of the real face poset, sent to complex sign
vectors by phi([Y, X]) = X o iY.
"""

from dataclasses import dataclass
from functools import cached_property

from .arrangement import (ArrangementError, RealArrangement, compose_sign, format_flat,
                          format_sign, intersection_lattice, sign_le, zero_set)
from .lrb import LrbSemigroup
from .poset import FinitePoset, generalized_zaslavsky_check, interval_lattice, interval_label

LETTERS = "0+-ij"
LEVEL = {"0": 0, "+": 1, "-": 1, "i": 2, "j": 2}
_IMAG = {0: "0", 1: "i", -1: "j"}
_REAL = {0: "0", 1: "+", -1: "-"}


def letter_gt(w, z):
    return LEVEL[w] > LEVEL[z]


def letter_le(z, w):
    return z == w or LEVEL[z] < LEVEL[w]


def compose_complex(z, w):
    """Entrywise: w_k if w_k > z_k in the letter order, else z_k."""
    if len(z) != len(w):
        raise ArrangementError("length mismatch")
    return "".join(b if letter_gt(b, a) else a for a, b in zip(z, w))


def complex_le(z, w):
    return all(letter_le(a, b) for a, b in zip(z, w))


def phi(y, x):
    """[Y, X] -> X o iY (complex sign vector string)."""
    iy = "".join(_IMAG[v] for v in y)
    return compose_complex("".join(_REAL[v] for v in x), iy)


def phi_inverse(z):
    y = tuple(1 if c == "i" else -1 if c == "j" else 0 for c in z)
    x = tuple({"+": 1, "-": -1}.get(c, y[k]) for k, c in enumerate(z))
    return y, x


def interval_le(a, b):
    """[Y,X] <= [R,S] iff Y <= R and R o X <= S."""
    (y, x), (r, s) = a, b
    return sign_le(y, r) and sign_le(compose_sign(r, x), s)


def interval_compose(a, b):
    """[Y,X] o [R,S] = [Y o R, Y o R o X o S]."""
    (y, x), (r, s) = a, b
    yr = compose_sign(y, r)
    return yr, compose_sign(compose_sign(yr, x), s)


@dataclass(frozen=True)
class ComplexifiedArrangement:
    base: RealArrangement

    @cached_property
    def intervals(self):
        return interval_faces(self)

    @cached_property
    def faces(self):
        return [phi(y, x) for y, x in self.intervals]


def interval_faces(c):
    """All [Y, X] with Y <= X among real faces, sorted by complex rank then string."""
    faces = c.base.faces
    pairs = [(y, x) for x in faces for y in faces if sign_le(y, x)]

    def key(p):
        z = phi(*p)
        return (sum(LEVEL[ch] for ch in z), z)
    return sorted(pairs, key=key)


def span_interval(y, x):
    return interval_label(format_flat(zero_set(y)), format_flat(zero_set(x)))


def complex_face_semigroup(c):
    """Face semigroup on complex sign vectors with letter-order composition."""
    labels = c.faces
    s = LrbSemigroup(labels, compose_complex, name="F(A^C)")
    s.claimed_support = lambda z: span_interval(*phi_inverse(z))
    s.claimed_lattice = lambda: augmented_lattice(c)
    return s


def face_poset(c):
    return FinitePoset.from_relation(c.faces, complex_le)


def augmented_lattice(c):
    """Int(L) of the real intersection lattice, componentwise order."""
    return interval_lattice(intersection_lattice(c.base))


def max_cell_count(c):
    """(|max F|, sum over the augmented lattice of |mu(x, top)|).

    Maximal faces are the vectors over {i, j}, i.e. phi([Y, Y]) for real
    regions Y.
    """
    count = sum(1 for z in c.faces if all(ch in "ij" for ch in z))
    lat = augmented_lattice(c)
    mob = sum(abs(lat.mobius(x, lat.top)) for x in lat.elements)
    return count, mob


def c_cells(c):
    """Faces with no zero entry (= [Y, X] with X a region), in the opposite order."""
    cells = [z for z in c.faces if "0" not in z]
    return FinitePoset.from_relation(cells, lambda a, b: complex_le(b, a))


def betti_numbers(c):
    """beta_i = sum over flats x of rank d - i of |mu(x, top)|, i = 0..d."""
    lat = intersection_lattice(c.base)
    d = lat.rank(lat.top)
    out = [0] * (d + 1)
    for x in lat.elements:
        out[d - lat.rank(x)] += abs(lat.mobius(x, lat.top))
    return out


def real_sign_string(v):
    return format_sign(v)


def span_zaslavsky_check(c):
    """Generalized Zaslavsky hypotheses for the span map F -> Int(L).

    As in the real case, the zero vector and the bottom of Int(L) are removed.
    """
    faces = face_poset(c)
    lat = augmented_lattice(c)
    p = faces.subposet([z for z in faces.elements if set(z) != {"0"}])
    q = lat.subposet([x for x in lat.elements if x != lat.bottom])
    f = {z: span_interval(*phi_inverse(z)) for z in p.elements}
    return generalized_zaslavsky_check(f, p, q)
