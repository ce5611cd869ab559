"""Greedoid languages, interval greedoids and branching greedoids.

Words are tuples of letters (strings).  A language is stored extensionally
as its set of feasible words.
"""

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

from .lrb import LrbSemigroup
from .poset import FinitePoset, FiniteLattice, StructureError

EMPTY = "ε"


class GreedoidError(ValueError):
    pass


def word_label(w):
    if not w:
        return EMPTY
    if all(len(x) == 1 for x in w):
        return "".join(w)
    return ",".join(w)


def parse_word(text):
    text = text.strip()
    if text in ("", EMPTY):
        return ()
    return tuple(text.split(",")) if "," in text else tuple(text)


def _word_key(w):
    return (len(w), w)


class GreedoidLanguage:
    """Prefix-closed set of repetition-free words over ``alphabet``."""

    def __init__(self, feasible, alphabet=None):
        self.feasible = frozenset(tuple(w) for w in feasible) | {()}
        letters = {x for w in self.feasible for x in w}
        self.alphabet = frozenset(alphabet) if alphabet is not None else frozenset(letters)
        if not letters <= self.alphabet:
            raise GreedoidError("word uses a letter outside the alphabet")
        if any(len(set(w)) != len(w) for w in self.feasible):
            raise GreedoidError("feasible words must be repetition-free")

    @classmethod
    def from_basic_words(cls, words, alphabet=None):
        words = [parse_word(w) if isinstance(w, str) else tuple(w) for w in words]
        return cls({w[:k] for w in words for k in range(len(w) + 1)}, alphabet)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        if isinstance(d, dict):
            return cls.from_basic_words(d["basic_words"], d.get("alphabet"))
        return cls.from_basic_words(d)

    def __contains__(self, w):
        return tuple(w) in self.feasible

    @cached_property
    def words(self):
        return sorted(self.feasible, key=_word_key)

    @cached_property
    def rank(self):
        return max(len(w) for w in self.feasible)

    @cached_property
    def basic_words(self):
        return sorted((w for w in self.feasible if len(w) == self.rank), key=_word_key)

    def continuations(self, alpha):
        k = len(alpha)
        return frozenset(w[k:] for w in self.feasible if w[:k] == tuple(alpha))

    def __len__(self):
        return len(self.feasible)


def check_g1(g):
    return all(w[:-1] in g.feasible for w in g.feasible if w)


def check_g2(g):
    """Returns (ok, witness) for the exchange axiom."""
    for a in g.words:
        for b in g.words:
            if len(a) > len(b) and not any(x not in b and b + (x,) in g.feasible for x in a):
                return False, (a, b)
    return True, None


def check_interval_greedoid(g):
    """(G3): |a| > |b| gives a subword c of a, |c| = |a| - |b|, with bc feasible.

    Returns (ok, witness) with witness a violating pair (a, b).
    """
    for a in g.words:
        for b in g.words:
            if len(a) <= len(b):
                continue
            need = len(a) - len(b)
            if not any(b + c in g.feasible for c in combinations(a, need)):
                return False, (a, b)
    return True, None


def is_greedoid(g):
    return check_g1(g) and check_g2(g)[0]


def compose_words(g, alpha, beta):
    """Append the letters of beta, left to right, whenever feasibility is kept."""
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha not in g.feasible or beta not in g.feasible:
        raise GreedoidError("operands must be feasible")
    out = alpha
    for y in beta:
        if y not in out and out + (y,) in g.feasible:
            out = out + (y,)
    return out


@dataclass
class Flats:
    poset: FinitePoset
    flat_of: dict  # word -> flat label


def flats_poset(g, namer=None):
    """Classes of words with equal continuation sets.

    [a] <= [b] iff a c ~ b for some c.  Flats are named by their
    shortest-lexicographic representative unless ``namer(word)`` is given.
    """
    classes = {}
    for w in g.words:
        classes.setdefault(g.continuations(w), []).append(w)
    reps = {}
    for cont, ws in classes.items():
        name = namer(ws[0]) if namer else "[" + word_label(ws[0]) + "]"
        for w in ws:
            if namer and namer(w) != name:
                raise StructureError(f"namer is not constant on the flat of {word_label(ws[0])}")
            reps[w] = name
    labels = sorted(set(reps.values()), key=lambda lab: min(
        _word_key(w) for w, n in reps.items() if n == lab))
    pairs = set()
    for w in g.words:
        for k in range(len(w)):
            pairs.add((reps[w[:k]], reps[w]))
    return Flats(FinitePoset(labels, pairs), reps)


def greedoid_lrb(g, namer=None):
    ok, witness = check_interval_greedoid(g)
    if not ok:
        a, b = witness
        raise GreedoidError(
            f"not an interval greedoid: ({word_label(a)}, {word_label(b)}) violates (G3)")
    words = g.words
    labels = [word_label(w) for w in words]
    where = {w: i for i, w in enumerate(words)}
    table = [[where[compose_words(g, a, b)] for b in words] for a in words]
    s = LrbSemigroup(labels, table, name="greedoid")
    fl = flats_poset(g, namer)
    by_label = {word_label(w): f for w, f in fl.flat_of.items()}
    s.claimed_support = by_label.__getitem__
    s.claimed_lattice = lambda: FiniteLattice.from_poset(fl.poset)
    s.greedoid = g
    return s


def unrestricted_language(alphabet, length, exclude=lambda w: False):
    """Words of the given length not excluded, closed under prefixes."""
    return GreedoidLanguage.from_basic_words(
        [w for w in permutations(sorted(alphabet), length) if not exclude(w)], alphabet)


def non_interval_example():
    """Rank-3 greedoid on {x,y,z,w} with 14 basic words.

    Basic words are the length-3 words not beginning with a permutation of
    {x,y,z} or of {z,w}; the word composition is not associative here.
    """
    def bad(w):
        return set(w[:3]) == {"x", "y", "z"} or set(w[:2]) == {"z", "w"}
    return unrestricted_language("xyzw", 3, bad)


def uniform_matroid(r, n):
    letters = "abcdefghij"[:n]
    return GreedoidLanguage.from_basic_words(list(permutations(letters, r)), letters)


# --- branchings ---------------------------------------------------------------

@dataclass(frozen=True)
class RootedDigraph:
    root: str
    edges: tuple  # (label, from, to)

    def __post_init__(self):
        edges = tuple(tuple(str(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        labels = [e[0] for e in edges]
        if len(set(labels)) != len(labels):
            raise GreedoidError("edge labels must be distinct")

    @property
    def nodes(self):
        ns = {self.root}
        for _, u, v in self.edges:
            ns |= {u, v}
        return ns - {self.root}

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        return cls(str(d["root"]), tuple((e["label"], e["from"], e["to"]) for e in d["edges"]))

    def to_json(self):
        return json.dumps({"root": self.root, "edges": [
            {"label": a, "from": u, "to": v} for a, u, v in self.edges]})

    def reached(self, word):
        head = {lab: (u, v) for lab, u, v in self.edges}
        return frozenset(head[x][1] for x in word)


def example_digraph():
    """The rooted digraph whose branching greedoid has the 9 basic words
    abc, abd, acb, ace, aec, aed, bac, bad, bda."""
    return RootedDigraph("r", (("a", "r", "1"), ("b", "r", "3"), ("c", "1", "2"),
                               ("e", "1", "3"), ("d", "3", "2")))


def branching_greedoid(d):
    """Edge words whose every prefix is a branching rooted at ``d.root``."""
    feasible = set()

    def grow(word, reached):
        feasible.add(word)
        for lab, u, v in d.edges:
            if u in reached and v not in reached:
                grow(word + (lab,), reached | {v})
    grow((), frozenset({d.root}))
    return GreedoidLanguage(feasible, {e[0] for e in d.edges})


def format_node_set(nodes):
    return "{" + ",".join(sorted(nodes, key=lambda s: (len(s), s))) + "}"


def reachable_sets(d):
    g = branching_greedoid(d)
    return sorted({d.reached(w) for w in g.feasible}, key=lambda s: (len(s), sorted(s)))


def branching_lrb(d):
    g = branching_greedoid(d)
    return greedoid_lrb(g, namer=lambda w: format_node_set(d.reached(w)))


def domination_set(d, x):
    x = frozenset(x)
    if x not in set(reachable_sets(d)):
        raise GreedoidError(f"{format_node_set(x)} is not reachable")
    src = x | {d.root}
    dom = set(x) | {v for _, u, v in d.edges if u in src}
    dom.discard(d.root)
    return frozenset(dom)


@dataclass
class BranchingRow:
    reached: frozenset
    c: int
    dom: frozenset
    m: int

    def label(self):
        return format_node_set(self.reached)


def branching_spectrum_data(d):
    """Per reachable set X: c_X, dom(X) and m_X = sum_{X<=Y<=dom X} (-1)^{|Y|-|X|} c_Y."""
    g = branching_greedoid(d)
    reach = reachable_sets(d)
    rset = set(reach)
    c = {}
    for w in g.feasible:
        x = d.reached(w)
        count = sum(1 for v in g.continuations(w) if len(w) + len(v) == g.rank)
        if c.setdefault(x, count) != count:
            raise StructureError(f"c_X depends on the branching reaching {format_node_set(x)}")
    rows = []
    for x in sorted(reach, key=lambda s: (-len(s), sorted(s))):
        dom = domination_set(d, x)
        extra = sorted(dom - x)
        m = 0
        for k in range(len(extra) + 1):
            for add in combinations(extra, k):
                y = x | set(add)
                if y not in rset:
                    raise StructureError("a set between X and dom(X) is not reachable")
                m += (-1) ** k * c[frozenset(y)]
        rows.append(BranchingRow(x, c[x], dom, m))
    return rows
