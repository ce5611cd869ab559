"""Random walks on LRB ideals: transition matrices, spectra and exact oracles.

Every check here is exact over the rationals.  A walk is driven by a
``WeightDistribution``; missing mass sits on the identity, so it shows up on
the diagonal of P and in every eigenvalue.
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import (charpoly, common_denominator, format_fraction, format_poly, identity,
                     matmul, nullspace, poly_from_roots, scale_to_integers)
from .lrb import build_support, chamber_counts

DEFICIT_NAME = "w_e"
TRACE_MOMENT_THRESHOLD = 30


class SpectralError(ValueError):
    pass


@dataclass
class TransitionMatrix:
    """Row-stochastic P(c, d) = sum of w_x over x with x c = d."""
    states: list
    entries: list

    def __post_init__(self):
        n = len(self.states)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise SpectralError("entries must be square and match the states")
        for row in self.entries:
            if any(v < 0 for v in row) or sum(row) != 1:
                raise SpectralError("transition matrix is not stochastic")
        self.index = {s: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def __getitem__(self, key):
        c, d = key
        return self.entries[self.index[c]][self.index[d]]

    def to_json(self):
        return json.dumps({"states": list(self.states),
                           "entries": [[format_fraction(v) for v in r] for r in self.entries]})


def _support(s, support):
    if support is None:
        support = build_support(s, getattr(s, "claimed_support", None))
    return support


def _check_weights(s, w):
    unknown = [k for k in w.weights if k not in s.index]
    if unknown:
        raise SpectralError(f"weight on unknown element {unknown[0]!r}")


def transition_matrix(s, w):
    _check_weights(s, w)
    states = s.maximal_indices
    pos = {c: k for k, c in enumerate(states)}
    n = len(states)
    p = [[Fraction(0)] * n for _ in range(n)]
    for lab, wx in w.weights.items():
        if wx == 0:
            continue
        x = s.index[lab]
        for k, c in enumerate(states):
            p[k][pos[s.mul(x, c)]] += wx
    for k in range(n):
        p[k][k] += w.deficit
    return TransitionMatrix([s.elements[c] for c in states], p)


def transition_terms(s, w):
    """Symbolic P: (c, d) -> sorted weight names of x with x c = d.

    Every weighted label contributes its name whatever its value; the identity
    deficit appears as ``w_e`` on the diagonal when it is nonzero.
    """
    _check_weights(s, w)
    states = s.maximal_indices
    out = {}
    for lab in w.weights:
        x = s.index[lab]
        for c in states:
            key = (s.elements[c], s.elements[s.mul(x, c)])
            out.setdefault(key, []).append(w.name(lab))
    if w.deficit:
        for c in states:
            out.setdefault((s.elements[c], s.elements[c]), []).append(DEFICIT_NAME)
    return {k: sorted(v, key=_name_key) for k, v in out.items()}


def _name_key(name):
    return (len(name), name)


def format_terms(names):
    return "+".join(names) if names else "0"


# --- Brown spectrum ----------------------------------------------------------

@dataclass
class SpectrumRow:
    label: str
    eigenvalue: Fraction
    symbolic: list
    multiplicity: int
    chambers: int


@dataclass
class SpectrumReport:
    rows: list
    states: int
    support: object = field(repr=False, default=None)

    def __post_init__(self):
        if sum(r.multiplicity for r in self.rows) != self.states:
            raise SpectralError("multiplicities do not add up to the number of states")
        if any(r.multiplicity < 0 for r in self.rows):
            raise SpectralError("negative multiplicity")
        if any(not 0 <= r.eigenvalue <= 1 for r in self.rows):
            raise SpectralError("eigenvalue outside [0, 1]")

    def row(self, label):
        return next(r for r in self.rows if r.label == label)

    def eigenvalues(self):
        """Multiset as {eigenvalue: total multiplicity} over rows with m_X > 0."""
        out = {}
        for r in self.rows:
            if r.multiplicity:
                out[r.eigenvalue] = out.get(r.eigenvalue, 0) + r.multiplicity
        return out

    def to_tsv(self):
        lines = ["lattice\tsymbolic\trational\tmultiplicity"]
        for r in self.rows:
            lines.append(f"{r.label}\t{format_terms(r.symbolic)}\t"
                         f"{format_fraction(r.eigenvalue)}\t{r.multiplicity}")
        return "\n".join(lines)

    def to_json(self):
        return json.dumps({"states": self.states, "rows": [
            {"lattice": r.label, "symbolic": r.symbolic, "rational": format_fraction(r.eigenvalue),
             "multiplicity": r.multiplicity, "chambers": r.chambers} for r in self.rows]},
            indent=2)


def multiplicities(lattice, chambers):
    """m_X = sum_{Y >= X} mu(X, Y) c_Y, checked against c_X = sum_{Y >= X} m_Y."""
    mu = lattice.mobius_matrix
    leq = lattice.leq
    labels = lattice.elements
    c = np.array([chambers[x] for x in labels], dtype=np.int64)
    m = mu @ c
    back = (leq.astype(np.int64) @ m)
    if not np.array_equal(back, c):
        raise SpectralError("Moebius inversion of chamber counts is inconsistent")
    return {x: int(v) for x, v in zip(labels, m)}


def brown_spectrum(s, w, support=None):
    """eps_X = sum of w_y over supp(y) <= X, with m_X from the chamber counts."""
    _check_weights(s, w)
    support = _support(s, support)
    lat = support.lattice
    chambers = chamber_counts(s, support)
    mult = multiplicities(lat, chambers)
    rows = []
    order = sorted(range(len(lat)), key=lambda i: (int(lat.height[i]), i))
    for i in order:
        x = lat.elements[i]
        value = w.deficit
        names = [DEFICIT_NAME] if w.deficit else []
        for lab, wy in w.weights.items():
            if lat.le(support.supp[lab], x):
                value += wy
                names.append(w.name(lab))
        rows.append(SpectrumRow(x, value, sorted(names, key=_name_key), mult[x], chambers[x]))
    report = SpectrumReport(rows, len(s.maximal_indices), support)
    for a in report.rows:
        for b in report.rows:
            if lat.le(a.label, b.label) and a.eigenvalue > b.eigenvalue:
                raise SpectralError("eigenvalues are not monotone on the lattice")
    return report


# --- oracles -----------------------------------------------------------------

@dataclass
class CheckResult:
    ok: bool
    method: str
    detail: str = ""

    def __bool__(self):
        return self.ok


def predicted_charpoly(report):
    roots = []
    for value, m in report.eigenvalues().items():
        roots += [value] * m
    return poly_from_roots(roots)


def charpoly_check(p, report, threshold=TRACE_MOMENT_THRESHOLD):
    """det(xI - P) == prod (x - eps_X)^{m_X}; trace moments above ``threshold`` states.

    Trace moments tr(P^k) for k = 1..n together with the degree fix the
    characteristic polynomial by Newton's identities, so both routes are
    equivalent; the second avoids a degree-n determinant.
    """
    n = len(p)
    if report.states != n:
        return CheckResult(False, "dimension", f"{report.states} predicted states, matrix has {n}")
    if n <= threshold:
        got = charpoly(p.entries)
        want = predicted_charpoly(report)
        ok = got == want
        detail = "" if ok else f"charpoly {format_poly(got)} != predicted {format_poly(want)}"
        return CheckResult(ok, "charpoly", detail)
    return _trace_moment_check(p, report)


def _trace_moment_check(p, report):
    n = len(p)
    d, m = scale_to_integers(p.entries)
    mat = np.array(m, dtype=object)
    power = mat.copy()
    eig = report.eigenvalues()
    for k in range(1, n + 1):
        if k > 1:
            power = power.dot(mat)
        got = Fraction(int(np.trace(power)), d ** k)
        want = sum((v ** k * mm for v, mm in eig.items()), Fraction(0))
        if got != want:
            return CheckResult(False, "trace-moments",
                               f"tr(P^{k}) = {format_fraction(got)} != {format_fraction(want)}")
    return CheckResult(True, "trace-moments")


def diagonalizability_check(p, report):
    """prod over distinct eps_X with m_X > 0 of (P - eps I) is the zero matrix."""
    eig = sorted(report.eigenvalues())
    d, m = scale_to_integers(p.entries, extra=eig)
    n = len(p)
    mat = np.array(m, dtype=object)
    acc = np.array(identity(n), dtype=object)
    for v in eig:
        shift = mat - np.array(identity(n), dtype=object) * int(v * d)
        acc = acc.dot(shift)
    ok = not any(x != 0 for x in acc.flat)
    return CheckResult(ok, "annihilator", "" if ok else
                       f"product of {len(eig)} factors is nonzero")


@dataclass
class StationaryResult:
    distribution: dict
    nullspace_dimension: int
    generated: object  # True / False, or None when not checked

    @property
    def unique(self):
        return self.nullspace_dimension == 1


def generated_subsemigroup(s, labels):
    """Closure of ``labels`` and the identity under composition."""
    seen = {s.index[s.identity]} | {s.index[x] for x in labels}
    frontier = list(seen)
    gens = [s.index[x] for x in labels]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                for c in (s.mul(a, g), s.mul(g, a)):
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return {s.elements[i] for i in seen}


def stationary_distribution(p, s=None, w=None):
    """Solve pi P = pi, sum pi = 1 exactly; report the generation hypothesis too."""
    n = len(p)
    rows = [[p.entries[j][i] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    basis = nullspace(rows, n)
    dist = None
    if len(basis) == 1:
        v = basis[0]
        total = sum(v)
        dist = {st: x / total for st, x in zip(p.states, v)}
        if any(x < 0 for x in dist.values()):
            raise SpectralError("stationary vector has negative entries")
        got = matmul([[dist[st] for st in p.states]], p.entries)[0]
        if got != [dist[st] for st in p.states]:
            raise SpectralError("pi P != pi")
    generated = None
    if s is not None and w is not None:
        positive = [lab for lab, v in w.weights.items() if v > 0]
        generated = generated_subsemigroup(s, positive) == set(s.elements)
    return StationaryResult(dist, len(basis), generated)


# --- simulation ---------------------------------------------------------------

@dataclass
class SimulationResult:
    start: str
    final: str
    steps: int
    burn_in: int
    counts: dict

    @property
    def empirical(self):
        total = sum(self.counts.values())
        if not total:
            return {self.final: Fraction(1)}
        return {k: Fraction(v, total) for k, v in self.counts.items()}


def total_variation(a, b):
    keys = set(a) | set(b)
    return sum((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), Fraction(0)) / 2


def simulate(p, start, steps, seed, burn_in=None):
    """Run the chain with exact sampling from 64-bit uniform draws.

    The generator is Python's MT19937 seeded with ``seed``; each step draws
    u in [0, 2^64) and moves to the first d with u < 2^64 * P(c, <=d), tested
    in integers.  Visits after ``burn_in`` steps (default steps // 10) are counted.
    """
    if start not in p.index:
        raise SpectralError(f"unknown start state {start!r}")
    if steps < 0:
        raise SpectralError("steps must be nonnegative")
    burn_in = steps // 10 if burn_in is None else burn_in
    rng = random.Random(seed)
    scale = 1 << 64
    cumulative = []
    for row in p.entries:
        d = common_denominator(row)
        acc, cum = 0, []
        for v in row:
            acc += int(v * d)
            cum.append(acc * scale)
        cumulative.append((d, cum))
    state = p.index[start]
    counts = {}
    for t in range(steps):
        d, cum = cumulative[state]
        u = rng.getrandbits(64) * d
        state = next(j for j, c in enumerate(cum) if u < c)
        if t >= burn_in:
            lab = p.states[state]
            counts[lab] = counts.get(lab, 0) + 1
    return SimulationResult(start, p.states[state], steps, burn_in, counts)
