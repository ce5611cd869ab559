import json
from fractions import Fraction as F

import pytest

from lrbwalk.arrangement import braid_arrangement
from lrbwalk.complexified import ComplexifiedArrangement, complex_face_semigroup
from lrbwalk.greedoid import branching_lrb, example_digraph
from lrbwalk.linalg import charpoly
from lrbwalk.lrb import build_support
from lrbwalk.partitions import (braid_face_semigroup, library_fiber, library_subset_distribution,
                                subset_distribution, tsetlin_distribution)
from lrbwalk.spectral import (SpectralError, TransitionMatrix, brown_spectrum, charpoly_check,
                              diagonalizability_check, generated_subsemigroup, multiplicities,
                              predicted_charpoly, simulate, stationary_distribution,
                              total_variation, transition_matrix, transition_terms)
from lrbwalk.weights import WeightDistribution

from conftest import random_simplex

LIB_SUBSETS = [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]


def generic_weights(s, rng=None):
    maxes = set(s.maximal())
    labels = [x for x in s.elements if x != s.identity and x not in maxes]
    if rng is None:
        return WeightDistribution({x: F(1, len(labels)) for x in labels})
    return WeightDistribution(dict(zip(labels, random_simplex(rng, len(labels)))))


def library3(weights=None):
    s = library_fiber([(1, 2), (3,)])
    weights = weights or {e: F(1, 6) for e in LIB_SUBSETS}
    return s, library_subset_distribution(s.classes, weights)


class TestTransitionMatrix:
    def test_tsetlin_two_books(self):
        s = braid_face_semigroup(2)
        w = tsetlin_distribution(2, {1: F(1, 3), 2: F(1, 2)})
        p = transition_matrix(s, w)
        assert p.states == ["1|2", "2|1"]
        assert p.entries == [[F(1, 2), F(1, 2)], [F(1, 3), F(2, 3)]]
        terms = transition_terms(s, w)
        assert terms[("1|2", "1|2")] == ["w_1", "w_e"]
        assert terms[("2|1", "1|2")] == ["w_1"]

    def test_identity_only(self):
        s = braid_face_semigroup(3)
        w = WeightDistribution({})
        p = transition_matrix(s, w)
        assert all(p.entries[i][j] == (i == j) for i in range(6) for j in range(6))
        r = brown_spectrum(s, w)
        assert r.eigenvalues() == {F(1): 6}

    def test_not_stochastic(self):
        with pytest.raises(SpectralError):
            TransitionMatrix(["a", "b"], [[F(1, 2), F(1, 3)], [0, 1]])

    def test_unknown_weight(self):
        s = braid_face_semigroup(3)
        with pytest.raises(SpectralError, match="unknown"):
            transition_matrix(s, WeightDistribution({"9|8": F(1, 2)}))

    def test_json(self):
        s, w = library3()
        d = json.loads(transition_matrix(s, w).to_json())
        assert len(d["states"]) == 4 and d["entries"][0][0] == "1/2"

    def test_library_symbolic(self):
        s, w = library3()
        t = transition_terms(s, w)
        assert t[("3||1|2", "3||1|2")] == ["w_3", "w_{1,3}"]
        assert t[("3||1|2", "1|2||3")] == ["w_1", "w_{1,2}"]
        assert sum((len(v) for v in t.values())) == 6 * 4


class TestBrownSpectrum:
    def test_library_table(self):
        s, w = library3()
        r = brown_spectrum(s, w)
        got = {x.label: ("+".join(x.symbolic), x.eigenvalue, x.multiplicity) for x in r.rows}
        assert got["[123,12|3]"] == ("", F(0), 1)
        assert got["[123,1|2|3]"] == ("w_{1,3}+w_{2,3}", F(1, 3), 1)
        assert got["[12|3,12|3]"] == ("w_3+w_{1,2}", F(1, 3), 1)
        assert got["[12|3,1|2|3]"][1:] == (F(1), 1)
        zero = {k for k, v in got.items() if v[2] == 0}
        assert zero == {"[123,123]", "[123,1|23]", "[123,13|2]"}

    def test_tsv(self):
        s, w = library3()
        lines = brown_spectrum(s, w).to_tsv().splitlines()
        assert lines[0] == "lattice\tsymbolic\trational\tmultiplicity"
        assert "[123,1|2|3]\tw_{1,3}+w_{2,3}\t1/3\t1" in lines

    def test_json(self):
        s, w = library3()
        d = json.loads(brown_spectrum(s, w).to_json())
        assert d["states"] == 4 and sum(r["multiplicity"] for r in d["rows"]) == 4

    def test_tsetlin_closed_form(self):
        s = braid_face_semigroup(3)
        bw = {1: F(1, 2), 2: F(1, 3), 3: F(1, 6)}
        r = brown_spectrum(s, tsetlin_distribution(3, bw))
        assert r.eigenvalues() == {F(1): 1, F(0): 2, F(1, 2): 1, F(1, 3): 1, F(1, 6): 1}

    def test_braid_multiplicities_are_derangement_counts(self):
        s = braid_face_semigroup(4)
        w = subset_distribution(4, {(1, 2): F(1, 2)})
        r = brown_spectrum(s, w)
        lat = r.support.lattice
        for row in r.rows:
            assert row.multiplicity == abs(lat.mobius(row.label, lat.top))

    def test_multiplicity_inversion(self):
        s = braid_face_semigroup(3)
        st = build_support(s, s.claimed_support)
        from lrbwalk.lrb import chamber_counts
        m = multiplicities(st.lattice, chamber_counts(s, st))
        assert sum(m.values()) == 6 and m["123"] == 2 and m["1|2|3"] == 1

    def test_branching_table(self):
        s = branching_lrb(example_digraph())
        r = brown_spectrum(s, generic_weights(s))
        m = {x.label: x.multiplicity for x in r.rows}
        assert m == {"{}": 2, "{1}": 3, "{3}": 1, "{1,3}": 1, "{1,2}": 1, "{2,3}": 0,
                     "{1,2,3}": 1}
        assert r.row("{1}").symbolic == ["w[a]"]


CASES = {
    "braid3": lambda: braid_face_semigroup(3),
    "braid4": lambda: braid_face_semigroup(4),
    "library3": lambda: library_fiber([(1, 2), (3,)]),
    "library4": lambda: library_fiber([(1, 2), (3, 4)]),
    "complexified3": lambda: complex_face_semigroup(ComplexifiedArrangement(braid_arrangement(3))),
    "branching": lambda: branching_lrb(example_digraph()),
}


class TestOracles:
    @pytest.mark.parametrize("name", sorted(CASES))
    def test_charpoly_and_diag(self, name, rng):
        s = CASES[name]()
        for weights in (generic_weights(s), generic_weights(s, rng)):
            r = brown_spectrum(s, weights)
            p = transition_matrix(s, weights)
            assert charpoly_check(p, r).ok
            assert diagonalizability_check(p, r).ok

    def test_trace_route(self):
        s = braid_face_semigroup(3)
        w = generic_weights(s)
        r, p = brown_spectrum(s, w), transition_matrix(s, w)
        res = charpoly_check(p, r, threshold=0)
        assert res.ok and res.method == "trace-moments"

    def test_trace_route_large(self, rng):
        s = braid_face_semigroup(4)
        w = generic_weights(s, rng)
        res = charpoly_check(transition_matrix(s, w), brown_spectrum(s, w))
        assert res.ok and res.method == "charpoly"
        res = charpoly_check(transition_matrix(s, w), brown_spectrum(s, w), threshold=10)
        assert res.ok and res.method == "trace-moments"

    def test_detects_wrong_prediction(self):
        s = braid_face_semigroup(3)
        w = generic_weights(s)
        r, p = brown_spectrum(s, w), transition_matrix(s, w)
        r.rows[-1].eigenvalue -= F(1, 100)
        assert not charpoly_check(p, r).ok
        assert not charpoly_check(p, r, threshold=0).ok
        assert not diagonalizability_check(p, r).ok

    def test_predicted_charpoly(self):
        s, w = library3()
        r, p = brown_spectrum(s, w), transition_matrix(s, w)
        assert predicted_charpoly(r) == charpoly(p.entries)


class TestStationary:
    def test_library(self):
        s, w = library3()
        res = stationary_distribution(transition_matrix(s, w), s, w)
        assert res.unique and res.generated is False
        assert res.distribution == {"1|2||3": F(3, 8), "2|1||3": F(3, 8),
                                    "3||1|2": F(1, 8), "3||2|1": F(1, 8)}

    def test_tsetlin(self):
        s = braid_face_semigroup(3)
        bw = {1: F(1, 2), 2: F(1, 3), 3: F(1, 6)}
        w = tsetlin_distribution(3, bw)
        res = stationary_distribution(transition_matrix(s, w), s, w)
        assert res.unique and res.generated is False
        # probability of order a|b|c is w_a * w_b / (1 - w_a)
        for lab, pi in res.distribution.items():
            a, b, _ = (int(x) for x in lab.split("|"))
            assert pi == bw[a] * bw[b] / (1 - bw[a])

    def test_reducible(self):
        s = braid_face_semigroup(3)
        res = stationary_distribution(transition_matrix(s, WeightDistribution({})))
        assert res.nullspace_dimension == 6 and res.distribution is None

    def test_generated_subsemigroup(self):
        s = braid_face_semigroup(3)
        assert generated_subsemigroup(s, []) == {"123"}
        assert len(generated_subsemigroup(s, ["1|23", "2|13", "3|12"])) == 10
        assert len(generated_subsemigroup(s, ["1|23", "2|13", "3|12", "12|3", "13|2", "23|1"])) == 13


class TestSimulation:
    def test_deterministic(self):
        s, w = library3()
        p = transition_matrix(s, w)
        a = simulate(p, "1|2||3", 500, seed=9)
        b = simulate(p, "1|2||3", 500, seed=9)
        assert a == b and a.burn_in == 50 and sum(a.counts.values()) == 450

    def test_zero_steps(self):
        s, w = library3()
        res = simulate(transition_matrix(s, w), "3||2|1", 0, seed=1)
        assert res.final == "3||2|1" and res.counts == {}
        assert res.empirical == {"3||2|1": 1}

    def test_bad_start(self):
        s, w = library3()
        with pytest.raises(SpectralError):
            simulate(transition_matrix(s, w), "nope", 10, seed=1)

    def test_converges(self):
        s = braid_face_semigroup(3)
        w = tsetlin_distribution(3, {1: F(1, 2), 2: F(1, 3), 3: F(1, 6)})
        p = transition_matrix(s, w)
        pi = stationary_distribution(p).distribution
        res = simulate(p, "3|2|1", 40000, seed=2)
        assert total_variation(res.empirical, pi) < F(2, 100)

    def test_respects_zero_entries(self):
        s = braid_face_semigroup(3)
        w = tsetlin_distribution(3, {1: F(1)})
        res = simulate(transition_matrix(s, w), "3|2|1", 50, seed=3, burn_in=0)
        assert set(res.counts) == {"1|3|2"}
