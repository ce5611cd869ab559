import random
from fractions import Fraction
from itertools import combinations
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrbwalk.lrb import build_support, verify_lrb
from lrbwalk.partitions import (CapacityError, LibraryState, PartitionError, apply_borrow,
                                apply_face, apply_interval, borrow_interval,
                                braid_face_semigroup, braid_interval_compose,
                                compose_intervals, compose_ordered_partitions, format_interval,
                                format_ordered, library_fiber, library_spectrum_labels,
                                library_states, library_subset_distribution, ordered_partitions,
                                parse_interval, parse_ordered, partition_lattice, refinements,
                                set_partitions, subset_distribution, tsetlin_distribution,
                                two_block)
from lrbwalk.poset import find_isomorphism
from lrbwalk.spectral import brown_spectrum

CLASSES14 = [(1, 4, 5, 7), (2, 8, 11, 12, 14), (6, 13), (3, 9, 10)]
STATE46 = LibraryState(CLASSES14, ((11, 14, 2, 12, 8), (6, 13), (4, 7, 5, 1), (10, 9, 3)))


@st.composite
def ordered_partition(draw, n=5):
    perm = draw(st.permutations(list(range(1, n + 1))))
    cuts = draw(st.lists(st.booleans(), min_size=n - 1, max_size=n - 1))
    blocks, cur = [], [perm[0]]
    for x, cut in zip(perm[1:], cuts):
        if cut:
            blocks.append(tuple(sorted(cur)))
            cur = []
        cur.append(x)
    blocks.append(tuple(sorted(cur)))
    return tuple(blocks)


class TestFormats:
    def test_round_trip(self):
        assert format_ordered(parse_ordered("257|3|146")) == "257|3|146"
        assert format_interval(*parse_interval("37|1||256|4")) == "37|1||256|4"

    def test_wide(self):
        p = parse_ordered("11,14|2,1")
        assert p == ((11, 14), (1, 2)) and format_ordered(p) == "11,14|1,2"

    def test_bad(self):
        with pytest.raises(PartitionError):
            parse_ordered("12|2")
        with pytest.raises(PartitionError):
            parse_ordered("12||3")


class TestComposition:
    def test_golden(self):
        x, y = parse_ordered("257|3|146"), parse_ordered("17|25|346")
        assert format_ordered(compose_ordered_partitions(x, y)) == "7|25|3|1|46"

    def test_identity(self):
        one = ((1, 2, 3),)
        for p in ordered_partitions(range(1, 4)):
            assert compose_ordered_partitions(one, p) == p
            assert compose_ordered_partitions(p, p) == p

    def test_ground_mismatch(self):
        with pytest.raises(PartitionError):
            compose_ordered_partitions(((1, 2),), ((1, 2, 3),))

    @given(ordered_partition(), ordered_partition(), ordered_partition())
    def test_band_laws(self, x, y, z):
        c = compose_ordered_partitions
        assert c(c(x, y), x) == c(x, y)
        assert c(c(x, y), z) == c(x, c(y, z))


class TestBraid:
    @pytest.mark.parametrize("n,size,chambers", [(2, 3, 2), (3, 13, 6), (4, 75, 24)])
    def test_sizes(self, n, size, chambers):
        s = braid_face_semigroup(n)
        assert len(s) == size and len(s.maximal()) == chambers
        assert s.identity == "".join(map(str, range(1, n + 1)))

    def test_support(self):
        s = braid_face_semigroup(4)
        assert verify_lrb(s).ok
        st = build_support(s, s.claimed_support)
        assert find_isomorphism(st.lattice, partition_lattice(4)) is not None

    def test_capacity(self):
        with pytest.raises(CapacityError):
            braid_face_semigroup(8)

    def test_partition_lattice(self):
        assert [len(partition_lattice(n)) for n in (1, 2, 3, 4)] == [1, 2, 5, 15]
        assert len(list(set_partitions(range(5)))) == 52


class TestIntervals:
    def test_example(self):
        a, b = parse_interval("37|1||256|4"), parse_interval("1|3|5||4|7||6|2")
        assert format_interval(*compose_intervals(a, b)) == "3|1||7||5||4||6|2"
        assert format_interval(*braid_interval_compose(a, b)) == "3|1||7||5||4||6|2"

    def test_identity_and_idempotence(self):
        e = parse_interval("1234567")
        a = parse_interval("37|1||256|4")
        assert compose_intervals(e, a) == a
        assert compose_intervals(a, a) == a

    def test_two_routes_agree(self):
        items = range(1, 5)
        ints = [(q, t) for q in ordered_partitions(items) for t in refinements(q)]
        rng = random.Random(3)
        for _ in range(2000):
            a, b = rng.choice(ints), rng.choice(ints)
            assert compose_intervals(a, b) == braid_interval_compose(a, b)


class TestDistributions:
    def test_tsetlin(self):
        w = tsetlin_distribution(3, {1: Fraction(1, 2), 2: Fraction(1, 3), 3: Fraction(1, 6)})
        assert set(w.weights) == {"1|23", "2|13", "3|12"}
        assert w.names["3|12"] == "w_3"

    def test_subset(self):
        w = subset_distribution(4, {(1, 3): Fraction(1, 2)})
        assert w.weights == {"13|24": Fraction(1, 2)}
        assert w.names["13|24"] == "w_{1,3}"

    def test_subset_equals_tsetlin(self):
        bw = {1: Fraction(1, 5), 2: Fraction(2, 5), 3: Fraction(2, 5)}
        a = tsetlin_distribution(3, bw)
        b = subset_distribution(3, {(k,): v for k, v in bw.items()})
        assert a.weights == b.weights

    def test_invalid(self):
        with pytest.raises(ValueError):
            tsetlin_distribution(3, {1: Fraction(2, 3), 2: Fraction(2, 3)})
        with pytest.raises(ValueError):
            tsetlin_distribution(3, {1: Fraction(-1, 3)})

    def test_move_to_front(self):
        assert apply_face((2, 1, 3), two_block(3, [3])) == (3, 2, 1)
        assert apply_face((4, 3, 2, 1), two_block(4, [1, 3])) == (3, 1, 4, 2)


class TestLibrary:
    def test_state_validation(self):
        with pytest.raises(PartitionError):
            LibraryState([(1, 2), (3,)], ((1,), (2, 3)))
        with pytest.raises(PartitionError):
            LibraryState([(1, 2), (3,)], ((1, 2, 2), (3,)))

    def test_json(self):
        assert LibraryState.from_json(STATE46.to_json()) == STATE46

    def test_transition_47(self):
        q = parse_ordered("1,4,5,7|2,3,8,9,10,11,12,14|6,13")
        t = parse_ordered("4,5|1,7|8,9,12|14|2,3,10,11|6,13")
        new = apply_interval(STATE46, q, t)
        assert new.render() == "4 5 7 1\n12 8 14 11 2\n9 10 3\n6 13"

    def test_borrow_48(self):
        new = apply_borrow(STATE46, {1, 2, 3, 4})
        assert new.render() == "2 11 14 12 8\n4 1 7 5\n3 10 9\n6 13"

    def test_trivial_borrows(self):
        assert apply_borrow(STATE46, set()) == STATE46
        assert apply_borrow(STATE46, set(range(1, 15))) == STATE46

    def test_identity_interval(self):
        one = (tuple(range(1, 15)),)
        assert apply_interval(STATE46, one, one) == STATE46

    def test_idempotent_action(self):
        q, t = borrow_interval(STATE46.classes, {2, 6, 9})
        once = apply_interval(STATE46, q, t)
        assert apply_interval(once, q, t) == once

    def test_borrow_prose_rule(self):
        """Direct shelf re-sorting and in-shelf move-to-front."""
        def prose(state, e):
            touched = [s for s in state.shelves if set(s) & e]
            rest = [s for s in state.shelves if not set(s) & e]
            shelves = [tuple([b for b in s if b in e] + [b for b in s if b not in e])
                       for s in touched] + rest
            return LibraryState(state.classes, tuple(shelves))
        rng = random.Random(11)
        states = library_states([(1, 2), (3, 4, 5), (6,)])
        for _ in range(300):
            s = rng.choice(states)
            e = {x for x in range(1, 7) if rng.random() < 0.4}
            assert apply_borrow(s, e) == prose(s, e)

    @pytest.mark.parametrize("classes", [[(1, 2), (3,)], [(1, 2), (3, 4)], [(1,), (2,), (3,)],
                                         [(1, 2, 3)], [(1, 3), (2,), (4, 5)]])
    def test_state_count(self, classes):
        states = library_states(classes)
        want = factorial(len(classes)) * prod(factorial(len(c)) for c in classes)
        assert len(states) == want
        s = library_fiber(classes)
        assert sorted(s.maximal()) == sorted(x.label() for x in states)

    def test_fiber_n3(self):
        s = library_fiber([(1, 2), (3,)])
        assert len(s) == 19 and verify_lrb(s).ok
        assert sorted(s.maximal()) == ["1|2||3", "2|1||3", "3||1|2", "3||2|1"]

    def test_single_class_is_braid(self):
        s = library_fiber([(1, 2, 3)])
        assert len(s) == 13 and len(s.maximal()) == 6

    def test_singletons(self):
        s = library_fiber([(1,), (2,), (3,)])
        assert len(s) == 37 and len(s.maximal()) == 6
        assert all(x.count("||") == 2 for x in s.maximal())

    def test_support_lattice(self):
        s = library_fiber([(1, 2), (3,)])
        st = build_support(s, s.claimed_support)
        assert len(st.lattice) == 7

    def test_capacity(self):
        with pytest.raises(CapacityError):
            library_fiber([(1, 2, 3, 4), (5, 6, 7, 8)])

    def test_weights_land_in_fiber(self):
        s = library_fiber([(1, 2), (3,)])
        w = library_subset_distribution(s.classes, {e: Fraction(1, 6) for e in
                                                    [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]})
        assert set(w.weights) <= set(s.elements)
        assert w.names["13|2"] == "w_{1,3}" and w.names["3||12"] == "w_3"


class TestSpectrumLabels:
    def test_worked_example(self):
        rows = library_spectrum_labels([(1, 2), (3,)])
        assert len(rows) == 4
        got = {r.label(): [sorted(e) for e in r.subsets] for r in rows}
        assert got["[123,12|3]"] == []
        assert got["[123,1|2|3]"] == [[1, 3], [2, 3]]
        assert got["[12|3,12|3]"] == [[3], [1, 2]]
        assert len(got["[12|3,1|2|3]"]) == 6
        assert all(r.multiplicity == 1 for r in rows)

    def test_single_class(self):
        rows = library_spectrum_labels([(1, 2, 3)])
        assert {r.label() for r in rows} == {f"[123,{b}]" for b in
                                             ["123", "1|23", "12|3", "13|2", "1|2|3"]}

    def test_multiplicities_sum(self):
        for classes in ([(1, 2), (3, 4)], [(1, 2, 3), (4,)], [(1,), (2,), (3,)]):
            rows = library_spectrum_labels(classes)
            assert sum(r.multiplicity for r in rows) == len(library_states(classes))


@pytest.mark.parametrize("classes", [[(1, 2), (3,)], [(1, 2), (3, 4)], [(1, 2, 3), (4,)],
                                     [(1,), (2,), (3,)], [(1, 3), (2,), (4,)]])
def test_spectrum_labels_match_brown(classes):
    """Closed-form multiplicities and eigenvalues agree with Moebius inversion."""
    rng = random.Random(len(classes) * 7 + sum(map(len, classes)))
    s = library_fiber(classes)
    n = sum(map(len, classes))
    subsets = [e for r in range(1, n) for e in combinations(range(1, n + 1), r)]
    vals = dict(zip(subsets, (Fraction(rng.randint(1, 9)) for _ in subsets)))
    total = sum(vals.values())
    vals = {e: v / total for e, v in vals.items()}
    report = brown_spectrum(s, library_subset_distribution(s.classes, vals))
    rows = library_spectrum_labels(classes)
    seen = set()
    for r in rows:
        got = report.row(r.label())
        assert got.multiplicity == r.multiplicity
        assert got.eigenvalue == sum((vals[tuple(sorted(e))] for e in r.subsets), Fraction(0))
        seen.add(r.label())
    assert all(x.multiplicity == 0 for x in report.rows if x.label not in seen)
