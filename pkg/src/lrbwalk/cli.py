"""lrbwalk: build LRB systems, print faces, spectra, counts and simulations.

Exit codes: 0 ok, 2 parse error, 3 capacity exceeded, 4 a requested check failed.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from . import arrangement as ar
from . import complexified as cx
from . import greedoid as gr
from . import partitions as pt
from .linalg import format_fraction
from .lrb import build_support
from .poset import StructureError
from .spectral import (brown_spectrum, charpoly_check, diagonalizability_check, format_terms,
                       simulate, stationary_distribution, total_variation, transition_matrix,
                       transition_terms)
from .weights import WeightDistribution

EXIT_PARSE, EXIT_CAPACITY, EXIT_CHECK = 2, 3, 4


class CheckFailed(Exception):
    pass


class System:
    """A semigroup plus the builtin data needed by the subcommands."""

    def __init__(self, kind, semigroup=None, **extra):
        self.kind = kind
        self.semigroup = semigroup
        self.__dict__.update(extra)


def _read(path):
    with open(path) as fh:
        return fh.read()


def parse_classes(text):
    """``"12|3"`` or ``"1,4|2,3"`` -> tuple of classes."""
    return pt.parse_ordered(text)


def parse_shelves(text):
    """Shelves top-first, order kept: ``"11,14,2|6,13"``."""
    wide = "," in text
    return tuple(tuple(int(x) for x in (s.split(",") if wide else s)) for s in text.split("|"))


def build_system(args):
    if args.braid is not None:
        a = ar.braid_arrangement(args.braid)
        return System("braid", pt.braid_face_semigroup(args.braid), n=args.braid, arrangement=a)
    if args.complexified_braid is not None:
        c = cx.ComplexifiedArrangement(ar.braid_arrangement(args.complexified_braid))
        return System("complex", cx.complex_face_semigroup(c), complexified=c)
    if args.kequal is not None:
        return System("kequal", None, n=args.kequal[0], k=args.kequal[1])
    if args.library is not None:
        classes = parse_classes(args.library)
        n = sum(len(c) for c in classes)
        return System("library", None, classes=pt.normalize_classes(classes), n=n)
    if args.arrangement is not None:
        a = ar.RealArrangement.from_json(_read(args.arrangement))
        return System("arrangement", ar.face_semigroup(a), arrangement=a)
    if args.complexified is not None:
        c = cx.ComplexifiedArrangement(ar.RealArrangement.from_json(_read(args.complexified)))
        return System("complex", cx.complex_face_semigroup(c), complexified=c)
    path = args.greedoid or args.digraph
    if path is not None:
        data = json.loads(_read(path))
        if isinstance(data, dict) and "edges" in data:
            d = gr.RootedDigraph.from_json(data)
            return System("branching", gr.branching_lrb(d), digraph=d)
        return System("greedoid", gr.greedoid_lrb(gr.GreedoidLanguage.from_json(data)))
    raise ValueError("no system given")


def semigroup_of(system):
    if system.semigroup is None:
        if system.kind == "library":
            system.semigroup = pt.library_fiber(system.classes)
        else:
            raise ValueError(f"{system.kind} has no semigroup")
    return system.semigroup


# --- weights -------------------------------------------------------------------

def parse_subset_weights(text):
    """``"1=1/6;2=1/6;1,2=1/6"`` -> {frozenset: Fraction}."""
    out = {}
    for item in filter(None, (x.strip() for x in text.split(";"))):
        key, _, val = item.partition("=")
        if not val:
            raise ValueError(f"bad subset weight {item!r}")
        e = frozenset(int(x) for x in key.split(",") if x.strip())
        out[e] = out.get(e, Fraction(0)) + Fraction(val.strip())
    return out


def _proper_subsets(n):
    from itertools import combinations
    return [frozenset(c) for r in range(1, n) for c in combinations(range(1, n + 1), r)]


def _random_values(seed, count):
    rng = random.Random(seed)
    raw = [Fraction(rng.randint(1, 9)) for _ in range(count)]
    total = sum(raw)
    return [v / total for v in raw]


def _generic_names(s, labels):
    if getattr(s, "greedoid", None) is not None:
        return {lab: f"w_{lab}" for lab in labels}
    return {lab: f"w[{lab}]" for lab in labels}


def build_weights(args, system):
    s = semigroup_of(system)
    if args.weights:
        w = WeightDistribution.from_json(_read(args.weights))
        return WeightDistribution(w.weights, _generic_names(s, w.weights))
    subset = parse_subset_weights(args.subset_weights) if args.subset_weights else None
    if args.book_weights:
        vals = [Fraction(x) for x in args.book_weights.split(",")]
        subset = {frozenset([i + 1]): v for i, v in enumerate(vals)}
    if system.kind in ("library", "braid"):
        if subset is None:
            subs = _proper_subsets(system.n)
            vals = (_random_values(args.random_weights, len(subs)) if args.random_weights is not None
                    else [Fraction(1, len(subs))] * len(subs))
            subset = dict(zip(subs, vals))
        if system.kind == "library":
            return pt.library_subset_distribution(system.classes, subset)
        return pt.subset_distribution(system.n, subset)
    if subset is not None:
        raise ValueError("subset weights apply to --braid and --library only")
    maxes = set(s.maximal())
    labels = [x for x in s.elements if x != s.identity and x not in maxes]
    vals = (_random_values(args.random_weights, len(labels)) if args.random_weights is not None
            else [Fraction(1, len(labels))] * len(labels))
    return WeightDistribution(dict(zip(labels, vals)), _generic_names(s, labels))


# --- subcommands ---------------------------------------------------------------

def cmd_faces(args, out):
    system = build_system(args)
    if system.kind == "kequal":
        rep = ar.kequal_subcomplex(system.n, system.k)
        rows = [(f, sum(len(b) - 1 for b in pt.parse_ordered(f)), "") for f in rep.faces]
    else:
        s = semigroup_of(system)
        support = build_support(s, getattr(s, "claimed_support", None))
        lat = support.lattice
        rows = [(x, lat.rank(support.supp[x]), support.supp[x]) for x in s.elements]
        rows.sort(key=lambda r: r[1])
    if args.json:
        out.write(json.dumps([{"element": e, "rank": r, "support": sp} for e, r, sp in rows],
                             indent=2) + "\n")
    else:
        for e, r, sp in rows:
            out.write(f"{e}\t{r}\t{sp}".rstrip("\t") + "\n")
    return 0


def cmd_spectrum(args, out):
    system = build_system(args)
    s = semigroup_of(system)
    w = build_weights(args, system)
    report = brown_spectrum(s, w)
    p = transition_matrix(s, w)
    checks = [c.strip() for c in args.check.split(",")] if args.check else []
    unknown = set(checks) - {"charpoly", "diag"}
    if unknown:
        raise ValueError(f"unknown check {sorted(unknown)[0]!r}")
    results = {}
    if "charpoly" in checks:
        results["charpoly"] = charpoly_check(p, report)
    if "diag" in checks:
        results["diag"] = diagonalizability_check(p, report)
    if args.json:
        payload = json.loads(report.to_json())
        if args.symbolic:
            terms = transition_terms(s, w)
            payload["transitions"] = [[format_terms(terms.get((c, d), [])) for d in p.states]
                                      for c in p.states]
            payload["states_order"] = list(p.states)
        payload["checks"] = {k: {"ok": v.ok, "method": v.method, "detail": v.detail}
                             for k, v in results.items()}
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(report.to_tsv() + "\n")
        if args.symbolic:
            terms = transition_terms(s, w)
            out.write("\ntransitions (row = from, column = to)\n")
            out.write("\t" + "\t".join(p.states) + "\n")
            for c in p.states:
                out.write(c + "\t" + "\t".join(format_terms(terms.get((c, d), []))
                                               for d in p.states) + "\n")
        for k, v in results.items():
            out.write(f"{k} {'OK' if v.ok else 'FAIL'} ({v.method})"
                      + (f": {v.detail}" if v.detail else "") + "\n")
    if any(not v.ok for v in results.values()):
        raise CheckFailed("; ".join(f"{k}: {v.detail}" for k, v in results.items() if not v.ok))
    return 0


def cmd_counts(args, out):
    system = build_system(args)
    failed = []
    if system.kind == "kequal":
        rep = ar.kequal_subcomplex(system.n, system.k)
        out.write(f"faces {rep.count}\n")
        out.write("f-vector " + " ".join(f"{d}:{c}" for d, c in rep.f_vector.items()) + "\n")
        out.write(f"euler {rep.euler_characteristic}\n")
        return 0
    wanted = {k for k in ("zaslavsky", "max_cells", "betti") if getattr(args, k)}
    if system.kind in ("braid", "arrangement"):
        if not wanted:
            wanted = {"zaslavsky"}
        if wanted - {"zaslavsky"}:
            raise ValueError("--max-cells and --betti need a complexified system")
        regions, mob = ar.zaslavsky_count(system.arrangement)
        out.write(f"regions {regions} = mobius {mob}\n")
        gz = ar.span_zaslavsky_check(system.arrangement)
        out.write(_conditions_line(gz))
        if regions != mob or not gz.ok:
            failed.append("zaslavsky")
    elif system.kind == "complex":
        c = system.complexified
        wanted = wanted or {"zaslavsky", "max_cells", "betti"}
        if "max_cells" in wanted or "zaslavsky" in wanted:
            count, mob = cx.max_cell_count(c)
            out.write(f"max cells {count} = mobius {mob}\n")
            out.write(f"C_A cells {len(cx.c_cells(c))}\n")
            if count != mob:
                failed.append("max-cells")
        if "zaslavsky" in wanted:
            gz = cx.span_zaslavsky_check(c)
            out.write(_conditions_line(gz))
            if not gz.ok:
                failed.append("zaslavsky")
        if "betti" in wanted:
            out.write("betti " + " ".join(map(str, cx.betti_numbers(c))) + "\n")
    else:
        raise ValueError(f"counts are not defined for {system.kind} systems")
    if failed:
        raise CheckFailed(", ".join(failed))
    return 0


def _conditions_line(report):
    return "conditions " + " ".join(
        f"{k.split('_')[0]}:{'ok' if v else 'FAIL'}" for k, v in report.conditions.items()) + "\n"


def cmd_simulate(args, out):
    system = build_system(args)
    if args.apply_subset:
        if system.kind != "library":
            raise ValueError("--apply-subset needs a --library system")
        state = _library_start(args, system)
        for spec in args.apply_subset:
            e = {int(x) for x in spec.split(",") if x.strip()}
            state = pt.apply_borrow(state, e)
        out.write(state.render() + "\n")
        return 0
    s = semigroup_of(system)
    w = build_weights(args, system)
    p = transition_matrix(s, w)
    if args.start is None:
        start = p.states[0]
    elif system.kind == "library":
        start = _library_start(args, system).label()
    else:
        start = args.start
    result = simulate(p, start, args.steps, args.seed, burn_in=args.burn_in)
    out.write(f"start {result.start}\nsteps {result.steps}\nburn-in {result.burn_in}\n")
    out.write(f"final {result.final}\n")
    emp = result.empirical
    stat = stationary_distribution(p, s, w)
    out.write("state\tempirical\tstationary\n")
    for st in p.states:
        pi = format_fraction(stat.distribution[st]) if stat.unique else "-"
        out.write(f"{st}\t{float(emp.get(st, 0)):.6f}\t{pi}\n")
    out.write(f"stationary nullspace dimension {stat.nullspace_dimension}; "
              f"weights generate the semigroup: {'yes' if stat.generated else 'no'}\n")
    if stat.unique and result.steps:
        out.write(f"total variation {float(total_variation(emp, stat.distribution)):.6f}\n")
    return 0


def _library_start(args, system):
    if args.state:
        return pt.LibraryState.from_json(_read(args.state))
    if args.start is None:
        raise ValueError("a library start needs --start SHELVES or --state FILE")
    return pt.LibraryState(system.classes, parse_shelves(args.start))


# --- argument parsing -------------------------------------------------------------

def _add_system(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--braid", type=int, metavar="N", help="braid arrangement faces (ordered partitions)")
    g.add_argument("--complexified-braid", type=int, metavar="N",
                   help="complexified braid arrangement (complex sign vectors)")
    g.add_argument("--kequal", type=int, nargs=2, metavar=("N", "K"),
                   help="k-equal subcomplex of the permutohedron")
    g.add_argument("--library", metavar="CLASSES", help='shelf classes, e.g. "12|3"')
    g.add_argument("--arrangement", metavar="FILE", help="real arrangement JSON")
    g.add_argument("--complexified", metavar="FILE", help="complexify a real arrangement JSON")
    g.add_argument("--greedoid", metavar="FILE", help="basic words list, or a rooted digraph JSON")
    g.add_argument("--digraph", metavar="FILE", help="rooted digraph JSON (branching greedoid)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _add_weights(p):
    p.add_argument("--weights", metavar="FILE", help='JSON {"weights": {label: "p/q"}}')
    p.add_argument("--subset-weights", metavar="SPEC", help='e.g. "1=1/6;2=1/6;1,2=1/6"')
    p.add_argument("--book-weights", metavar="LIST", help='Tsetlin weights "w1,w2,..."')
    p.add_argument("--random-weights", type=int, metavar="SEED",
                   help="seeded random positive rational weights summing to 1")


def make_parser():
    parser = argparse.ArgumentParser(prog="lrbwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("faces", help="list elements with rank and support")
    _add_system(p)
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("spectrum", help="predicted eigenvalues and exact checks")
    _add_system(p)
    _add_weights(p)
    p.add_argument("--symbolic", action="store_true", help="also print the symbolic transition table")
    p.add_argument("--check", metavar="LIST", help="comma list of: charpoly, diag")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("counts", help="Zaslavsky, maximal-cell, Betti and k-equal counts")
    _add_system(p)
    p.add_argument("--zaslavsky", action="store_true")
    p.add_argument("--max-cells", dest="max_cells", action="store_true")
    p.add_argument("--betti", action="store_true")
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("simulate", help="seeded simulation of the walk")
    _add_system(p)
    _add_weights(p)
    p.add_argument("--start", metavar="STATE", help="start state label (library: shelves)")
    p.add_argument("--state", metavar="FILE", help="library state JSON")
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--apply-subset", action="append", metavar="E",
                   help="apply a borrow of E to a library state (repeatable)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except pt.CapacityError as exc:
        print(f"lrbwalk: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except CheckFailed as exc:
        print(f"lrbwalk: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ValueError, KeyError, OSError, json.JSONDecodeError, StructureError) as exc:
        print(f"lrbwalk: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
