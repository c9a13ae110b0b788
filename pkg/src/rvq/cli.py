"""Command-line front end.

Exit codes: 0 success / affirmative, 1 semantic negative (invalid input
data, reducible, unknown, failed verification), 2 usage errors. Machine
output is JSON-lines under --json; identical invocations print identical
bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import components, cover, extensions, groups, homology, induction, strata
from .errors import RVQError
from .gp import parse_gp, validate


def _gp_arg(text):
    return parse_gp(text)


def _emit(args, record, human):
    if args.json:
        sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        sys.stdout.write(human + "\n")


def cmd_validate(args):
    gp = _gp_arg(args.gp)
    report = validate(gp)
    rec = {"gp": gp.encode(), "genuine": report.is_genuine,
           "strict": report.is_strict, "convention": report.convention_ok,
           "violations": list(report.violations)}
    kind = "genuine permutation" if report.is_genuine \
        else "strict generalized permutation"
    human = "%s: %s; convention %s" % (
        gp.encode(), kind, "ok" if report.convention_ok else "VIOLATED")
    if report.violations:
        human += " (%s)" % "; ".join(report.violations)
    _emit(args, rec, human)
    return 0 if report.convention_ok else 1


def cmd_stratum(args):
    gp = _gp_arg(args.gp)
    sig = strata.stratum_signature(gp)
    rec = {"gp": gp.encode(), "orders": list(sig.orders), "genus": sig.genus,
           "genuine": gp.is_genuine}
    if gp.is_genuine:
        human = "%s [as %s] genus=%d" % (sig.abelian_str(), sig, sig.genus)
    else:
        human = "%s genus=%d" % (sig, sig.genus)
    _emit(args, rec, human)
    return 0


def cmd_class(args):
    gp = _gp_arg(args.gp)
    rc = induction.load_or_enumerate(gp, limit=args.budget,
                                     reduced_labels=args.reduced,
                                     use_cache=not args.no_cache)
    rec = {"base": rc.base.encode(), "vertices": len(rc),
           "arrows": rc.arrow_count(), "complete": rc.complete,
           "reduced": rc.reduced_labels}
    _emit(args, rec, "class of %s: %d vertices, %d arrows, complete=%s"
          % (rc.base.encode(), len(rc), rc.arrow_count(), rc.complete))
    if args.dot:
        text = induction.export_graph(rc)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            with open(args.dot, "w") as fh:
                fh.write(text)
    return 0


def cmd_cocycle(args):
    gp = _gp_arg(args.gp)
    if args.minus:
        mat, end = homology.kz_minus_walk(gp, args.walk)
        letters = gp.both_rows_letters()
    else:
        mat, end = homology.kz_walk(gp, args.walk)
        letters = gp.alphabet
    rec = {"gp": gp.encode(), "walk": args.walk, "letters": list(letters),
           "matrix": [list(r) for r in mat], "end": end.encode()}
    rows = "\n".join(" ".join(str(x) for x in row) for row in mat)
    _emit(args, rec, "letters: %s\n%s\nend: %s"
          % (" ".join(letters), rows, end.encode()))
    return 0


def cmd_cover(args):
    gp = _gp_arg(args.gp)
    cs = cover.cover_stratum(gp)
    rec = {"gp": gp.encode(), "cover_orders": list(cs.orders),
           "cover_genus": cs.genus, "marked_points": cs.marked_points,
           "minus_eligible": cs.minus_eligible}
    _emit(args, rec, "%s genus=%d minus_eligible=%s"
          % (cs, cs.genus, cs.minus_eligible))
    return 0


def cmd_extend(args):
    gp = _gp_arg(args.gp)
    orders = [int(x) for x in args.orders.split(",")]
    if len(orders) == 2:
        res = extensions.split_singularity(gp, args.singularity, orders[0])
        out = res.witness.extended
    elif len(orders) == 3:
        out = extensions.split_even_zero(gp, args.singularity, *orders)
    else:
        raise RVQError("--orders takes two or three integers")
    sig = strata.stratum_signature(out)
    rec = {"gp": gp.encode(), "extended": out.encode(),
           "orders": list(sig.orders), "genus": sig.genus}
    _emit(args, rec, "%s  [%s genus=%d]" % (out.encode(), sig, sig.genus))
    return 0


def cmd_search(args):
    gp = _gp_arg(args.gp)
    target = tuple(sorted((int(x) for x in args.target_stratum.split(",")),
                          reverse=True))
    rc = induction.enumerate_class(gp, limit=args.vertices,
                                   allow_truncated=True)
    vertices = rc.vertices[:args.vertices]

    def predicate(candidate):
        sig = strata.stratum_signature(candidate, cross_check=False)
        if sig.orders != target:
            return False
        if args.nonhyp:
            try:
                if components.hyperelliptic_test(candidate):
                    return False
            except RVQError:
                return False
        return True

    def precheck(candidate):
        # viable iff the target splits exactly one intermediate singularity
        sig = strata.stratum_signature(candidate, cross_check=False)
        remaining = list(target)
        extra = []
        for o in sig.orders:
            if o in remaining:
                remaining.remove(o)
            else:
                extra.append(o)
        return (len(extra) == 1 and len(remaining) == 2
                and sum(remaining) == extra[0])

    chains = extensions.search_extensions(
        vertices, predicate, letters=2,
        stratum_precheck=precheck, budget=args.budget)
    chains = chains[:args.max_results]
    for chain in chains:
        final = chain[-1].extended
        rec = {"extended": final.encode(),
               "base": chain[0].base.encode(),
               "letters": [w.letter for w in chain]}
        _emit(args, rec, final.encode())
    if not args.json:
        sys.stdout.write("%d witness chain(s)\n" % len(chains))
    return 0 if chains else 1


def cmd_identify(args):
    gp = _gp_arg(args.gp)
    label = components.identify_component(gp, budget=args.budget)
    _emit(args, {"gp": gp.encode(), "component": label}, label)
    return 0 if label != components.UNKNOWN else 1


def cmd_group(args):
    gp = _gp_arg(args.gp)
    rc = induction.load_or_enumerate(gp, limit=args.budget,
                                     use_cache=not args.no_cache)
    res = groups.rauzy_veech_group_modp(
        gp, rc, args.mod, cycles=args.cycles, maxlen=args.maxlen,
        seed=args.seed, minus=args.minus, budget=args.budget)
    rec = {"gp": gp.encode(), "p": res.p, "order": res.order,
           "index": res.index, "genus": res.genus,
           "generators": res.generators_used, "cycles": args.cycles,
           "maxlen": args.maxlen, "seed": args.seed, "minus": args.minus}
    _emit(args, rec,
          "mod-%d closure: order %d, index %d in Sp(%d, F_%d) "
          "[%d generators from %d cycles, maxlen %d, seed %d]"
          % (res.p, res.order, res.index, 2 * res.genus, res.p,
             res.generators_used, args.cycles, args.maxlen, args.seed))
    return 0


def _parse_rows(spec_text):
    rows = set()
    for part in spec_text.split(","):
        if "-" in part:
            a, b = part.split("-")
            rows.update(range(int(a), int(b) + 1))
        else:
            rows.add(int(part))
    return sorted(rows)


def cmd_verify_table(args):
    rows = _parse_rows(args.rows) if args.rows else None
    reports = components.verify_extension_table(rows)
    bad = 0
    for r in reports:
        rec = {"row": r.row, "start": r.start, "start_found": r.start_found,
               "end_orders": list(r.end_orders),
               "stratum_found": list(r.stratum_found),
               "irreducible": r.irreducible_ok, "convention": r.convention_ok,
               "chain": r.chain_ok, "hyperelliptic": r.hyperelliptic,
               "passed": r.passed}
        human = "row %2d: %s -> Q(%s)%s: %s" % (
            r.row, r.start, ",".join(str(o) for o in r.end_orders),
            "^" + _flavour(r.row), "PASS" if r.passed else "FAIL")
        _emit(args, rec, human)
        if not r.passed:
            bad += 1
    return 1 if bad else 0


def _flavour(row):
    return components.table1_rows()[row - 1].flavour


def _common_flags(parser, suppress=False):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true",
                        **({"default": d} if suppress else {}),
                        help="machine output as JSON lines")
    parser.add_argument("--threads", type=int,
                        default=d if suppress else 1,
                        help="worker hint (computations are deterministic)")
    parser.add_argument("--budget", type=int,
                        default=d if suppress else induction.DEFAULT_BUDGET,
                        help="vertex/element budget for enumerations")
    parser.add_argument("--cache-dir",
                        default=d if suppress else None,
                        help="class cache directory (default ./.rvq-cache)")
    parser.add_argument("--no-cache", action="store_true",
                        **({"default": d} if suppress else {}),
                        help="skip the on-disk class cache")


def main(argv=None):
    top = argparse.ArgumentParser(
        prog="rvq",
        description="Rauzy-Veech machinery for generalized permutations")
    _common_flags(top)
    common = argparse.ArgumentParser(add_help=False)
    _common_flags(common, suppress=True)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="classify and check the convention")
    p.add_argument("gp")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stratum", parents=[common], help="singularity orders and genus")
    p.add_argument("gp")
    p.set_defaults(func=cmd_stratum)

    p = sub.add_parser("class", parents=[common], help="enumerate the Rauzy class")
    p.add_argument("gp")
    p.add_argument("--reduced", action="store_true",
                   help="enumerate relabeled normal forms")
    p.add_argument("--dot", help="write DOT digraph to a file ('-' = stdout)")
    p.set_defaults(func=cmd_class)

    p = sub.add_parser("cocycle", parents=[common], help="transition matrix along a walk")
    p.add_argument("gp")
    p.add_argument("--walk", required=True,
                   help="steps over t, b (forward) and T, B (reversed)")
    p.add_argument("--minus", action="store_true",
                   help="double-cover matrices on both-rows letters")
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("cover", parents=[common], help="orientation double cover data")
    p.add_argument("gp")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("extend", parents=[common], help="split a conical point")
    p.add_argument("gp")
    p.add_argument("--singularity", type=int, required=True,
                   help="1-based position selecting the turning orbit")
    p.add_argument("--orders", required=True,
                   help="m11,m12 for one split or m11,m12,m13 for the "
                        "even-order double split")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("search", parents=[common], help="scan two-letter extensions")
    p.add_argument("--from", dest="gp", required=True)
    p.add_argument("--target-stratum", required=True,
                   help="comma-separated orders, e.g. 6,-1,-1")
    p.add_argument("--nonhyp", action="store_true")
    p.add_argument("--vertices", type=int, default=16,
                   help="class vertices to scan")
    p.add_argument("--max-results", type=int, default=4)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("identify", parents=[common], help="name the connected component")
    p.add_argument("gp")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("group", parents=[common], help="mod-p closure of the cycle matrices")
    p.add_argument("gp")
    p.add_argument("--mod", type=int, default=2)
    p.add_argument("--minus", action="store_true")
    p.add_argument("--cycles", type=int, default=200)
    p.add_argument("--maxlen", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("verify-table", parents=[common], help="check the extension table rows")
    p.add_argument("--rows", help="e.g. 1-12 or 1,3,5")
    p.set_defaults(func=cmd_verify_table)

    args = top.parse_args(argv)
    if args.cache_dir:
        os.environ[induction.CACHE_ENV] = args.cache_dir
    try:
        return args.func(args)
    except RVQError as exc:
        sys.stderr.write("%s: %s\n" % (type(exc).__name__, exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
