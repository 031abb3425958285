"""Command-line surface.

Subcommands: analyze, match, involution, factors, band {check,harem,
involution}, colour {solve,reduce}, gen, search-q4, search-on.  Reports
are deterministic for a fixed (input, seed, version); timing is only
included on request so reruns stay byte-identical.

Exit codes: 0 ok, 2 parse error, 3 invalid algebra, 4 unmet
precondition, 5 search budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import bands, colours, core, matching, transformations
from .errors import (
    BudgetExhausted,
    EntryOutOfRange,
    InvmatchError,
    NotAssociative,
    ParseError,
)

SCHEMA = "invmatch/report-v1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ALGEBRA = 3
EXIT_PRECONDITION = 4
EXIT_BUDGET = 5


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_algebra(path: str):
    """Band or Cayley file, auto-detected by the header token count."""
    text = _read(path)
    first = next(
        (ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")),
        "",
    )
    if len(first.split()) == 2:
        band = bands.parse_band(text)
        sg = bands.to_semigroup(band)
        kind = "band"
    else:
        band = None
        sg = core.parse_cayley(text)
        kind = "cayley"
    core.validate(sg)
    return {"kind": kind, "band": band, "semigroup": sg, "digest": _digest(text)}


def _report(args, command: str, payload: dict) -> dict:
    report = {"schema": SCHEMA, "command": command}
    report.update(payload)
    if getattr(args, "seed", None) is not None:
        report["seed"] = args.seed
    if getattr(args, "timing", False):
        report["timing_ms"] = round((time.perf_counter() - args._t0) * 1000, 3)
    return report


def _emit(args, report: dict, human_lines) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in human_lines:
            print(line)


def _violator_payload(sg, viol) -> dict | None:
    if viol is None:
        return None
    return {
        "elements": list(viol.elements),
        "labels": sg.labels_of(viol.elements),
        "image": list(viol.image),
        "image_labels": sg.labels_of(viol.image),
    }


# ---------------------------------------------------------------------------
# analyze / match / involution / factors


def cmd_analyze(args) -> int:
    loaded = _load_algebra(args.path)
    sg = loaded["semigroup"]
    struct = core.structure_report(sg)
    rep = matching.equivalence_report(sg)
    egg = core.green_relations(sg)
    payload = {
        "input": {"kind": loaded["kind"], "digest": loaded["digest"]},
        "order": sg.order,
        "structure": vars(struct),
        "d_class_sizes": sorted(len(b.elements) for b in egg.d_classes),
        "verdicts": {
            "has_matching": rep.has_matching,
            "hall_condition": rep.hall_ok,
            "factor_verdicts": list(rep.factor_verdicts),
            "quotient_verdicts": list(rep.quotient_verdicts),
            "has_involution_matching": matching.find_involution_matching(sg)
            is not None,
        },
        "witnesses": {
            "matching": list(rep.matching) if rep.matching else None,
            "h_preserving": list(rep.h_preserving) if rep.h_preserving else None,
            "hall_violator": _violator_payload(sg, rep.violator),
        },
    }
    human = [
        f"order {sg.order}; D-classes {payload['d_class_sizes']}",
        "structure: "
        + ", ".join(k for k, v in vars(struct).items() if v is True),
        f"permutation matching: {'present' if rep.has_matching else 'absent'}",
        f"involution matching: "
        f"{'present' if payload['verdicts']['has_involution_matching'] else 'absent'}",
    ]
    if rep.violator is not None:
        human.append(
            "hall violator: "
            + " ".join(sg.labels_of(rep.violator.elements))
            + " -> "
            + " ".join(sg.labels_of(rep.violator.image))
        )
    _emit(args, _report(args, "analyze", payload), human)
    return EXIT_OK


def cmd_match(args) -> int:
    loaded = _load_algebra(args.path)
    sg = loaded["semigroup"]
    p = matching.find_permutation_matching(sg)
    viol = matching.hall_violator(sg) if p is None else None
    payload = {
        "input": {"kind": loaded["kind"], "digest": loaded["digest"]},
        "order": sg.order,
        "verdicts": {"has_matching": p is not None},
        "witnesses": {
            "matching": list(p) if p else None,
            "hall_violator": _violator_payload(sg, viol),
        },
    }
    if p is not None:
        human = ["present", matching.format_matching(p).rstrip()]
    else:
        human = [
            "absent",
            "violator: "
            + " ".join(sg.labels_of(viol.elements))
            + " -> "
            + " ".join(sg.labels_of(viol.image)),
        ]
    _emit(args, _report(args, "match", payload), human)
    return EXIT_OK


def cmd_involution(args) -> int:
    loaded = _load_algebra(args.path)
    sg = loaded["semigroup"]
    p = matching.find_involution_matching(sg)
    payload = {
        "input": {"kind": loaded["kind"], "digest": loaded["digest"]},
        "order": sg.order,
        "verdicts": {"has_involution_matching": p is not None},
        "witnesses": {"involution": list(p) if p else None},
    }
    if args.oracle:
        oracle = matching.involution_backtracking(sg)
        payload["verdicts"]["oracle_agrees"] = (oracle is not None) == (
            p is not None
        )
    human = ["present" if p else "absent"]
    if p:
        human.append(matching.format_matching(p).rstrip())
    _emit(args, _report(args, "involution", payload), human)
    return EXIT_OK


def cmd_factors(args) -> int:
    loaded = _load_algebra(args.path)
    sg = loaded["semigroup"]
    factors = core.principal_factors(sg)
    rows = []
    for f in factors:
        band = bands.h_quotient(f)
        rows.append(
            {
                "d_class": f.source_d_class,
                "size": len(f.members),
                "zero_adjoined": f.zero_adjoined,
                "quotient": f"{band.m}x{band.n}",
                "has_matching": matching.find_permutation_matching(f.semigroup)
                is not None,
            }
        )
    payload = {
        "input": {"kind": loaded["kind"], "digest": loaded["digest"]},
        "order": sg.order,
        "factors": rows,
    }
    human = [
        f"factor {r['d_class']}: size {r['size']}"
        f"{' +0' if r['zero_adjoined'] else ''}, quotient {r['quotient']}, "
        f"matching {'present' if r['has_matching'] else 'absent'}"
        for r in rows
    ]
    _emit(args, _report(args, "factors", payload), human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# band subcommands


def cmd_band(args) -> int:
    band = bands.parse_band(_read(args.path))
    digest = _digest(bands.format_band(band))
    payload = {"input": {"kind": "band", "digest": digest},
               "m": band.m, "n": band.n}
    if args.mode == "check":
        ok, violator = bands.check_harem_condition(band)
        payload["verdicts"] = {"condition_holds": ok}
        payload["witnesses"] = {
            "violator": {"side": violator[0], "indices": list(violator[1])}
            if violator
            else None
        }
        if args.oracle:
            ok2, _ = bands.check_harem_condition_exhaustive(band)
            payload["verdicts"]["oracle_agrees"] = ok == ok2
        human = ["holds" if ok else f"fails on {violator[0]} {list(violator[1])}"]
    elif args.mode == "harem":
        fam = bands.harem_family(band)
        payload["verdicts"] = {"family_exists": fam is not None}
        payload["witnesses"] = {
            "functions": [list(f) for f in fam.functions] if fam else None
        }
        human = (
            [f"pi_{t}: {list(f)}" for t, f in enumerate(fam.functions)]
            if fam
            else ["absent"]
        )
    else:  # involution
        result = bands.involution_from_harem(band)
        sg = bands.to_semigroup(band)
        verified = result is not None and matching.verify_involution_matching(
            sg, result.matching
        )
        payload["verdicts"] = {
            "involution_exists": result is not None,
            "verified": verified,
        }
        payload["witnesses"] = {
            "involution": list(result.matching) if result else None,
            "column_order": list(result.column_order) if result else None,
        }
        human = (
            [matching.format_matching(result.matching).rstrip()]
            if result
            else ["absent"]
        )
    _emit(args, _report(args, f"band {args.mode}", payload), human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# colour subcommands


def cmd_colour(args) -> int:
    if args.mode == "solve":
        inst = colours.parse_instance(_read(args.path))
        digest = _digest(colours.format_instance(inst))
        result = colours.solve(inst, budget=args.budget)
        payload = {
            "input": {"kind": "instance", "digest": digest},
            "m": inst.m,
            "n": inst.n,
            "verdicts": {"status": result.status, "nodes": result.nodes},
            "witnesses": {
                "plan": list(result.plan.pairing) if result.plan else None
            },
        }
        if result.plan is not None:
            payload["verdicts"]["plan_verified"] = colours.verify_plan(
                inst, result.plan
            )
        human = [result.status]
        if result.plan is not None:
            human.append(colours.format_plan(result.plan).rstrip() or "(all vacuous)")
        _emit(args, _report(args, "colour solve", payload), human)
        return EXIT_BUDGET if result.status == "budget_exhausted" else EXIT_OK

    # reduce: derive the instance from a band matching and build the
    # induced involution
    band = bands.parse_band(_read(args.band))
    sg = bands.to_semigroup(band)
    if args.matching:
        phi = matching.parse_matching(_read(args.matching), sg.order)
    else:
        phi = matching.find_permutation_matching(sg)
        if phi is None:
            print("band has no permutation matching", file=sys.stderr)
            return EXIT_PRECONDITION
    inst = colours.instance_from_matching(band, phi)
    result = colours.solve(inst, budget=args.budget)
    payload = {
        "input": {"kind": "band", "digest": _digest(bands.format_band(band))},
        "m": band.m,
        "n": band.n,
        "verdicts": {"status": result.status, "nodes": result.nodes},
        "witnesses": {
            "matching": list(phi),
            "plan": list(result.plan.pairing) if result.plan else None,
            "involution": None,
        },
    }
    human = [result.status]
    if result.status == "solved":
        inv = colours.involution_from_plan(band, phi, inst, result.plan)
        payload["witnesses"]["involution"] = list(inv)
        payload["verdicts"]["involution_verified"] = (
            matching.verify_involution_matching(sg, inv)
        )
        human.append(matching.format_matching(inv).rstrip())
    _emit(args, _report(args, "colour reduce", payload), human)
    return EXIT_BUDGET if result.status == "budget_exhausted" else EXIT_OK


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    data = transformations.enumerate_family(args.family, args.n, cap=args.cap)
    sys.stdout.write(core.format_cayley(data.semigroup))
    if args.dict:
        mapping = {
            str(i): [None if v >= data.n else v for v in f]
            for i, f in enumerate(data.maps)
        }
        with open(args.dict, "w", encoding="utf-8") as fh:
            json.dump(mapping, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# search-q4: bands with a matching but no involution matching


def _q4_band_verdict(band, use_oracle: bool):
    sg = bands.to_semigroup(band)
    p = matching.find_permutation_matching(sg)
    if p is None:
        return {"matched": False}
    inv = matching.find_involution_matching(sg)
    out = {
        "matched": True,
        "involution": inv is not None,
        "separator": inv is None,
    }
    if use_oracle:
        oracle = matching.involution_backtracking(sg)
        out["oracle_agrees"] = (oracle is not None) == (inv is not None)
        out["separator"] = out["separator"] or not out["oracle_agrees"]
    if out["separator"]:
        out["certificate"] = {
            "pattern": bands.format_band(band).splitlines(),
            "matching": list(p),
            "gadget_involution": list(inv) if inv else None,
        }
    return out


def cmd_search_q4(args) -> int:
    densities = [float(d) for d in args.densities.split(",") if d]
    shapes = sorted(
        (m, n)
        for m in range(1, args.m_max + 1)
        for n in range(1, args.n_max + 1)
    )
    per_shape = []
    separators = []
    for m, n in shapes:
        cells = m * n
        exhaustive = 2**cells <= args.exhaustive_limit
        counts = {"total": 0, "regular": 0, "matched": 0, "involution": 0}
        patterns = []
        if exhaustive:
            for bits in range(2**cells):
                rows = [
                    [bool(bits >> (i * n + j) & 1) for j in range(n)]
                    for i in range(m)
                ]
                patterns.append(bands.band_from_rows(rows))
        else:
            for di, density in enumerate(densities):
                for k in range(args.samples):
                    seed = args.seed + 7919 * len(per_shape) + 101 * di + k
                    patterns.append(bands.random_band(m, n, density, seed))
        for band in patterns:
            counts["total"] += 1
            if not all(any(r) for r in band.pattern) or not all(
                any(band.pattern[i][j] for i in range(m)) for j in range(n)
            ):
                continue
            counts["regular"] += 1
            verdict = _q4_band_verdict(band, args.oracle and cells <= args.oracle_max)
            if not verdict["matched"]:
                continue
            counts["matched"] += 1
            if verdict.get("involution"):
                counts["involution"] += 1
            if verdict.get("separator"):
                separators.append(
                    {"m": m, "n": n, **verdict["certificate"]}
                )
        per_shape.append(
            {"m": m, "n": n, "mode": "exhaustive" if exhaustive else "sampled",
             **counts}
        )
    payload = {
        "input": {
            "kind": "params",
            "digest": _digest(
                f"q4 m<={args.m_max} n<={args.n_max} lim={args.exhaustive_limit} "
                f"densities={args.densities} samples={args.samples} seed={args.seed}"
            ),
        },
        "verdicts": {
            "separators_found": len(separators),
            "shapes": per_shape,
        },
        "witnesses": {"separators": separators},
    }
    human = [
        f"{r['m']}x{r['n']} [{r['mode']}]: regular {r['regular']}, "
        f"matched {r['matched']}, involution {r['involution']}"
        for r in per_shape
    ]
    human.append(f"separators: {len(separators)}")
    _emit(args, _report(args, "search-q4", payload), human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# search-on: matching existence for order-preserving maps on a chain


def cmd_search_on(args) -> int:
    results = []
    for n in range(1, args.n_max + 1):
        maps = transformations.family_maps("On", n)
        graph = transformations.family_inverse_graph(maps, n)
        p = matching.matching_on_graph(graph)
        verified = p is not None and all(
            transformations.maps_mutually_inverse(maps[a], maps[p[a]], n)
            for a in range(len(maps))
        )
        row = {
            "n": n,
            "size": len(maps),
            "size_formula": transformations.family_size("On", n),
            "has_matching": p is not None,
            "matching_verified": verified,
        }
        if args.oracle and n <= args.oracle_max:
            data = transformations.enumerate_family("On", n)
            oracle = matching.matching_backtracking(data.semigroup)
            row["oracle_agrees"] = (oracle is not None) == (p is not None)
        results.append(row)
    payload = {
        "input": {
            "kind": "params",
            "digest": _digest(f"on n<={args.n_max}"),
        },
        "verdicts": {"families": results},
        "witnesses": {},
    }
    human = [
        f"O_{r['n']}: size {r['size']}, matching "
        f"{'present' if r['has_matching'] else 'absent'}"
        + ("" if r["matching_verified"] or not r["has_matching"] else " (UNVERIFIED)")
        for r in results
    ]
    _emit(args, _report(args, "search-on", payload), human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--timing", action="store_true",
                        help="include timing in reports (breaks rerun identity)")
    common.add_argument("--seed", type=int, default=0, help="base random seed")
    common.add_argument("--oracle", action="store_true",
                        help="enable exhaustive cross-checks where supported")

    parser = argparse.ArgumentParser(
        prog="invmatch",
        description="permutation and involution matchings on finite regular "
        "semigroups",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="full structural and matching report")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("match", parents=[common],
                       help="decide permutation matching")
    p.add_argument("path")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("involution", parents=[common],
                       help="decide involution matching")
    p.add_argument("path")
    p.set_defaults(func=cmd_involution)

    p = sub.add_parser("factors", parents=[common],
                       help="list principal factors")
    p.add_argument("path")
    p.set_defaults(func=cmd_factors)

    p = sub.add_parser("band", parents=[common],
                       help="idempotent-pattern operations")
    p.add_argument("mode", choices=["check", "harem", "involution"])
    p.add_argument("path")
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("colour", parents=[common],
                       help="ball-exchange alignment")
    p.add_argument("mode", choices=["solve", "reduce"])
    p.add_argument("path", nargs="?", help="instance file (solve mode)")
    p.add_argument("--band", help="band file (reduce mode)")
    p.add_argument("--matching", help="matching file (reduce mode)")
    p.add_argument("--budget", type=int, default=1_000_000,
                   help="node budget for the exact solver")
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("gen", parents=[common],
                       help="emit a transformation family table")
    p.add_argument("family", choices=list(transformations.FAMILIES))
    p.add_argument("n", type=int)
    p.add_argument("--cap", type=int, default=10_000)
    p.add_argument("--dict", help="write an index -> images JSON sidecar")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("search-q4", parents=[common],
                       help="hunt bands with a matching but no involution")
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--exhaustive-limit", type=int, default=4096,
                   help="enumerate all patterns when 2^(m*n) is at most this")
    p.add_argument("--densities", default="0.3,0.5,0.7")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--oracle-max", type=int, default=12,
                   help="cell bound for the backtracking cross-check")
    p.set_defaults(func=cmd_search_q4)

    p = sub.add_parser("search-on", parents=[common],
                       help="matching existence for order-preserving maps")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--oracle-max", type=int, default=3)
    p.set_defaults(func=cmd_search_on)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._t0 = time.perf_counter()
    if args.cmd == "colour" and args.mode == "solve" and not args.path:
        parser.error("colour solve requires an instance file")
    if args.cmd == "colour" and args.mode == "reduce" and not args.band:
        parser.error("colour reduce requires --band")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EntryOutOfRange, NotAssociative) as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return EXIT_ALGEBRA
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvmatchError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
