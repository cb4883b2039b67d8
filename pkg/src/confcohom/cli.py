"""Command-line interface: JSON in, JSON out, deterministic.

Commands: cohomology, e1, poset, series, ce-compare, ainfty-check,
selftest.  Exit codes: 0 success, 1 validation or parse failure, 2 scale
bound exceeded.  Output files are written to a temporary path and renamed
atomically, so no partial results are left behind on failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import selftest as selftest_module
from .ainfty import FiniteDga, IdealData, build_morphism, hypothesis_check, verify_morphism
from .cfcd import (
    cd_complex,
    cf_complex,
    characters,
    e1_page,
    invariants_dims,
    total_cohomology,
)
from .celie import compare_cf_ce
from .exactalg import cohomology
from .partitions import (
    PartitionError,
    ScaleBoundError,
    UpSet,
    enumerate_partitions,
    named_upset,
)
from .posetcx import FinitePoset, order_complex
from .symfunc import SymFuncError, euler_specialize, kequals_series, laurent_str, parse_laurent
from .tcdga import (
    TcdgaError,
    cdga_from_json,
    constant_tcdga,
    formal_tcdga,
    graded_module_from_json,
    tcdga_from_json,
)


class InputError(ValueError):
    pass


def _load_json(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from exc


def load_algebra(path, max_arity):
    """Build a twisted algebra from an input file.

    The envelope field "type" selects between a full component description
    ("tcdga"), a graded module made into the multiplication-free model
    ("module"), and a cdga made constant across arities ("cdga").
    """
    data = _load_json(path)
    kind = data.get("type", "tcdga")
    if kind == "tcdga":
        algebra = tcdga_from_json(data)
    elif kind == "module":
        module = graded_module_from_json(data)
        algebra = formal_tcdga(module, max_arity)
    elif kind == "cdga":
        algebra = constant_tcdga(cdga_from_json(data), max_arity)
    else:
        raise InputError("unknown input type %r" % (kind,))
    report = algebra.validate()
    if not report.ok:
        raise InputError("input algebra fails validation: %s" % "; ".join(report.failures[:5]))
    return algebra


def parse_upset(spec, n):
    if spec == "full":
        return named_upset("full", n)
    if spec.startswith("k-equals:"):
        return named_upset("k_equals", n, int(spec.split(":", 1)[1]))
    if spec.startswith("file:"):
        data = _load_json(spec.split(":", 1)[1])
        upset = UpSet.from_json(data)
        if upset.n != n:
            raise InputError("upset is over n=%d, not n=%d" % (upset.n, n))
        return upset
    raise InputError("unknown upset %r (use full, k-equals:K, or file:PATH)" % (spec,))


def write_output(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _summary_json(summary):
    return [
        {"degree": d, "free_rank": summary.free_rank(d), "torsion": list(summary.torsion(d))}
        for d in summary.degrees()
    ]


def _characters_json(table):
    out = []
    for d in table.degrees():
        by_type = {
            json.dumps(list(ct)): str(v) if v.denominator != 1 else int(v)
            for ct, v in sorted(table.by_degree[d].items())
        }
        out.append({"degree": d, "by_cycle_type": by_type})
    return out


def cmd_cohomology(args, want_e1=False):
    algebra = load_algebra(args.input, args.max_arity or args.n)
    if args.n > algebra.max_arity:
        raise InputError("n=%d exceeds the algebra's arity bound %d" % (args.n, algebra.max_arity))
    if args.ring and args.ring != algebra.ring:
        raise InputError("input algebra is over %s, not %s" % (algebra.ring, args.ring))
    upset = parse_upset(args.upset, args.n)
    build = cf_complex if args.mode == "CF" else cd_complex
    bar = build(upset, algebra)
    summary = total_cohomology(bar)
    payload = {
        "n": args.n,
        "upset": upset.to_json(),
        "mode": args.mode,
        "ring": algebra.ring,
        "cohomology": _summary_json(summary),
    }
    if args.characters or args.invariants:
        table = characters(bar)
        payload["characters"] = _characters_json(table)
        if args.invariants:
            payload["invariants"] = [
                {"degree": d, "dim": v} for d, v in sorted(invariants_dims(table).items())
            ]
    if want_e1 or args.e1:
        page = e1_page(bar, upset=upset)
        payload["e1"] = [
            {
                "T": entry.partition.to_json(),
                "p": entry.p,
                "entries": _summary_json(entry.summary),
            }
            for _, entry in sorted(page.entries.items(), key=lambda kv: kv[0].rgs)
        ]
    write_output(payload, args.output)
    return 0


def cmd_poset(args):
    if args.k:
        parts = [
            p
            for p in enumerate_partitions(args.n, max_n=args.max_n)
            if all(s == 1 or s >= args.k for s in p.block_sizes())
        ]
    else:
        parts = enumerate_partitions(args.n, max_n=args.max_n)
    poset = FinitePoset.from_partitions(parts)
    summary = cohomology(order_complex(poset, args.variant, args.ring))
    payload = {
        "n": args.n,
        "k": args.k,
        "variant": args.variant,
        "ring": args.ring,
        "cohomology": _summary_json(summary),
    }
    for d in summary.degrees():
        line = "H^%d rank %d" % (d, summary.free_rank(d))
        if summary.torsion(d):
            line += " torsion %s" % (list(summary.torsion(d)),)
        sys.stdout.write(line + "\n")
    if args.output:
        write_output(payload, args.output)
    return 0


def cmd_series(args):
    P = parse_laurent(args.p)
    series = kequals_series(P, args.k, args.max_arity)
    if args.euler:
        series = euler_specialize(series)
    sys.stdout.write(series.render_schur() + "\n")
    if args.output:
        expansion = series.to_schur()
        payload = {
            "P": args.p,
            "k": args.k,
            "max_arity": args.max_arity,
            "schur": [
                {"partition": list(lam), "coefficient": laurent_str(c)}
                for lam, c in sorted(expansion.items())
            ],
        }
        write_output(payload, args.output)
    return 0


def cmd_ce_compare(args):
    algebra = load_algebra(args.input, max(args.n, args.max_arity or args.n))
    report = compare_cf_ce(algebra, args.n, with_characters=not args.no_characters, max_n=args.max_n)
    payload = report.to_json()
    sys.stdout.write("match\n" if report.ok else "MISMATCH\n")
    if args.output:
        write_output(payload, args.output)
    return 0 if report.ok else 1


def cmd_ainfty_check(args):
    data = _load_json(args.input)
    diff = {}
    for src, dst, v in data.get("d", []):
        diff.setdefault(src, {})[dst] = v
    mult = {}
    for a, b, img in data.get("mult", []):
        mult[(a, b)] = dict((c, v) for c, v in img)
    algebra = FiniteDga(
        data.get("ring", "Q"),
        [(b["name"], b["degree"]) for b in data["basis"]],
        diff,
        mult,
    )
    ideal = IdealData(data["ideal"])
    hypotheses = hypothesis_check(algebra, ideal)
    payload = {"hypotheses_ok": hypotheses.ok, "failures": hypotheses.failures}
    if hypotheses.ok:
        morphism = build_morphism(algebra, ideal)
        result = verify_morphism(morphism, args.max_n)
        payload["relations_ok"] = result.ok
        payload["tuples_checked"] = result.checked
        if not result.ok:
            payload["first_failure_arity"] = result.first_failure[0]
    write_output(payload, args.output)
    return 0 if hypotheses.ok and payload.get("relations_ok") else 1


def cmd_selftest(args):
    selected = set(args.only.split(",")) if args.only else None
    return selftest_module.run(selected=selected)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="confcohom",
        description="Exact cohomology of generalized configuration spaces.",
    )
    parser.add_argument("--jobs", type=int, default=1, help="worker cap (results are deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write JSON here (atomic); default stdout")

    p = sub.add_parser("cohomology", help="total cohomology of the bar complex")
    p.add_argument("--input", required=True, help="algebra JSON (type: tcdga | module | cdga)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("CF", "CD"), default="CF")
    p.add_argument("--ring", choices=("Z", "Q"))
    p.add_argument("--upset", default="full", help="full | k-equals:K | file:PATH")
    p.add_argument("--characters", action="store_true")
    p.add_argument("--invariants", action="store_true")
    p.add_argument("--e1", action="store_true")
    p.add_argument("--max-arity", type=int)
    common(p)

    p = sub.add_parser("e1", help="first page of the block-count filtration")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("CF", "CD"), default="CF")
    p.add_argument("--ring", choices=("Z", "Q"))
    p.add_argument("--upset", default="full")
    p.add_argument("--characters", action="store_true")
    p.add_argument("--invariants", action="store_true")
    p.add_argument("--max-arity", type=int)
    common(p)

    p = sub.add_parser("poset", help="order-complex cohomology of partition families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="restrict to blocks of size 1 or >= k")
    p.add_argument("--variant", choices=("plain", "hat", "check", "hatcheck"), default="hatcheck")
    p.add_argument("--ring", choices=("Z", "Q"), default="Z")
    p.add_argument("--max-n", type=int, help="raise the ground-set bound")
    common(p)

    p = sub.add_parser("series", help="equivariant generating series for k-block families")
    p.add_argument("--p", required=True, help="Laurent polynomial in t, e.g. 't^2' or '-t + t^3'")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--euler", action="store_true", help="specialize t = 1")
    common(p)

    p = sub.add_parser("ce-compare", help="bar complex vs Chevalley-Eilenberg chains")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--no-characters", action="store_true")
    p.add_argument("--max-arity", type=int)
    p.add_argument("--max-n", type=int, help="raise the chain-complex scale bound")
    common(p)

    p = sub.add_parser("ainfty-check", help="hypotheses and homotopy relations for a dga with ideal")
    p.add_argument("--input", required=True, help="dga JSON with an 'ideal' name list")
    p.add_argument("--max-n", type=int, default=4)
    common(p)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion names")

    return parser


COMMANDS = {
    "cohomology": cmd_cohomology,
    "e1": lambda args: cmd_cohomology(args, want_e1=True),
    "poset": cmd_poset,
    "series": cmd_series,
    "ce-compare": cmd_ce_compare,
    "ainfty-check": cmd_ainfty_check,
    "selftest": cmd_selftest,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        sys.stderr.write(json.dumps({"error": "--jobs must be at least 1"}) + "\n")
        return 1
    if "CONFCOHOM_CONFIG" in os.environ:
        try:
            config = _load_json(os.environ["CONFCOHOM_CONFIG"])
        except InputError as exc:
            sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
            return 1
        if getattr(args, "max_n", None) is None and "max_n" in config:
            if hasattr(args, "max_n"):
                args.max_n = config["max_n"]
    try:
        return COMMANDS[args.command](args)
    except ScaleBoundError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": "scale-bound"}) + "\n")
        return 2
    except (InputError, PartitionError, TcdgaError, SymFuncError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "kind": "validation"}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
