"""Command line: semichar {compute,batch,construct,torsion,localize,facts,export}.

Exit codes: 0 ok, 1 conjecture violation, 2 infeasible or skipped work
(for batch only with --strict), 3 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from sympy import isprime

from .config import DEFAULT_LIMITS, CapExceeded, Limits
from .constructions import (
    ConstructionReport,
    alternating_two_semichars,
    cyclic_sylow_semichars,
    gl2_cyclic_subgroup_count,
    gl2_suite,
    gl2_sylow_facts,
    heisenberg_semichars,
    symmetric_cycle_semichars,
    unitriangular_log_semichars,
)
from .engine import l_torsion_rank, localized_semichar_group, primary_decomposition_check
from .families import FAMILY_HELP, builtin_corpus, parse_family
from .groups import GroupAxiomError, valuation
from .io import GroupFileError, export_group_file, parse_group_file, run_report

EXIT_OK, EXIT_VIOLATION, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _load(args, limits: Limits):
    if getattr(args, "file", None):
        return parse_group_file(args.file, limits)
    if not getattr(args, "family", None):
        raise InputError("give --family or --file")
    try:
        return parse_family(args.family)
    except KeyError as err:
        raise InputError(err.args[0]) from None


def _check_prime(l: int):
    if not isprime(l):
        raise InputError(f"{l} is not prime")


# subcommands


def cmd_compute(args, limits: Limits) -> int:
    G = _load(args, limits)
    rep = run_report(G, limits)
    payload = rep.to_json()
    if args.no_time:
        payload.pop("seconds")
        rep.seconds = 0.0
    text = rep.render()
    if args.no_time:
        text = "\n".join(line for line in text.splitlines() if not line.strip().startswith("time"))
    _emit(args, payload, text)
    return EXIT_OK if rep.holds else EXIT_VIOLATION


def _batch_one(spec: str, limits: Limits) -> dict:
    t = time.perf_counter()
    try:
        rep = run_report(parse_family(spec), limits)
    except CapExceeded as err:
        return {"group": spec, "status": "skipped", "reason": str(err)}
    return {"group": spec, "status": "holds" if rep.holds else "violation", "order": rep.order,
            "semichar_order": str(rep.semichar_order), "factors": rep.invariant_factors,
            "seconds": round(time.perf_counter() - t, 3)}


def cmd_batch(args, limits: Limits) -> int:
    if args.corpus != "builtin":
        raise InputError(f"unknown corpus {args.corpus!r}")
    specs = builtin_corpus(args.max_order)
    if args.threads > 1:
        with ProcessPoolExecutor(args.threads) as pool:
            results = list(pool.map(_batch_one, specs, [limits] * len(specs)))
    else:
        results = [_batch_one(s, limits) for s in specs]
    counts = {"holds": 0, "violation": 0, "skipped": 0}
    for r in results:
        counts[r["status"]] += 1
        if args.no_time:
            r.pop("seconds", None)
        if args.json:
            print(json.dumps(r, sort_keys=True))
        else:
            extra = r.get("reason") or f"|G|={r['order']} |G^|={r['semichar_order']}"
            print(f"{r['status']:<9} {r['group']:<12} {extra}")
    summary = {"groups": len(results), **counts}
    print(json.dumps({"summary": summary}, sort_keys=True) if args.json else
          f"summary: {len(results)} groups, {counts['holds']} hold, {counts['violation']} violations, "
          f"{counts['skipped']} skipped")
    if counts["violation"]:
        return EXIT_VIOLATION
    if counts["skipped"] and args.strict:
        return EXIT_INFEASIBLE
    return EXIT_OK


def construction_for(family: str, l: int, limits: Limits = DEFAULT_LIMITS) -> ConstructionReport:
    """Pick the construction that applies to a named family at the prime l."""
    _check_prime(l)
    fam = family.lower()
    if m := re.fullmatch(r"s(\d+)", fam):
        return symmetric_cycle_semichars(int(m[1]), l, limits=limits)
    if m := re.fullmatch(r"a(\d+)", fam):
        n = int(m[1])
        if l == 2:
            return alternating_two_semichars(n, limits)
        rep = symmetric_cycle_semichars(n, l, extend=False, limits=limits)
        rep.domain = f"A{n}[{l}^inf]"
        rep.notes.append(f"for odd l the l-parts of A{n} and S{n} coincide")
        return rep
    if m := re.fullmatch(r"gl2-(\d+)", fam):
        reports = gl2_suite(int(m[1]), limits=limits)
        if l not in reports:
            raise InputError(f"{l} does not divide |GL(2,{m[1]})|")
        return reports[l]
    if m := re.fullmatch(r"heis(\d+)", fam):
        rep = heisenberg_semichars(int(m[1]), exact=True, limits=limits)
        if rep.prime != l:
            raise InputError(f"the Heisenberg construction lives at l = {rep.prime}")
        return rep
    if m := re.fullmatch(r"u(\d+)-(\d+)", fam):
        rep = unitriangular_log_semichars(int(m[1]), int(m[2]), exact=True, limits=limits)
        if rep.prime != l:
            raise InputError(f"the unitriangular construction lives at l = {rep.prime}")
        return rep
    G = parse_family(family)
    if valuation(G.order, l) == 0:
        raise InputError(f"{l} does not divide |G| = {G.order}")
    try:
        return cyclic_sylow_semichars(G, l, exact=True, limits=limits)
    except ValueError as err:
        raise CapExceeded(f"no construction for {family} at l={l}: {err}") from None


def _report_payload(rep: ConstructionReport) -> dict:
    return {"label": rep.label, "prime": rep.prime, "domain": rep.domain, "domain_size": rep.domain_size,
            "functions": len(rep.produced), "independence_rank": rep.independence_rank,
            "certified_valuation": rep.certified_valuation, "claimed_lower_bound": rep.claimed_lower_bound,
            "target_valuation": rep.target_valuation, "exact_valuation": rep.exact_valuation,
            "verified": rep.all_verified, "notes": rep.notes}


def cmd_construct(args, limits: Limits) -> int:
    try:
        rep = construction_for(args.family, args.prime, limits)
    except KeyError as err:
        raise InputError(err.args[0]) from None
    text = "\n".join([rep.summary()] + [f"  note: {n}" for n in rep.notes])
    _emit(args, _report_payload(rep), text)
    return EXIT_OK if rep.all_verified else EXIT_VIOLATION


def cmd_torsion(args, limits: Limits) -> int:
    _check_prime(args.prime)
    G = _load(args, limits)
    dim = l_torsion_rank(G, args.prime, limits)
    _emit(args, {"group": G.name, "prime": args.prime, "l_torsion_rank": dim},
          f"{G.name}: dim_F{args.prime} G^[{args.prime}] = {dim}")
    return EXIT_OK


def cmd_localize(args, limits: Limits) -> int:
    _check_prime(args.prime)
    G = _load(args, limits)
    local = localized_semichar_group(G, args.prime, limits)
    payload = {"group": G.name, "prime": args.prime, "local_order": str(local.order),
               "local_factors": list(local.invariant_factors)}
    lines = [f"{G.name}: |(G[{args.prime}^inf])^| = {local.order}, factors {list(local.invariant_factors)}"]
    try:
        dec = primary_decomposition_check(G, limits)
        payload.update(decomposition_ok=dec.ok, total=str(dec.total))
        lines.append(f"  product over primes of local orders = |G^|: {dec.ok}")
    except CapExceeded as err:
        payload["decomposition"] = f"skipped: {err}"
        lines.append(f"  decomposition check skipped: {err}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload.get("decomposition_ok", True) else EXIT_VIOLATION


def cmd_facts(args, limits: Limits) -> int:
    q = args.gl2
    facts = gl2_sylow_facts(q)
    lines = [f"GL(2,{q}): order {facts.order}, valuations {facts.valuations}"]
    for l, v in facts.formula.items():
        lines.append(f"  l={l}: 2 val_l(q-1) + val_l(2) = {v}")
    for l, c in facts.monomial_count.items():
        lines.append(f"  l={l}: {c} monomial matrices with entries in F*[{l}^inf]")
    for l, w in facts.sylow_witness.items():
        lines.append(f"  l={l}: exhibited {l}-subgroup of order {w} (l-part {facts.q_part(l)})")
    for l, ok in facts.cyclic_sylow.items():
        lines.append(f"  l={l}: Sylow subgroups cyclic: {ok}")
    for c in facts.cyclic_counts:
        lines.append(f"  k={c.k}: {c.subgroups} cyclic subgroups ({c.elements} elements), "
                     f"q(q-1)/2 = {c.expected}")
    lines += [f"  note: {n}" for n in facts.notes]
    payload = {"q": q, "order": facts.order, "valuations": facts.valuations, "formula": facts.formula,
               "monomial_count": facts.monomial_count, "sylow_witness": facts.sylow_witness,
               "cyclic_counts": [dataclasses.asdict(c) for c in facts.cyclic_counts],
               "consistent": facts.consistent}
    payload = json.loads(json.dumps(payload, default=str))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if facts.consistent else EXIT_VIOLATION


def cmd_export(args, limits: Limits) -> int:
    G = _load(args, limits)
    export_group_file(G, args.out, limits)
    _emit(args, {"group": G.name, "order": G.order, "out": args.out}, f"wrote {G.name} ({G.order}) to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--strict", action="store_true", help="exit 2 if any work was skipped")
    common.add_argument("--threads", type=int, default=1, help="worker processes for batch")
    common.add_argument("--snf-cap", type=int, default=None, help="largest order for full SNF")
    common.add_argument("--no-time", action="store_true", help="omit timings (byte-stable output)")

    ap = argparse.ArgumentParser(prog="semichar", description="Semicharacter groups of finite groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    def group_args(p):
        p.add_argument("--family", help=FAMILY_HELP)
        p.add_argument("--file", help="JSON group file")

    p = sub.add_parser("compute", parents=[common], help="full semicharacter group and verdict")
    group_args(p)
    p = sub.add_parser("batch", parents=[common], help="run the conjecture check over a corpus")
    p.add_argument("--corpus", default="builtin")
    p.add_argument("--max-order", type=int, default=None)
    p = sub.add_parser("construct", parents=[common], help="explicit construction at a prime")
    p.add_argument("--family", required=True, help=FAMILY_HELP)
    p.add_argument("--prime", type=int, required=True)
    for name, what in (("torsion", "dimension of the l-torsion"), ("localize", "semicharacters of G[l^inf]")):
        p = sub.add_parser(name, parents=[common], help=what)
        group_args(p)
        p.add_argument("--prime", type=int, required=True)
    p = sub.add_parser("facts", parents=[common], help="Sylow and cyclic-subgroup counts in GL(2,q)")
    p.add_argument("--gl2", type=int, required=True, metavar="Q")
    p = sub.add_parser("export", parents=[common], help="write a group as a table file")
    group_args(p)
    p.add_argument("--out", required=True)
    return ap


COMMANDS = {"compute": cmd_compute, "batch": cmd_batch, "construct": cmd_construct, "torsion": cmd_torsion,
            "localize": cmd_localize, "facts": cmd_facts, "export": cmd_export}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    limits = DEFAULT_LIMITS
    if args.snf_cap is not None:
        limits = dataclasses.replace(limits, snf_cap=args.snf_cap)
    try:
        return COMMANDS[args.command](args, limits)
    except CapExceeded as err:
        print(f"infeasible: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, GroupFileError, GroupAxiomError, FileNotFoundError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(cli_main())
