"""Command-line surface: generate, verify, chain, balanced, decompose.

Exit codes are a stable contract: 0 = property holds / artifact produced,
2 = property fails (with witness), 3 = unknown or budget exhausted,
1 = usage or parse error.  Reports echo enough input to re-run
bit-identically; verdict payloads are deterministic (timing excluded).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .ambient import AmbientGraph, parse_ambient, split_ambient_descriptor
from .chains import (
    check_counting_identities,
    check_ekr_chain,
    check_special_chain,
    inclusion_relation,
    read_rel,
)
from .config import DEFAULT_LIMITS, Limits
from .core import (
    EngineError,
    FamilyTooLarge,
    FormatError,
    NodeBudgetExceeded,
    SetFamily,
    read_fam,
    write_fam,
)
from .decomp import (
    DecompositionError,
    bipartite_shift_matchings,
    circle_factorization,
    consecutive_unions,
    exact_cover_decomposition,
    walecki,
    write_decomposition,
)
from .families import (
    PatternGraph,
    bicliques,
    cliques_complete,
    cycle_pattern,
    cycles_bipartite,
    h_copies,
    k_cycles_complete,
    k_matchings,
    k_subsets,
    matching_pattern,
    clique_pattern,
    perfect_matchings_bipartite,
    read_pat,
    separated_k_subsets,
    single_edge_pattern,
)
from .gbalanced import check_g_balanced, kit_by_name, read_gen
from .solver import build_intersection_graph, write_dimacs
from .verify import STATUS_STRONG, STATUS_UNKNOWN, check_ekr, check_strong_ekr

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_UNKNOWN = 3


def parse_family(text: str, limits: Limits = DEFAULT_LIMITS) -> SetFamily:
    """A family given either as a .fam file path or a generator descriptor."""
    if text.endswith(".fam") or Path(text).exists():
        return read_fam(text)
    kind, _, rest = text.partition(":")
    if kind == "ksub":
        n, k = _ints(rest, 2)
        return k_subsets(n, k, limits)
    if kind == "sep":
        n, k = _ints(rest, 2)
        return separated_k_subsets(n, k, limits)
    if kind == "pm":
        (n,) = _ints(rest, 1)
        return perfect_matchings_bipartite(n, limits)
    if kind == "match":
        amb_text, tail = split_ambient_descriptor(rest)
        (k,) = _ints(tail, 1)
        return k_matchings(parse_ambient(amb_text), k, limits)
    if kind == "cyc":
        n, k = _ints(rest, 2)
        return k_cycles_complete(n, k, limits)
    if kind == "bcyc":
        n, two_k = _ints(rest, 2)
        return cycles_bipartite(n, two_k, limits)
    if kind == "clique":
        n, k = _ints(rest, 2)
        return cliques_complete(n, k, limits)
    if kind == "biclique":
        n, k = _ints(rest, 2)
        return bicliques(n, k, limits)
    if kind == "copies":
        amb_text, tail = split_ambient_descriptor(rest)
        if not tail:
            raise FormatError("copies descriptor needs a pattern file")
        return h_copies(parse_ambient(amb_text), parse_pattern(tail), limits)
    raise FormatError(f"unknown family descriptor {text!r}")


def parse_pattern(text: str) -> PatternGraph:
    """A pattern given as a builtin name or a .pat file path."""
    if text == "triangle":
        return cycle_pattern(3)
    if text.endswith(".pat") or Path(text).exists():
        return read_pat(text)
    head, num = text[:1], text[1:]
    if num.isdigit():
        if head == "c":
            return cycle_pattern(int(num))
        if head == "t":
            return matching_pattern(int(num))
        if head == "k":
            return clique_pattern(int(num))
        if head == "e":
            return single_edge_pattern(int(num))
    raise FormatError(f"unknown pattern descriptor {text!r}")


def _ints(text: str, arity: int) -> tuple[int, ...]:
    parts = text.split(",") if text else []
    if len(parts) != arity:
        raise FormatError(f"expected {arity} comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise FormatError(f"expected integers, got {text!r}") from exc


def _limits_from(args: argparse.Namespace) -> Limits:
    return Limits(
        member_cap=getattr(args, "cap", None) or DEFAULT_LIMITS.member_cap,
        node_budget=getattr(args, "budget", None) or DEFAULT_LIMITS.node_budget,
        enum_cap=DEFAULT_LIMITS.enum_cap,
        cover_budget=getattr(args, "budget", None) or DEFAULT_LIMITS.cover_budget,
    )


def _report(args: argparse.Namespace, inputs: dict, verdict: dict, started: float) -> dict:
    limits = _limits_from(args)
    return {
        "command": " ".join(args.argv),
        "engine_version": __version__,
        "inputs": inputs,
        "limits": {
            "member_cap": limits.member_cap,
            "node_budget": limits.node_budget,
            "enum_cap": limits.enum_cap,
        },
        "threads": getattr(args, "threads", 1),
        "verdict": verdict,
        "elapsed_s": round(time.perf_counter() - started, 6),
    }


def _emit(args: argparse.Namespace, report: dict, human: list[str]) -> None:
    if getattr(args, "report_out", None):
        Path(args.report_out).write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n"
        )
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


def cmd_generate(args: argparse.Namespace) -> int:
    limits = _limits_from(args)
    fam = parse_family(args.family, limits)
    write_fam(fam, args.out)
    print(f"wrote {len(fam.members)} members over {fam.ground.size} elements to {args.out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    limits = _limits_from(args)
    fam = parse_family(args.family, limits)
    if args.dimacs:
        write_dimacs(build_intersection_graph(fam, args.t, args.mode, limits), args.dimacs)
    if args.strong:
        verdict = check_strong_ekr(fam, args.t, args.mode, limits)
    else:
        verdict = check_ekr(fam, args.t, args.mode, limits)
    payload = verdict.to_json_dict(fam)
    report = _report(
        args,
        {"family": args.family, "members": len(fam.members), "t": args.t, "mode": args.mode},
        payload,
        started,
    )
    human = [
        f"family {args.family}: {len(fam.members)} members over {fam.ground.size} elements",
        f"status {verdict.status}  (star {verdict.star_size}, max {verdict.max_size})",
    ]
    for w in payload["witnesses"]:
        human.append(f"{w['kind']}: " + " | ".join(",".join(m) for m in w["members"]))
    _emit(args, report, human)
    if verdict.status == STATUS_UNKNOWN:
        return EXIT_UNKNOWN
    wanted = verdict.status == STATUS_STRONG if args.strong else verdict.holds
    return EXIT_OK if wanted else EXIT_FAIL


def cmd_chain(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    limits = _limits_from(args)
    lower = parse_family(args.lower, limits)
    upper = parse_family(args.upper, limits)
    if args.rel:
        rel = read_rel(args.rel, lower, upper)
    elif args.inclusion:
        rel = inclusion_relation(lower, upper)
    else:
        print("chain needs --inclusion or --rel PATH", file=sys.stderr)
        return EXIT_USAGE
    if args.special:
        verdict = check_special_chain(rel, args.t, args.mode, limits)
    else:
        verdict = check_ekr_chain(rel, args.t, args.mode, limits)
    payload = verdict.to_json_dict()
    if args.identities:
        payload["identities"] = [
            [e.identity, e.context, e.lhs, e.rhs, e.holds]
            for e in check_counting_identities(rel, limits).entries
        ]
    report = _report(
        args,
        {"lower": args.lower, "upper": args.upper, "relation": args.rel or "inclusion"},
        payload,
        started,
    )
    human = [
        f"chain lower={args.lower} ({len(lower.members)}) upper={args.upper} "
        f"({len(upper.members)})",
        f"is_chain {verdict.is_chain}  is_special {verdict.is_special}  "
        f"fiber_size {verdict.fiber_size}  degree_sum {verdict.degree_sum}",
    ]
    human += [f"failure {f.condition}: {f.detail}" for f in verdict.failures]
    if args.identities:
        human += [f"identity {e[0]} [{e[1]}]: {e[2]} = {e[3]} -> {e[4]}" for e in payload["identities"]]
    _emit(args, report, human)
    if any(f.detail.startswith("Unknown") for f in verdict.failures):
        return EXIT_UNKNOWN
    passed = verdict.is_special if args.special else verdict.is_chain
    return EXIT_OK if passed else EXIT_FAIL


def _resolve_cover(name: str, fam: SetFamily) -> list[int]:
    amb = fam.ambient
    if name in ("walecki", "circle", "unions", "shifts"):
        if not isinstance(amb, AmbientGraph):
            raise EngineError("builtin covers need an ambient-backed family")
        n = amb.params[0]
        if name == "walecki":
            result = walecki(n, amb)
        elif name == "circle":
            result = circle_factorization(n, amb)
        elif name == "shifts":
            result = bipartite_shift_matchings(n, amb)
        else:
            base = (
                circle_factorization(n, amb)
                if amb.kind == "complete"
                else bipartite_shift_matchings(n, amb)
            )
            result = consecutive_unions(base, wrap=True)
        blocks = [b.bits for b in result.blocks]
    else:
        cover_fam = read_fam(name)
        if cover_fam.ground != fam.ground:
            raise EngineError("cover family lives on a different ground set")
        blocks = [m.bits for m in cover_fam.members]
    out = []
    for bits in blocks:
        try:
            out.append(fam.index_of(bits))
        except KeyError:
            raise EngineError("cover block is not a member of the family") from None
    return out


def cmd_balanced(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    limits = _limits_from(args)
    fam = parse_family(args.family, limits)
    if args.kit.endswith(".gen"):
        action = read_gen(args.kit, fam.ground)
    else:
        if not isinstance(fam.ambient, AmbientGraph):
            print("named kits need an ambient-backed family", file=sys.stderr)
            return EXIT_USAGE
        action = kit_by_name(args.kit, fam.ambient)
    try:
        cover = _resolve_cover(args.cover, fam)
    except EngineError as exc:
        print(f"cover error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    verdict = check_g_balanced(action, fam, cover, args.j, args.t, args.mode, limits)
    payload = verdict.to_json_dict()
    report = _report(
        args,
        {"family": args.family, "kit": args.kit, "cover": args.cover, "j": args.j,
         "cover_size": len(cover)},
        payload,
        started,
    )
    human = [
        f"balanced family={args.family} kit={args.kit} cover={args.cover} "
        f"(r={len(cover)}) j={args.j}",
        f"ground transitive {verdict.transitive_on_ground}, family closed "
        f"{verdict.family_closed}, family transitive {verdict.transitive_on_family}",
        f"multiplicity ok {verdict.cover_multiplicity_ok}, cover clique ok "
        f"{verdict.cover_clique_ok}",
        f"passed {verdict.passed}",
    ]
    _emit(args, report, human)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_decompose(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    limits = _limits_from(args)
    amb = parse_ambient(args.ambient)
    pattern = parse_pattern(args.pattern)
    result = exact_cover_decomposition(amb, pattern, limits)
    if result is None:
        payload = {"blocks": 0, "exists": False}
        report = _report(args, {"ambient": args.ambient, "pattern": args.pattern}, payload, started)
        _emit(args, report, ["no decomposition exists (search exhausted)"])
        return EXIT_FAIL
    if args.out:
        write_decomposition(result, args.out)
    payload = {
        "blocks": len(result.blocks),
        "exists": True,
        "multiplicity": result.multiplicity,
        "verified": result.verified,
    }
    report = _report(args, {"ambient": args.ambient, "pattern": args.pattern}, payload, started)
    human = [f"{len(result.blocks)} blocks partition {amb.ground.size} elements"]
    if args.out:
        human.append(f"wrote {args.out}")
    _emit(args, report, human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ekrcheck", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--t", type=int, default=1, help="intersection threshold")
        p.add_argument("--mode", choices=["element", "vertex"], default="element")
        p.add_argument("--cap", type=int, default=None, help="member cap override")
        p.add_argument("--budget", type=int, default=None, help="search node budget")
        p.add_argument("--threads", type=int, default=1, help="worker cap (sequential engine)")
        p.add_argument("--json", action="store_true", help="machine-readable report")

    g = sub.add_parser("generate", help="write a family to a .fam file")
    g.add_argument("family")
    g.add_argument("--out", required=True)
    g.add_argument("--cap", type=int, default=None)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="EKR / strong-EKR verdict for a family")
    v.add_argument("family")
    v.add_argument("--strong", action="store_true")
    v.add_argument("--dimacs", default=None, help="also export the intersection graph")
    v.add_argument("--out", dest="report_out", default=None,
                   help="also write the JSON report here")
    common(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("chain", help="check the chain certificate for two families")
    c.add_argument("lower")
    c.add_argument("upper")
    c.add_argument("--inclusion", action="store_true", help="use the containment relation")
    c.add_argument("--rel", default=None, help="read relations from a .rel file")
    c.add_argument("--special", action="store_true")
    c.add_argument("--identities", action="store_true", help="include counting identities")
    c.add_argument("--out", dest="report_out", default=None,
                   help="also write the JSON report here")
    common(c)
    c.set_defaults(func=cmd_chain)

    b = sub.add_parser("balanced", help="check the balanced-cover certificate")
    b.add_argument("family")
    b.add_argument("kit", help="generator kit name or .gen file")
    b.add_argument("cover", help="walecki|circle|unions|shifts or a .fam file")
    b.add_argument("--j", type=int, required=True)
    b.add_argument("--out", dest="report_out", default=None,
                   help="also write the JSON report here")
    common(b)
    b.set_defaults(func=cmd_balanced)

    d = sub.add_parser("decompose", help="exact-cover decomposition search")
    d.add_argument("ambient")
    d.add_argument("pattern")
    d.add_argument("--out", default=None)
    common(d)
    d.set_defaults(func=cmd_decompose)

    return top


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    args.argv = ["ekrcheck"] + argv
    if getattr(args, "threads", 1) < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.func(args)
    except (FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FamilyTooLarge, NodeBudgetExceeded) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except DecompositionError as exc:
        print(f"fail: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
