"""Command-line front end.

Subcommands: build, table, check <name>, invariants, oracle, embed-cayley,
qhat, isotope.  Exit code 0 means every requested check passed, 1 means a
check failed (a witness is in the report), 2 means a usage or validation
error.  Identical invocations produce byte-identical output: there is no
wall-clock seeding anywhere, random sweeps require an explicit --seed, and
reports are emitted with fixed key order.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import loops
from .loops import LoopError
from .mab import MabLoop, MabParams, MabParamsError, build_mab
from .rings import RingError, cyclic_subgroup, element_of_order, make_ring
from .sampling import EXHAUSTIVE, CheckStrategy
from .triality import TrialityGroup, oracle_compare, qhat_group
from .zorn import verify_embedding

AUTO_EXHAUSTIVE_OPS = 100_000_000

CHECK_NAMES = ("moufang", "axioms", "lemma2", "triality", "equivariance",
               "module-triality", "lemma5")


def _add_loop_args(p, need_ab=True):
    p.add_argument("--ring", required=True, help="Zn:<n> | GF:<p>[^<k>][:poly=c0,..,ck]")
    p.add_argument("--r0", type=int, default=None, help="generator literal for R_0")
    p.add_argument("--r0-order", type=int, default=None, help="pick R_0 = <u> with u of this order")
    if need_ab:
        p.add_argument("--a", type=int, default=1, help="parameter a (element literal)")
        p.add_argument("--b", type=int, default=0, help="parameter b (element literal)")
    p.add_argument("--unchecked-params", action="store_true",
                   help="allow parameters outside the proven regime (reports are flagged)")


def _add_strategy_args(p):
    p.add_argument("--strategy", choices=("auto", "exhaustive", "random"), default="auto")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)


def _add_format_arg(p):
    p.add_argument("--format", choices=("text", "json"), default="text")


def _params_from(args) -> MabParams:
    ring = make_ring(args.ring)
    if args.r0 is not None:
        gen = ring.from_literal(args.r0)
    elif args.r0_order is not None:
        gen = element_of_order(ring, args.r0_order)
    else:
        raise MabParamsError("one of --r0 / --r0-order is required")
    a = ring.from_literal(getattr(args, "a", 1))
    b = ring.from_literal(getattr(args, "b", 0))
    return MabParams(ring, cyclic_subgroup(gen), a, b,
                     checked=not args.unchecked_params)


def _strategy_for(args, exhaustive_cost: int) -> CheckStrategy:
    if args.strategy == "exhaustive":
        return EXHAUSTIVE
    wants_random = (args.strategy == "random" or args.samples is not None
                    or args.seed is not None or exhaustive_cost > AUTO_EXHAUSTIVE_OPS)
    if wants_random:
        if args.samples is None or args.seed is None:
            raise MabParamsError(
                "random strategy (or a sweep too large for exhaustive) "
                "requires explicit --samples and --seed")
        return CheckStrategy("random", args.samples, args.seed)
    return EXHAUSTIVE


def _emit_report(report, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        if report.ok:
            print(f"ok: {report.name}, {report.checked} cases checked")
        else:
            print(f"FAIL: {report.name}, witness: {report.witness}")
    return 0 if report.ok else 1


def _emit_dict(d, fmt: str):
    if fmt == "json":
        print(json.dumps(d, indent=2))
    else:
        for k, v in d.items():
            print(f"{k}: {v}")


def _parse_elem(s: str, loop: MabLoop) -> int:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MabParamsError(f"element literal must look like (r,x,y,z), got {s!r}")
    parts = [int(c) for c in s[1:-1].split(",")]
    if len(parts) != 4:
        raise MabParamsError("element literal needs four coordinates")
    elem = loop.element(*parts)
    return elem.index


# -- subcommands ------------------------------------------------------------


def cmd_build(args) -> int:
    loop = build_mab(_params_from(args))
    strategy = None
    if args.strategy == "random" or args.samples is not None:
        strategy = _strategy_for(args, 10 ** 18)
    _emit_dict(loop.structure_report(strategy), args.format)
    return 0


def cmd_table(args) -> int:
    loop = build_mab(_params_from(args))
    if loop.order > loops.TABLE_LIMIT:
        raise MabParamsError(f"order {loop.order} too large for a table export")
    sys.stdout.write(loops.table_csv(loop))
    return 0


def cmd_check(args) -> int:
    params = _params_from(args)
    name = args.name
    if name in ("moufang", "axioms", "lemma2"):
        loop = build_mab(params)
        if name == "axioms":
            if loop.order ** 2 > AUTO_EXHAUSTIVE_OPS:
                raise MabParamsError("axiom sweep too large at this order")
            return _emit_report(loops.verify_loop_axioms(loop), args.format)
        strategy = _strategy_for(args, loop.order ** 3)
        if name == "moufang":
            return _emit_report(loops.verify_moufang(loop, strategy), args.format)
        return _emit_report(loops.verify_translation_identities(loop, strategy), args.format)
    group = TrialityGroup(params)
    if name == "triality":
        strategy = _strategy_for(args, group.order)
        return _emit_report(group.verify_triality_identity(strategy), args.format)
    if name == "equivariance":
        strategy = _strategy_for(args, 4 * params.ring.size ** 6)
        return _emit_report(group.verify_equivariance(strategy), args.format)
    if name == "module-triality":
        for r in params.r0.codes:
            rep = group.verify_module_triality(int(r))
            if not rep.ok:
                return _emit_report(rep, args.format)
        print(f"ok: module-triality, all {params.r0.order} values of r")
        return 0
    if name == "lemma5":
        S = params.ring.size
        for r in params.r0.codes:
            for s1 in range(S):
                for s2 in range(S):
                    rep = group.verify_sigma_fixed_pairing(int(r), s1, s2)
                    if not rep.ok:
                        return _emit_report(rep, args.format)
        print(f"ok: lemma5, {params.r0.order * S * S} triples checked")
        return 0
    raise MabParamsError(f"unknown check {name!r}")


def cmd_invariants(args) -> int:
    loop = build_mab(_params_from(args))
    report = loop.structure_report(None)
    _emit_dict(report, args.format)
    return 0


def cmd_oracle(args) -> int:
    loop = build_mab(_params_from(args))
    rep = oracle_compare(loop, _strategy_for(args, loop.order ** 2))
    if args.format == "text" and rep.ok:
        print(f"{rep.data['pairs']}/{rep.data['pairs']} products match")
        return 0
    return _emit_report(rep, args.format)


def cmd_embed(args) -> int:
    loop = build_mab(_params_from(args))
    strategy = _strategy_for(args, loop.order ** 2)
    return _emit_report(verify_embedding(loop, strategy), args.format)


def cmd_qhat(args) -> int:
    ring = make_ring(args.ring)
    rep = qhat_group(ring, ring.from_literal(args.b), args.i).is_abelian_report()
    if args.format == "text":
        tag = "abelian" if rep.data["abelian"] else f"non-abelian, witness {rep.witness}"
        print(f"{'ok' if rep.ok else 'FAIL'}: qhat {tag}")
        return 0 if rep.ok else 1
    return _emit_report(rep, args.format)


def cmd_isotope(args) -> int:
    loop = build_mab(_params_from(args))
    m = _parse_elem(args.m, loop)
    iso = loops.isotope(loop, m)
    ax = loops.verify_loop_axioms(iso)
    if not ax.ok:
        return _emit_report(ax, args.format)
    strategy = _strategy_for(args, iso.order ** 3)
    rep = loops.verify_moufang(iso, strategy)
    if args.format == "text" and rep.ok:
        print(f"ok: isotope at m={args.m} passes axioms and moufang "
              f"({rep.checked} triples)")
        return 0
    return _emit_report(rep, args.format)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="moufang",
        description="Build and verify the Moufang loops M_{a,b} over finite rings.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a loop and print its structure summary")
    _add_loop_args(p)
    _add_strategy_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("table", help="CSV multiplication table on stdout")
    _add_loop_args(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="run one verification sweep")
    p.add_argument("name", choices=CHECK_NAMES)
    _add_loop_args(p)
    _add_strategy_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariants", help="structure report, nucleus, associator witness")
    _add_loop_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("oracle", help="compare closed-form products with the group route")
    _add_loop_args(p)
    _add_strategy_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("embed-cayley", help="verify the Zorn-matrix embedding (a=1, b=0)")
    _add_loop_args(p)
    _add_strategy_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("qhat", help="abelian-iff-b=0 invariant of the distinguishing groups")
    p.add_argument("--ring", required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--i", type=int, default=1, choices=(1, 2, 3))
    _add_format_arg(p)
    p.set_defaults(func=cmd_qhat)

    p = sub.add_parser("isotope", help="twist by an element and re-verify loop/Moufang")
    _add_loop_args(p)
    p.add_argument("--m", required=True, help="element literal (r,x,y,z)")
    _add_strategy_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_isotope)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RingError, MabParamsError, LoopError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
