#!/usr/bin/env python3
"""
Finite-model checker for conditional obligation tables.

Usage:
  python tools/ctd_check.py check model.json --conditions 5a,5b,5c,5d
  python tools/ctd_check.py query model.json "O(~C_me | D_other)"
  python tools/ctd_check.py derive --n 4 --a 2,3 --b 1,3 [--closure]
  python tools/ctd_check.py search theorem2 --n 3 --exhaustive
  python tools/ctd_check.py search counterexample 5d-under-cap --n 3
  python tools/ctd_check.py --json demo

Exit codes: 0 = holds / true / clean, 1 = violation / false / derivation
blocked, 2 = usage, parse, validation or size-guard error.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import sentry_sdk
from pydantic import ValidationError

from models.errors import CtdError, GenericityError
from models.formula import extension, parse_formula, parse_obligation, to_text
from models.worlds import Prop, WorldSet
from deontic.config import Settings
from deontic.derive import ObFact, check_against_table, close, replay_theorem1
from deontic.fixtures import (
    FIXTURES,
    PD_QUERY,
    conflict_model,
    conflict_pair,
    fixture_file,
    prisoners_dilemma,
)
from deontic.ideality import (
    AXIOMS,
    Construction,
    check_axioms,
    holds_conditional,
    holds_conditional_formula,
)
from deontic.loader import LoadedModel, dump_model, load_model, materialize, write_model
from deontic.logging_config import LOG_FORMATS, bind_run, setup_logging
from deontic.obstruct import check_all, known_conditions
from deontic.reporting import format_ideal, format_report, format_verdicts
from deontic.search import (
    COUNTEREXAMPLE_KINDS,
    find_counterexample,
    verify_5abc,
    verify_conflict,
    verify_theorem2,
    verify_theorem3,
    verify_weak5e,
)

logger = logging.getLogger("ctd_check")

DEFAULT_CONDITIONS = "5a,5b,5c,5d,5e"
SEARCH_KINDS = ("theorem2", "theorem3", "5abc", "weak5e", "counterexample", "conflict")


def _emit(args: argparse.Namespace, payload: dict[str, Any], lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))


def _load(args: argparse.Namespace) -> LoadedModel:
    if getattr(args, "fixture", None):
        return materialize(fixture_file(args.fixture))
    if not args.file:
        raise CtdError("a model FILE or --fixture is required")
    return load_model(args.file)


def _describe_model(model: LoadedModel) -> dict[str, Any]:
    return {
        "worlds": list(model.universe.names),
        "source": model.source,
        "construction": model.construction.value if model.construction else None,
    }


def _model_line(model: LoadedModel) -> str:
    how = f", construction {model.construction.value}" if model.construction else ""
    return f"model: {model.universe.n} worlds ({', '.join(model.universe.names)}), from {model.source}{how}"


# ─── check ───────────────────────────────────────────────────


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    model = _load(args)
    if args.dump:
        path = write_model(dump_model(model, materialize_ob=args.materialize), args.dump)
        logger.info("model written to %s", path, extra={"command": "check"})

    wanted = [c.strip() for c in args.conditions.split(",") if c.strip()]
    axioms = [c for c in wanted if c in AXIOMS]
    conditions = [c for c in wanted if c not in AXIOMS]
    if axioms and model.ideal is None:
        raise CtdError(f"{', '.join(axioms)}: axiom checks need a model given by F or scores")

    nonempty_only = False if args.all_contexts else None
    verdicts = check_all(model.ob, conditions, nonempty_only=nonempty_only) if conditions else []
    if axioms:
        verdicts += check_axioms(model.ideal, axioms)
    holds = all(v.holds for _, v in verdicts)

    logger.info(
        "checked %d condition(s)", len(verdicts),
        extra={"command": "check", "n": model.universe.n,
               "violations": sum(1 for _, v in verdicts if not v.holds)},
    )
    _emit(
        args,
        {"command": "check", "model": _describe_model(model), "holds": holds,
         "verdicts": [v.as_dict() for _, v in verdicts]},
        [_model_line(model), *format_verdicts(verdicts)],
    )
    return 0 if holds else 1


# ─── query ───────────────────────────────────────────────────


def cmd_query(args: argparse.Namespace, settings: Settings) -> int:
    model = _load(args)
    query = parse_obligation(args.query)
    a = extension(query.condition, model.valuation)
    b = extension(query.obligation, model.valuation)
    holds = holds_conditional(model.ob, a, b)
    construction = model.construction.value if model.construction else "explicit ob"

    _emit(
        args,
        {"command": "query", "query": str(query), "model": _describe_model(model),
         "condition": a.labels, "obligation": b.labels, "holds": holds},
        [
            f"{query} under {construction}: {'true' if holds else 'false'}",
            f"  condition  {to_text(query.condition)} = {a}",
            f"  obligation {to_text(query.obligation)} = {b}",
        ],
    )
    return 0 if holds else 1


# ─── derive ──────────────────────────────────────────────────


def _inline_prop(universe: WorldSet, text: str, flag: str) -> Prop:
    labels = [part.strip() for part in text.split(",") if part.strip()]
    try:
        return universe.prop(labels)
    except CtdError as e:
        raise CtdError(f"{flag}: {e}") from None


def cmd_derive(args: argparse.Namespace, settings: Settings) -> int:
    model: Optional[LoadedModel] = None
    if args.file or args.fixture:
        model = _load(args)
        a = extension(parse_formula(args.a or "A"), model.valuation)
        b = extension(parse_formula(args.b or "B"), model.valuation)
    else:
        if args.n is None or args.a is None or args.b is None:
            raise CtdError("inline derive needs --n, --a and --b (comma-separated world indices)")
        universe = WorldSet.of_size(args.n)
        a = _inline_prop(universe, args.a, "--a")
        b = _inline_prop(universe, args.b, "--b")

    try:
        trace = replay_theorem1(a, b)
    except GenericityError as e:
        logger.warning("derivation blocked: %s", e, extra={"command": "derive"})
        _emit(
            args,
            {"command": "derive", "A": a.labels, "B": b.labels, "blocked": True,
             "region": e.region, "error": str(e)},
            [f"derivation blocked: {e}"],
        )
        return 1

    payload: dict[str, Any] = {"command": "derive", "A": a.labels, "B": b.labels,
                               "blocked": False, "trace": trace.as_dict()}
    lines = [f"A = {a}, B = {b}", trace.render()]

    if model is not None:
        in_table = check_against_table(trace, model.ob)
        payload["in_model"] = in_table.as_dict()
        lines.append(in_table.describe())

    if args.closure:
        closure = close([ObFact(a.universe.top(), a)], max_worlds=settings.closure_max_worlds)
        reached = closure.contains(~a, b)
        payload["closure"] = {"facts": len(closure), "levels": closure.levels, "contains_conclusion": reached}
        lines.append(
            f"closure of ob(W) ∋ A: {len(closure)} facts in {closure.levels} levels; "
            f"ob(~A) ∋ B {'derived' if reached else 'NOT derived'}"
        )

    _emit(args, payload, lines)
    return 0


# ─── search ──────────────────────────────────────────────────


def cmd_search(args: argparse.Namespace, settings: Settings) -> int:
    kind = args.kind
    n = args.n
    seed = args.seed if args.seed is not None else settings.seed
    samples = args.samples if args.samples is not None else settings.samples
    threads = args.threads if args.threads is not None else settings.threads
    common = {"samples": samples, "seed": seed, "threads": threads, "timing": args.timing}

    if kind != "counterexample" and args.target:
        raise CtdError(f"search {kind} takes no target")
    if kind in ("counterexample", "conflict"):
        unsupported = [flag for flag, given in (
            ("--exhaustive/--sampled", args.exhaustive is not None),
            ("--threads", args.threads is not None),
        ) if given]
        if unsupported:
            raise CtdError(f"search {kind} does not take {', '.join(unsupported)}")
    if kind == "theorem2":
        report = verify_theorem2(n, args.exhaustive, **common)
    elif kind == "theorem3":
        report = verify_theorem3(n, args.exhaustive, **common)
    elif kind == "5abc":
        report = verify_5abc(n, args.construction or Construction.SUP, args.exhaustive, **common)
    elif kind == "weak5e":
        report = verify_weak5e(n, args.exhaustive, **common)
    elif kind == "counterexample":
        if args.target not in COUNTEREXAMPLE_KINDS:
            raise CtdError(f"counterexample target must be one of: {', '.join(COUNTEREXAMPLE_KINDS)}")
        report = find_counterexample(args.target, n, samples=samples, seed=seed, timing=args.timing)
    else:
        report = verify_conflict(n, timing=args.timing)

    _emit(args, {"command": "search", "report": report.as_dict()}, format_report(report))
    if kind == "counterexample":
        return 0 if report.violations else 1
    return 0 if report.clean else 1


# ─── demo ────────────────────────────────────────────────────


def cmd_demo(args: argparse.Namespace, settings: Settings) -> int:
    pd = prisoners_dilemma()
    pd_verdicts = check_all(pd.ob)
    query = parse_obligation(PD_QUERY)
    query_holds = holds_conditional_formula(pd.ob, query.condition, query.obligation, pd.valuation)

    conflict = conflict_model()
    a, b = conflict_pair()
    trace = replay_theorem1(a, b)
    in_table = check_against_table(trace, conflict.ob)

    written = []
    if args.write:
        out = Path(args.write)
        out.mkdir(parents=True, exist_ok=True)
        for name in FIXTURES:
            written.append(str(write_model(fixture_file(name), out / f"{name}.json")))

    _emit(
        args,
        {
            "command": "demo",
            "verdicts": [v.as_dict() for _, v in pd_verdicts],
            "query": {"query": str(query), "holds": query_holds},
            "trace": trace.as_dict(),
            "in_model": in_table.as_dict(),
            "written": written,
        },
        [
            "Prisoners' Dilemma (prison terms CC:1 CD:3 DC:0 DD:2, sup)",
            *("  " + line for line in format_ideal(pd.ideal)),
            *("  " + line for line in format_verdicts(pd_verdicts)),
            f"  {query}: {'true' if query_holds else 'false'}",
            "",
            f"Conflict derivation (A = {a}, B = {b})",
            trace.render(),
            in_table.describe(),
            *(f"wrote {path}" for path in written),
        ],
    )
    return 0


# ─── Entry point ─────────────────────────────────────────────


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctd_check",
        description="Check obligation tables, ideality functions and derivations on finite models",
    )
    parser.add_argument("--json", action="store_true", help="Emit one JSON object instead of text")
    parser.add_argument("--seed", type=_seed, default=None, help="Sampling seed (default CTD_SEED or 0)")
    parser.add_argument("--threads", type=_positive, default=None, help="Worker processes for verification sweeps (not counterexample or conflict)")
    parser.add_argument("--log-level", default=None, help="Log level (default CTD_LOG_LEVEL or INFO)")
    parser.add_argument(
        "--log-format", choices=LOG_FORMATS, default=None,
        help="Log format on stderr (default CTD_LOG_FORMAT or json)",
    )
    parser.add_argument("--timing", action="store_true", help="Include elapsed times in search reports")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_source(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", nargs="?", help="Model file (JSON)")
        p.add_argument("--fixture", choices=sorted(FIXTURES), help="Use a bundled model instead of FILE")

    p = sub.add_parser("check", help="Run condition and axiom checks on a model")
    model_source(p)
    p.add_argument(
        "--conditions", default=DEFAULT_CONDITIONS,
        help=f"Comma-separated: {', '.join(known_conditions() + list(AXIOMS))} (default {DEFAULT_CONDITIONS})",
    )
    p.add_argument("--all-contexts", action="store_true", help="Also quantify over the empty context")
    p.add_argument("--dump", metavar="PATH", help="Write the loaded model back out as a model file")
    p.add_argument("--materialize", action="store_true", help="With --dump, write the explicit ob table")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("query", help="Evaluate O(B|A) on a model")
    model_source(p)
    p.add_argument("query", help='Conditional obligation, e.g. "O(~C_me | D_other)"')
    p.set_defaults(handler=cmd_query)

    p = sub.add_parser("derive", help="Replay the conflict derivation for a pair A, B")
    model_source(p)
    p.add_argument("--a", help="With a model: formula (default A). Inline: world indices, e.g. 2,3")
    p.add_argument("--b", help="With a model: formula (default B). Inline: world indices, e.g. 1,3")
    p.add_argument("--n", type=_positive, help="Universe size for inline A/B")
    p.add_argument("--closure", action="store_true", help="Also compute the full closure of ob(W) ∋ A")
    p.set_defaults(handler=cmd_derive)

    p = sub.add_parser("search", help="Verification sweeps and counterexample miners")
    p.add_argument("kind", choices=SEARCH_KINDS)
    p.add_argument("target", nargs="?", help=f"counterexample target: {', '.join(COUNTEREXAMPLE_KINDS)}")
    p.add_argument("--n", type=_positive, default=3, help="Universe size (default 3)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument(
        "--exhaustive", dest="exhaustive", action="store_const", const=True, default=None,
        help="Force the full space (sweeps only; refused above 3 worlds)",
    )
    mode.add_argument(
        "--sampled", dest="exhaustive", action="store_const", const=False,
        help="Force sampling (sweeps only)",
    )
    p.add_argument("--samples", type=_positive, default=None, help="Sample count (default CTD_SAMPLES)")
    p.add_argument("--construction", choices=[c.value for c in Construction], help="For 5abc (default sup)")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("demo", help="Run the bundled examples")
    p.add_argument("--write", metavar="DIR", help="Also write the bundled model files to DIR")
    p.set_defaults(handler=cmd_demo)
    return parser


def _init_sentry(settings: Settings) -> None:
    if settings.sentry_dsn:
        sentry_sdk.init(
            dsn=settings.sentry_dsn,
            traces_sample_rate=0.0,
            environment=settings.environment,
            send_default_pii=False,
        )


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = Settings.from_env()

    if args.log_level:
        settings = replace(settings, log_level=args.log_level.upper())
    if args.log_format:
        settings = replace(settings, log_format=args.log_format)
    setup_logging(settings.level, settings.log_format)
    bind_run(settings.run_id or None)
    _init_sentry(settings)

    try:
        return args.handler(args, settings)
    except (CtdError, ValidationError) as e:
        logger.error("%s failed: %s", args.command, e, extra={"command": args.command})
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        if settings.sentry_dsn:
            sentry_sdk.capture_exception(e)
        raise


if __name__ == "__main__":
    sys.exit(main())
