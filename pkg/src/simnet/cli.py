from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import asdict
from enum import IntEnum
from typing import Any, Literal

import dotenv
import pandas as pd
from pydantic import BaseModel, Field

from simnet.bench import run_bench
from simnet.core.model import Evidence, PosteriorVector
from simnet.errors import BudgetExceededError, ModelValidationError, SimnetError
from simnet.fixtures import write_fixtures
from simnet.inference.strict import check_consistency, compute_alphas, posterior_from_alphas
from simnet.io.files import dump_model, dump_multinet, load_evidence, load_joint, load_model
from simnet.multinet.conversion import convert
from simnet.multinet.inference import count_operations, infer_multinet
from simnet.oracle.joint_table import from_multinet, posterior
from simnet.settings import get_settings
from simnet.similarity.construction import build_similarity_network
from simnet.similarity.network import Cover, SimilarityNetwork, validate_similarity_network


class ExitCode(IntEnum):
    OK = 0
    INVALID = 1
    NOT_POSITIVE = 2
    IMPOSSIBLE_EVIDENCE = 3
    UNSUPPORTED = 4


class QueryResult(BaseModel):
    mode: Literal["global", "sinet", "multinet"]
    posterior: PosteriorVector
    warnings: list[str] = Field(default_factory=list)
    work: dict[str, Any] = Field(default_factory=dict)


def _split_list(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_cover(text: str) -> Cover:
    """'a,b;b,c' -> cells (a, b) and (b, c)."""
    return Cover.of([_split_list(cell) or [] for cell in text.split(";")])


def _emit(args: argparse.Namespace, payload: BaseModel, table: pd.DataFrame | None) -> None:
    if args.json:
        print(payload.model_dump_json(indent=2))
    elif table is not None:
        print(table.to_string(index=False))


def _load_valid_model(path: str) -> SimilarityNetwork:
    sn = load_model(path)
    report = validate_similarity_network(sn)
    if not report.ok:
        raise ModelValidationError(report, what=path)
    return sn


def _posterior_table(post: PosteriorVector) -> pd.DataFrame:
    return pd.DataFrame(
        {post.variable: list(post.probabilities), "probability": list(post.probabilities.values())}
    )


# ---------- Commands ----------


def cmd_validate(args: argparse.Namespace) -> int:
    sn = load_model(args.path)
    report = validate_similarity_network(sn)
    if report.ok:
        logging.info(f"{args.path}: valid ({len(sn.cover)} cells)")
    table = pd.DataFrame(
        [v.model_dump() for v in report.violations], columns=["kind", "location", "message"]
    )
    _emit(args, report, table if not report.ok else None)
    if not args.json and report.ok:
        print(f"{args.path}: ok")
    return ExitCode.OK if report.ok else ExitCode.INVALID


def _evidence(args: argparse.Namespace) -> Evidence:
    return load_evidence(args.evidence) if args.evidence else {}


def cmd_infer(args: argparse.Namespace) -> int:
    sn = _load_valid_model(args.model)
    evidence = _evidence(args)
    order = _split_list(args.order)

    if args.mode == "sinet":
        alphas = compute_alphas(sn, evidence)
        post = posterior_from_alphas(sn, alphas, seed=args.seed)
        work: dict[str, Any] = {"cells_touched": alphas.cells_touched}
    else:
        mn = convert(sn, order, assume_type1=args.assume_type1)
        if args.mode == "multinet":
            post = infer_multinet(mn, evidence)
            work = {h: asdict(c) for h, c in count_operations(mn, evidence).items()}
        else:
            table = from_multinet(mn, args.cell_budget)
            kept = {v: val for v, val in evidence.items() if v in mn.names}
            dropped = [
                f"evidence on {v!r} dropped: not depicted" for v in evidence if v not in kept
            ]
            post = posterior(table, sn.hypothesis, kept)
            post = post.model_copy(update={"warnings": tuple(dropped)})
            for warning in dropped:
                logging.warning(warning)
            work = {"cells_touched": int(table.cells.size)}

    result = QueryResult(mode=args.mode, posterior=post, warnings=list(post.warnings), work=work)
    _emit(args, result, _posterior_table(post))
    return ExitCode.OK


def cmd_convert(args: argparse.Namespace) -> int:
    sn = _load_valid_model(args.model)
    mn = convert(
        sn,
        _split_list(args.order),
        assume_type1=args.assume_type1,
        allow_type2=args.experimental_type2,
    )
    dump_multinet(mn, args.output)
    logging.info(f"multinet written to {args.output}")
    return ExitCode.OK


def cmd_build(args: argparse.Namespace) -> int:
    t = load_joint(args.joint)
    if t.cells.size > args.cell_budget:
        raise BudgetExceededError(f"joint of {t.cells.size} cells exceeds the budget")
    kind = "type1" if args.type == "1" else "type2"
    cover = parse_cover(args.cover)
    sn = build_similarity_network(t, args.hypothesis, cover, kind, _split_list(args.order))
    dump_model(sn, args.output)
    logging.info(f"{kind} similarity network written to {args.output}")
    return ExitCode.OK


def cmd_bench(args: argparse.Namespace) -> int:
    table = run_bench(
        n_hypotheses=args.hypotheses,
        vars_per_local=args.vars_per_local,
        n_findings=args.total,
        seed=args.seed,
        repeats=args.repeats,
        cell_budget=args.cell_budget,
    )
    if args.json:
        print(table.to_json(orient="records", indent=2))
    else:
        print(table.to_string(index=False))
    return ExitCode.OK


def cmd_check(args: argparse.Namespace) -> int:
    sn = _load_valid_model(args.model)
    alphas = compute_alphas(sn, _evidence(args))
    report = check_consistency(alphas, sn.cover)
    table = pd.DataFrame([v.model_dump() for v in report.violations])
    _emit(args, report, table if not report.ok else None)
    if not args.json and report.ok:
        print(f"{args.model}: consistent")
    return ExitCode.OK if report.ok else ExitCode.INVALID


def cmd_fixtures(args: argparse.Namespace) -> int:
    for path in write_fixtures(args.output):
        logging.info(f"wrote {path}")
    return ExitCode.OK


# ---------- Parser ----------


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="simnet", description="Exact inference for similarity networks and multinets"
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--cell-budget", type=int, default=settings.cell_budget)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--log-level", default=settings.log_level)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a similarity-network model file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("infer", help="posterior over the hypothesis")
    p.add_argument("model")
    p.add_argument("--evidence", help="JSON map variable -> value")
    p.add_argument("--mode", choices=["sinet", "multinet", "global"], default="sinet")
    p.add_argument("--order", help="common construction order, e.g. h,g,b,l")
    p.add_argument("--assume-type1", action="store_true")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("convert", help="convert a type-1 model to a multinet file")
    p.add_argument("model")
    p.add_argument("--order")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--assume-type1", action="store_true")
    p.add_argument(
        "--experimental-type2",
        action="store_true",
        help="convert type-2 models anyway, to search for counterexamples (non-normative)",
    )
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("build", help="build a similarity network from a joint file")
    p.add_argument("joint")
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--cover", required=True, help="cells separated by ';', values by ','")
    p.add_argument("--type", choices=["1", "2"], default="1")
    p.add_argument("--order")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("bench", help="local versus global inference work")
    p.add_argument("--hypotheses", type=int, default=8)
    p.add_argument("--vars-per-local", type=int, default=8)
    p.add_argument("--total", type=int, default=16)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="audit cross-cell consistency of a model")
    p.add_argument("model")
    p.add_argument("--evidence")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fixtures", help="write the JSON fixture set")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    dotenv.load_dotenv()
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    try:
        return int(args.func(args))
    except SimnetError as exc:
        logging.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
