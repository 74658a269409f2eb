"""
Command-line interface: evaluation, group inspection, catalog export and
verification suites.

Exit status is 0 when every check passes, 1 when any check fails and 2 on
usage or domain errors.
"""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from . import __version__
from .config import DEFAULT_SETTINGS, Settings
from .errors import CatalogIOError, LFunctionError, UsageError
from .group_engine import (
    GROUP_ORDER,
    cached_double_cosets,
    generate_group,
    permutation_subgroup,
    verify_coxeter_presentation,
)
from .l_function import METHODS, eval_l, make_point
from .relation_catalog import export_catalog
from .schemas import SampleConstraints, VerificationReport, format_complex, parse_complex
from .verifier import CLASSICAL_SUITES, report_to_json, run_classical_suite, select_elements, verify_invariance

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns the exit code"""

    def error(self, message):
        raise UsageError(message)


def parse_params(text: str) -> List[complex]:
    """Seven comma-separated complex literals, "re" or "re+imi" """
    parts = text.split(",")
    if len(parts) != 7:
        raise UsageError(f"--params needs exactly seven values a,b,c,d,e,f,g, got {len(parts)}")
    try:
        return [parse_complex(part) for part in parts]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def evaluate_payload(params: str, method: str = "auto", settings: Settings = DEFAULT_SETTINGS) -> Dict[str, Any]:
    point = make_point(*parse_params(params), settings=settings)
    result = eval_l(point, method, settings)
    payload = result.model_dump(mode="json")
    payload["value_text"] = format_complex(result.value, settings.significant_digits)
    return payload


def group_summary() -> Dict[str, Any]:
    group = generate_group()
    try:
        coxeter = "ok" if verify_coxeter_presentation().ok else "failed"
    except LFunctionError as exc:
        coxeter = f"failed ({exc})"
    return {"order": len(group), "sigma": len(permutation_subgroup(group)), "coxeter": coxeter}


def cosets_payload() -> List[Dict[str, Any]]:
    return [
        {
            "template": c.template_id,
            "size": c.size,
            "class_word": c.class_word,
            "representative": c.representative.word_text(),
        }
        for c in cached_double_cosets()
    ]


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="saalschutz-l", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="log at INFO level on standard error")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_out(p):
        p.add_argument("--out", type=Path, help="write output to this file instead of stdout")
        return p

    p_eval = with_out(sub.add_parser("eval", help="evaluate L at one point"))
    p_eval.add_argument("--params", required=True, help="a,b,c,d,e,f,g with e+f+g-a-b-c-d = 1")
    p_eval.add_argument("--method", choices=METHODS, default="auto")

    p_group = sub.add_parser("group", help="inspect the invariance group")
    group_sub = p_group.add_subparsers(dest="group_command", required=True, parser_class=_Parser)
    with_out(group_sub.add_parser("info", help="order, permutation subgroup size, Coxeter check"))
    with_out(group_sub.add_parser("cosets", help="the six double cosets"))

    p_catalog = with_out(sub.add_parser("catalog", help="export all 1920 relations"))
    p_catalog.add_argument("--format", choices=("json", "text"), default="json")

    p_verify = sub.add_parser("verify", help="run verification suites")
    verify_sub = p_verify.add_subparsers(dest="verify_command", required=True, parser_class=_Parser)
    p_rel = with_out(verify_sub.add_parser("relations", help="L(p) = L(Mp) at random points"))
    p_rel.add_argument("--samples", type=int, default=3)
    p_rel.add_argument("--elements", default="reps", help="all, reps or random:K")
    p_rel.add_argument("--tol", type=float, default=1e-6)
    p_rel.add_argument("--seed", type=int, default=0)
    p_rel.add_argument("--method", choices=METHODS, default="auto")
    p_rel.add_argument("--complex", action="store_true", help="draw complex parameters")
    p_cls = with_out(verify_sub.add_parser("classical", help="Thomae, Bailey, Barnes and kernel checks"))
    p_cls.add_argument("--which", choices=CLASSICAL_SUITES, default="all")
    p_cls.add_argument("--seed", type=int, default=0)
    p_cls.add_argument("--instances", type=int, default=10)

    sub.add_parser("serve", help="run the MCP server on stdio")
    return parser


def _emit(text: str, out: Optional[Path], stream: TextIO) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        stream.write(text)
        return
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CatalogIOError(f"failed to write {out}: {exc}") from exc


def _report_exit(report: VerificationReport) -> int:
    return EXIT_OK if report.all_passed else EXIT_FAILED


def run(args: argparse.Namespace, stdout: TextIO) -> int:
    if args.command == "eval":
        payload = evaluate_payload(args.params, args.method)
        _emit(json.dumps(payload, indent=2), args.out, stdout)
        return EXIT_OK

    if args.command == "group":
        if args.group_command == "info":
            summary = group_summary()
            _emit(f"order={summary['order']} sigma={summary['sigma']} coxeter={summary['coxeter']}", args.out, stdout)
            return EXIT_OK if summary["coxeter"] == "ok" and summary["order"] == GROUP_ORDER else EXIT_FAILED
        lines = [f"{c['template']} size={c['size']} word={c['class_word']} rep={c['representative']}" for c in cosets_payload()]
        _emit("\n".join(lines), args.out, stdout)
        return EXIT_OK

    if args.command == "catalog":
        if args.out is None:
            stdout.write(export_catalog(args.format))
        else:
            export_catalog(args.format, args.out)
        return EXIT_OK

    if args.command == "verify":
        if args.verify_command == "relations":
            constraints = SampleConstraints(seed=args.seed, complex_points=args.complex)
            elements = select_elements(args.elements, args.seed)
            report = verify_invariance(elements, args.samples, args.tol, constraints, args.method)
        else:
            report = run_classical_suite(args.which, args.seed, args.instances, SampleConstraints(seed=args.seed))
        _emit(report_to_json(report), args.out, stdout)
        return _report_exit(report)

    if args.command == "serve":
        from .server import main as serve_main

        asyncio.run(serve_main())
        return EXIT_OK

    raise UsageError(f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"saalschutz-l: error: {exc}\n")
        return EXIT_USAGE

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format=LOG_FORMAT, stream=stderr)
    try:
        return run(args, stdout)
    except UsageError as exc:
        stderr.write(f"saalschutz-l: error: {exc}\n")
        return EXIT_USAGE
    except LFunctionError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        stderr.write(f"saalschutz-l: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED
