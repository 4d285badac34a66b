"""Command line entry point: ``veronese-braid verify`` and ``veronese-braid braid``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .braid_core import BraidWord, braids_equal, delta_squared, permutation_of
from .groups import CONVENTIONS, ZETA_PRIMARY
from .pipeline import Config, ConfigError, RunResult, filter_reports, run_pipeline, validate_report
from .report import ClaimReport, dumps_reports


def render_markdown(reports: list[ClaimReport], meta: dict) -> str:
    lines = ["# Verification report", "",
             f"convention: `{meta['convention']}`  ", f"claims: {len(reports)}", ""]
    if meta.get("filter"):
        lines[-1:-1] = [f"filter: `{meta['filter']}`  "]
    lines += ["| id | status |", "|---|---|"]
    lines += [f"| {r.claim_id} | {r.status} |" for r in reports]
    for r in reports:
        lines += ["", f"## {r.claim_id}: {r.status}", "",
                  f"- derived: `{json.dumps(r.derived, sort_keys=True, ensure_ascii=False)}`",
                  f"- printed: `{json.dumps(r.paper, sort_keys=True, ensure_ascii=False)}`"]
        if r.trace:
            lines += ["", "```"] + list(r.trace) + ["```"]
    return "\n".join(lines) + "\n"


def run_verify(config_path: str | Path | None = None, filter: str | None = None,
               out: str | Path = ".", strict: bool = False,
               convention: str = ZETA_PRIMARY) -> int:
    """Run the pipeline, write report.json and report.md into ``out``, return the exit code."""
    try:
        config = Config.load(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for d in exc.diagnostics:
            print(f"  {d}", file=sys.stderr)
        return 2
    result = run_pipeline(config, convention)
    reports = filter_reports(result.reports, filter)
    code = RunResult(reports).exit_code(strict)
    meta = {"convention": convention, "claims": len(reports), "filter": filter,
            "exit_code": code}
    text = dumps_reports(reports, meta)
    validate_report(json.loads(text))
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(text)
    (out / "report.md").write_text(render_markdown(reports, meta))
    counts: dict[str, int] = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items())) or "no claims"
    print(f"{len(reports)} claims ({summary}); reports in {out}")
    for r in reports:
        if not r.ok:
            print(f"  {r.claim_id}: {r.status}")
    return code


def cmd_verify(args: argparse.Namespace) -> int:
    return run_verify(args.config, args.filter, args.out, args.strict, args.convention)


def _parse_word(text: str, n: int | None) -> BraidWord:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed word {text!r}: {exc}") from exc
    if isinstance(data, list):
        if n is None:
            n = max((abs(a) for a in data if isinstance(a, int)), default=0) + 1
        data = {"n": n, "word": data}
    elif isinstance(data, dict) and n is not None:
        data = {**data, "n": n}
    return BraidWord.from_json(data)


def cmd_braid(args: argparse.Namespace) -> int:
    try:
        if args.op == "delta2":
            print(json.dumps(list(delta_squared(args.n).letters)))
        elif args.op == "reduce":
            print(json.dumps(list(_parse_word(args.word, args.n).freely_reduced().letters)))
        elif args.op == "perm":
            print(permutation_of(_parse_word(args.word, args.n)))
        elif args.op == "equal":
            u = _parse_word(args.left, args.n)
            v = _parse_word(args.right, args.n if args.n is not None else u.n)
            if u.n != v.n:
                u, v = BraidWord(max(u.n, v.n), u.letters), BraidWord(max(u.n, v.n), v.letters)
            print("true" if braids_equal(u, v) else "false")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="veronese-braid",
                                     description="Braid and group computations for the degree-3 Veronese branch curve.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="replay every claim and write report.json / report.md")
    v.add_argument("--config", help="config JSON (default: the shipped one)")
    v.add_argument("--filter", help="claim-id glob, e.g. '5.6.*'")
    v.add_argument("--out", default=".", help="output directory (default: .)")
    v.add_argument("--strict", action="store_true", help="treat PASS_MOD_C as failure")
    v.add_argument("--convention", choices=CONVENTIONS, default=ZETA_PRIMARY)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("braid", help="braid word utilities")
    bsub = b.add_subparsers(dest="op", required=True)
    r = bsub.add_parser("reduce", help="free reduction of a word")
    r.add_argument("word")
    p = bsub.add_parser("perm", help="image in the symmetric group")
    p.add_argument("word")
    e = bsub.add_parser("equal", help="decide equality in B_n")
    e.add_argument("left")
    e.add_argument("right")
    d = bsub.add_parser("delta2", help="the full twist")
    for q in (r, p, e):
        q.add_argument("--n", type=int, help="strand count (default: from the word)")
    d.add_argument("--n", type=int, required=True)
    b.set_defaults(func=cmd_braid)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
