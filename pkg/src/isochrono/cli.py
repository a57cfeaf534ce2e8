"""Command-line entry point.

Subcommands:
  filter    apply the corpus quality filter, emit canonical JSONL + histogram CSV
  evaluate  score every discovered submission for one language pair
  validate  compare duration predictors against reference durations

Exit codes: 0 success, 2 input error, 3 evaluation hard-failure, 4 bridge
transport failure.

Systems discovery for ``evaluate``: one subdirectory per system under
--systems-dir, containing ``<src>-<tgt>.txt`` (line-aligned) or
``<src>-<tgt>.jsonl`` ({"id", "text"} records).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import validation
from .bridge import BridgeDurationPredictor, BridgeQEProvider, ScorerBridge
from .errors import EvaluationError, IsochronoError, TransportError
from .evaluation import (
    ConstantQE,
    EvaluationResult,
    FlagPolicy,
    PrecomputedQE,
    apply_flags,
    evaluate_system,
    metrics_jsonl,
    rank_systems,
)
from .predictors import RateDurationPredictor, load_profiles
from .report import TableSpec, render_ranking, render_table

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EVAL = 3
EXIT_TRANSPORT = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _read_corpus(path: Path, source_language: str) -> list[corpus_mod.Segment]:
    try:
        with path.open("rb") as stream:
            if path.suffix == ".tsv":
                return corpus_mod.import_covost_tsv(stream, source_language=source_language)
            return corpus_mod.read_corpus_jsonl(stream)
    except OSError as exc:
        raise CliError(f"cannot read corpus {path}: {exc}") from exc
    except IsochronoError as exc:
        raise CliError(f"corpus {path}: {exc}") from exc


def cmd_filter(args) -> int:
    segments = _read_corpus(Path(args.corpus), args.source_language)
    policy = corpus_mod.FilterPolicy(min_tokens=args.min_tokens,
                                     min_upvotes=args.min_upvotes,
                                     max_downvotes=args.max_downvotes)
    kept = corpus_mod.apply_filter(segments, policy)
    histogram = corpus_mod.token_histogram(segments, bin_width=args.bin_width)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "corpus.filtered.jsonl").write_text(
        corpus_mod.write_corpus_jsonl(kept), encoding="utf-8")
    hist_out = io.StringIO()
    writer = csv.writer(hist_out, lineterminator="\n")
    writer.writerow(["bin_start", "count"])
    writer.writerows(histogram)
    (out_dir / "token_histogram.csv").write_text(hist_out.getvalue(), encoding="utf-8")

    print(f"kept {len(kept)} of {len(segments)} segments "
          f"(dropped {len(segments) - len(kept)})")
    return EXIT_OK


def _make_predictor(spec: str, bridges: list[ScorerBridge]):
    kind, _, arg = spec.partition(":")
    if kind == "rate":
        try:
            return RateDurationPredictor(load_profiles(arg))
        except (OSError, IsochronoError) as exc:
            raise CliError(f"cannot load rate profiles {arg!r}: {exc}") from exc
    if kind == "bridge":
        try:
            bridge = ScorerBridge.open(arg)
        except TransportError as exc:
            raise CliError(str(exc), code=EXIT_TRANSPORT) from exc
        bridges.append(bridge)
        return BridgeDurationPredictor(bridge)
    raise CliError(f"unknown predictor spec {spec!r} (use rate:<file> or bridge:<cmd>)")


def _make_qe(spec: str, system_name: str, bridges: list[ScorerBridge]):
    kind, _, arg = spec.partition(":")
    if kind == "constant":
        return ConstantQE(float(arg))
    if kind == "file":
        scores: dict[str, float] = {}
        try:
            for line in Path(arg).read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                row = json.loads(line)
                if row["system"] == system_name:
                    scores[row["segment_id"]] = float(row["score"])
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise CliError(f"cannot read QE scores {arg!r}: {exc}") from exc
        return PrecomputedQE(scores)
    if kind == "bridge":
        try:
            bridge = ScorerBridge.open(arg)
        except TransportError as exc:
            raise CliError(str(exc), code=EXIT_TRANSPORT) from exc
        bridges.append(bridge)
        return BridgeQEProvider(bridge)
    raise CliError(f"unknown QE spec {spec!r} (use file:<jsonl>, bridge:<cmd> "
                   "or constant:<value>)")


def _discover_submissions(systems_dir: Path, pair: tuple[str, str],
                          segments) -> list[corpus_mod.Submission]:
    if not systems_dir.is_dir():
        raise CliError(f"systems dir {systems_dir} does not exist")
    pair_name = f"{pair[0]}-{pair[1]}"
    submissions = []
    for system_path in sorted(p for p in systems_dir.iterdir() if p.is_dir()):
        for suffix, fmt in ((".txt", "text"), (".jsonl", "jsonl")):
            sub_file = system_path / (pair_name + suffix)
            if sub_file.exists():
                try:
                    with sub_file.open("rb") as stream:
                        submissions.append(corpus_mod.load_submission(
                            stream, system_path.name, pair, segments, fmt=fmt))
                except IsochronoError as exc:
                    raise CliError(f"{sub_file}: {exc}") from exc
                break
    return submissions


def _report_json(result: EvaluationResult) -> dict:
    report = result.report
    agg = report.aggregate
    return {
        "system": report.system_name,
        "language_pair": list(report.language_pair),
        "coverage": report.coverage,
        "flags": sorted(f.value for f in report.flags),
        "aggregate": None if agg is None else {
            "mean_icm": agg.mean_icm,
            "mean_qe": agg.mean_qe,
            "aicm_from_means": agg.aicm_from_means,
            "mean_segment_aicm": agg.mean_segment_aicm,
            "n_segments": agg.n_segments,
        },
        "errored_segments": [
            {"segment_id": d.segment_id, "reason": d.reason}
            for d in result.diagnostics
        ],
    }


def cmd_evaluate(args) -> int:
    pair = tuple(args.pair.split("-"))
    if len(pair) != 2:
        raise CliError(f"--pair must look like en-de, got {args.pair!r}")
    segments = _read_corpus(Path(args.corpus), pair[0])
    if not segments:
        raise CliError("corpus is empty")
    submissions = _discover_submissions(Path(args.systems_dir), pair, segments)

    bridges: list[ScorerBridge] = []
    try:
        predictor = _make_predictor(args.predictor, bridges)
        results: list[EvaluationResult] = []
        failed = []
        for submission in submissions:
            qe = _make_qe(args.qe, submission.system_name, bridges)
            try:
                results.append(evaluate_system(segments, submission, predictor, qe,
                                               max_in_flight=args.max_in_flight))
            except EvaluationError as exc:
                failed.append(str(exc))
            except TransportError as exc:
                raise CliError(str(exc), code=EXIT_TRANSPORT) from exc
    finally:
        for bridge in bridges:
            bridge.close()

    reports = apply_flags([r.report for r in results],
                          FlagPolicy(qe_floor=args.qe_floor))
    spec = TableSpec(language_pair=pair)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "segment_metrics.jsonl").write_text(metrics_jsonl(results),
                                                   encoding="utf-8")
    (out_dir / "reports.json").write_text(
        json.dumps([_report_json(r) for r in results], ensure_ascii=False,
                   sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    (out_dir / "table.md").write_text(render_table(reports, spec, "markdown"),
                                      encoding="utf-8")
    (out_dir / "table.tex").write_text(render_table(reports, spec, "latex"),
                                       encoding="utf-8")
    (out_dir / "ranking.md").write_text(render_ranking(reports, "markdown"),
                                        encoding="utf-8")

    print(f"evaluated {len(results)} systems on {args.pair} "
          f"({len(segments)} segments)")
    for name in sorted(r.report.system_name for r in results):
        print(f"  {name}")
    if failed:
        for message in failed:
            print(f"FAILED: {message}", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


def cmd_validate(args) -> int:
    if not args.predictors:
        raise CliError("at least one --predictors entry required")
    reference = []
    try:
        for line in Path(args.reference).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            reference.append((row["text"], row["language"],
                              float(row["reference_seconds"])))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise CliError(f"cannot read reference durations {args.reference!r}: {exc}") from exc

    bridges: list[ScorerBridge] = []
    try:
        candidates = [_make_predictor(spec, bridges)
                      for spec in args.predictors.split(",")]
        results = validation.compare_predictors(reference, candidates,
                                                bin_width=args.bin_width,
                                                tolerance=args.tolerance)
    finally:
        for bridge in bridges:
            bridge.close()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    thresholds = {}
    for idx, result in enumerate(results):
        safe_id = result.predictor_id.replace("/", "_").replace(":", "_")
        (out_dir / f"curve_{idx:02d}_{safe_id}.csv").write_text(
            validation.curve_csv(result.curve), encoding="utf-8")
        thresholds[f"{idx:02d}:{result.predictor_id}"] = {
            "threshold": result.threshold,
            "failed": result.failed,
            "n_errors": len(result.errors),
        }
    (out_dir / "thresholds.json").write_text(
        json.dumps(thresholds, sort_keys=True, indent=2) + "\n", encoding="utf-8")

    for key, info in sorted(thresholds.items()):
        print(f"{key}: threshold={info['threshold']} failed={info['failed']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isochrono",
        description="Isochrony-aware machine translation evaluation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_filter = sub.add_parser("filter", help="filter a corpus and emit histogram")
    p_filter.add_argument("--corpus", required=True, help=".tsv (CoVoST) or .jsonl")
    p_filter.add_argument("--min-tokens", type=int, default=20)
    p_filter.add_argument("--min-upvotes", type=int, default=3)
    p_filter.add_argument("--max-downvotes", type=int, default=0)
    p_filter.add_argument("--bin-width", type=int, default=1)
    p_filter.add_argument("--source-language", default="en")
    p_filter.add_argument("--out", required=True)
    p_filter.set_defaults(func=cmd_filter)

    p_eval = sub.add_parser("evaluate", help="score submissions for one pair")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--systems-dir", required=True)
    p_eval.add_argument("--pair", required=True, help="e.g. en-zh")
    p_eval.add_argument("--predictor", required=True,
                        help="rate:<profile.json> or bridge:<command|host:port>")
    p_eval.add_argument("--qe", required=True,
                        help="file:<jsonl> | bridge:<command|host:port> | "
                             "constant:<value> (test-only)")
    p_eval.add_argument("--qe-floor", type=float, default=4.0)
    p_eval.add_argument("--max-in-flight", type=int, default=1)
    p_eval.add_argument("--seed", type=int, default=0,
                        help="seed for synthetic data generation (recorded only)")
    p_eval.add_argument("--out", required=True)
    p_eval.set_defaults(func=cmd_evaluate)

    p_val = sub.add_parser("validate", help="compare duration predictors")
    p_val.add_argument("--reference", required=True,
                       help="JSONL of {text, language, reference_seconds}")
    p_val.add_argument("--predictors", required=True,
                       help="comma-separated predictor specs")
    p_val.add_argument("--bin-width", type=int, default=validation.DEFAULT_BIN_WIDTH)
    p_val.add_argument("--tolerance", type=float, default=validation.DEFAULT_TOLERANCE)
    p_val.add_argument("--out", required=True)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except TransportError as exc:
        print(f"bridge error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except IsochronoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
