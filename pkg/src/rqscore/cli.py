"""Command-line interface: ``rqscore {extract,score,perturb,synth}``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .baselines import bleu, corpus_bleu
from .exceptions import RQScoreError
from .extract import DEFAULT_NEGATION_WINDOW, extract_ffl, render_report
from .grounding import load_atlas
from .lexical import LEVELS, Granularity
from .lexicon import load_lexicon
from .perturb import PerturbationSpec, sensitivity_study
from .rq import rq_pair
from .synthetic import ReportRecord, make_atlas, make_corpus

logger = logging.getLogger("rqscore")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

KIND_FLAGS = {
    "negation": "negation_flip",
    "finding": "finding_substitution",
    "location": "location_alteration",
    "severity": "severity_alteration",
}

SCORE_COLUMNS = (
    ["record", "image_id"]
    + [f"{m}_{lv.value}" for lv in LEVELS for m in ("precision", "recall", "f1")]
    + ["miou", "rq", "bleu", "n_pairs", "corpus_bleu", "error"]
)


class DataError(Exception):
    pass


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    lexicon_path: Optional[Path]
    atlas_path: Optional[Path]
    level: Granularity = Granularity.ANATOMY
    seed: int = 0
    output_format: str = "csv"
    negation_window: int = DEFAULT_NEGATION_WINDOW

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        lexicon = Path(args.lexicon) if args.lexicon else None
        atlas = Path(args.atlas) if getattr(args, "atlas", None) else None
        for path in (lexicon, atlas):
            if path is not None and not path.exists():
                raise DataError(f"no such file: {path}")
        # parent-parser actions are shared, so per-command defaults live under their own dest
        level = args.level or getattr(args, "default_level", Granularity.ANATOMY.value)
        return cls(lexicon, atlas, Granularity(level), args.seed, args.format, args.negation_window)

    def load_lexicon(self):
        return load_lexicon(self.lexicon_path)

    def load_atlas(self, lexicon):
        if self.atlas_path is None:
            raise UsageError("--atlas is required")
        return load_atlas(self.atlas_path, lexicon.catalog)


def read_corpus(path: str) -> List[ReportRecord]:
    """Parse a JSONL corpus; each line is ``{"image_id", "ground_truth", "prediction"?, "metadata"?}``."""
    source = sys.stdin if path == "-" else None
    try:
        handle = source or open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    records, seen = [], set()
    with handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                image_id = str(doc["image_id"]).strip()
                gt = doc["ground_truth"]
                pred = doc.get("prediction")
                if not image_id or not isinstance(gt, str) or not (pred is None or isinstance(pred, str)):
                    raise ValueError("bad field types")
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                raise DataError(f"{path}:{lineno}: malformed record ({exc})") from exc
            if image_id in seen:
                raise DataError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
            seen.add(image_id)
            records.append(ReportRecord(image_id, gt, pred, doc.get("metadata") or {}))
    return records


def _atlas_key(record: ReportRecord) -> str:
    return str(record.metadata.get("source_image_id", record.image_id))


def _fmt(value, decimals):
    if isinstance(value, float):
        return f"{value:.{decimals}f}" if decimals is not None else repr(value)
    return "" if value is None else str(value)


def _emit(rows: Sequence[dict], columns: Sequence[str], fmt: str, out) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c), 3) for c in columns])
    else:
        for row in rows:
            out.write(json.dumps({"schema_version": SCHEMA_VERSION, **row}, sort_keys=False) + "\n")


def _open_output(path):
    if path in (None, "-"):
        return _Unclosed(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


class _Unclosed:
    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc):
        self.stream.flush()


def cmd_extract(args) -> int:
    config = RunConfig.from_args(args)
    lexicon = config.load_lexicon()
    records = read_corpus(args.input)
    rows = []
    for record in records:
        for side in ("ground_truth", "prediction"):
            text = getattr(record, side)
            if text is None:
                continue
            for p in extract_ffl(text, lexicon, config.negation_window):
                rows.append({
                    "image_id": record.image_id,
                    "source": side,
                    "sentence_index": p.source_sentence_index,
                    "pattern": str(p),
                    **p.to_dict(),
                })
    columns = ["image_id", "source", "sentence_index", "pattern",
               "finding_type", "polarity", "core_finding", "anatomy", "laterality", "severity"]
    with _open_output(args.output) as out:
        _emit(rows, columns, config.output_format, out)
    logger.info("extracted %d patterns from %d records", len(rows), len(records))
    return EXIT_OK


def score_records(records: Sequence[ReportRecord], lexicon, atlas, config: RunConfig) -> List[dict]:
    """Per-pair score rows followed by one summary row."""
    rows, ok = [], []
    for record in records:
        row = {"record": "pair", "image_id": record.image_id}
        if record.prediction is None:
            row["error"] = "missing prediction"
        elif _atlas_key(record) not in atlas:
            row["error"] = f"image {_atlas_key(record)!r} not in atlas"
        else:
            score = rq_pair(record.ground_truth, record.prediction, _atlas_key(record), lexicon, atlas,
                            config.level, config.negation_window)
            row.update(score.to_dict())
            row["bleu"] = _safe_bleu(record.prediction, record.ground_truth)
            ok.append((row, record))
        rows.append(row)
    if not ok:
        raise DataError("no pairs could be scored")
    summary = {"record": "summary", "image_id": "", "n_pairs": len(ok)}
    metric_columns = [c for c in SCORE_COLUMNS[2:] if c not in ("n_pairs", "corpus_bleu", "error")]
    for column in metric_columns:
        summary[column] = math.fsum(r[column] for r, _ in ok) / len(ok)
    try:
        summary["corpus_bleu"] = corpus_bleu([r.prediction for _, r in ok], [[r.ground_truth] for _, r in ok]).score
    except ValueError:
        summary["corpus_bleu"] = 0.0
    rows.append(summary)
    return rows


def _safe_bleu(candidate, reference):
    # BLEU is undefined for token-free text; score it as no overlap
    try:
        return bleu(candidate, [reference]).score
    except ValueError:
        return 1.0 if not candidate.strip() and not reference.strip() else 0.0


def cmd_score(args) -> int:
    config = RunConfig.from_args(args)
    lexicon = config.load_lexicon()
    atlas = config.load_atlas(lexicon)
    records = read_corpus(args.input)
    if not records:
        raise DataError("no pairs")
    rows = score_records(records, lexicon, atlas, config)
    errors = [r for r in rows if r.get("error")]
    with _open_output(args.output) as out:
        _emit(rows, SCORE_COLUMNS, config.output_format, out)
    if errors:
        logger.warning("%d of %d records could not be scored", len(errors), len(records))
        if args.strict:
            return EXIT_DATA
    return EXIT_OK


def cmd_perturb(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    if args.variants < 1:
        raise UsageError("--variants must be at least 1")
    config = RunConfig.from_args(args)
    lexicon = config.load_lexicon()
    atlas = config.load_atlas(lexicon)
    records = read_corpus(args.input)
    if not records:
        raise DataError("no reports")
    kinds = [KIND_FLAGS[k] for k in (args.kind or list(KIND_FLAGS))]
    specs = [PerturbationSpec(k, args.count, config.seed) for k in dict.fromkeys(kinds)]
    corpus = [(r.ground_truth, _atlas_key(r)) for r in records]
    missing = sorted({i for _, i in corpus if i not in atlas})
    if missing:
        raise DataError(f"images not in atlas: {missing[:5]}")

    variants = []

    def collect(kind, report_index, variant, image_id, text):
        variants.append((kind, report_index, variant, image_id, text))

    results = sensitivity_study(corpus, specs, lexicon, atlas, args.variants, config.level,
                                config.negation_window, on_variant=collect)

    if args.output:
        rendered = [render_report(extract_ffl(t, lexicon, config.negation_window), lexicon) for t, _ in corpus]
        with _open_output(args.output) as out:
            for kind, r, v, image_id, text in variants:
                record = {
                    "image_id": f"{records[r].image_id}__{kind}_{v}",
                    "ground_truth": rendered[r],
                    "prediction": text,
                    "metadata": {"kind": kind, "seed": config.seed, "variant": v,
                                 "source_image_id": image_id},
                }
                out.write(json.dumps(record) + "\n")

    skipped = sum(r.n_skipped for r in results)
    if skipped:
        logger.warning("skipped %d ineligible perturbations", skipped)
    with _open_output(args.table) as out:
        _emit_sensitivity(results, config.output_format, out)
    return EXIT_OK


def _emit_sensitivity(results, fmt, out):
    if fmt == "csv":
        columns = ["metric"] + [r.kind for r in results]
        rows = [{"metric": m, **{r.kind: r.delta[m] for r in results}} for m in ("rq", "f1", "miou", "bleu")]
        rows.append({"metric": "n_scored", **{r.kind: r.n_scored for r in results}})
        rows.append({"metric": "n_skipped", **{r.kind: r.n_skipped for r in results}})
        _emit(rows, columns, fmt, out)
        return
    rows = []
    for r in results:
        for m in ("rq", "f1", "miou", "bleu"):
            rows.append({"kind": r.kind, "metric": m, "baseline": r.baseline_score[m],
                         "perturbed": r.perturbed_score[m], "delta": r.delta[m],
                         "n_scored": r.n_scored, "n_skipped": r.n_skipped})
    _emit(rows, [], fmt, out)


def cmd_synth(args) -> int:
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    config = RunConfig.from_args(args)
    lexicon = config.load_lexicon()
    records = make_corpus(lexicon, args.n, seed=config.seed, with_predictions=not args.no_predictions)
    atlas = make_atlas([r.image_id for r in records], seed=config.seed)
    with _open_output(args.output) as out:
        for r in records:
            out.write(json.dumps(r.to_dict()) + "\n")
    if args.atlas_out:
        atlas.dump(args.atlas_out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", help="lexicon JSON file (default: bundled fixture lexicon)")
    common.add_argument("--input", default="-", help="JSONL corpus (default: stdin)")
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    common.add_argument("--level", choices=[g.value for g in Granularity],
                        help="F1 granularity entering RQ (default: anatomy; all for perturb)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--negation-window", type=int, default=DEFAULT_NEGATION_WINDOW)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="rqscore", description="Report quality scoring with FFL patterns and grounding.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", parents=[common], help="dump FFL patterns")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("score", parents=[common], help="score predictions against ground truth")
    p.add_argument("--atlas", required=True, help="region atlas JSON file")
    p.add_argument("--strict", action="store_true", help="exit 2 if any pair could not be scored")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("perturb", parents=[common], help="perturbed corpus and sensitivity table")
    p.add_argument("--atlas", required=True, help="region atlas JSON file")
    p.add_argument("--kind", action="append", choices=list(KIND_FLAGS),
                   help="perturbation kind; repeatable (default: all)")
    p.add_argument("--count", type=int, default=1, help="patterns perturbed per report")
    p.add_argument("--variants", type=int, default=1, help="perturbed variants per report and kind")
    p.add_argument("--table", help="sensitivity table path (default: stdout)")
    p.set_defaults(func=cmd_perturb, default_level="all")

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus and atlas")
    p.add_argument("-n", type=int, default=50, help="number of reports")
    p.add_argument("--atlas-out", help="write the matching atlas here")
    p.add_argument("--no-predictions", action="store_true")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"rqscore: error: {exc}\n")
    except (DataError, RQScoreError, FileNotFoundError) as exc:
        parser.exit(EXIT_DATA, f"rqscore: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
