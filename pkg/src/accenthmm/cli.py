"""Batch command-line front end.

Subcommands::

    encode     print the feature-vector sequence for IPA transcriptions
    recognize  score IPA observations against the recognition vocabulary
    adapt      learn accent transformations from paragraph transcripts
    evaluate   run the before/after paragraph experiment, write reports
    params     dump or inspect parameter snapshots

All flags are long-form.  A JSON config file (``--config``) may supply any
option under its flag name with underscores (e.g. ``{"out_dir": "runs"}``);
explicit flags override the file.  ``--out-dir`` additionally falls back to
the ACCENTHMM_OUT_DIR environment variable.  Constants default to the
model's standard values (p_ins 0.01, p_del 0.01, sigma 2/3, prior weight
20) so a bare ``evaluate`` on the bundled corpus reproduces the paragraph
experiment.

Exit codes: 0 when every requested artifact was written, 1 on data or
processing errors (diagnostic on stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from .harness import (
    EPSILON,
    EvalReport,
    UnbalancedDesign,
    anova_table,
    evaluate_speaker,
    feature_labels,
    group_of,
    group_report,
    load_reference_table,
    load_transcript,
    model_transformations,
    split_transcript,
    transformation_table,
    two_way_anova,
)
from .hmm import (
    P_DEL,
    P_INS,
    PRIOR_WEIGHT,
    SIGMA,
    align_and_count,
    init_naive_params,
    load_params,
    recognize,
    save_params,
    update_params,
)
from .lexicon import load_lexicon, overlay_lexicons
from .phonology import SymbolTable
from . import resources


@dataclass
class RunConfig:
    """Resolved options for one command invocation."""

    lexicon: tuple[str, ...] = ()
    symbols: str | None = None
    transcripts: tuple[str, ...] = ()
    params_in: str | None = None
    params_out: str | None = None
    reference: str | None = None
    p_ins: float = P_INS
    p_del: float = P_DEL
    sigma: float = SIGMA
    prior_weight: float = PRIOR_WEIGHT
    out_dir: str = "."
    jobs: int = 1

    def validate(self) -> None:
        if not 0.0 < self.p_ins < 1.0:
            raise ValueError(f"--p-ins must be in (0, 1), got {self.p_ins}")
        if not 0.0 < self.p_del < 1.0:
            raise ValueError(f"--p-del must be in (0, 1), got {self.p_del}")
        if self.p_ins + self.p_del >= 1.0:
            raise ValueError("p_ins + p_del must leave room to produce")
        if self.sigma <= 0.0:
            raise ValueError(f"--sigma must be positive, got {self.sigma}")
        if self.prior_weight <= 0.0:
            raise ValueError(
                f"--prior-weight must be positive, got {self.prior_weight}"
            )
        if self.jobs < 1:
            raise ValueError(f"--jobs must be at least 1, got {self.jobs}")


def build_config(args: argparse.Namespace) -> RunConfig:
    """Fold config-file values under explicit flags, then validate."""
    from_file = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            from_file = json.load(fh)
        if not isinstance(from_file, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(from_file) - known)
        if unknown:
            raise ValueError(f"{args.config}: unknown keys {', '.join(unknown)}")

    def pick(name, fallback):
        given = getattr(args, name, None)
        if given is not None:
            return given
        if name in from_file:
            return from_file[name]
        return fallback

    def pick_paths(name):
        got = pick(name, ())
        return (got,) if isinstance(got, str) else tuple(got)

    out_dir = pick("out_dir", None)
    if out_dir is None:
        out_dir = os.environ.get("ACCENTHMM_OUT_DIR", ".")
    config = RunConfig(
        lexicon=pick_paths("lexicon"),
        symbols=pick("symbols", None),
        transcripts=pick_paths("transcripts"),
        params_in=pick("params_in", None),
        params_out=pick("params_out", None),
        reference=pick("reference", None),
        p_ins=float(pick("p_ins", P_INS)),
        p_del=float(pick("p_del", P_DEL)),
        sigma=float(pick("sigma", SIGMA)),
        prior_weight=float(pick("prior_weight", PRIOR_WEIGHT)),
        out_dir=str(out_dir),
        jobs=int(pick("jobs", 1)),
    )
    config.validate()
    return config


def _load_symbols(config: RunConfig) -> SymbolTable:
    if config.symbols is not None:
        return SymbolTable.load(config.symbols)
    return resources.load_symbols()


def _load_lexicon(config: RunConfig, symbols: SymbolTable):
    """The configured lexicon files, or the bundled vocabulary."""
    if config.lexicon:
        return overlay_lexicons(
            *(load_lexicon(path, symbols) for path in config.lexicon)
        )
    return resources.evaluation_lexicon(symbols)


def _load_params(config: RunConfig, lexicon):
    if config.params_in is not None:
        return load_params(config.params_in)
    return init_naive_params(
        lexicon.inventory,
        p_ins=config.p_ins,
        p_del=config.p_del,
        sigma=config.sigma,
        prior_weight=config.prior_weight,
    )


def _load_transcripts(config: RunConfig, symbols: SymbolTable):
    """Configured transcript paths, or every bundled test speaker."""
    if config.transcripts:
        loaded = [load_transcript(path, symbols) for path in config.transcripts]
    else:
        loaded = [
            resources.load_speaker(name, symbols)
            for name in resources.subject_names()
        ]
    return sorted(loaded, key=lambda t: _speaker_key(t.speaker))


def _speaker_key(name: str):
    """Sort english2 before english10: split a trailing number off."""
    m = re.fullmatch(r"(.*?)(\d+)", name)
    return (m.group(1), int(m.group(2))) if m else (name, -1)


# ---------------------------------------------------------------------------
# subcommands


def cmd_encode(args: argparse.Namespace) -> int:
    config = build_config(args)
    symbols = _load_symbols(config)
    for text in args.text:
        if not text.strip():
            args.parser.error("empty transcription")
        if len(args.text) > 1:
            print(f"# {text}")
        for phone in symbols.parse(text):
            dims = " ".join(map(str, phone.features.dims()))
            print(f"{phone.symbol}\t{phone.features.kind}\t{dims}")
    return 0


def cmd_recognize(args: argparse.Namespace) -> int:
    config = build_config(args)
    symbols = _load_symbols(config)
    lexicon = _load_lexicon(config, symbols)
    params = _load_params(config, lexicon)
    for text in args.text:
        if not text.strip():
            args.parser.error("empty transcription")
        obs = [phone.features for phone in symbols.parse(text)]
        result = recognize(obs, lexicon, params)
        ties = "|".join(result.ties)
        print(f"{text}\t{ties}\t{result.log_likelihood:.6f}")
    return 0


def _transformation_lines(counts, labels, reference) -> list[str]:
    if reference is not None:
        return transformation_table(counts, labels, reference).text().splitlines()
    table = model_transformations(counts, labels)
    keys = sorted(
        table, key=lambda k: (k[0] == EPSILON, k[0], k[1] == EPSILON, k[1])
    )
    width = max(len(k[0]) for k in keys) if keys else 1
    return [f"{native:<{width}} -> {foreign}  {table[(native, foreign)]}"
            for native, foreign in keys]


def cmd_adapt(args: argparse.Namespace) -> int:
    config = build_config(args)
    if not config.transcripts:
        args.parser.error("--transcripts is required")
    if config.params_out is None:
        args.parser.error("--params-out is required")
    symbols = _load_symbols(config)
    lexicon = _load_lexicon(config, symbols)
    params = _load_params(config, lexicon)
    reference = (
        load_reference_table(config.reference, symbols)
        if config.reference else None
    )

    training = []
    for transcript in _load_transcripts(config, symbols):
        train, _ = split_transcript(transcript, lexicon)
        training.extend(train)
        print(f"{transcript.speaker}: {len(train)} training tokens")
    counts = align_and_count(params, training)
    adapted = update_params(params, counts)
    save_params(adapted, config.params_out)

    print(f"operations: {int(counts.n_prod.sum())} produced, "
          f"{int(counts.n_del.sum())} deleted, {counts.n_ins} inserted")
    print("transformations (learning set):")
    for line in _transformation_lines(counts, feature_labels(symbols), reference):
        print(f"  {line}")
    print(f"wrote {config.params_out}")
    return 0


def _evaluate_one(job):
    transcript, lexicon, params = job
    return evaluate_speaker(transcript, lexicon, params)


def _rates_csv(path: Path, results) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["speaker", "group", "condition", "rate"])
        for transcript, (before, after, _) in results:
            group = group_of(transcript.speaker)
            writer.writerow([transcript.speaker, group, "before", f"{before.rate:.4f}"])
            writer.writerow([transcript.speaker, group, "after", f"{after.rate:.4f}"])


def _misses(report: EvalReport) -> list[str]:
    return [
        f"    {item.word}: heard as {'|'.join(item.ties)}"
        for item in report.items
        if not item.correct
    ]


def _report_text(results, labels, reference) -> str:
    lines = ["paragraph recognition, before and after one adaptation pass", ""]
    reports = []
    for transcript, (before, after, counts) in results:
        reports += [before, after]
        lines.append(
            f"{transcript.speaker} (group {group_of(transcript.speaker)}): "
            f"before {before.rate:.2f} ({before.n_correct}/{before.n_items}), "
            f"after {after.rate:.2f} ({after.n_correct}/{after.n_items})"
        )
        if _misses(before):
            lines.append("  missed before:")
            lines.extend(_misses(before))
        if _misses(after):
            lines.append("  missed after:")
            lines.extend(_misses(after))
        lines.append("  transformations (learning set):")
        lines.extend(f"    {t}" for t in _transformation_lines(counts, labels, reference))
        lines.append("")

    lines.append("group means (recognition rate ± standard error):")
    for cell in group_report(reports):
        lines.append(
            f"  group {cell.group}, {cell.condition}: "
            f"{cell.mean:.2f} ± {cell.se:.2f} (n={cell.n})"
        )
    lines.append("")

    try:
        anova = two_way_anova(anova_table(reports))
    except UnbalancedDesign as exc:
        lines.append(f"ANOVA skipped: {exc}")
    else:
        lines.append("two-way ANOVA (learning x group):")
        for effect in (anova.learning, anova.group, anova.interaction):
            lines.append(
                f"  {effect.name}: F({effect.df[0]}, {effect.df[1]}) = "
                f"{effect.f:.2f}, p = {effect.p:.4g}"
            )
    lines.append("")
    return "\n".join(lines)


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = build_config(args)
    symbols = _load_symbols(config)
    lexicon = _load_lexicon(config, symbols)
    params = _load_params(config, lexicon)
    reference = (
        load_reference_table(config.reference, symbols)
        if config.reference else None
    )
    transcripts = _load_transcripts(config, symbols)

    jobs = [(t, lexicon, params) for t in transcripts]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_evaluate_one, jobs))
    else:
        outcomes = [_evaluate_one(job) for job in jobs]
    results = list(zip(transcripts, outcomes))

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _rates_csv(out_dir / "rates.csv", results)
    report = _report_text(results, feature_labels(symbols), reference)
    (out_dir / "report.txt").write_text(report, encoding="utf-8")
    for transcript, (before, after, _) in results:
        print(
            f"{transcript.speaker}: before {before.rate:.2f}, after {after.rate:.2f}"
        )
    print(f"wrote {out_dir / 'rates.csv'} and {out_dir / 'report.txt'}")
    return 0


def cmd_params(args: argparse.Namespace) -> int:
    config = build_config(args)
    if args.action == "dump":
        if config.params_out is None:
            args.parser.error("--params-out is required for dump")
        symbols = _load_symbols(config)
        lexicon = _load_lexicon(config, symbols)
        params = _load_params(config, lexicon)
        save_params(params, config.params_out)
        print(f"wrote {config.params_out}")
        return 0
    if config.params_in is None:
        args.parser.error("--params-in is required for load")
    params = load_params(config.params_in)
    row_sums = params.emit.sum(axis=1)
    in_tolerance = (
        abs(params.emit_ins.sum() - 1.0) <= 1e-9
        and all(abs(s - 1.0) <= 1e-9 for s in row_sums)
    )
    print(f"inventory: {len(params.inventory)} phonemes")
    print(f"space: {len(params.space)} vectors")
    print(f"p_ins: {params.p_ins}")
    print(f"sigma: {params.sigma}")
    print(f"prior_weight: {params.prior_weight}")
    print(f"emission rows sum to 1 within 1e-9: {'yes' if in_tolerance else 'NO'}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser, *, data: bool = False,
                constants: bool = False) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="JSON file of option defaults; flags override")
    parser.add_argument("--symbols", metavar="PATH",
                        help="symbol table (default: bundled)")
    if data:
        parser.add_argument("--lexicon", action="append", metavar="PATH",
                            help="lexicon file; repeatable, first form of a "
                                 "word wins (default: bundled vocabulary)")
        parser.add_argument("--params-in", metavar="PATH",
                            help="parameter snapshot to start from "
                                 "(default: naive parameters)")
    if constants:
        parser.add_argument("--p-ins", type=float, metavar="P",
                            help=f"insertion probability (default {P_INS})")
        parser.add_argument("--p-del", type=float, metavar="P",
                            help=f"naive deletion probability (default {P_DEL})")
        parser.add_argument("--sigma", type=float, metavar="S",
                            help="emission spread per dimension (default 2/3)")
        parser.add_argument("--prior-weight", type=float, metavar="C",
                            help=f"pseudo-count mass the naive prior keeps "
                                 f"during updates (default {PRIOR_WEIGHT:g})")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accenthmm",
        description="Word recognition over IPA feature vectors with "
                    "one-shot adaptation to accented speech.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="print feature vectors for IPA text")
    p.add_argument("text", nargs="+", help="IPA transcription(s)")
    _add_common(p)
    p.set_defaults(func=cmd_encode, parser=p)

    p = sub.add_parser("recognize", help="recognize IPA observations")
    p.add_argument("text", nargs="+", help="IPA transcription(s) as heard")
    _add_common(p, data=True, constants=True)
    p.set_defaults(func=cmd_recognize, parser=p)

    p = sub.add_parser("adapt", help="learn transformations from transcripts")
    _add_common(p, data=True, constants=True)
    p.add_argument("--transcripts", action="append", metavar="PATH",
                   help="speaker transcript; repeatable; the first 35 "
                        "tokens of each are the learning set")
    p.add_argument("--params-out", metavar="PATH",
                   help="where to write the adapted snapshot")
    p.add_argument("--reference", metavar="PATH",
                   help="reference transformation table to diff against")
    p.set_defaults(func=cmd_adapt, parser=p)

    p = sub.add_parser("evaluate",
                       help="before/after experiment over transcripts")
    _add_common(p, data=True, constants=True)
    p.add_argument("--transcripts", action="append", metavar="PATH",
                   help="speaker transcript; repeatable "
                        "(default: all bundled speakers)")
    p.add_argument("--reference", metavar="PATH",
                   help="reference transformation table to diff against")
    p.add_argument("--out-dir", metavar="DIR",
                   help="report directory (default: $ACCENTHMM_OUT_DIR or .)")
    p.add_argument("--jobs", type=int, metavar="N",
                   help="worker processes for per-speaker evaluation")
    p.set_defaults(func=cmd_evaluate, parser=p)

    p = sub.add_parser("params", help="dump or inspect parameter snapshots")
    p.add_argument("action", choices=("dump", "load"))
    _add_common(p, data=True, constants=True)
    p.add_argument("--params-out", metavar="PATH",
                   help="where dump writes the snapshot")
    p.set_defaults(func=cmd_params, parser=p)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
