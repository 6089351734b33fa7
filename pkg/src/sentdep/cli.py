"""Command-line interface.

Subcommands mirror the pipeline stages and compose through files::

    sentdep keywords --tweets tweets.jsonl --out keywords.csv
    sentdep label    --tweets tweets.jsonl --out labels.csv
    sentdep score    --labels labels.csv --out scores.csv
    sentdep analyze  --config run.ini --scores scores.csv --out cells.csv
    sentdep report   --cells cells.csv --out-dir out/
    sentdep run      --config run.ini            # all of the above
    sentdep fixture  --out-dir demo/ --seed 7    # synthetic demo corpus

``run`` is byte-identical to executing the stages by hand. Exit codes:
0 success (warnings possible), 1 configuration error, 2 fatal input-file
error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import ConfigError, EmptySeries, FormatError
from .pipeline import (
    PipelineConfig,
    load_config,
    run_pipeline,
    stage_analyze,
    stage_keywords,
    stage_label,
    stage_report,
    stage_score,
)
from .report import read_cells

logger = logging.getLogger(__name__)

_CONFIG_HELP = """\
config file keys (INI syntax; relative paths resolve against the file):

  [inputs]   aspects, tweets, labels, positive_terms, negative_terms, calendar
  [prices]   one `TICKER = path.csv` per stock (order = report column order)
  [label]    window                       (tokens each side, default 5)
  [ingest]   min_keyword_count            (default 100)
             max_malformed_fraction       (default 0.1)
  [analysis] lag                          (sentiment lag in trading days, default 1)
             pearson_threshold            (|r| significance cut, default 0.4)
             granger_alpha                (default 0.05)
             granger_lag                  (default 1)
             granger_reverse              (test price -> sentiment, default false)
             granger_difference           (first-difference inputs, default false)
             entropy_k                    (neighbor order 1..20, default 3)
             top_n_aspects                (default 20)
             absent_as_zero               (zero-fill absolute scores, default false)
  [output]   dir, seed
"""


def _packaged_data(name: str) -> Path:
    return Path(str(resources.files("sentdep").joinpath("data", name)))


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("config overrides")
    group.add_argument("--lag", type=int, default=None,
                       help="sentiment lag in trading days")
    group.add_argument("--pearson-threshold", type=float, default=None)
    group.add_argument("--granger-alpha", type=float, default=None)
    group.add_argument("--granger-lag", type=int, default=None)
    group.add_argument("--granger-reverse", action=argparse.BooleanOptionalAction,
                       default=None, help="test the price -> sentiment direction")
    group.add_argument("--granger-difference", action=argparse.BooleanOptionalAction,
                       default=None, help="first-difference both series before testing")
    group.add_argument("--entropy-k", type=int, default=None)
    group.add_argument("--top-n-aspects", type=int, default=None)
    group.add_argument("--absent-as-zero", action=argparse.BooleanOptionalAction,
                       default=None, help="treat days without labels as zero counts")
    group.add_argument("--seed", type=int, default=None)


_OVERRIDE_ATTRS = (
    "lag", "pearson_threshold", "granger_alpha", "granger_lag",
    "granger_reverse", "granger_difference", "entropy_k",
    "top_n_aspects", "absent_as_zero", "seed",
)


def _load_config_with_overrides(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config)
    for attr in _OVERRIDE_ATTRS:
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, attr, value)
    if getattr(args, "output_dir", None) is not None:
        config.output_dir = Path(args.output_dir)
    return config


def _cmd_keywords(args: argparse.Namespace) -> int:
    n = stage_keywords(args.tweets, args.out,
                       min_count=args.min_count, malformed_cap=args.malformed_cap)
    print(f"{n} keywords with >= {args.min_count} tweets -> {args.out}")
    return 0


def _cmd_label(args: argparse.Namespace) -> int:
    n = stage_label(args.tweets, args.aspects, args.positive_terms,
                    args.negative_terms, args.out,
                    window=args.window, malformed_cap=args.malformed_cap)
    print(f"{n} aspect labels -> {args.out}")
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    n = stage_score(args.labels, args.out)
    print(f"{n} aspect-day score rows -> {args.out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _load_config_with_overrides(args)
    config.validate()
    cells = stage_analyze(config, args.scores, args.out)
    print(f"{len(cells)} dependence cells -> {args.out}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    cells = read_cells(args.cells)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = stage_report(cells, out_dir)
    print(f"{len(written)} report files -> {out_dir}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config_with_overrides(args)
    cells = run_pipeline(config)
    causal = sum(1 for c in cells if c.granger_causal)
    significant = sum(1 for c in cells if c.r_significant)
    print(f"{len(cells)} cells ({significant} r-significant, {causal} causal) "
          f"-> {config.output_dir}")
    return 0


def _cmd_fixture(args: argparse.Namespace) -> int:
    from .fixture import generate_fixture

    config_path = generate_fixture(args.out_dir, seed=args.seed)
    print(f"synthetic corpus -> {args.out_dir}")
    print(f"run it with: sentdep run --config {config_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentdep",
        description="Dependence statistics between aspect sentiment and stock closes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log stage progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keywords", help="count tweets per token (collection-query tuning)")
    p.add_argument("--tweets", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-count", type=int, default=100,
                   help="keep tokens appearing in at least this many tweets")
    p.add_argument("--malformed-cap", type=float, default=0.1)
    p.set_defaults(func=_cmd_keywords)

    p = sub.add_parser("label", help="detect and label aspect occurrences")
    p.add_argument("--tweets", required=True)
    p.add_argument("--aspects", default=_packaged_data("aspects_default.txt"),
                   help="aspect lexicon (default: bundled top-20 financial aspects)")
    p.add_argument("--positive-terms", default=_packaged_data("positive_terms.txt"))
    p.add_argument("--negative-terms", default=_packaged_data("negative_terms.txt"))
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--malformed-cap", type=float, default=0.1)
    p.set_defaults(func=_cmd_label)

    p = sub.add_parser("score", help="aggregate labels into daily score series")
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser(
        "analyze", help="compute dependence cells from scores and prices",
        epilog=_CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--config", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--out", required=True)
    _add_override_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("report", help="emit heatmaps and the causality table")
    p.add_argument("--cells", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser(
        "run", help="run the whole pipeline from a config file",
        epilog=_CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", default=None, help="override [output] dir")
    _add_override_flags(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("fixture", help="write a seeded synthetic demo corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, EmptySeries) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
