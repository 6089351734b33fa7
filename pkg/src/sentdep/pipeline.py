"""Pipeline configuration and file-to-file stage orchestration.

The pipeline is a fixed composition of stages, each of which reads and
writes plain files so they can also be driven individually from the CLI:

    keywords  tweets.jsonl            -> keywords.csv
    label     tweets.jsonl            -> labels.csv
    score     labels.csv              -> scores.csv
    analyze   scores.csv + prices     -> cells.csv
    report    cells.csv               -> heatmap_*.csv, granger.csv

:func:`run_pipeline` is exactly this composition plus a reproducibility
manifest; running the stages by hand yields byte-identical artifacts.
Nothing in the pipeline draws random numbers, so identical inputs and
configuration always produce identical outputs.
"""

from __future__ import annotations

import configparser
import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Mapping, Sequence

from .core import (
    PriceSeries,
    ScoreKind,
    SentimentSeries,
    TradingCalendar,
    align_lagged,
    paired_on_common_days,
)
from .entropy import MAX_K, uncertainty_coefficient
from .errors import (
    ConfigError,
    EmptyAlignment,
    InsufficientData,
    SentdepError,
)
from .granger import first_differences, granger_causes
from .ingest import (
    AspectLexicon,
    keyword_frequencies,
    load_aspects,
    parse_labeled,
    parse_prices,
    parse_tweets,
    write_keyword_frequencies,
    write_labeled,
)
from .labeler import DEFAULT_WINDOW, LexiconWindowLabeler, PolarityLexicon, label_corpus
from .pearson import correlate
from .report import (
    DependenceCell,
    emit_granger_table,
    emit_heatmap,
    heatmap_filename,
    write_cells,
    write_manifest,
)
from .scores import aggregate_daily, fill_absent_zero, read_scores, write_scores

logger = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    """Everything one pipeline run needs.

    Either ``tweets`` (with both polarity term files, for the built-in
    labeler) or ``labels`` (externally produced) must be set; both is fine
    — imported labels then take precedence and tweets feed only the
    keyword stage.
    """

    aspects: Path | None = None
    tweets: Path | None = None
    labels: Path | None = None
    positive_terms: Path | None = None
    negative_terms: Path | None = None
    prices: dict[str, Path] = field(default_factory=dict)
    calendar: Path | None = None
    window: int = DEFAULT_WINDOW
    min_keyword_count: int = 100
    max_malformed_fraction: float = 0.1
    lag: int = 1
    pearson_threshold: float = 0.4
    granger_alpha: float = 0.05
    granger_lag: int = 1
    granger_reverse: bool = False
    granger_difference: bool = False
    entropy_k: int = 3
    top_n_aspects: int = 20
    absent_as_zero: bool = False
    output_dir: Path = Path("out")
    seed: int = 0

    def validate(self) -> None:
        """Raise ConfigError on any invalid value or missing input file."""
        if self.aspects is None:
            raise ConfigError("an aspect lexicon file is required")
        if self.tweets is None and self.labels is None:
            raise ConfigError("either a tweet file or a label file is required")
        if self.labels is None and (
            self.positive_terms is None or self.negative_terms is None
        ):
            raise ConfigError(
                "labeling tweets internally requires positive and negative term files"
            )
        if not self.prices:
            raise ConfigError("at least one ticker price file is required")
        for name, p in self._input_files():
            if not Path(p).is_file():
                raise ConfigError(f"{name} file does not exist: {p}")
        checks = [
            (self.window >= 0, f"window must be >= 0, got {self.window}"),
            (self.min_keyword_count >= 1,
             f"min_keyword_count must be >= 1, got {self.min_keyword_count}"),
            (0.0 <= self.max_malformed_fraction <= 1.0,
             f"max_malformed_fraction must lie in [0, 1], got {self.max_malformed_fraction}"),
            (self.lag >= 1, f"lag must be >= 1, got {self.lag}"),
            (0.0 <= self.pearson_threshold < 1.0,
             f"pearson_threshold must lie in [0, 1), got {self.pearson_threshold}"),
            (0.0 < self.granger_alpha < 1.0,
             f"granger_alpha must lie in (0, 1), got {self.granger_alpha}"),
            (self.granger_lag >= 1, f"granger_lag must be >= 1, got {self.granger_lag}"),
            (1 <= self.entropy_k <= MAX_K,
             f"entropy_k must lie in 1..{MAX_K}, got {self.entropy_k}"),
            (self.top_n_aspects >= 1,
             f"top_n_aspects must be >= 1, got {self.top_n_aspects}"),
            (self.seed >= 0, f"seed must be >= 0, got {self.seed}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def _input_files(self) -> list[tuple[str, Path]]:
        """(logical name, path) for every configured input file."""
        named: list[tuple[str, Path | None]] = [
            ("aspects", self.aspects),
            ("tweets", self.tweets),
            ("labels", self.labels),
            ("positive_terms", self.positive_terms),
            ("negative_terms", self.negative_terms),
            ("calendar", self.calendar),
        ]
        out = [(n, p) for n, p in named if p is not None]
        out.extend((f"prices:{ticker}", p) for ticker, p in self.prices.items())
        return out

    def manifest_echo(self) -> dict:
        """Config as recorded in the manifest.

        Paths are reduced to basenames and the output directory is
        omitted, so a rerun into a different directory (or from a copied
        input tree) still writes identical manifest bytes.
        """

        def name(p: Path | None):
            return None if p is None else Path(p).name

        return {
            "aspects": name(self.aspects),
            "tweets": name(self.tweets),
            "labels": name(self.labels),
            "positive_terms": name(self.positive_terms),
            "negative_terms": name(self.negative_terms),
            "prices": {t: name(p) for t, p in self.prices.items()},
            "calendar": name(self.calendar),
            "window": self.window,
            "min_keyword_count": self.min_keyword_count,
            "max_malformed_fraction": self.max_malformed_fraction,
            "lag": self.lag,
            "pearson_threshold": self.pearson_threshold,
            "granger_alpha": self.granger_alpha,
            "granger_lag": self.granger_lag,
            "granger_reverse": self.granger_reverse,
            "granger_difference": self.granger_difference,
            "entropy_k": self.entropy_k,
            "top_n_aspects": self.top_n_aspects,
            "absent_as_zero": self.absent_as_zero,
        }


_CONFIG_SCHEMA: dict[str, dict[str, str]] = {
    "inputs": {
        "aspects": "path", "tweets": "path", "labels": "path",
        "positive_terms": "path", "negative_terms": "path", "calendar": "path",
    },
    "prices": {},  # free-form: ticker = path
    "label": {"window": "int"},
    "ingest": {"min_keyword_count": "int", "max_malformed_fraction": "float"},
    "analysis": {
        "lag": "int", "pearson_threshold": "float",
        "granger_alpha": "float", "granger_lag": "int",
        "granger_reverse": "bool", "granger_difference": "bool",
        "entropy_k": "int", "top_n_aspects": "int", "absent_as_zero": "bool",
    },
    "output": {"dir": "path", "seed": "int"},
}

_TRUE_WORDS = {"true", "yes", "on", "1"}
_FALSE_WORDS = {"false", "no", "off", "0"}


def _convert(section: str, key: str, kind: str, text: str, base: Path):
    text = text.strip()
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "bool":
            low = text.lower()
            if low in _TRUE_WORDS:
                return True
            if low in _FALSE_WORDS:
                return False
            raise ValueError(f"not a boolean: {text!r}")
        return base / text
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None


def load_config(path) -> PipelineConfig:
    """Read an INI-style config file into a PipelineConfig.

    Relative paths are resolved against the config file's directory.
    Unknown sections or keys are rejected (typo safety); tickers in
    ``[prices]`` keep their case and file order.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file does not exist: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # tickers are case-sensitive
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None

    base = path.parent
    config = PipelineConfig()
    key_to_attr = {("output", "dir"): "output_dir"}
    for section in parser.sections():
        if section not in _CONFIG_SCHEMA:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        if section == "prices":
            for ticker, text in parser.items(section):
                config.prices[ticker] = base / text.strip()
            continue
        schema = _CONFIG_SCHEMA[section]
        for key, text in parser.items(section):
            # configparser lowercases nothing here (optionxform=str), so
            # compare case-sensitively against the documented keys.
            if key not in schema:
                raise ConfigError(f"unknown key {key!r} in section [{section}] of {path}")
            attr = key_to_attr.get((section, key), key)
            setattr(config, attr, _convert(section, key, schema[key], text, base))
    return config


def load_calendar(path) -> TradingCalendar:
    """Read an explicit trading calendar: one ISO date per line, '#' comments."""
    days: list[date] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            days.append(date.fromisoformat(line))
    return TradingCalendar.from_dates(days)


def build_calendar(config: PipelineConfig, prices: Mapping[str, PriceSeries]) -> TradingCalendar:
    """The run's trading calendar: explicit file, or union of price dates."""
    if config.calendar is not None:
        return load_calendar(config.calendar)
    all_days: set[date] = set()
    for series in prices.values():
        all_days.update(series.values)
    return TradingCalendar.from_dates(all_days)


def select_top_aspects(
    lexicon: AspectLexicon, frequencies: Mapping[str, int], top_n: int
) -> list[str]:
    """The ``top_n`` most-mentioned aspects, in presentation order.

    Candidates are the lexicon entries plus any aspect appearing in the
    labels; ranking is by total label count descending, ties broken
    lexicographically. The returned list is reordered for presentation:
    lexicon order first, remaining aspects alphabetical.
    """
    candidates = set(lexicon.aspects) | set(frequencies)
    ranked = sorted(candidates, key=lambda a: (-frequencies.get(a, 0), a))
    chosen = set(ranked[:top_n])
    ordered = [a for a in lexicon.aspects if a in chosen]
    ordered.extend(sorted(chosen.difference(lexicon.aspects)))
    return ordered


# --- stages ---------------------------------------------------------------


def stage_keywords(
    tweets_path, out_path, min_count: int = 100, malformed_cap: float = 0.1
) -> int:
    """tweets.jsonl -> keywords.csv; returns the number of keywords kept."""
    tweets = parse_tweets(tweets_path, malformed_cap)
    freqs = keyword_frequencies(tweets, min_count=min_count)
    write_keyword_frequencies(freqs, out_path)
    return len(freqs)


def stage_label(
    tweets_path,
    aspects_path,
    positive_path,
    negative_path,
    out_path,
    window: int = DEFAULT_WINDOW,
    malformed_cap: float = 0.1,
) -> int:
    """tweets.jsonl -> labels.csv; returns the number of labels written."""
    tweets = parse_tweets(tweets_path, malformed_cap)
    aspects = load_aspects(aspects_path)
    labeler = LexiconWindowLabeler(
        PolarityLexicon.from_files(positive_path, negative_path), window=window
    )
    labels = label_corpus(tweets, aspects, labeler)
    write_labeled(labels, out_path)
    return len(labels)


def stage_score(labels_path, out_path) -> int:
    """labels.csv -> scores.csv; returns the number of (aspect, day) cells."""
    labels = parse_labeled(labels_path)
    counts = aggregate_daily(labels)
    write_scores(counts, out_path)
    return len(counts)


def _failure_reason(exc: SentdepError) -> str:
    """Reason code stored in null cells: the failure's name.

    An empty lag alignment is just the zero-observation flavor of too few
    observations, so it shares the InsufficientData code.
    """
    if isinstance(exc, (EmptyAlignment, InsufficientData)):
        return "InsufficientData"
    return type(exc).__name__


def compute_cell(
    sentiment: SentimentSeries,
    price: PriceSeries,
    calendar: TradingCalendar,
    config: PipelineConfig,
) -> DependenceCell:
    """All three dependence statistics for one (aspect, kind, ticker).

    Statistic failures never abort the run; the failing statistic is
    nulled with a reason code and the others still computed. The Pearson
    and uncertainty statistics consume pre-lagged pairs; the Granger test
    consumes same-date pairs and applies its own lag internally.
    """
    cell = dict(
        aspect=sentiment.aspect, kind=sentiment.kind, ticker=price.ticker, n=0
    )
    aligned = None
    try:
        aligned = align_lagged(sentiment, price, calendar, config.lag)
        cell["n"] = aligned.n
    except EmptyAlignment as exc:
        reason = _failure_reason(exc)
        cell["r_reason"] = reason
        cell["u_reason"] = reason

    if aligned is not None:
        try:
            res = correlate(aligned, config.pearson_threshold)
            cell["r"] = res.r
            cell["r_significant"] = res.significant
        except SentdepError as exc:
            cell["r_reason"] = _failure_reason(exc)
        try:
            uc = uncertainty_coefficient(aligned, config.entropy_k)
            cell["u"] = uc.u
            cell["u_valid"] = uc.valid
            cell["u_mi"] = uc.mi
        except SentdepError as exc:
            cell["u_reason"] = _failure_reason(exc)

    try:
        xs, ys = paired_on_common_days(sentiment, price, calendar)
        if config.granger_difference:
            xs, ys = first_differences(xs), first_differences(ys)
        if config.granger_reverse:
            xs, ys = ys, xs
        g = granger_causes(xs, ys, lag=config.granger_lag, alpha=config.granger_alpha)
        cell["granger_f"] = g.f_stat
        cell["granger_p"] = g.p_value
        cell["granger_causal"] = g.causal
        cell["granger_perfect_fit"] = g.perfect_fit
    except SentdepError as exc:
        cell["granger_reason"] = _failure_reason(exc)
    return DependenceCell(**cell)


def stage_analyze(config: PipelineConfig, scores_path, cells_path) -> list[DependenceCell]:
    """scores.csv + price files -> cells.csv; returns the cell list.

    Emits exactly one cell per (top-N aspect x 4 kinds x ticker), aspects
    in presentation order, kinds in fp/fn/nfp/nfn order, tickers in config
    order.
    """
    aspect_lexicon = load_aspects(config.aspects)
    series, totals = read_scores(scores_path)
    prices = {t: parse_prices(p, t) for t, p in config.prices.items()}
    calendar = build_calendar(config, prices)
    top = select_top_aspects(aspect_lexicon, totals, config.top_n_aspects)

    cells: list[DependenceCell] = []
    for aspect in top:
        for kind in ScoreKind:
            sentiment = series.get(
                (aspect, kind), SentimentSeries(aspect=aspect, kind=kind, values={})
            )
            if config.absent_as_zero and kind.is_absolute:
                sentiment = fill_absent_zero(sentiment, calendar)
            for price in prices.values():
                cells.append(compute_cell(sentiment, price, calendar, config))
    write_cells(cells, cells_path)
    if cells and all(c.r is None and c.granger_f is None and c.u is None for c in cells):
        logger.warning("no cell produced any statistic (no usable label/price overlap)")
    return cells


def stage_report(cells: Sequence[DependenceCell], output_dir) -> list[Path]:
    """cells -> heatmap_{r|u}_{kind}.csv + granger.csv; returns paths written."""
    output_dir = Path(output_dir)
    written: list[Path] = []
    for statistic in ("r", "u"):
        for kind in ScoreKind:
            target = output_dir / heatmap_filename(statistic, kind)
            emit_heatmap(cells, statistic, kind, target)
            written.append(target)
    granger_path = output_dir / "granger.csv"
    emit_granger_table(cells, granger_path)
    written.append(granger_path)
    return written


def run_pipeline(config: PipelineConfig) -> list[DependenceCell]:
    """Run every stage and write all artifacts into ``config.output_dir``.

    Artifacts: keywords.csv (when tweets are configured), labels.csv
    (when labeled internally), scores.csv, cells.csv, eight heatmaps,
    granger.csv, run_manifest.json.
    """
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    if config.tweets is not None:
        n_keywords = stage_keywords(
            config.tweets, out / "keywords.csv",
            min_count=config.min_keyword_count,
            malformed_cap=config.max_malformed_fraction,
        )
        logger.info("keywords: %d kept", n_keywords)

    if config.labels is not None:
        labels_path = config.labels
    else:
        labels_path = out / "labels.csv"
        n_labels = stage_label(
            config.tweets, config.aspects, config.positive_terms,
            config.negative_terms, labels_path,
            window=config.window, malformed_cap=config.max_malformed_fraction,
        )
        logger.info("labels: %d occurrences", n_labels)

    scores_path = out / "scores.csv"
    n_cells_scored = stage_score(labels_path, scores_path)
    logger.info("scores: %d aspect-day cells", n_cells_scored)

    cells = stage_analyze(config, scores_path, out / "cells.csv")
    logger.info("analysis: %d dependence cells", len(cells))

    stage_report(cells, out)
    write_manifest(
        out / "run_manifest.json",
        config_echo=config.manifest_echo(),
        input_paths=config._input_files(),
        seed=config.seed,
    )
    return cells
