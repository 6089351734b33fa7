"""Config loading, aspect selection, cell computation, and stage wiring."""

import json
import logging
from datetime import date, timedelta
from pathlib import Path

import pytest

from sentdep.core import PriceSeries, ScoreKind, SentimentSeries, TradingCalendar
from sentdep.errors import ConfigError
from sentdep.ingest import AspectLexicon
from sentdep.pipeline import (
    PipelineConfig,
    build_calendar,
    compute_cell,
    load_calendar,
    load_config,
    run_pipeline,
    select_top_aspects,
    stage_analyze,
    stage_score,
)

FP, FN = ScoreKind.ABS_POSITIVE, ScoreKind.ABS_NEGATIVE
NFP = ScoreKind.NORM_POSITIVE


def weekdays(start: date, n: int) -> list[date]:
    out: list[date] = []
    d = start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out

DAYS = weekdays(date(2022, 10, 3), 30)


# --- configuration -----------------------------------------------------------


def write_min_inputs(root: Path) -> dict[str, Path]:
    """A syntactically valid input tree (one ticker, labels provided)."""
    paths = {
        "aspects": root / "aspects.txt",
        "labels": root / "labels.csv",
        "price": root / "AAA.csv",
    }
    paths["aspects"].write_text("tax\nbank\n", encoding="utf-8")
    paths["labels"].write_text(
        "tweet_id,date,aspect,polarity\nt1,2022-10-03,tax,positive\n",
        encoding="utf-8",
    )
    lines = ["Date,Close"] + [f"{d.isoformat()},{10 + i}" for i, d in enumerate(DAYS)]
    paths["price"].write_text("\n".join(lines) + "\n", encoding="utf-8")
    return paths


class TestLoadConfig:
    def test_reads_all_sections_and_resolves_paths(self, tmp_path):
        write_min_inputs(tmp_path)
        ini = tmp_path / "config.ini"
        ini.write_text(
            "[inputs]\n"
            "aspects = aspects.txt\n"
            "labels = labels.csv\n"
            "[prices]\n"
            "NEE = AAA.csv\n"
            "bp = AAA.csv\n"
            "[analysis]\n"
            "lag = 2\n"
            "pearson_threshold = 0.3\n"
            "granger_reverse = yes\n"
            "absent_as_zero = true\n"
            "[output]\n"
            "dir = results\n"
            "seed = 9\n",
            encoding="utf-8",
        )
        cfg = load_config(ini)
        assert cfg.aspects == tmp_path / "aspects.txt"
        assert list(cfg.prices) == ["NEE", "bp"]  # case and order preserved
        assert cfg.prices["NEE"] == tmp_path / "AAA.csv"
        assert cfg.lag == 2 and cfg.pearson_threshold == 0.3
        assert cfg.granger_reverse is True and cfg.absent_as_zero is True
        assert cfg.granger_difference is False  # untouched default
        assert cfg.output_dir == tmp_path / "results"
        assert cfg.seed == 9

    def test_unknown_section_rejected(self, tmp_path):
        ini = tmp_path / "config.ini"
        ini.write_text("[surprise]\nx = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="surprise"):
            load_config(ini)

    def test_unknown_key_rejected(self, tmp_path):
        ini = tmp_path / "config.ini"
        ini.write_text("[analysis]\nlagg = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="lagg"):
            load_config(ini)

    def test_bad_value_names_section_and_key(self, tmp_path):
        ini = tmp_path / "config.ini"
        ini.write_text("[analysis]\nentropy_k = three\n", encoding="utf-8")
        with pytest.raises(ConfigError, match=r"\[analysis\] entropy_k"):
            load_config(ini)

    def test_bad_boolean(self, tmp_path):
        ini = tmp_path / "config.ini"
        ini.write_text("[analysis]\ngranger_reverse = maybe\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(ini)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(tmp_path / "absent.ini")


class TestValidate:
    def base_config(self, tmp_path) -> PipelineConfig:
        paths = write_min_inputs(tmp_path)
        return PipelineConfig(
            aspects=paths["aspects"],
            labels=paths["labels"],
            prices={"AAA": paths["price"]},
            output_dir=tmp_path / "out",
        )

    def test_valid_config_passes(self, tmp_path):
        self.base_config(tmp_path).validate()

    def test_requires_label_source(self, tmp_path):
        cfg = self.base_config(tmp_path)
        cfg.labels = None
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_tweets_need_polarity_terms(self, tmp_path):
        cfg = self.base_config(tmp_path)
        cfg.labels = None
        cfg.tweets = tmp_path / "labels.csv"  # any existing file
        with pytest.raises(ConfigError, match="term"):
            cfg.validate()

    def test_requires_prices(self, tmp_path):
        cfg = self.base_config(tmp_path)
        cfg.prices = {}
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_missing_price_file_is_named(self, tmp_path):
        cfg = self.base_config(tmp_path)
        ghost = tmp_path / "GHOST.csv"
        cfg.prices["GHOST"] = ghost
        with pytest.raises(ConfigError) as exc:
            cfg.validate()
        assert str(ghost) in str(exc.value)

    def test_numeric_ranges(self, tmp_path):
        for attr, bad in [
            ("lag", 0), ("pearson_threshold", 1.0), ("granger_alpha", 0.0),
            ("granger_lag", 0), ("entropy_k", 21), ("top_n_aspects", 0),
            ("min_keyword_count", 0), ("max_malformed_fraction", 1.5),
            ("window", -1), ("seed", -1),
        ]:
            cfg = self.base_config(tmp_path)
            setattr(cfg, attr, bad)
            with pytest.raises(ConfigError):
                cfg.validate()


class TestCalendar:
    def test_explicit_calendar_file(self, tmp_path):
        cal_file = tmp_path / "days.txt"
        cal_file.write_text(
            "# holidays removed\n2022-10-03\n2022-10-04\n\n2022-10-06\n",
            encoding="utf-8",
        )
        cal = load_calendar(cal_file)
        assert cal.days == (date(2022, 10, 3), date(2022, 10, 4), date(2022, 10, 6))

    def test_union_of_price_dates(self):
        a = PriceSeries("A", {DAYS[0]: 1.0, DAYS[2]: 2.0})
        b = PriceSeries("B", {DAYS[1]: 3.0, DAYS[2]: 4.0})
        cal = build_calendar(PipelineConfig(), {"A": a, "B": b})
        assert cal.days == (DAYS[0], DAYS[1], DAYS[2])

    def test_explicit_file_wins(self, tmp_path):
        cal_file = tmp_path / "days.txt"
        cal_file.write_text("2022-10-03\n", encoding="utf-8")
        cfg = PipelineConfig(calendar=cal_file)
        cal = build_calendar(cfg, {"A": PriceSeries("A", {DAYS[5]: 1.0})})
        assert cal.days == (date(2022, 10, 3),)


class TestSelectTopAspects:
    LEX = AspectLexicon(["tax", "bank", "rate"])

    def test_ranked_by_count_then_name(self):
        chosen = select_top_aspects(self.LEX, {"bank": 5, "zinc": 7, "tax": 5}, 3)
        # ranked: zinc(7), bank(5), tax(5); presentation: lexicon order first
        assert chosen == ["tax", "bank", "zinc"]

    def test_zero_frequency_falls_back_to_name_order(self):
        assert select_top_aspects(self.LEX, {}, 2) == ["bank", "rate"]

    def test_top_n_larger_than_pool(self):
        assert select_top_aspects(self.LEX, {"tax": 1}, 99) == ["tax", "bank", "rate"]


# --- cell computation --------------------------------------------------------


def planted_inputs():
    """Sentiment counts whose previous-day value sets the price exactly."""
    cal = TradingCalendar(DAYS)
    counts = {d: float(i % 5 + 1) for i, d in enumerate(DAYS)}
    sent = SentimentSeries("tax", FP, counts)
    closes = {DAYS[0]: 10.0 + counts[DAYS[0]]}
    for prev, d in zip(DAYS, DAYS[1:]):
        closes[d] = 10.0 + counts[prev]
    price = PriceSeries("AAA", closes)
    return sent, price, cal


class TestComputeCell:
    def test_planted_relation_fills_r_and_granger(self):
        sent, price, cal = planted_inputs()
        cell = compute_cell(sent, price, cal, PipelineConfig())
        assert cell.n == len(DAYS) - 1
        assert cell.r == pytest.approx(1.0)
        assert cell.r_significant and cell.r_reason is None
        assert cell.granger_causal and cell.granger_p == 0.0
        assert cell.granger_perfect_fit  # price is an exact function of lagged counts
        # integer counts repeat heavily: the entropy estimate must refuse,
        # without disturbing the other two statistics
        assert cell.u is None and cell.u_reason == "DegenerateSample"

    def test_no_overlap_yields_all_null(self):
        sent = SentimentSeries("tax", FP, {DAYS[0] + timedelta(days=300): 1.0})
        price = PriceSeries("AAA", {d: 10.0 for d in DAYS})
        cell = compute_cell(sent, price, TradingCalendar(DAYS), PipelineConfig())
        assert cell.n == 0
        assert (cell.r, cell.granger_f, cell.u) == (None, None, None)
        assert cell.r_reason == "InsufficientData"
        assert cell.granger_reason == "InsufficientData"
        assert cell.u_reason == "InsufficientData"

    def test_constant_sentiment_fails_statistics_independently(self):
        cal = TradingCalendar(DAYS)
        sent = SentimentSeries("tax", FP, {d: 2.0 for d in DAYS})
        price = PriceSeries("AAA", {d: 10.0 + (i % 7) * 0.5 for i, d in enumerate(DAYS)})
        cell = compute_cell(sent, price, cal, PipelineConfig())
        assert cell.n == len(DAYS) - 1
        assert cell.r_reason == "DegenerateSeries"
        assert cell.granger_reason == "RankDeficient"
        assert cell.u_reason == "DegenerateSample"

    def test_reverse_flag_swaps_direction(self):
        sent, price, cal = planted_inputs()
        forward = compute_cell(sent, price, cal, PipelineConfig())
        reverse = compute_cell(sent, price, cal, PipelineConfig(granger_reverse=True))
        assert forward.granger_causal
        assert reverse.granger_f != forward.granger_f

    def test_difference_flag_changes_the_series_under_test(self):
        # distinct interfering cycles keep both fits inexact, so the level
        # and differenced F statistics are finite and genuinely different
        cal = TradingCalendar(DAYS)
        counts = {d: float(i % 5 + 1) for i, d in enumerate(DAYS)}
        sent = SentimentSeries("tax", FP, counts)
        closes = {
            d: 10.0 + 0.9 * counts[DAYS[max(i - 1, 0)]]
            + 0.07 * (i % 3) + 0.013 * (i % 7)
            for i, d in enumerate(DAYS)
        }
        price = PriceSeries("AAA", closes)
        level = compute_cell(sent, price, cal, PipelineConfig())
        diffed = compute_cell(sent, price, cal, PipelineConfig(granger_difference=True))
        assert level.granger_reason is None and diffed.granger_reason is None
        assert diffed.granger_f != level.granger_f
        assert not (level.granger_perfect_fit or diffed.granger_perfect_fit)


# --- file-level stages -------------------------------------------------------


def build_analysis_tree(root: Path, label_days: int = 30) -> PipelineConfig:
    """aspects + labels + one price file with an exact lag-1 dependence."""
    aspects = root / "aspects.txt"
    aspects.write_text("tax\nbank\n", encoding="utf-8")

    rows = ["tweet_id,date,aspect,polarity"]
    counts: dict[date, int] = {}
    for i, d in enumerate(DAYS[:label_days]):
        counts[d] = i % 5 + 1
        rows.extend(
            f"t{i}_{j},{d.isoformat()},tax,positive" for j in range(counts[d])
        )
        rows.append(f"t{i}_n,{d.isoformat()},tax,negative")
    rows.append(f"b0,{DAYS[0].isoformat()},bank,positive")
    rows.append(f"b1,{DAYS[1].isoformat()},bank,neutral")
    labels = root / "labels.csv"
    labels.write_text("\n".join(rows) + "\n", encoding="utf-8")

    price_lines = ["Date,Open,Close"]
    price_lines.append(f"{DAYS[0].isoformat()},0,{10 + counts[DAYS[0]]}")
    for prev, d in zip(DAYS, DAYS[1:]):
        price_lines.append(f"{d.isoformat()},0,{10 + counts.get(prev, 1)}")
    price = root / "AAA.csv"
    price.write_text("\n".join(price_lines) + "\n", encoding="utf-8")

    return PipelineConfig(
        aspects=aspects, labels=labels, prices={"AAA": price},
        top_n_aspects=2, output_dir=root / "out",
    )


class TestStageAnalyze:
    def test_total_coverage_one_cell_per_triple(self, tmp_path):
        cfg = build_analysis_tree(tmp_path)
        scores = tmp_path / "scores.csv"
        stage_score(cfg.labels, scores)
        cells = stage_analyze(cfg, scores, tmp_path / "cells.csv")
        triples = [(c.aspect, c.kind, c.ticker) for c in cells]
        assert len(triples) == len(set(triples)) == 2 * 4 * 1
        assert [c.aspect for c in cells[:4]] == ["tax"] * 4  # lexicon order
        by = {(c.aspect, c.kind): c for c in cells}
        assert by[("tax", FP)].r == pytest.approx(1.0)
        # bank has two labeled days: nothing is computable there
        assert by[("bank", FP)].r is None
        assert by[("bank", FP)].r_reason == "InsufficientData"

    def test_absent_as_zero_extends_absolute_series_only(self, tmp_path):
        cfg = build_analysis_tree(tmp_path)
        scores = tmp_path / "scores.csv"
        stage_score(cfg.labels, scores)
        sparse = {(c.aspect, c.kind): c
                  for c in stage_analyze(cfg, scores, tmp_path / "c1.csv")}
        cfg.absent_as_zero = True
        filled = {(c.aspect, c.kind): c
                  for c in stage_analyze(cfg, scores, tmp_path / "c2.csv")}
        # bank sentiment exists on the first two days only: both feed a
        # following price day, nothing more
        assert sparse[("bank", FP)].n == 2
        assert filled[("bank", FP)].n == len(DAYS) - 1
        assert filled[("bank", NFP)].n == sparse[("bank", NFP)].n

    def test_labels_outside_calendar_leave_all_null(self, tmp_path, caplog):
        cfg = build_analysis_tree(tmp_path)
        saturday = date(2022, 10, 1)
        cfg.labels.write_text(
            "tweet_id,date,aspect,polarity\n"
            f"t0,{saturday.isoformat()},tax,positive\n",
            encoding="utf-8",
        )
        scores = tmp_path / "scores.csv"
        stage_score(cfg.labels, scores)
        with caplog.at_level(logging.WARNING, logger="sentdep.pipeline"):
            cells = stage_analyze(cfg, scores, tmp_path / "cells.csv")
        assert cells
        assert all(c.r is None and c.granger_f is None and c.u is None for c in cells)
        assert all(c.r_reason == "InsufficientData" for c in cells)
        assert any("no cell produced any statistic" in r.message for r in caplog.records)


# --- full pipeline -----------------------------------------------------------


def build_tweet_tree(root: Path) -> Path:
    """Tweet-driven config: enough posts to label 'tax' on ten weekdays."""
    (root / "aspects.txt").write_text("tax\nbank\n", encoding="utf-8")
    (root / "pos.txt").write_text("good\nstrong\n", encoding="utf-8")
    (root / "neg.txt").write_text("bad\nweak\n", encoding="utf-8")

    tweets = []
    k = 0
    for i, d in enumerate(DAYS[:10]):
        for j in range(i % 3 + 1):
            word = "good" if (i + j) % 4 else "bad"
            tweets.append(json.dumps({
                "id": f"t{k}",
                "created_at": f"{d.isoformat()}T12:0{j}:00Z",
                "text": f"the tax outlook is {word} today",
                "lang": "en",
            }))
            k += 1
    (root / "tweets.jsonl").write_text("\n".join(tweets) + "\n", encoding="utf-8")

    lines = ["Date,Close"] + [
        f"{d.isoformat()},{(10 + i * 0.25):.2f}" for i, d in enumerate(DAYS[:10])
    ]
    (root / "AAA.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    ini = root / "config.ini"
    ini.write_text(
        "[inputs]\n"
        "aspects = aspects.txt\n"
        "tweets = tweets.jsonl\n"
        "positive_terms = pos.txt\n"
        "negative_terms = neg.txt\n"
        "[prices]\n"
        "AAA = AAA.csv\n"
        "[ingest]\n"
        "min_keyword_count = 2\n"
        "[analysis]\n"
        "top_n_aspects = 2\n"
        "[output]\n"
        "dir = out\n",
        encoding="utf-8",
    )
    return ini


EXPECTED_ARTIFACTS = {
    "keywords.csv", "labels.csv", "scores.csv", "cells.csv", "granger.csv",
    "run_manifest.json",
} | {f"heatmap_{s}_{k}.csv" for s in ("r", "u") for k in ("fp", "fn", "nfp", "nfn")}


class TestRunPipeline:
    def test_writes_every_artifact(self, tmp_path):
        cfg = load_config(build_tweet_tree(tmp_path))
        cells = run_pipeline(cfg)
        assert {p.name for p in cfg.output_dir.iterdir()} == EXPECTED_ARTIFACTS
        assert len(cells) == 2 * 4 * 1

    def test_reruns_are_byte_identical(self, tmp_path):
        ini = build_tweet_tree(tmp_path)
        cfg1 = load_config(ini)
        run_pipeline(cfg1)
        cfg2 = load_config(ini)
        cfg2.output_dir = tmp_path / "out2"
        run_pipeline(cfg2)
        for name in sorted(EXPECTED_ARTIFACTS):
            a = (tmp_path / "out" / name).read_bytes()
            b = (tmp_path / "out2" / name).read_bytes()
            assert a == b, f"{name} differs between reruns"

    def test_no_aspect_mentions_still_completes(self, tmp_path, caplog):
        ini = build_tweet_tree(tmp_path)
        (tmp_path / "tweets.jsonl").write_text(
            json.dumps({
                "id": "t0",
                "created_at": "2022-10-03T09:00:00Z",
                "text": "nothing relevant here",
                "lang": "en",
            }) + "\n",
            encoding="utf-8",
        )
        cfg = load_config(ini)
        with caplog.at_level(logging.WARNING, logger="sentdep.pipeline"):
            cells = run_pipeline(cfg)
        assert cells and all(c.n == 0 for c in cells)
        assert all(c.r_reason == "InsufficientData" for c in cells)
        assert any("no cell produced any statistic" in r.message for r in caplog.records)
