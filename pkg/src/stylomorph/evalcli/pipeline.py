"""Staged experiment runner.

A run walks fixed stages over one artifacts directory:

    ingest -> split -> train-attrib -> evade -> pairgen
           -> neural (optional, external command) -> verify -> report

Each stage persists its output under the artifacts directory and is
skipped on rerun when that artifact already exists, so an interrupted
run resumes where it stopped.  A stage failure raises StageFailure with
the stage name; everything written so far stays on disk.
"""

from __future__ import annotations

import json
import os
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..attrib import AttributionModel, train_attribution
from ..corpus import (Corpus, SourceUnit, ingest_corpus, load_corpus,
                      save_corpus, split_dataset)
from ..frontend import bind, parse_source
from ..mcts import Objective, SearchConfig, evade
from ..pairgen import build_pair_dataset, export_jsonl
from ..synth import generate_corpus
from .metrics import (MetricsReport, render_report, resolve_workers,
                      transformation_verdicts)

STAGES = ("ingest", "split", "train-attrib", "evade", "pairgen",
          "neural", "verify", "report")

DEFAULTS: dict[str, object] = {
    "seed": 0,
    "train_fraction": 0.875,
    "attrib_kinds": "tfidf-rf",
    "search_budget": 500,
    "search_depth": 8,
    "search_rollout": 2,
    "search_exploration": 0.0,   # 0 means library default
    "synth_authors": 5,
    "pairgen_enabled": True,
    "neural_enabled": False,
    "neural_cmd": "",
    "workers": 1,
}


class ConfigError(ValueError):
    """The experiment config is missing keys or holds bad values."""


class StageFailure(RuntimeError):
    """A stage raised; artifacts written so far are preserved."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


def parse_config(path: str | Path) -> dict:
    """Flat key-value config.

    Two syntaxes: a flat JSON object, or one `key = value` per line with
    `#` comments.  Values are coerced to int, float, or bool when they
    look like one.
    """
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    raw: dict[str, object] = {}
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be a flat object")
        for key, value in data.items():
            if isinstance(value, (dict, list)):
                raise ConfigError(f"config key {key!r} is not flat")
            raw[key] = value
    else:
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            raw[key.strip()] = _coerce(value.strip())
    config = dict(DEFAULTS)
    config.update(raw)
    if "out_dir" not in config:
        raise ConfigError("config needs out_dir")
    if not config.get("corpus_root") and not config.get("synth_authors"):
        raise ConfigError("config needs corpus_root or synth_authors")
    return config


def _coerce(value: str) -> object:
    low = value.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    return value


def _search_config(config: dict, seed: int) -> SearchConfig:
    kwargs = {
        "iterations": int(config["search_budget"]),
        "max_depth": int(config["search_depth"]),
        "rollout_depth": int(config["search_rollout"]),
        "seed": seed,
    }
    if config["search_exploration"]:
        kwargs["exploration"] = float(config["search_exploration"])
    return SearchConfig(**kwargs)


@dataclass
class _Run:
    config: dict
    out: Path
    timing: dict[str, float]

    def artifact(self, *parts: str) -> Path:
        path = self.out.joinpath(*parts)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path


def _stage(run: _Run, name: str, marker, build) -> None:
    """Runs build() unless the marker artifact(s) already exist."""
    markers = marker if isinstance(marker, (list, tuple)) else [marker]
    if all(path.exists() for path in markers):
        return
    started = time.perf_counter()
    try:
        build()
    except Exception as exc:
        raise StageFailure(name, exc) from exc
    run.timing[name] = run.timing.get(name, 0.0) \
        + (time.perf_counter() - started)
    timing_path = run.artifact("timing.json")
    timing_path.write_text(json.dumps(run.timing, indent=2),
                           encoding="utf-8")


# worker-process state for the evade stage
_EVADE_MODEL: AttributionModel | None = None


def _evade_init(model_path: str) -> None:
    global _EVADE_MODEL
    _EVADE_MODEL = AttributionModel.load(model_path)


def _evade_one(job: dict) -> dict:
    ast = parse_source(job["code"])
    bind(ast)
    cfg = SearchConfig(**job["search"])
    result = evade(ast, _EVADE_MODEL, Objective.evade_author(job["author"]),
                   cfg, true_author=job["author"])
    return {
        "author": job["author"],
        "challenge": job["challenge"],
        "success": bool(result.success),
        "predicted": result.predicted,
        "final_code": result.final_code,
        "sequence_length": len(result.sequence),
        "iterations_used": result.iterations_used,
        "reward": result.reward,
    }


def run_experiment(config_path: str | Path) -> MetricsReport:
    """Executes all enabled stages and returns the final report."""
    config = parse_config(config_path)
    out = Path(config["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    timing: dict[str, float] = {}
    timing_path = out / "timing.json"
    if timing_path.exists():
        timing.update(json.loads(timing_path.read_text(encoding="utf-8")))
    run = _Run(config=config, out=out, timing=timing)
    seed = int(config["seed"])

    run.artifact("config.echo.json").write_text(
        json.dumps(config, indent=2, sort_keys=True), encoding="utf-8")

    # ingest: real tree when corpus_root is set, else a synthetic corpus
    corpus_path = run.artifact("corpus.json")

    def do_ingest() -> None:
        if config.get("corpus_root"):
            corpus = ingest_corpus(config["corpus_root"])
        else:
            corpus = generate_corpus(int(config["synth_authors"]), seed=seed)
        save_corpus(corpus, corpus_path)

    _stage(run, "ingest", corpus_path, do_ingest)
    corpus = load_corpus(corpus_path)

    split_path = run.artifact("split.json")

    def do_split() -> None:
        train, test = split_dataset(corpus, seed=seed,
                                    train_fraction=float(
                                        config["train_fraction"]))
        split_path.write_text(json.dumps({
            "train": [u.key for u in train.units],
            "test": [u.key for u in test.units],
        }, indent=2), encoding="utf-8")

    _stage(run, "split", split_path, do_split)
    split = json.loads(split_path.read_text(encoding="utf-8"))
    by_key = {u.key: u for u in corpus.units}
    train = Corpus(units=[by_key[k] for k in split["train"]],
                   authors=corpus.authors)
    test = Corpus(units=[by_key[k] for k in split["test"]],
                  authors=corpus.authors)

    kinds = [k.strip() for k in str(config["attrib_kinds"]).split(",")
             if k.strip()]
    if not kinds:
        raise StageFailure("train-attrib",
                           ConfigError("attrib_kinds is empty"))
    model_paths = {kind: run.artifact("attrib", f"{kind}.model.json")
                   for kind in kinds}

    def do_train() -> None:
        for kind, path in model_paths.items():
            if not path.exists():
                train_attribution(train, kind=kind).save(path)

    _stage(run, "train-attrib", list(model_paths.values()), do_train)
    models = {kind: AttributionModel.load(path)
              for kind, path in model_paths.items()}
    guide = kinds[0]

    evasion_path = run.artifact("evasion", "results.jsonl")

    def do_evade() -> None:
        search = _search_config(config, seed)
        jobs = [{
            "author": u.author, "challenge": u.challenge, "code": u.code,
            "search": {
                "iterations": search.iterations,
                "max_depth": search.max_depth,
                "exploration": search.exploration,
                "rollout_depth": search.rollout_depth,
                "seed": search.seed,
            },
        } for u in test.units]
        workers = resolve_workers(int(config["workers"]))
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(
                    max_workers=workers, initializer=_evade_init,
                    initargs=(str(model_paths[guide]),)) as pool:
                rows = list(pool.map(_evade_one, jobs))
        else:
            _evade_init(str(model_paths[guide]))
            rows = [_evade_one(job) for job in jobs]
        with evasion_path.open("w", encoding="utf-8") as handle:
            for row in rows:
                handle.write(json.dumps(row, ensure_ascii=False) + "\n")

    _stage(run, "evade", evasion_path, do_evade)
    evasion_rows = [json.loads(line) for line
                    in evasion_path.read_text(encoding="utf-8").splitlines()]

    pairs_path = run.artifact("pairs.jsonl")
    if config["pairgen_enabled"]:
        def do_pairgen() -> None:
            dataset, meta = build_pair_dataset(
                test.units, corpus.authors, models[guide],
                config=_search_config(config, seed))
            export_jsonl(dataset, pairs_path)
            run.artifact("pairs.meta.json").write_text(
                json.dumps(meta, indent=2), encoding="utf-8")

        _stage(run, "pairgen", pairs_path, do_pairgen)

    neural_rows: list[dict] = []
    if config["neural_enabled"]:
        neural_path = run.artifact("neural", "candidates.jsonl")

        def do_neural() -> None:
            cmd = str(config["neural_cmd"]).strip()
            if not cmd:
                raise ConfigError("neural_enabled needs neural_cmd")
            env = dict(os.environ)
            env["STYLOMORPH_PAIRS"] = str(pairs_path)
            meta_path = out / "pairs.meta.json"
            if meta_path.exists():
                env["STYLOMORPH_PAIRS_META"] = str(meta_path)
            env["STYLOMORPH_NEURAL_OUT"] = str(neural_path)
            subprocess.run(cmd, shell=True, check=True, env=env)
            if not neural_path.exists():
                raise FileNotFoundError(
                    f"neural_cmd wrote no {neural_path}")

        _stage(run, "neural", neural_path, do_neural)
        neural_rows = [json.loads(line) for line in
                       neural_path.read_text(encoding="utf-8").splitlines()]

    # verify: equivalence verdicts and attribution predictions per unit
    verdicts_path = run.artifact("verdicts", "transform.jsonl")
    evasion_log_path = run.artifact("verdicts", "evasion.jsonl")

    def do_verify() -> None:
        by_unit_key = {u.key: u for u in test.units}
        outputs = [(by_unit_key[f"{r['author']}/{r['challenge']}"],
                    r["final_code"]) for r in evasion_rows]
        workers = int(config["workers"])
        categories = transformation_verdicts(outputs, workers=workers)
        with verdicts_path.open("w", encoding="utf-8") as handle:
            for row, category in zip(evasion_rows, categories):
                handle.write(json.dumps({
                    "key": f"{row['author']}/{row['challenge']}",
                    "source": "evade",
                    "category": category,
                }, ensure_ascii=False) + "\n")
        with evasion_log_path.open("w", encoding="utf-8") as handle:
            for row in evasion_rows:
                line = {"key": f"{row['author']}/{row['challenge']}",
                        "true_author": row["author"]}
                for kind, model in models.items():
                    predicted, _ = model.predict_source(row["final_code"])
                    line[kind] = predicted
                handle.write(json.dumps(line, ensure_ascii=False) + "\n")
        if neural_rows:
            neural_outputs = []
            keyed = []
            for row in neural_rows:
                unit = by_unit_key.get(row.get("key", ""))
                if unit is None:
                    continue
                neural_outputs.append((unit, row["code"]))
                keyed.append(row)
            neural_categories = transformation_verdicts(
                neural_outputs, workers=workers)
            with verdicts_path.open("a", encoding="utf-8") as handle:
                for row, category in zip(keyed, neural_categories):
                    handle.write(json.dumps({
                        "key": row["key"], "source": "neural",
                        "category": category,
                    }, ensure_ascii=False) + "\n")

    _stage(run, "verify", verdicts_path, do_verify)

    report_path = run.artifact("report.json")

    def do_report() -> None:
        report = build_report(out, config)
        report.validate()
        report_path.write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True),
            encoding="utf-8")
        run.artifact("report.txt").write_text(render_report(report),
                                              encoding="utf-8")

    _stage(run, "report", report_path, do_report)
    return MetricsReport.from_dict(
        json.loads(report_path.read_text(encoding="utf-8")))


def build_report(out_dir: str | Path, config: dict | None = None,
                 ) -> MetricsReport:
    """Recomputes every rate from the raw per-unit verdict logs.

    This is the only path that produces a MetricsReport, so the summary
    always equals a recomputation from the logs.
    """
    out = Path(out_dir)
    if config is None:
        config = json.loads(
            (out / "config.echo.json").read_text(encoding="utf-8"))
    timing = {}
    timing_path = out / "timing.json"
    if timing_path.exists():
        timing = json.loads(timing_path.read_text(encoding="utf-8"))

    verdict_rows = [json.loads(line) for line in
                    (out / "verdicts" / "transform.jsonl")
                    .read_text(encoding="utf-8").splitlines()]
    primary = [r for r in verdict_rows if r["source"] == "evade"]
    neural = [r for r in verdict_rows if r["source"] == "neural"]

    error_table: dict[str, int] = {}
    successes = 0
    for row in primary:
        if row["category"] is None:
            successes += 1
        else:
            error_table[row["category"]] = \
                error_table.get(row["category"], 0) + 1
    rate = successes / len(primary) if primary else None

    evasion_rows = [json.loads(line) for line in
                    (out / "verdicts" / "evasion.jsonl")
                    .read_text(encoding="utf-8").splitlines()]
    kinds = [k.strip() for k in str(config["attrib_kinds"]).split(",")
             if k.strip()]
    evasion_rates: dict[str, float] = {}
    for kind in kinds:
        hits = sum(1 for row in evasion_rows
                   if row[kind] != row["true_author"])
        evasion_rates[kind] = hits / len(evasion_rows) if evasion_rows \
            else 0.0

    neural_section = None
    if neural:
        neural_table: dict[str, int] = {}
        neural_ok = 0
        for row in neural:
            if row["category"] is None:
                neural_ok += 1
            else:
                neural_table[row["category"]] = \
                    neural_table.get(row["category"], 0) + 1
        neural_section = {
            "transformation_success_rate": neural_ok / len(neural),
            "sample_count": len(neural),
            "error_table": neural_table,
        }

    return MetricsReport(
        transformation_success_rate=rate,
        evasion_success_rate=evasion_rates,
        error_table=error_table,
        timing=timing,
        config=dict(config),
        sample_count=len(primary),
        neural=neural_section,
    )
