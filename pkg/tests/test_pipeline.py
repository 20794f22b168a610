"""Staged runner: artifacts, resume, recompute-exact reports, failures."""

import json
import textwrap

import pytest

from stylomorph.corpus import split_dataset
from stylomorph.evalcli.pipeline import (ConfigError, StageFailure,
                                         build_report, parse_config,
                                         run_experiment)
from stylomorph.synth import generate_corpus


def write_config(path, out_dir, **overrides):
    settings = {
        "out_dir": str(out_dir),
        "synth_authors": 3,
        "search_budget": 12,
        "train_fraction": 0.875,
    }
    settings.update(overrides)
    path.write_text(json.dumps(settings), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def base_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline")
    out = root / "artifacts"
    config = write_config(root / "run.json", out)
    report = run_experiment(config)
    return config, out, report


def test_full_run_writes_all_artifacts(base_run):
    _, out, report = base_run
    for rel in ("config.echo.json", "corpus.json", "split.json",
                "attrib/tfidf-rf.model.json", "evasion/results.jsonl",
                "pairs.jsonl", "pairs.meta.json",
                "verdicts/transform.jsonl", "verdicts/evasion.jsonl",
                "report.json", "report.txt", "timing.json"):
        assert (out / rel).exists(), rel
    report.validate()
    assert report.sample_count == 3          # 24 units, 1/8 held out
    assert report.neural is None
    assert set(report.evasion_success_rate) == {"tfidf-rf"}
    # the report stage's own duration lands in timing.json only after
    # the report is written, so the in-report timing stops at verify
    assert "ingest" in report.timing and "verify" in report.timing
    disk_timing = json.loads((out / "timing.json").read_text())
    assert "report" in disk_timing


def test_rerun_skips_finished_stages(base_run):
    config, out, first = base_run
    corpus_stamp = (out / "corpus.json").stat().st_mtime_ns
    evade_bytes = (out / "evasion" / "results.jsonl").read_bytes()
    (out / "report.json").unlink()
    second = run_experiment(config)
    assert (out / "corpus.json").stat().st_mtime_ns == corpus_stamp
    assert (out / "evasion" / "results.jsonl").read_bytes() == evade_bytes
    assert second.transformation_success_rate \
        == first.transformation_success_rate
    assert second.evasion_success_rate == first.evasion_success_rate


def test_report_equals_recomputation_from_logs(base_run):
    _, out, report = base_run
    rebuilt = build_report(out)
    assert rebuilt.transformation_success_rate \
        == report.transformation_success_rate
    assert rebuilt.evasion_success_rate == report.evasion_success_rate
    assert rebuilt.error_table == report.error_table
    assert rebuilt.sample_count == report.sample_count


def test_failed_stage_raises_and_preserves_artifacts(tmp_path):
    out = tmp_path / "artifacts"
    config = write_config(tmp_path / "run.json", out,
                          neural_enabled=True, neural_cmd="false")
    with pytest.raises(StageFailure) as exc_info:
        run_experiment(config)
    assert exc_info.value.stage == "neural"
    assert (out / "evasion" / "results.jsonl").exists()
    assert (out / "pairs.jsonl").exists()
    assert not (out / "report.json").exists()


def test_resume_after_fix_completes_neural_contract(tmp_path):
    out = tmp_path / "artifacts"
    bad = write_config(tmp_path / "bad.json", out,
                       neural_enabled=True, neural_cmd="false")
    with pytest.raises(StageFailure):
        run_experiment(bad)

    # same deterministic corpus and split the runner uses
    corpus = generate_corpus(3, seed=0)
    _, test = split_dataset(corpus, seed=0, train_fraction=0.875)
    unit = test.units[0]
    script = tmp_path / "fake_neural.py"
    script.write_text(textwrap.dedent(f"""\
        import json, os
        pairs = open(os.environ["STYLOMORPH_PAIRS"]).read().splitlines()
        assert pairs
        rows = [
            {{"key": {unit.key!r}, "code": {unit.code!r}}},
            {{"key": "nobody/none", "code": "int main() {{ return 0; }}"}},
        ]
        with open(os.environ["STYLOMORPH_NEURAL_OUT"], "w") as handle:
            for row in rows:
                handle.write(json.dumps(row) + "\\n")
        """), encoding="utf-8")
    good = write_config(tmp_path / "good.json", out, neural_enabled=True,
                        neural_cmd=f"python3 {script}")
    report = run_experiment(good)
    report.validate()
    assert report.neural is not None
    assert report.neural["sample_count"] == 1    # unknown key dropped
    assert report.neural["transformation_success_rate"] == 1.0
    rows = [json.loads(line) for line in
            (out / "verdicts" / "transform.jsonl")
            .read_text(encoding="utf-8").splitlines()]
    assert {"evade", "neural"} == {row["source"] for row in rows}


def test_two_runs_same_config_agree(tmp_path, base_run):
    _, base_out, first = base_run
    out = tmp_path / "artifacts"
    config = write_config(tmp_path / "run.json", out)
    second = run_experiment(config)
    assert (out / "evasion" / "results.jsonl").read_bytes() \
        == (base_out / "evasion" / "results.jsonl").read_bytes()
    assert second.transformation_success_rate \
        == first.transformation_success_rate
    assert second.evasion_success_rate == first.evasion_success_rate
    assert second.error_table == first.error_table


def test_parse_config_json_and_lines(tmp_path):
    json_path = tmp_path / "a.json"
    json_path.write_text(
        '{"out_dir": "x", "seed": 3, "pairgen_enabled": false}',
        encoding="utf-8")
    config = parse_config(json_path)
    assert config["seed"] == 3
    assert config["pairgen_enabled"] is False
    assert config["search_budget"] == 500    # default preserved

    lines_path = tmp_path / "b.cfg"
    lines_path.write_text(textwrap.dedent("""\
        # experiment
        out_dir = /tmp/run
        seed = 7
        train_fraction = 0.5
        neural_enabled = yes
        neural_cmd = python3 gen.py
        """), encoding="utf-8")
    config = parse_config(lines_path)
    assert config["seed"] == 7
    assert config["train_fraction"] == 0.5
    assert config["neural_enabled"] is True
    assert config["neural_cmd"] == "python3 gen.py"


def test_parse_config_rejections(tmp_path):
    missing = tmp_path / "m.json"
    missing.write_text('{"synth_authors": 3}', encoding="utf-8")
    with pytest.raises(ConfigError):
        parse_config(missing)

    no_source = tmp_path / "n.json"
    no_source.write_text('{"out_dir": "x", "synth_authors": 0}',
                         encoding="utf-8")
    with pytest.raises(ConfigError):
        parse_config(no_source)

    nested = tmp_path / "d.json"
    nested.write_text('{"out_dir": "x", "search": {"budget": 1}}',
                      encoding="utf-8")
    with pytest.raises(ConfigError):
        parse_config(nested)

    bad_line = tmp_path / "e.cfg"
    bad_line.write_text("out_dir /tmp/run\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        parse_config(bad_line)
