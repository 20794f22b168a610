"""Command-line verbs: train, transform, bridge."""

import json
import shutil
import subprocess
import sys

import pytest

from styloseq.cli import main
from styloseq.encode import detokenize, encode_source

from conftest import TINY_PROGRAMS, write_pairs

FAST = ["--d", "32", "--heads", "2", "--layers", "1",
        "--max-io-len", "64", "--epochs", "120", "--seed", "0"]


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    """Pairs file plus a checkpoint trained on it via the CLI."""
    root = tmp_path_factory.mktemp("cli")
    rows = [{"src": TINY_PROGRAMS[i],
             "tgt": TINY_PROGRAMS[(i + 1) % 3],
             "author": f"au{i}", "from": "s1", "to": "s2"}
            for i in range(3)]
    pairs = write_pairs(root / "pairs.jsonl", rows)
    ckpt = root / "model.pt"
    rc = main(["train", "--pairs", str(pairs), "--out", str(ckpt)]
              + FAST)
    assert rc == 0
    assert ckpt.exists()
    return {"root": root, "pairs": pairs, "ckpt": ckpt}


def test_console_script_installed():
    assert shutil.which("styloseq")
    proc = subprocess.run([sys.executable, "-m", "styloseq.cli",
                           "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "transform" in proc.stdout


def test_transform_writes_files_and_manifest(trained, tmp_path):
    src = tmp_path / "input.cpp"
    src.write_text(TINY_PROGRAMS[0] + "\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    rc = main(["transform", "--ckpt", str(trained["ckpt"]),
               "--out-dir", str(out_dir), str(src)])
    assert rc == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert len(manifest) == 1
    entry = manifest[0]
    assert set(entry) == {"input", "output", "status", "detail"}
    assert entry["status"] == "ok"
    produced = out_dir / entry["output"]
    assert produced.exists()
    assert "int main" in produced.read_text(encoding="utf-8")


def test_transform_one_output_per_input(trained, tmp_path):
    files = []
    for i, program in enumerate(TINY_PROGRAMS):
        path = tmp_path / f"prog{i}.cpp"
        path.write_text(program + "\n", encoding="utf-8")
        files.append(str(path))
    out_dir = tmp_path / "out"
    rc = main(["transform", "--ckpt", str(trained["ckpt"]),
               "--out-dir", str(out_dir)] + files)
    assert rc == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert [e["input"] for e in manifest] == files
    assert all(e["status"] == "ok" for e in manifest)
    outputs = {e["output"] for e in manifest}
    assert len(outputs) == 3
    for name in outputs:
        assert (out_dir / name).exists()


def test_transform_bad_mode_is_an_error_entry(trained, tmp_path):
    src = tmp_path / "input.cpp"
    src.write_text(TINY_PROGRAMS[0] + "\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    rc = main(["transform", "--ckpt", str(trained["ckpt"]),
               "--out-dir", str(out_dir), "--decode", "sampled",
               str(src)])
    assert rc == 1
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest[0]["status"] == "error"
    assert "decode mode" in manifest[0]["detail"]
    assert manifest[0]["output"] == ""


def test_identity_training_returns_input(tmp_path):
    rows = [{"src": p, "tgt": "int main() { return 0; }",
             "author": "a", "from": "s1", "to": "s2"}
            for p in TINY_PROGRAMS]
    pairs = write_pairs(tmp_path / "pairs.jsonl", rows)
    ckpt = tmp_path / "identity.pt"
    rc = main(["train", "--pairs", str(pairs), "--out", str(ckpt),
               "--identity"] + FAST)
    assert rc == 0
    src = tmp_path / "input.cpp"
    src.write_text(TINY_PROGRAMS[0] + "\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    rc = main(["transform", "--ckpt", str(ckpt),
               "--out-dir", str(out_dir), str(src)])
    assert rc == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    produced = (out_dir / manifest[0]["output"]) \
        .read_text(encoding="utf-8").strip()
    enc = encode_source(TINY_PROGRAMS[0])
    assert produced == detokenize([t for _, t in enc["tokens"]])


def test_bridge_requires_environment(monkeypatch, capsys):
    monkeypatch.delenv("STYLOMORPH_PAIRS", raising=False)
    monkeypatch.delenv("STYLOMORPH_NEURAL_OUT", raising=False)
    rc = main(["bridge"])
    assert rc == 2
    assert "STYLOMORPH_PAIRS" in capsys.readouterr().err


def test_bridge_writes_keyed_candidates(trained, tmp_path, monkeypatch):
    meta = tmp_path / "pairs.meta.json"
    meta.write_text(json.dumps({
        "per_unit": {"alpha/one": 2, "beta/two": 1},
    }), encoding="utf-8")
    out = tmp_path / "candidates.jsonl"
    monkeypatch.setenv("STYLOMORPH_PAIRS", str(trained["pairs"]))
    monkeypatch.setenv("STYLOMORPH_PAIRS_META", str(meta))
    monkeypatch.setenv("STYLOMORPH_NEURAL_OUT", str(out))
    rc = main(["bridge"] + FAST)
    assert rc == 0
    rows = [json.loads(line) for line in
            out.read_text(encoding="utf-8").splitlines()]
    assert [r["key"] for r in rows] == ["alpha/one", "alpha/one",
                                        "beta/two"]
    assert all("int main" in r["code"] for r in rows)


def test_bridge_without_meta_writes_nothing(trained, tmp_path,
                                            monkeypatch):
    out = tmp_path / "candidates.jsonl"
    monkeypatch.setenv("STYLOMORPH_PAIRS", str(trained["pairs"]))
    monkeypatch.delenv("STYLOMORPH_PAIRS_META", raising=False)
    monkeypatch.setenv("STYLOMORPH_NEURAL_OUT", str(out))
    rc = main(["bridge"] + FAST)
    assert rc == 0
    assert out.read_text(encoding="utf-8") == ""


def test_missing_pairs_file_exit_code(tmp_path):
    rc = main(["train", "--pairs", str(tmp_path / "nope.jsonl"),
               "--out", str(tmp_path / "m.pt")] + FAST)
    assert rc == 2
