"""Command-line entry points.

Verbs:
  train      fit a model on a pairs JSONL file
  transform  rewrite source files with a trained model
  bridge     run as a pipeline neural stage via environment variables
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .config import NeuralConfig
from .decode import DecodeOverflow, transform as run_transform
from .encode import (EncoderUnavailable, SchemaError, detokenize,
                     prepare_examples)
from .train import load_checkpoint, save_checkpoint, train


def _config_from_args(args) -> NeuralConfig:
    base = NeuralConfig()
    fields = {f.name for f in dataclasses.fields(NeuralConfig)}
    overrides = {name: getattr(args, name)
                 for name in ("d", "heads", "layers", "lr", "epochs",
                              "seed", "max_io_len")
                 if name in fields and getattr(args, name) is not None}
    if getattr(args, "no_dfg", False):
        overrides["use_dfg_bias"] = False
    return dataclasses.replace(base, **overrides)


def cmd_train(args) -> int:
    config = _config_from_args(args)
    examples = prepare_examples(args.pairs, config)
    if args.identity:
        for ex in examples:
            ex.tgt_ids = list(ex.src_ids)
    if examples.overlong_count:
        print(f"truncated {examples.overlong_count} overlong examples",
              file=sys.stderr)

    def log(epoch, loss):
        if args.verbose:
            print(f"epoch {epoch:4d}  loss {loss:.6f}", file=sys.stderr)

    ckpt = train(examples, config, log=log)
    save_checkpoint(ckpt, args.out)
    print(f"trained {config.epochs} epochs on {len(examples)} pairs, "
          f"final loss {ckpt['loss_history'][-1]:.6f}")
    return 0


def cmd_transform(args) -> int:
    ckpt = load_checkpoint(args.ckpt)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    failures = 0
    for name in args.files:
        source = Path(name).read_text(encoding="utf-8")
        out_path = out_dir / (Path(name).stem + ".out.cpp")
        entry = {"input": name, "output": out_path.name,
                 "status": "ok", "detail": ""}
        try:
            rewritten = run_transform(ckpt, source, decode=args.decode)
            out_path.write_text(rewritten + "\n", encoding="utf-8")
        except (DecodeOverflow, ValueError, RuntimeError) as exc:
            entry["status"] = "error"
            entry["detail"] = str(exc)
            entry["output"] = ""
            failures += 1
        manifest.append(entry)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n",
                             encoding="utf-8")
    print(f"transformed {len(manifest) - failures}/{len(manifest)} "
          f"files into {out_dir}")
    return 0 if failures == 0 else 1


def _pair_keys(pairs_path: Path, count: int) -> list:
    """Unit key per pair line, reconstructed from the pairgen meta file.

    The meta per_unit object lists units in emission order with their
    pair counts, so expanding it in order recovers the keying.
    """
    meta_path = os.environ.get("STYLOMORPH_PAIRS_META", "")
    if not meta_path or not Path(meta_path).exists():
        return [""] * count
    meta = json.loads(Path(meta_path).read_text(encoding="utf-8"))
    keys = []
    for unit_key, pair_count in meta.get("per_unit", {}).items():
        keys.extend([unit_key] * pair_count)
    if len(keys) != count:
        return [""] * count
    return keys


def cmd_bridge(args) -> int:
    pairs = os.environ.get("STYLOMORPH_PAIRS", "")
    out = os.environ.get("STYLOMORPH_NEURAL_OUT", "")
    if not pairs or not out:
        print("bridge needs STYLOMORPH_PAIRS and STYLOMORPH_NEURAL_OUT",
              file=sys.stderr)
        return 2
    config = _config_from_args(args)
    examples = prepare_examples(pairs, config)
    ckpt = train(examples, config)
    keys = _pair_keys(Path(pairs), len(examples))

    # one candidate per pair: the model's rewrite of the pair source
    from .decode import beam_decode
    from .train import restore
    model, vocab, _, _ = restore(ckpt)
    written = 0
    with Path(out).open("w", encoding="utf-8") as handle:
        for example, key in zip(examples, keys):
            try:
                ids = beam_decode(model, example, width=1)
                code = detokenize([vocab.text_of(i) for i in ids])
            except DecodeOverflow:
                # unparseable on purpose: overflows must count as
                # failures downstream, not vanish from the sample
                code = "{"
            if not key:
                continue
            handle.write(json.dumps({"key": key, "code": code},
                                    ensure_ascii=False) + "\n")
            written += 1
    if args.ckpt_out:
        save_checkpoint(ckpt, args.ckpt_out)
    print(f"bridge wrote {written} candidates to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="styloseq",
        description="structure-aware sequence model for style pairs")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("train", help="fit a model on a pairs JSONL file")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--heads", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-io-len", dest="max_io_len", type=int)
    p.add_argument("--identity", action="store_true",
                   help="train src -> src instead of src -> tgt")
    p.add_argument("--no-dfg", action="store_true",
                   help="zero out the data-flow attention bias")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("transform",
                       help="rewrite source files with a trained model")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--decode", default="greedy",
                   help='"greedy" or "beam:K"')
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("bridge",
                       help="pipeline neural stage; reads STYLOMORPH_* "
                            "environment variables")
    p.add_argument("--d", type=int)
    p.add_argument("--heads", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-io-len", dest="max_io_len", type=int)
    p.add_argument("--no-dfg", action="store_true")
    p.add_argument("--ckpt-out", default="")
    p.set_defaults(func=cmd_bridge)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"pairs error: {exc}", file=sys.stderr)
        return 2
    except EncoderUnavailable as exc:
        print(f"encode failed: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
