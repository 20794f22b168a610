"""Command-line surface for the whole toolkit.

One executable, one verb per stage, plus `run` for the config-driven
pipeline.  Every verb reads and writes plain JSON artifacts so stages
can be chained by hand or resumed by `run`.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .attrib import AttributionModel, train_attribution
from .corpus import (Corpus, ingest_corpus, load_corpus, save_corpus,
                     split_dataset, write_rejections)
from .evalcli import (build_report, render_report, run_experiment,
                      transformation_verdicts)
from .frontend import (FrontendError, bind, build_dfg, extract_leaf_paths,
                       parse_source, tokenize)
from .mcts import Objective, SearchConfig, evade, random_baseline
from .pairgen import build_pair_dataset, export_jsonl
from .synth import generate_corpus, write_tree
from .transforms import CATALOG, TRANSFORM_IDS, enumerate_actions


def encode_source(source: str, max_path_depth: int = 32,
                  max_paths: int = 1000, max_dfg_nodes: int = 1000) -> dict:
    """Token stream, leaf paths, and DFG edges for one program.

    Tokens come from the lexer; paths and edges refer back to lexer
    token indices so every structure annotation aligns with exactly one
    token.  This is the one tokenization both components share.
    """
    tokens = [[t.kind, t.text] for t in tokenize(source)]
    ast = parse_source(source)
    bind(ast)
    paths = []
    for lp in extract_leaf_paths(ast, max_depth=max_path_depth,
                                 max_count=max_paths):
        if lp.token is not None:
            paths.append([lp.token.index, list(lp.kinds)])
    dfg = build_dfg(ast, max_nodes=max_dfg_nodes)
    edges = []
    for a, b in dfg.edges:
        ta, tb = dfg.nodes[a].token, dfg.nodes[b].token
        if ta is not None and tb is not None:
            edges.append([ta.index, tb.index])
    return {"tokens": tokens, "paths": paths, "dfg_edges": edges}


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_split_units(corpus: Corpus, split_path: str | None,
                      side: str) -> list:
    if side == "all" or not split_path:
        return list(corpus.units)
    split = json.loads(Path(split_path).read_text(encoding="utf-8"))
    keys = set(split[side])
    return [u for u in corpus.units if u.key in keys]


def _search_config(args, seed: int | None = None) -> SearchConfig:
    return SearchConfig(
        iterations=args.budget, max_depth=args.depth,
        rollout_depth=args.rollout,
        seed=args.seed if seed is None else seed)


def cmd_ingest(args) -> int:
    corpus = ingest_corpus(args.root)
    save_corpus(corpus, args.out)
    if args.rejects:
        write_rejections(corpus, args.rejects)
    print(f"{len(corpus.units)} units from {len(corpus.authors)} authors"
          f" ({len(corpus.rejections)} rejected)")
    return 0


def cmd_synth(args) -> int:
    corpus = generate_corpus(args.authors, seed=args.seed)
    if args.tree:
        write_tree(corpus, args.tree)
    if args.out:
        save_corpus(corpus, args.out)
    print(f"{len(corpus.units)} synthetic units, {args.authors} authors")
    return 0


def cmd_split(args) -> int:
    corpus = load_corpus(args.corpus)
    train, test = split_dataset(corpus, seed=args.seed,
                                train_fraction=args.train_fraction)
    Path(args.out).write_text(json.dumps({
        "train": [u.key for u in train.units],
        "test": [u.key for u in test.units],
    }, indent=2), encoding="utf-8")
    print(f"train {len(train.units)}  test {len(test.units)}")
    return 0


def cmd_train_attrib(args) -> int:
    corpus = load_corpus(args.corpus)
    units = _load_split_units(corpus, args.split, "train")
    train = Corpus(units=units, authors=corpus.authors)
    model = train_attribution(train, kind=args.kind)
    model.save(args.out)
    if args.split:
        test_units = _load_split_units(corpus, args.split, "test")
        if test_units:
            correct = sum(model.predict_source(u.code)[0] == u.author
                          for u in test_units)
            print(f"test accuracy {correct / len(test_units):.3f}"
                  f" ({correct}/{len(test_units)})")
    print(f"model saved to {args.out}")
    return 0


def cmd_evade(args) -> int:
    corpus = load_corpus(args.corpus)
    units = _load_split_units(corpus, args.split, args.units)
    model = AttributionModel.load(args.model)
    rows = []
    for unit in units:
        ast = parse_source(unit.code)
        bind(ast)
        objective = Objective.imitate(args.target) if args.target \
            else Objective.evade_author(unit.author)
        trace = None
        if args.trace_dir:
            Path(args.trace_dir).mkdir(parents=True, exist_ok=True)
            trace = str(Path(args.trace_dir)
                        / f"{unit.author}.{unit.challenge}.jsonl")
        if args.random:
            result = random_baseline(ast, model, objective,
                                     budget=args.budget, seed=args.seed,
                                     max_depth=args.depth,
                                     true_author=unit.author)
        else:
            result = evade(ast, model, objective, _search_config(args),
                           true_author=unit.author, trace_path=trace)
        rows.append({
            "author": unit.author, "challenge": unit.challenge,
            "success": bool(result.success),
            "predicted": result.predicted,
            "final_code": result.final_code,
            "sequence_length": len(result.sequence),
            "iterations_used": result.iterations_used,
            "reward": result.reward,
        })
    with Path(args.out).open("w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
    wins = sum(r["success"] for r in rows)
    print(f"evasion {wins}/{len(rows)}")
    return 0


def cmd_pairgen(args) -> int:
    corpus = load_corpus(args.corpus)
    units = _load_split_units(corpus, args.split, args.units)
    model = AttributionModel.load(args.model)
    config = SearchConfig(iterations=args.budget, max_depth=args.depth,
                          rollout_depth=args.rollout, seed=args.seed)
    dataset, meta = build_pair_dataset(units, corpus.authors, model,
                                       config=config, strict=args.strict)
    export_jsonl(dataset, args.out)
    if args.meta:
        Path(args.meta).write_text(json.dumps(meta, indent=2),
                                   encoding="utf-8")
    print(f"{meta['pairs']} pairs from {meta['units']} units"
          f" ({meta['flagged_variants']} flagged)")
    return 0


def cmd_encode(args) -> int:
    if args.pairs:
        out = sys.stdout
        for line in Path(args.pairs).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            pair = json.loads(line)
            record = dict(pair)
            record["src_enc"] = encode_source(pair["src"])
            record["tgt_enc"] = encode_source(pair["tgt"])
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
        return 0
    encoded = encode_source(_read_source(args.file))
    json.dump(encoded, sys.stdout, ensure_ascii=False)
    sys.stdout.write("\n")
    return 0


def cmd_verify(args) -> int:
    corpus = load_corpus(args.corpus)
    by_key = {u.key: u for u in corpus.units}
    outputs = []
    keys = []
    for line in Path(args.candidates).read_text(encoding="utf-8") \
            .splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        key = row.get("key") or f"{row['author']}/{row['challenge']}"
        code = row.get("code") or row.get("final_code")
        if key not in by_key or code is None:
            print(f"skipping unknown candidate {key}", file=sys.stderr)
            continue
        outputs.append((by_key[key], code))
        keys.append(key)
    categories = transformation_verdicts(outputs, workers=args.workers)
    table: dict[str, int] = {}
    ok = 0
    with Path(args.out).open("w", encoding="utf-8") as handle:
        for key, category in zip(keys, categories):
            handle.write(json.dumps({"key": key, "category": category})
                         + "\n")
            if category is None:
                ok += 1
            else:
                table[category] = table.get(category, 0) + 1
    rate = ok / len(outputs) if outputs else 0.0
    print(f"transformation success {rate:.3f} ({ok}/{len(outputs)})")
    for category in sorted(table):
        print(f"  {category}: {table[category]}")
    return 0


def cmd_report(args) -> int:
    report = build_report(args.out_dir)
    report.validate()
    out = Path(args.out_dir)
    (out / "report.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True),
        encoding="utf-8")
    text = render_report(report)
    (out / "report.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def cmd_run(args) -> int:
    report = run_experiment(args.config)
    print(render_report(report), end="")
    return 0


def cmd_transforms(args) -> int:
    if not args.file:
        for tid in TRANSFORM_IDS:
            family, summary = CATALOG[tid]
            print(f"{tid:<4} [{family}] {summary}")
        return 0
    source = _read_source(args.file)
    ast = parse_source(source)
    bind(ast)
    for action in enumerate_actions(ast):
        print(action.describe())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylomorph",
        description="Stylometry toolkit: attribution, style evasion, "
                    "and style-pair datasets over a C++ subset.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a corpus tree into one JSON file")
    p.add_argument("root")
    p.add_argument("--out", required=True)
    p.add_argument("--rejects")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate the synthetic styled corpus")
    p.add_argument("--authors", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--tree")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("split", help="deterministic train/test split")
    p.add_argument("corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-fraction", type=float, default=0.875)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train-attrib", help="train an attribution model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split")
    p.add_argument("--kind", default="tfidf-rf")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_attrib)

    p = sub.add_parser("evade", help="search transform sequences that "
                                     "change attribution")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split")
    p.add_argument("--units", choices=("train", "test", "all"),
                   default="test")
    p.add_argument("--model", required=True)
    p.add_argument("--target", help="imitate this author instead of "
                                    "evading the true one")
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--rollout", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", action="store_true",
                   help="use the random-restart baseline")
    p.add_argument("--trace-dir")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evade)

    p = sub.add_parser("pairgen", help="emit style-transfer pairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split")
    p.add_argument("--units", choices=("train", "test", "all"),
                   default="all")
    p.add_argument("--model", required=True)
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--rollout", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--meta")
    p.set_defaults(func=cmd_pairgen)

    p = sub.add_parser("encode", help="tokens, leaf paths, and DFG edges "
                                      "as JSON")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--pairs", help="encode both sides of a pairs JSONL")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("verify", help="equivalence-check candidates "
                                      "against corpus originals")
    p.add_argument("--corpus", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="rebuild the report from artifacts")
    p.add_argument("out_dir")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="run the staged experiment pipeline")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("transforms", help="list the transform catalog or "
                                          "a file's applicable actions")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_transforms)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream reader (head, less) closed the stream; not an error
        try:
            sys.stdout.close()
        except Exception:
            pass
        return 0
    except FrontendError as exc:
        print(f"frontend error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
