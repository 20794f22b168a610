"""Style-variant sets and adjacent source-target pair datasets.

For a program by author i over an ordered roster of n authors, a style set
holds one targeted variant per other author (n-1 usable variants, the own
slot excluded).  Pairing moves the excluded slot to the end of the ordering
and takes adjacent pairs of the remaining variants, giving exactly n-2
pairs, none touching the own-style slot on either side.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import SourceUnit
from .frontend import bind, parse_source, print_source
from .interp import NoTests, check_equivalence
from .mcts import NoActions, Objective, SearchConfig, evade
from .transforms import enumerate_actions


class TooFewStyles(Exception):
    """Fewer than three styles: no pairs can be formed."""


class EmptyDataset(Exception):
    """Refusing to export a dataset with zero pairs."""


@dataclass(frozen=True)
class StyleVariant:
    """One targeted rewrite of a source program toward another author."""

    author: str
    code: str
    success: bool
    reward: float
    n_steps: int


@dataclass(frozen=True)
class StyleSet:
    """All variants of one source unit, aligned with the author roster.

    ``variants[k]`` is None exactly at the unit's own author index.
    """

    source: SourceUnit
    authors: tuple
    variants: tuple

    @property
    def own_index(self):
        return self.authors.index(self.source.author)

    @property
    def usable(self):
        return tuple(v for v in self.variants if v is not None)


@dataclass(frozen=True)
class PairRecord:
    src: str
    tgt: str
    author: str
    style_from: str
    style_to: str


@dataclass(frozen=True)
class PairDataset:
    pairs: tuple

    def __len__(self):
        return len(self.pairs)


def _search_seed(base_seed, unit_key, target_author):
    """Stable per-(unit, target) seed; independent of hash randomization."""
    tag = f"{base_seed}:{unit_key}:{target_author}".encode("utf-8")
    return int.from_bytes(hashlib.blake2b(tag, digest_size=8).digest(), "big")


def build_style_set(unit, corpus_authors, model, config=None, strict=False):
    """Run one targeted search per other author and retain the results.

    Every retained variant is re-verified equivalent to the original on the
    unit's tests; a candidate that fails verification (which a sound
    transform catalog never produces) is replaced by the original text and
    flagged.  Non-successful searches keep their best equivalent state,
    flagged via ``success=False``; ``strict=True`` drops those slots
    instead, which may break the n-1 count.
    """
    if config is None:
        config = SearchConfig()
    if not unit.tests:
        raise NoTests(f"unit {unit.key} has no tests")
    ast = parse_source(unit.code)
    bind(ast)
    if not enumerate_actions(ast):
        raise NoActions(f"unit {unit.key} admits no transform actions")
    original_text = print_source(ast)

    authors = tuple(corpus_authors)
    variants = []
    for target in authors:
        if target == unit.author:
            variants.append(None)
            continue
        cfg = dataclasses.replace(
            config, seed=_search_seed(config.seed, unit.key, target)
        )
        result = evade(
            ast, model, Objective.imitate(target), cfg, true_author=unit.author
        )
        code, success = result.final_code, result.success
        if code != original_text:
            verdict = check_equivalence(ast, code, unit.tests)
            if not verdict.equivalent:
                code, success = original_text, False
        if strict and not success:
            variants.append(None)
            continue
        variants.append(
            StyleVariant(
                author=target,
                code=code,
                success=success,
                reward=result.reward,
                n_steps=len(result.sequence),
            )
        )
    return StyleSet(source=unit, authors=authors, variants=tuple(variants))


def build_pairs(style_set):
    """Adjacent pairs over the usable variants, own slot moved to the end.

    n authors with a full style set yield n-2 pairs.  Raises TooFewStyles
    when the roster has fewer than 3 authors.
    """
    if len(style_set.authors) < 3:
        raise TooFewStyles(f"{len(style_set.authors)} styles, need at least 3")
    usable = style_set.usable
    author = style_set.source.author
    pairs = []
    for left, right in zip(usable, usable[1:]):
        pairs.append(
            PairRecord(
                src=left.code,
                tgt=right.code,
                author=author,
                style_from=left.author,
                style_to=right.author,
            )
        )
    return pairs


def build_pair_dataset(units, corpus_authors, model, config=None, strict=False):
    """Style sets and pairs for every unit; returns (dataset, meta).

    Units with no tests or no applicable actions are skipped and listed in
    the meta under ``skipped``.
    """
    all_pairs = []
    meta = {
        "n_authors": len(corpus_authors),
        "units": 0,
        "pairs": 0,
        "flagged_variants": 0,
        "skipped": [],
        "per_unit": {},
    }
    for unit in units:
        try:
            style_set = build_style_set(
                unit, corpus_authors, model, config=config, strict=strict
            )
        except (NoActions, NoTests) as exc:
            meta["skipped"].append({"unit": unit.key, "reason": str(exc)})
            continue
        try:
            pairs = build_pairs(style_set)
        except TooFewStyles:
            pairs = []
        meta["units"] += 1
        meta["pairs"] += len(pairs)
        meta["flagged_variants"] += sum(
            1 for v in style_set.usable if not v.success
        )
        meta["per_unit"][unit.key] = len(pairs)
        all_pairs.extend(pairs)
    return PairDataset(pairs=tuple(all_pairs)), meta


def export_jsonl(dataset, path):
    """One JSON object per pair: {"src", "tgt", "author", "from", "to"}."""
    if not dataset.pairs:
        raise EmptyDataset("no pairs to export")
    path = Path(path)
    lines = []
    for pair in dataset.pairs:
        lines.append(
            json.dumps(
                {
                    "src": pair.src,
                    "tgt": pair.tgt,
                    "author": pair.author,
                    "from": pair.style_from,
                    "to": pair.style_to,
                },
                ensure_ascii=False,
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_jsonl(path):
    """Inverse of export_jsonl; returns a list of PairRecord."""
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        records.append(
            PairRecord(
                src=row["src"],
                tgt=row["tgt"],
                author=row["author"],
                style_from=row["from"],
                style_to=row["to"],
            )
        )
    return records
