"""Dataset types and loading.

A corpus lives on disk as root/<author>/<challenge>.cpp with optional
test files root/<author>/tests/<challenge>.<N>.in and .out. Files that
fail UTF-8 decoding or do not parse are recorded in a rejection report
instead of being silently dropped.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .frontend import FrontendError, parse_source


@dataclass(frozen=True)
class TestCase:
    input: str
    expected_output: str
    tolerance: float | None = None


@dataclass(frozen=True)
class SourceUnit:
    author: str
    challenge: str
    code: str
    tests: tuple[TestCase, ...] = ()

    @property
    def key(self) -> str:
        return f"{self.author}/{self.challenge}"


@dataclass(frozen=True)
class Rejection:
    path: str
    reason: str


@dataclass
class Corpus:
    units: list[SourceUnit]
    authors: list[str]
    rejections: list[Rejection] = field(default_factory=list)

    def by_author(self) -> dict[str, list[SourceUnit]]:
        grouped: dict[str, list[SourceUnit]] = {a: [] for a in self.authors}
        for unit in self.units:
            grouped[unit.author].append(unit)
        return grouped


class MissingRoot(Exception):
    pass


class EmptyCorpus(Exception):
    pass


class AuthorTooSmall(Exception):
    def __init__(self, author: str):
        super().__init__(f"author {author} has fewer than 2 units")
        self.author = author


def _load_tests(tests_dir: Path, stem: str) -> tuple[TestCase, ...]:
    if not tests_dir.is_dir():
        return ()
    cases = []
    for in_path in tests_dir.glob(f"{stem}.*.in"):
        index = in_path.name[len(stem) + 1:-3]
        if not index.isdigit():
            continue
        out_path = tests_dir / f"{stem}.{index}.out"
        if not out_path.is_file():
            continue
        cases.append((int(index),
                      in_path.read_text(encoding="utf-8"),
                      out_path.read_text(encoding="utf-8")))
    cases.sort(key=lambda c: c[0])
    return tuple(TestCase(input=i, expected_output=o) for _, i, o in cases)


def ingest_corpus(root: str | Path) -> Corpus:
    """Walks the on-disk layout into a Corpus. Deterministic regardless
    of directory enumeration order."""
    root = Path(root)
    if not root.is_dir():
        raise MissingRoot(str(root))
    units: list[SourceUnit] = []
    rejections: list[Rejection] = []
    for author_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        author = author_dir.name
        for cpp in sorted(author_dir.glob("*.cpp")):
            try:
                code = cpp.read_bytes().decode("utf-8")
            except UnicodeDecodeError as exc:
                rejections.append(Rejection(str(cpp), f"not UTF-8: {exc}"))
                continue
            try:
                parse_source(code)
            except FrontendError as exc:
                rejections.append(Rejection(str(cpp),
                                            f"does not parse: {exc}"))
                continue
            tests = _load_tests(author_dir / "tests", cpp.stem)
            units.append(SourceUnit(author=author, challenge=cpp.stem,
                                    code=code, tests=tests))
    if not units:
        raise EmptyCorpus(str(root))
    authors = sorted({u.author for u in units})
    units.sort(key=lambda u: (u.author, u.challenge))
    return Corpus(units=units, authors=authors, rejections=rejections)


def split_dataset(corpus: Corpus, seed: int,
                  train_fraction: float) -> tuple[Corpus, Corpus]:
    """Per-author stratified split. The train share is round-half-up of
    fraction x count, clamped so both sides stay non-empty."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0, 1)")
    train: list[SourceUnit] = []
    test: list[SourceUnit] = []
    for author, units in sorted(corpus.by_author().items()):
        if len(units) < 2:
            raise AuthorTooSmall(author)
        n_train = int(train_fraction * len(units) + 0.5)
        n_train = max(1, min(n_train, len(units) - 1))
        order = list(range(len(units)))
        random.Random(f"{seed}:{author}").shuffle(order)
        chosen = sorted(order[:n_train])
        chosen_set = set(chosen)
        for idx, unit in enumerate(units):
            (train if idx in chosen_set else test).append(unit)
    train.sort(key=lambda u: (u.author, u.challenge))
    test.sort(key=lambda u: (u.author, u.challenge))
    return (Corpus(units=train, authors=sorted({u.author for u in train})),
            Corpus(units=test, authors=sorted({u.author for u in test})))


# --- artifact serialization ----------------------------------------------

def unit_to_dict(unit: SourceUnit) -> dict:
    return {"author": unit.author, "challenge": unit.challenge,
            "code": unit.code,
            "tests": [{"input": t.input,
                       "expected_output": t.expected_output,
                       **({"tolerance": t.tolerance}
                          if t.tolerance is not None else {})}
                      for t in unit.tests]}


def unit_from_dict(data: dict) -> SourceUnit:
    tests = tuple(TestCase(input=t["input"],
                           expected_output=t["expected_output"],
                           tolerance=t.get("tolerance"))
                  for t in data.get("tests", []))
    return SourceUnit(author=data["author"], challenge=data["challenge"],
                      code=data["code"], tests=tests)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    payload = {"format": "corpus-v1",
               "authors": corpus.authors,
               "units": [unit_to_dict(u) for u in corpus.units]}
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_corpus(path: str | Path) -> Corpus:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != "corpus-v1":
        raise ValueError(f"unrecognized corpus file {path}")
    return Corpus(units=[unit_from_dict(d) for d in payload["units"]],
                  authors=list(payload["authors"]))


def write_rejections(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rej in corpus.rejections:
            fh.write(json.dumps({"path": rej.path, "reason": rej.reason}))
            fh.write("\n")
