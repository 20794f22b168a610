"""End-to-end attribution: training, prediction, persistence."""

import pytest

from stylomorph.attrib import (AttributionModel, KIND_AST, KIND_TFIDF,
                               evaluate_accuracy, train_attribution)
from stylomorph.corpus import Corpus, SourceUnit


def two_author_corpus():
    # author a: camelCase + endl; author b: snake_case + "\n"
    a_units = [
        SourceUnit("a", f"p{i}", f"""int main() {{
    int itemCount = {i};
    int runningTotal = 0;
    for (int i = 0; i < itemCount; i++) {{
        runningTotal += i;
    }}
    cout << runningTotal << endl;
    return 0;
}}
""") for i in range(2, 6)
    ]
    b_units = [
        SourceUnit("b", f"p{i}", f"""int main() {{
    int item_count = {i};
    int running_total = 0;
    int i = 0;
    while (i < item_count) {{
        running_total += i;
        i++;
    }}
    cout << running_total << "\\n";
    return 0;
}}
""") for i in range(2, 6)
    ]
    units = a_units + b_units
    return Corpus(units=units, authors=["a", "b"])


def test_train_predict_recall():
    corpus = two_author_corpus()
    model = train_attribution(corpus)
    for unit in corpus.units:
        predicted, dist = model.predict_source(unit.code)
        assert predicted == unit.author
        assert abs(sum(dist.values()) - 1.0) <= 1e-9
    assert evaluate_accuracy(model, corpus) == 1.0


def test_generalizes_to_unseen_same_style():
    corpus = two_author_corpus()
    model = train_attribution(corpus)
    unseen = """int main() {
    int boxCount = 9;
    int grandTotal = 0;
    for (int i = 0; i < boxCount; i++) {
        grandTotal += i * 2;
    }
    cout << grandTotal << endl;
    return 0;
}
"""
    predicted, _ = model.predict_source(unseen)
    assert predicted == "a"


def test_ast_kind_trains(small_corpus):
    model = train_attribution(small_corpus, kind=KIND_AST)
    assert model.kind == KIND_AST
    predicted, dist = model.predict_source(small_corpus.units[0].code)
    assert predicted in small_corpus.authors
    assert abs(sum(dist.values()) - 1.0) <= 1e-9


def test_save_load_round_trip(tmp_path):
    corpus = two_author_corpus()
    model = train_attribution(corpus)
    path = tmp_path / "model.json"
    model.save(path)
    loaded = AttributionModel.load(path)
    assert loaded.kind == KIND_TFIDF
    assert loaded.labels == model.labels
    for unit in corpus.units:
        assert loaded.predict_source(unit.code) == \
            model.predict_source(unit.code)


def test_load_rejects_mismatched_container(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": "something-else", "kind": "tfidf-rf"}',
                    encoding="utf-8")
    with pytest.raises(Exception):
        AttributionModel.load(path)
