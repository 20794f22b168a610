import pytest

from stylomorph.attrib import train_attribution
from stylomorph.corpus import TestCase, split_dataset
from stylomorph.synth import generate_corpus

# keep pytest from collecting the library's TestCase dataclass
TestCase.__test__ = False


@pytest.fixture(scope="session")
def synth_corpus():
    """Full acceptance corpus: 20 authors x 8 challenges."""
    return generate_corpus(20, seed=0)


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(4, seed=0)


@pytest.fixture(scope="session")
def small_split(small_corpus):
    return split_dataset(small_corpus, seed=0, train_fraction=0.75)


@pytest.fixture(scope="session")
def small_model(small_split):
    train, _ = small_split
    return train_attribution(train)
