import pytest

from lexix import build_index, load_sample_corpus

# The documented demo query over the bundled sample corpus and the twelve
# rows it is pinned to return.
REFERENCE_DSL = ('[lemma="avoir"] '
                 '![pos="verbe" & trait="participe passé" & error="yes"]')
REFERENCE_KEYWORDS = ["connais", "reçu", "traduis", "choisi", "choisi",
                      "reussi", "effectué", "interviewé", "realisé", "redigé",
                      "été", "tres"]
REFERENCE_TEXT_IDS = ["2180", "2212", "2216", "2229", "2230", "2230", "2234",
                      "2234", "2239", "2245", "2252", "2266"]


@pytest.fixture(scope="session")
def sample_corpus():
    return load_sample_corpus()


@pytest.fixture(scope="session")
def sample_index(sample_corpus):
    return build_index(sample_corpus)
