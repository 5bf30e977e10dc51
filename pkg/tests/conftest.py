import pytest

from bookqa.backends import LexicalMockBackend
from bookqa.corpus import ingest_plaintext
from bookqa.index import build_index
from bookqa.keywords import RakeConfig, RakeExtractor

# Filler paragraphs built entirely from stopwords: they yield no keyphrases,
# so the crafted pages below control the index contents exactly.
FILLERS = [
    "And so it was.",
    "It is what it is.",
    "After all this while.",
    "Then and there.",
    "Now and then.",
    "Here and there.",
    "Again and again.",
    "Be that as it may.",
    "Over and above all.",
    "Once more unto them.",
    "Neither here nor there.",
]

# 15 pages; page 10 paragraphs 1 and 4 both yield "losing weight",
# page 12 paragraph 1 "strength conditioning", page 15 paragraph 2
# "hormone interact".
FITNESS_PAGES = [
    [FILLERS[0]],                                          # page 1
    [FILLERS[1]],                                          # page 2
    [FILLERS[2]],                                          # page 3
    [FILLERS[3]],                                          # page 4
    [FILLERS[4]],                                          # page 5
    [FILLERS[5]],                                          # page 6
    [FILLERS[6]],                                          # page 7
    [FILLERS[7]],                                          # page 8
    [FILLERS[8]],                                          # page 9
    ["Losing weight.", FILLERS[9], FILLERS[10], "Losing weight."],  # page 10
    [FILLERS[0]],                                          # page 11
    ["Strength conditioning."],                            # page 12
    [FILLERS[1]],                                          # page 13
    [FILLERS[2]],                                          # page 14
    [FILLERS[3], "Hormone interact."],                     # page 15
]


def fitness_plaintext() -> bytes:
    pages = ["\n\n".join(paras) for paras in FITNESS_PAGES]
    return "".join(pages).encode("utf-8")


@pytest.fixture(scope="session")
def fitness_book():
    return ingest_plaintext(fitness_plaintext(), "Fitness Mindset")


@pytest.fixture(scope="session")
def fitness_index(fitness_book):
    return build_index(fitness_book, RakeExtractor(RakeConfig(top_k=2)))


@pytest.fixture()
def mock_backend():
    return LexicalMockBackend()
