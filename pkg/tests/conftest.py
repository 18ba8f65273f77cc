import pathlib

import pytest

from bisimgame.csvio import load
from bisimgame.refine import refine

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lts9():
    return load(FIXTURES / "lts9.csv")


@pytest.fixture(scope="session")
def pts5():
    return load(FIXTURES / "pts5.csv")


@pytest.fixture(scope="session")
def lts_conj():
    return load(FIXTURES / "lts_conj.csv")


@pytest.fixture(scope="session")
def lts9_analysis(lts9):
    return (lts9, *refine(lts9))


@pytest.fixture(scope="session")
def pts5_analysis(pts5):
    return (pts5, *refine(pts5))


@pytest.fixture(scope="session")
def lts_conj_analysis(lts_conj):
    return (lts_conj, *refine(lts_conj))
