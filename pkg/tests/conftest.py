"""Shared fixtures: src/ on sys.path, common groups and the two designs of Figure 1"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / 'src'))
sys.path.insert(0, str(ROOT))

from groups import make_group  # noqa: E402

# Fixed seed for every sampled property test
SEED = 20190101

ROMAN_SQUARE = [
    [0, 5, 1, 4, 2, 3],
    [1, 0, 2, 5, 3, 4],
    [2, 1, 3, 0, 4, 5],
    [3, 2, 4, 1, 5, 0],
    [4, 3, 5, 2, 0, 1],
    [5, 4, 0, 3, 1, 2],
]

VATICAN_PAIR_DESIGN = [
    [0, 1, 3, 4, 2],
    [1, 2, 4, 0, 3],
    [2, 3, 0, 1, 4],
    [3, 4, 1, 2, 0],
    [4, 0, 2, 3, 1],
    [0, 4, 2, 1, 3],
    [1, 0, 3, 2, 4],
    [2, 1, 4, 3, 0],
    [3, 2, 0, 4, 1],
    [4, 3, 1, 0, 2],
]


def as_csv(rows):
    return "".join(",".join(str(v) for v in row) + "\n" for row in rows)


@pytest.fixture
def z5():
    return make_group('Z5')


@pytest.fixture
def z6():
    return make_group('Z6')


@pytest.fixture
def z7():
    return make_group('Z7')


@pytest.fixture
def roman_square_csv(tmp_path):
    path = tmp_path / 'roman6.csv'
    path.write_text(as_csv(ROMAN_SQUARE))
    return path


@pytest.fixture
def vatican_pair_csv(tmp_path):
    path = tmp_path / 'vatican5.csv'
    path.write_text(as_csv(VATICAN_PAIR_DESIGN))
    return path
