import itertools
from math import prod

import pytest

from bailey_lab.errors import RankMismatch
from bailey_lab.lattice import Box, MultiIndex, box_enumerate, interval, leq_componentwise


@pytest.mark.parametrize("upper, expected", [
    ((1, 1), [(0, 0), (0, 1), (1, 0), (1, 1)]),
    ((0, 0, 0), [(0, 0, 0)]),
    ((2,), [(0,), (1,), (2,)]),
])
def test_box_enumerate_examples(upper, expected):
    assert [tuple(y) for y in box_enumerate(upper)] == expected


@pytest.mark.parametrize("i, j, expected", [
    ((0, 2), (1, 2), True), ((1, 0), (0, 3), False), ((2, 2), (2, 2), True),
])
def test_leq_examples(i, j, expected):
    assert leq_componentwise(i, j) is expected


def test_leq_rank_mismatch():
    with pytest.raises(RankMismatch):
        leq_componentwise((1, 2), (1,))


@pytest.mark.parametrize("upper", [(3,), (2, 3), (3, 3, 3), (0, 4), (1, 0, 2)])
def test_enumeration_count_and_order(upper):
    ys = list(box_enumerate(upper))
    assert len(ys) == prod(n + 1 for n in upper) == len(Box(upper))
    assert len(set(ys)) == len(ys)
    assert all(a < b for a, b in zip(ys, ys[1:]))
    assert all(y in Box(upper) for y in ys)
    assert [Box(upper).position(y) for y in ys] == list(range(len(ys)))


def test_lex_is_linear_extension():
    ys = list(box_enumerate((3, 3, 3)))
    for i, j in itertools.product(ys, ys):
        if i != j and leq_componentwise(i, j):
            assert i < j


def test_multiindex_validation_and_io():
    m = MultiIndex.parse("2,0,1")
    assert m.weight == 3 and m.rank == 3 and str(m) == "2,0,1"
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    with pytest.raises(ValueError):
        MultiIndex(())
    with pytest.raises(ValueError):
        MultiIndex.parse("1,x")


def test_interval():
    assert list(interval((1, 0), (2, 1))) == [(1, 0), (1, 1), (2, 0), (2, 1)]
    assert list(interval((2,), (1,))) == []
    assert (3, 0) not in Box((2, 2))
    with pytest.raises(IndexError):
        Box((1,)).position((2,))
