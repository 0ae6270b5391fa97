import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeot import lists

items_st = st.lists(st.sampled_from("ab"), max_size=6).map(tuple)


def test_insert_at_front():
    assert lists.insert(("X", "Y", "Z"), 0, "A") == ("A", "X", "Y", "Z")


def test_insert_append_at_end():
    assert lists.insert(("a",), 1, "b") == ("a", "b")


def test_insert_past_end_rejected():
    with pytest.raises(lists.PositionError):
        lists.insert((), 2, "a")


def test_insert_negative_rejected():
    with pytest.raises(lists.PositionError):
        lists.insert(("a",), -1, "b")


def test_delete_middle():
    assert lists.delete(("X", "Y", "Z"), 1) == ("X", "Z")


def test_delete_to_empty():
    assert lists.delete(("a",), 0) == ()


def test_delete_out_of_range_rejected():
    with pytest.raises(lists.PositionError):
        lists.delete(("a", "b"), 3)


def test_interval_inclusive():
    assert lists.interval(("a", "b", "c"), 0, 1) == ("a", "b")


def test_interval_empty_when_start_after_end():
    assert lists.interval(("a", "b", "c"), 2, 0) == ()


def test_interval_clamped_at_end():
    assert lists.interval(("a", "b", "c"), 1, 9) == ("b", "c")


def test_interval_empty_when_start_past_end():
    assert lists.interval(("a", "b"), 5, 9) == ()


def test_is_prefix():
    assert lists.is_prefix((1, 2), (1, 2, 3))
    assert not lists.is_prefix((1, 3), (1, 2, 3))
    assert lists.is_prefix((), ("a",))


@given(items_st, st.integers(0, 6), st.sampled_from("ab"))
def test_delete_undoes_insert(items, pos, item):
    if pos <= len(items):
        grown = lists.insert(items, pos, item)
        assert grown[pos] == item
        assert len(grown) == len(items) + 1
        assert lists.delete(grown, pos) == items


@given(items_st)
def test_interval_of_whole_list_is_identity(items):
    assert lists.interval(items, 0, len(items) - 1) == items


@given(items_st, st.integers(0, 6), st.integers(0, 6))
def test_interval_concatenation(items, x, y):
    if x <= y:
        joined = lists.interval(items, x, y) + lists.interval(items, y + 1, len(items) - 1)
        assert joined == lists.interval(items, x, len(items) - 1)


@given(items_st, items_st)
def test_prefix_antisymmetry(a, b):
    assert lists.is_prefix(a, a)
    if lists.is_prefix(a, b) and lists.is_prefix(b, a):
        assert a == b
