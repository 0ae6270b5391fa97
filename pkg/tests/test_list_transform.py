import itertools

import pytest

from treeot import list_transform, verify
from treeot.ops import NO_OP, ListDelete, ListInsert


def both_orders(items, op1, s1, op2, s2):
    """Replay oracle: the two composition orders of a transformed pair."""
    t1, t2 = list_transform.transform(op1, s1, op2, s2)
    left = list_transform.apply_op(list_transform.apply_op(items, op1), t2)
    right = list_transform.apply_op(list_transform.apply_op(items, op2), t1)
    return left, right


def test_apply_insert():
    assert list_transform.apply_op(("X", "Y", "Z"), ListInsert("A", 0)) == ("A", "X", "Y", "Z")


def test_apply_noop_is_identity():
    assert list_transform.apply_op(("a", "b"), NO_OP) == ("a", "b")


def test_apply_delete_out_of_range():
    with pytest.raises(IndexError):
        list_transform.apply_op(("a",), ListDelete(5))


def test_insert_before_delete_shifts_delete():
    got = list_transform.transform(ListInsert("A", 0), 1, ListDelete(1), 2)
    assert got == (ListInsert("A", 0), ListDelete(2))


def test_equal_deletes_cancel():
    assert list_transform.transform(ListDelete(2), 1, ListDelete(2), 2) == (NO_OP, NO_OP)


def test_equal_inserts_lower_site_keeps_position():
    got = list_transform.transform(ListInsert("a", 1), 1, ListInsert("b", 1), 2)
    assert got == (ListInsert("a", 1), ListInsert("b", 2))
    # replay oracle on a 2-item list: both orders agree
    left, right = both_orders(("x", "y"), ListInsert("a", 1), 1, ListInsert("b", 1), 2)
    assert left == right == ("x", "a", "b", "y")


def test_equal_inserts_same_site_rejected():
    with pytest.raises(ValueError):
        list_transform.transform(ListInsert("a", 1), 7, ListInsert("b", 1), 7)


def test_noop_passthrough():
    got = list_transform.transform(NO_OP, 1, ListDelete(0), 2)
    assert got == (NO_OP, ListDelete(0))


def all_ops(items, alphabet="ab"):
    ops = [ListInsert(item, pos) for item in alphabet for pos in range(len(items) + 1)]
    ops += [ListDelete(pos) for pos in range(len(items))]
    return ops


def all_lists(max_len=3, alphabet="ab"):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def test_convergence_exhaustive_short_lists():
    report = verify.exhaustive_list_tp1(max_len=4, alphabet=("a", "b"))
    assert report.cases_total > 0
    assert report.violations == []


def test_mirrored_arguments_give_mirrored_results():
    for items in all_lists():
        for op1 in all_ops(items):
            for op2 in all_ops(items):
                a, b = list_transform.transform(op1, 1, op2, 2)
                b2, a2 = list_transform.transform(op2, 2, op1, 1)
                assert (a, b) == (a2, b2)


def test_transformed_ops_stay_valid():
    for items in all_lists():
        for op1 in all_ops(items):
            for op2 in all_ops(items):
                t1, t2 = list_transform.transform(op1, 1, op2, 2)
                # each transformed op must apply on the other side's output
                list_transform.apply_op(list_transform.apply_op(items, op1), t2)
                list_transform.apply_op(list_transform.apply_op(items, op2), t1)
