import random
import string

import pytest

from treeot import jsondoc, tree_transform as tt
from treeot.jsondoc import (
    ArrayInsert,
    ArrayNode,
    ArrayRemove,
    EditError,
    Key,
    MalformedTreeError,
    ObjectNode,
    RemoveKey,
    Root,
    Scalar,
    SetKey,
)
from treeot.tree import Tree

from conftest import t


def test_object_members_sorted_and_wrapped():
    got = jsondoc.json_to_tree({"b": [True], "a": 1})
    want = t(
        Root(),
        t(
            ObjectNode(),
            t(Key("a"), t(Scalar(1))),
            t(Key("b"), t(ArrayNode(), t(Scalar(True)))),
        ),
    )
    assert got == want


def test_empty_array_and_null():
    assert jsondoc.json_to_tree([]) == t(Root(), t(ArrayNode()))
    assert jsondoc.json_to_tree(None) == t(Root(), t(Scalar(None)))


def test_non_finite_numbers_rejected():
    with pytest.raises(ValueError):
        jsondoc.json_to_tree({"x": float("inf")})


def _random_json(rng, depth):
    kinds = ["null", "bool", "int", "float", "str"]
    if depth < 6:
        kinds += ["array", "object"] * 3
    kind = rng.choice(kinds)
    if kind == "null":
        return None
    if kind == "bool":
        return rng.random() < 0.5
    if kind == "int":
        return rng.randint(-1000, 1000)
    if kind == "float":
        return round(rng.uniform(-10, 10), 3)
    if kind == "str":
        return "".join(rng.choice(string.ascii_letters + "äöü∆ ") for _ in range(rng.randint(0, 8)))
    if kind == "array":
        return [_random_json(rng, depth + 1) for _ in range(rng.randint(0, 4))]
    keys = {rng.choice(["a", "b", "key", "zz", "", "nested", "x1"]) for _ in range(rng.randint(0, 4))}
    return {k: _random_json(rng, depth + 1) for k in keys}


def test_round_trip_corpus():
    rng = random.Random(2024)
    corpus = [
        {},
        [],
        None,
        True,
        0,
        -1.5,
        "",
        {"a": {"b": {"c": {"d": {"e": {"f": 1}}}}}},
        {"unicode": "ÄÖÜ߀", "list": [1, [2, [3, [4]]]], "t": True, "n": None},
        [[], {}, [[]], [{}], {"": []}],
    ]
    corpus += [_random_json(rng, 0) for _ in range(50)]
    assert len(corpus) >= 50
    for doc in corpus:
        assert jsondoc.tree_to_json(jsondoc.json_to_tree(doc)) == doc


def _assert_canonical(node, at_root=True):
    marker = node.value
    if isinstance(marker, Root):
        assert at_root and len(node.children) == 1
        _assert_canonical(node.children[0], at_root=False)
    elif isinstance(marker, Scalar):
        assert node.children == ()
    elif isinstance(marker, ObjectNode):
        names = []
        for child in node.children:
            assert isinstance(child.value, Key) and len(child.children) == 1
            names.append(child.value.name)
            _assert_canonical(child.children[0], at_root=False)
        assert names == sorted(names) and len(set(names)) == len(names)
    elif isinstance(marker, ArrayNode):
        for child in node.children:
            _assert_canonical(child, at_root=False)
    else:
        raise AssertionError(f"unexpected node {marker!r}")


def test_generated_trees_are_canonical():
    rng = random.Random(11)
    for _ in range(25):
        _assert_canonical(jsondoc.json_to_tree(_random_json(rng, 0)))


def test_duplicate_keys_first_wins():
    merged = t(
        Root(),
        t(ObjectNode(), t(Key("a"), t(Scalar(1))), t(Key("a"), t(Scalar(2)))),
    )
    assert jsondoc.tree_to_json(merged) == {"a": 1}


def test_malformed_trees_rejected():
    with pytest.raises(MalformedTreeError):
        jsondoc.tree_to_json(t(Root(), t(Scalar(1)), t(Scalar(2))))
    with pytest.raises(MalformedTreeError):
        jsondoc.tree_to_json(t(Root(), t(ObjectNode(), t(Scalar(1)))))
    with pytest.raises(MalformedTreeError):
        jsondoc.tree_to_json(t(Root(), t(ObjectNode(), t(Key("a")))))
    with pytest.raises(MalformedTreeError):
        jsondoc.tree_to_json(t(Root(), t(Scalar(1), t(Scalar(2)))))
    with pytest.raises(MalformedTreeError):
        jsondoc.tree_to_json(t(Scalar(1)))


def apply_all(doc, ops):
    for op in ops:
        doc = tt.apply_op(doc, op)
    return doc


def test_set_new_key_lands_at_sorted_slot():
    doc = jsondoc.json_to_tree({"a": 1, "b": 2})
    (op,) = jsondoc.edit_to_ops(doc, SetKey((), "c", 3))
    assert op.path == (0, 2)
    assert jsondoc.tree_to_json(apply_all(doc, [op])) == {"a": 1, "b": 2, "c": 3}
    (op,) = jsondoc.edit_to_ops(doc, SetKey((), "aa", 9))
    assert op.path == (0, 1)


def test_set_existing_key_is_delete_then_insert():
    doc = jsondoc.json_to_tree({"a": 1, "b": 2})
    ops = jsondoc.edit_to_ops(doc, SetKey((), "a", {"deep": True}))
    assert len(ops) == 2
    assert jsondoc.tree_to_json(apply_all(doc, ops)) == {"a": {"deep": True}, "b": 2}


def test_array_edits():
    doc = jsondoc.json_to_tree({"items": ["X", "Y"]})
    (op,) = jsondoc.edit_to_ops(doc, ArrayInsert(("items",), 0, "A"))
    assert op.path == (0, 0, 0, 0)
    assert jsondoc.tree_to_json(apply_all(doc, [op])) == {"items": ["A", "X", "Y"]}
    (op,) = jsondoc.edit_to_ops(doc, ArrayRemove(("items",), 1))
    assert jsondoc.tree_to_json(apply_all(doc, [op])) == {"items": ["X"]}


def test_edits_address_nested_containers():
    doc = jsondoc.json_to_tree({"a": [{"inner": []}]})
    (op,) = jsondoc.edit_to_ops(doc, ArrayInsert(("a", 0, "inner"), 0, 42))
    assert jsondoc.tree_to_json(apply_all(doc, [op])) == {"a": [{"inner": [42]}]}


def test_edit_errors():
    doc = jsondoc.json_to_tree({"a": 1, "items": []})
    with pytest.raises(EditError) as err:
        jsondoc.edit_to_ops(doc, RemoveKey((), "z"))
    assert err.value.code == "no-such-key"
    with pytest.raises(EditError) as err:
        jsondoc.edit_to_ops(doc, SetKey(("missing",), "k", 1))
    assert err.value.code == "no-such-container"
    with pytest.raises(EditError) as err:
        jsondoc.edit_to_ops(doc, ArrayInsert(("items",), 5, 1))
    assert err.value.code == "index-out-of-range"
    with pytest.raises(EditError) as err:
        jsondoc.edit_to_ops(doc, ArrayRemove(("a",), 0))
    assert err.value.code == "no-such-container"


def test_edit_ops_are_valid_on_source_doc():
    from treeot import tree as tree_mod

    doc = jsondoc.json_to_tree({"a": [1, 2], "b": {"c": "x"}})
    intents = [
        SetKey((), "new", [None]),
        SetKey(("b",), "c", "y"),
        RemoveKey((), "a"),
        ArrayInsert(("a",), 2, {"k": 1}),
        ArrayRemove(("a",), 0),
    ]
    for intent in intents:
        for op in jsondoc.edit_to_ops(doc, intent):
            assert tree_mod.is_valid(doc, op), intent


def test_intent_wire_round_trip():
    intents = [
        SetKey(("a", 0), "k", {"v": [1]}),
        RemoveKey((), "k"),
        ArrayInsert(("x",), 3, None),
        ArrayRemove(("x",), 0),
    ]
    for intent in intents:
        assert jsondoc.intent_from_obj(jsondoc.intent_to_obj(intent)) == intent
    with pytest.raises(EditError):
        jsondoc.intent_from_obj({"kind": "warp"})
