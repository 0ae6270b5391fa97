"""Bidirectional mapping between JSON documents and ordered trees.

A JSON value becomes a tree whose node values are small markers:

* ``Root`` — the document root, exactly one child;
* ``Scalar`` — null/bool/number/string payload, always a leaf;
* ``ArrayNode`` — children are the elements in order;
* ``ObjectNode`` — children are ``Key`` nodes;
* ``Key`` — one member name, exactly one child (the member value).

Canonical generation sorts object members byte-wise by key, but trees
produced by merging concurrent edits may be unsorted and may even hold
duplicate keys; readers take members in sequence order and the first
occurrence of a key wins. Convergence is unaffected either way because
all replicas hold identical trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence, Union

from .ops import Path, TreeDelete, TreeInsert, TreeOp
from .tree import Tree


class MalformedTreeError(ValueError):
    """The tree does not encode a JSON document."""


class EditError(ValueError):
    """An edit intent does not apply to the current document."""

    def __init__(self, code: str, msg: str) -> None:
        super().__init__(msg)
        self.code = code


@dataclass(frozen=True, slots=True)
class Root:
    pass


@dataclass(frozen=True, slots=True)
class Scalar:
    value: Any


@dataclass(frozen=True, slots=True)
class ArrayNode:
    pass


@dataclass(frozen=True, slots=True)
class ObjectNode:
    pass


@dataclass(frozen=True, slots=True)
class Key:
    name: str


def json_to_tree(doc: Any) -> Tree:
    """Encode a JSON value as a canonical document tree."""
    return Tree(Root(), (_node(doc),))


def _node(value: Any) -> Tree:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return Tree(Scalar(value))
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"non-finite number {value!r} cannot be encoded")
        return Tree(Scalar(value))
    if isinstance(value, (list, tuple)):
        return Tree(ArrayNode(), tuple(_node(element) for element in value))
    if isinstance(value, dict):
        children = tuple(Tree(Key(k), (_node(value[k]),)) for k in sorted(value))
        return Tree(ObjectNode(), children)
    raise TypeError(f"not a JSON value: {value!r}")


def tree_to_json(doc: Tree) -> Any:
    """Decode a document tree back into a JSON value."""
    if not isinstance(doc.value, Root):
        raise MalformedTreeError("document root must be a Root node")
    if len(doc.children) != 1:
        raise MalformedTreeError(f"root must have exactly one child, got {len(doc.children)}")
    return _value(doc.children[0])


def _value(node: Tree) -> Any:
    marker = node.value
    if isinstance(marker, Scalar):
        if node.children:
            raise MalformedTreeError("scalar nodes must be leaves")
        return marker.value
    if isinstance(marker, ArrayNode):
        return [_value(child) for child in node.children]
    if isinstance(marker, ObjectNode):
        result: dict[str, Any] = {}
        for child in node.children:
            if not isinstance(child.value, Key):
                raise MalformedTreeError("object children must be key nodes")
            if len(child.children) != 1:
                raise MalformedTreeError(
                    f"key {child.value.name!r} must have exactly one child"
                )
            if child.value.name not in result:
                result[child.value.name] = _value(child.children[0])
        return result
    raise MalformedTreeError(f"unexpected node marker {marker!r}")


@dataclass(frozen=True, slots=True)
class SetKey:
    path: tuple
    key: str
    value: Any

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


@dataclass(frozen=True, slots=True)
class RemoveKey:
    path: tuple
    key: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


@dataclass(frozen=True, slots=True)
class ArrayInsert:
    path: tuple
    index: int
    value: Any

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


@dataclass(frozen=True, slots=True)
class ArrayRemove:
    path: tuple
    index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


EditIntent = Union[SetKey, RemoveKey, ArrayInsert, ArrayRemove]


def _resolve(doc: Tree, steps: Sequence[Any]) -> tuple[Tree, Path]:
    """Walk a document path of member keys and array indices.

    Returns the addressed container node and its tree access path.
    """
    if not isinstance(doc.value, Root) or len(doc.children) != 1:
        raise MalformedTreeError("not a document tree")
    node, path = doc.children[0], (0,)
    for step in steps:
        if isinstance(step, str):
            if not isinstance(node.value, ObjectNode):
                raise EditError("no-such-container", f"no object at {steps!r}")
            for i, child in enumerate(node.children):
                if isinstance(child.value, Key) and child.value.name == step:
                    node, path = child.children[0], path + (i, 0)
                    break
            else:
                raise EditError("no-such-container", f"no member {step!r} at {steps!r}")
        elif isinstance(step, int) and not isinstance(step, bool):
            if not isinstance(node.value, ArrayNode):
                raise EditError("no-such-container", f"no array at {steps!r}")
            if not 0 <= step < len(node.children):
                raise EditError("no-such-container", f"no element {step} at {steps!r}")
            node, path = node.children[step], path + (step,)
        else:
            raise EditError("no-such-container", f"bad path step {step!r}")
    return node, path


def edit_to_ops(doc: Tree, intent: EditIntent) -> tuple[TreeOp, ...]:
    """Translate an edit intent into one or two tree operations.

    Replacing an existing member yields a delete followed by an insert
    at the same slot; everything else is a single operation.
    """
    if isinstance(intent, (SetKey, RemoveKey)):
        node, path = _resolve(doc, intent.path)
        if not isinstance(node.value, ObjectNode):
            raise EditError("no-such-container", f"no object at {intent.path!r}")
        slot = None
        for i, child in enumerate(node.children):
            if isinstance(child.value, Key) and child.value.name == intent.key:
                slot = i
                break
        if isinstance(intent, RemoveKey):
            if slot is None:
                raise EditError("no-such-key", f"no member {intent.key!r}")
            return (TreeDelete(path + (slot,)),)
        member = Tree(Key(intent.key), (_node(intent.value),))
        if slot is not None:
            return (TreeDelete(path + (slot,)), TreeInsert(member, path + (slot,)))
        slot = len(node.children)
        for i, child in enumerate(node.children):
            if isinstance(child.value, Key) and child.value.name > intent.key:
                slot = i
                break
        return (TreeInsert(member, path + (slot,)),)

    if isinstance(intent, (ArrayInsert, ArrayRemove)):
        node, path = _resolve(doc, intent.path)
        if not isinstance(node.value, ArrayNode):
            raise EditError("no-such-container", f"no array at {intent.path!r}")
        if isinstance(intent, ArrayInsert):
            if not 0 <= intent.index <= len(node.children):
                raise EditError("index-out-of-range", f"insert index {intent.index}")
            return (TreeInsert(_node(intent.value), path + (intent.index,)),)
        if not 0 <= intent.index < len(node.children):
            raise EditError("index-out-of-range", f"remove index {intent.index}")
        return (TreeDelete(path + (intent.index,)),)

    raise TypeError(f"not an edit intent: {intent!r}")


def intent_to_obj(intent: EditIntent) -> dict:
    """Wire encoding of an edit intent."""
    if isinstance(intent, SetKey):
        return {"kind": "set_key", "path": list(intent.path), "key": intent.key, "value": intent.value}
    if isinstance(intent, RemoveKey):
        return {"kind": "remove_key", "path": list(intent.path), "key": intent.key}
    if isinstance(intent, ArrayInsert):
        return {
            "kind": "array_insert",
            "path": list(intent.path),
            "index": intent.index,
            "value": intent.value,
        }
    if isinstance(intent, ArrayRemove):
        return {"kind": "array_remove", "path": list(intent.path), "index": intent.index}
    raise TypeError(f"not an edit intent: {intent!r}")


def intent_from_obj(obj: Any) -> EditIntent:
    """Decode the wire encoding of an edit intent."""
    try:
        kind = obj["kind"]
        if kind == "set_key":
            return SetKey(tuple(obj["path"]), obj["key"], obj["value"])
        if kind == "remove_key":
            return RemoveKey(tuple(obj["path"]), obj["key"])
        if kind == "array_insert":
            return ArrayInsert(tuple(obj["path"]), obj["index"], obj["value"])
        if kind == "array_remove":
            return ArrayRemove(tuple(obj["path"]), obj["index"])
    except (TypeError, KeyError) as exc:
        raise EditError("bad-intent", f"malformed intent: {exc}") from exc
    raise EditError("bad-intent", f"unknown intent kind {kind!r}")
