"""Text encodings for trees and operations.

Trees encode as ``{"v": <value>, "c": [<child>, ...]}`` with ``"c"``
always present. Plain scalar node values pass through as JSON scalars;
document node markers use a ``{"t": ...}`` object. Operations encode as
``{"kind": "insert_t" | "delete_t" | "no_op", ...}``.

Decoding is strict: non-finite numbers are refused (Python's JSON parser
accepts ``NaN``, but a NaN anywhere in a document would break the
structural equality that replica convergence is checked with).
"""

from __future__ import annotations

import math
from typing import Any

from . import jsondoc
from .ops import NO_OP, NoOp, TreeDelete, TreeInsert, TreeOp
from .tree import Tree


class CodecError(ValueError):
    """Input does not follow the text encoding."""


def value_to_obj(value: Any) -> Any:
    if isinstance(value, jsondoc.Root):
        return {"t": "root"}
    if isinstance(value, jsondoc.Scalar):
        return {"t": "scalar", "v": value.value}
    if isinstance(value, jsondoc.ArrayNode):
        return {"t": "array"}
    if isinstance(value, jsondoc.ObjectNode):
        return {"t": "object"}
    if isinstance(value, jsondoc.Key):
        return {"t": "key", "k": value.name}
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise CodecError(f"unencodable node value {value!r}")


def _check_finite(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        raise CodecError(f"non-finite number {value!r}")
    return value


def value_from_obj(obj: Any) -> Any:
    if isinstance(obj, dict):
        try:
            tag = obj["t"]
            if tag == "root":
                return jsondoc.Root()
            if tag == "scalar":
                return jsondoc.Scalar(_check_finite(obj["v"]))
            if tag == "array":
                return jsondoc.ArrayNode()
            if tag == "object":
                return jsondoc.ObjectNode()
            if tag == "key":
                return jsondoc.Key(obj["k"])
        except (KeyError, TypeError) as exc:
            raise CodecError(f"malformed node value {obj!r}") from exc
        raise CodecError(f"unknown node value tag {tag!r}")
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return _check_finite(obj)
    raise CodecError(f"undecodable node value {obj!r}")


def tree_to_obj(node: Tree) -> dict:
    return {"v": value_to_obj(node.value), "c": [tree_to_obj(child) for child in node.children]}


def tree_from_obj(obj: Any) -> Tree:
    if not isinstance(obj, dict) or "v" not in obj or "c" not in obj:
        raise CodecError(f"malformed tree {obj!r}")
    children = obj["c"]
    if not isinstance(children, list):
        raise CodecError(f"malformed child list {children!r}")
    return Tree(value_from_obj(obj["v"]), tuple(tree_from_obj(child) for child in children))


def op_to_obj(op: TreeOp) -> dict:
    if isinstance(op, NoOp):
        return {"kind": "no_op"}
    if isinstance(op, TreeInsert):
        return {"kind": "insert_t", "path": list(op.path), "tree": tree_to_obj(op.tree)}
    if isinstance(op, TreeDelete):
        return {"kind": "delete_t", "path": list(op.path)}
    raise CodecError(f"unencodable operation {op!r}")


def op_from_obj(obj: Any) -> TreeOp:
    if not isinstance(obj, dict):
        raise CodecError(f"malformed operation {obj!r}")
    kind = obj.get("kind")
    if kind == "no_op":
        return NO_OP
    try:
        if kind == "insert_t":
            return TreeInsert(tree_from_obj(obj["tree"]), _path(obj["path"]))
        if kind == "delete_t":
            return TreeDelete(_path(obj["path"]))
    except (KeyError, TypeError) as exc:
        raise CodecError(f"malformed operation {obj!r}") from exc
    raise CodecError(f"unknown operation kind {kind!r}")


def _path(raw: Any) -> tuple[int, ...]:
    if not isinstance(raw, list) or not all(
        isinstance(step, int) and not isinstance(step, bool) and step >= 0 for step in raw
    ):
        raise CodecError(f"malformed path {raw!r}")
    return tuple(raw)
