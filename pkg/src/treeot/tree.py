"""Ordered n-ary trees addressed by child-index paths.

A tree is a value plus an ordered sequence of child trees; the smallest
tree is a single leaf. A path is a sequence of child indices; the empty
path addresses the root, and for structural edits the last path element
names a slot in the parent's child sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Sequence

from . import lists
from .ops import NoOp, Path, TreeInsert, TreeOp


class PathError(ValueError):
    """An access path does not address a usable node or slot."""


@dataclass(frozen=True, slots=True)
class Tree:
    value: Any
    children: tuple["Tree", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


def subtree(doc: Tree, path: Sequence[int]) -> Tree:
    """Return the node reached by descending child indices in order."""
    node = doc
    for depth, step in enumerate(path):
        if not 0 <= step < len(node.children):
            raise PathError(f"no node at {tuple(path[: depth + 1])}")
        node = node.children[step]
    return node


def insert(doc: Tree, path: Sequence[int], sub: Tree) -> Tree:
    """Return ``doc`` with ``sub`` grafted in at ``path``.

    The leading path elements must address an existing node; the final
    element names the slot among that node's children (up to and
    including the append slot).
    """
    path = tuple(path)
    if not path:
        raise PathError("insert requires a non-empty path")
    head, rest = path[0], path[1:]
    if not rest:
        if not 0 <= head <= len(doc.children):
            raise PathError(f"no insert slot {head} in node with {len(doc.children)} children")
        return Tree(doc.value, lists.insert(doc.children, head, sub))
    if not 0 <= head < len(doc.children):
        raise PathError(f"no node at child index {head}")
    replaced = insert(doc.children[head], rest, sub)
    return Tree(doc.value, doc.children[:head] + (replaced,) + doc.children[head + 1 :])


def delete(doc: Tree, path: Sequence[int]) -> Tree:
    """Return ``doc`` without the subtree at ``path``; right siblings shift left."""
    path = tuple(path)
    if not path:
        raise PathError("delete requires a non-empty path")
    head, rest = path[0], path[1:]
    if not 0 <= head < len(doc.children):
        raise PathError(f"no node at child index {head}")
    if not rest:
        return Tree(doc.value, lists.delete(doc.children, head))
    replaced = delete(doc.children[head], rest)
    return Tree(doc.value, doc.children[:head] + (replaced,) + doc.children[head + 1 :])


def is_valid(doc: Tree, op: TreeOp) -> bool:
    """Check whether ``op`` can be applied to ``doc``."""
    if isinstance(op, NoOp):
        return True
    path = op.path
    if not path:
        return False
    node = doc
    for step in path[:-1]:
        if not 0 <= step < len(node.children):
            return False
        node = node.children[step]
    last = path[-1]
    if isinstance(op, TreeInsert):
        return 0 <= last <= len(node.children)
    return 0 <= last < len(node.children)


def decompose_insert(doc: Tree, path: Sequence[int], sub: Tree, split: int) -> Tree:
    """Insert ``sub`` in two stages split at path index ``split``.

    The subtree containing the target slot is detached, edited on its
    own, and grafted back; the result equals ``insert(doc, path, sub)``
    for every split point strictly inside the path.
    """
    path = tuple(path)
    if not 0 < split < len(path):
        raise IndexError(f"split point {split} not strictly inside path of length {len(path)}")
    prefix, suffix = path[:split], path[split:]
    carrier = insert(subtree(doc, prefix), suffix, sub)
    return insert(delete(doc, prefix), prefix, carrier)


def decompose_delete(doc: Tree, path: Sequence[int], split: int) -> Tree:
    """Two-stage counterpart of :func:`decompose_insert` for deletions."""
    path = tuple(path)
    if not 0 < split < len(path):
        raise IndexError(f"split point {split} not strictly inside path of length {len(path)}")
    prefix, suffix = path[:split], path[split:]
    carrier = delete(subtree(doc, prefix), suffix)
    return insert(delete(doc, prefix), prefix, carrier)


def size(doc: Tree) -> int:
    """Number of nodes in ``doc``."""
    return 1 + sum(size(child) for child in doc.children)


def node_paths(doc: Tree) -> Iterator[Path]:
    """Yield the path of every node in preorder, starting with the root ``()``."""
    stack: list[tuple[Path, Tree]] = [((), doc)]
    while stack:
        path, node = stack.pop()
        yield path
        stack.extend(
            (path + (i,), child) for i, child in reversed(list(enumerate(node.children)))
        )


def insert_slots(doc: Tree) -> Iterator[Path]:
    """Yield every valid insert path: for each node in preorder, each child slot."""
    for path in node_paths(doc):
        node = subtree(doc, path)
        for slot in range(len(node.children) + 1):
            yield path + (slot,)
