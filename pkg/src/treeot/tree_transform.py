"""Transformation of concurrent tree operations.

The tree analogue of the list transformation: operations carry access
paths instead of indices, and all the reasoning happens at the
*transformation point* — the first index where the two paths disagree
(or the last index of the shorter path when one is a prefix of the
other). Everything here is pure path algebra: the context tree is never
inspected, so the functions are total on well-formed operations.

Case overview, with ``tp`` the transformation point:

* effect independent — both paths continue past ``tp``, or the path
  with the smaller index at ``tp`` ends deeper than the other: the
  edits cannot displace each other and both pass through unchanged.
* differing indices at ``tp`` — the operation addressing the larger
  index shifts by one, in the direction given by the other operation
  (right for an insert, left for a delete).
* one path a prefix of the other — the deeper operation happens inside
  the subtree the shallower one inserts or removes; a delete or insert
  inside a removed subtree collapses to a no-op.
* equal paths — two inserts fall back to site priority (lower site id
  keeps its slot); two deletes cancel; insert-at-deleted-slot keeps the
  insert and shifts the delete right.
"""

from __future__ import annotations

from typing import Sequence

from . import tree
from .ops import NO_OP, NoOp, Path, SiteId, TreeDelete, TreeInsert, TreeOp


def apply_op(doc: tree.Tree, op: TreeOp) -> tree.Tree:
    """Apply a single tree operation, returning the new tree."""
    if isinstance(op, NoOp):
        return doc
    if isinstance(op, TreeInsert):
        return tree.insert(doc, op.path, op.tree)
    if isinstance(op, TreeDelete):
        return tree.delete(doc, op.path)
    raise TypeError(f"not a tree operation: {op!r}")


def transformation_point(p1: Sequence[int], p2: Sequence[int]) -> int:
    """Index of the first difference between two non-empty paths.

    When one path is a prefix of the other (or they are equal) there is
    no differing element; the result is then the last index of the
    shorter path.
    """
    if not p1 or not p2:
        raise tree.PathError("transformation point requires non-empty paths")
    for i, (a, b) in enumerate(zip(p1, p2)):
        if a != b:
            return i
    return min(len(p1), len(p2)) - 1


def effect_independent(p1: Sequence[int], p2: Sequence[int]) -> bool:
    """True when operations at these paths cannot displace each other."""
    tp = transformation_point(p1, p2)
    return (
        (len(p1) > tp + 1 and len(p2) > tp + 1)
        or (p1[tp] > p2[tp] and len(p1) < len(p2))
        or (p1[tp] < p2[tp] and len(p1) > len(p2))
    )


def increment_at(path: Sequence[int], index: int) -> Path:
    """Copy of ``path`` with element ``index`` increased by one."""
    path = tuple(path)
    if not 0 <= index < len(path):
        raise IndexError(f"path index {index} out of range for length {len(path)}")
    return path[:index] + (path[index] + 1,) + path[index + 1 :]


def decrement_at(path: Sequence[int], index: int) -> Path:
    """Copy of ``path`` with element ``index`` decreased by one.

    Underflow is refused: the transformation only ever decrements an
    element that is strictly greater than a concurrent sibling index,
    so a zero here means the caller's case analysis went wrong.
    """
    path = tuple(path)
    if not 0 <= index < len(path):
        raise IndexError(f"path index {index} out of range for length {len(path)}")
    if path[index] == 0:
        raise IndexError(f"cannot decrement path element 0 at index {index}")
    return path[:index] + (path[index] - 1,) + path[index + 1 :]


def transform(op1: TreeOp, site1: SiteId, op2: TreeOp, site2: SiteId) -> tuple[TreeOp, TreeOp]:
    """Transform two same-context tree operations against each other.

    Returns ``(op1', op2')`` where ``op1'`` applies after ``op2`` and
    ``op2'`` applies after ``op1``. The result is mirror-symmetric:
    swapping the argument pairs swaps the result pair, which is what
    lets the two ends of a sync connection agree without coordination.
    """
    if isinstance(op1, NoOp) or isinstance(op2, NoOp):
        return op1, op2
    if isinstance(op1, TreeInsert) and isinstance(op2, TreeInsert):
        return _insert_insert(op1, site1, op2, site2)
    if isinstance(op1, TreeDelete) and isinstance(op2, TreeDelete):
        return _delete_delete(op1, op2)
    if isinstance(op1, TreeInsert) and isinstance(op2, TreeDelete):
        return _insert_delete(op1, op2)
    if isinstance(op1, TreeDelete) and isinstance(op2, TreeInsert):
        # Derived from the insert/delete case with inputs and outputs swapped,
        # never written out twice.
        second, first = _insert_delete(op2, op1)
        return first, second
    raise TypeError(f"not tree operations: {op1!r}, {op2!r}")


def _insert_insert(
    op1: TreeInsert, site1: SiteId, op2: TreeInsert, site2: SiteId
) -> tuple[TreeOp, TreeOp]:
    p1, p2 = op1.path, op2.path
    tp = transformation_point(p1, p2)
    if effect_independent(p1, p2):
        return op1, op2
    if p1[tp] > p2[tp]:
        return TreeInsert(op1.tree, increment_at(p1, tp)), op2
    if p1[tp] < p2[tp]:
        return op1, TreeInsert(op2.tree, increment_at(p2, tp))
    if len(p1) > len(p2):
        return TreeInsert(op1.tree, increment_at(p1, tp)), op2
    if len(p1) < len(p2):
        return op1, TreeInsert(op2.tree, increment_at(p2, tp))
    if site1 == site2:
        raise ValueError("equal-path concurrent inserts require distinct sites")
    if site1 < site2:
        return op1, TreeInsert(op2.tree, increment_at(p2, tp))
    return TreeInsert(op1.tree, increment_at(p1, tp)), op2


def _delete_delete(op1: TreeDelete, op2: TreeDelete) -> tuple[TreeOp, TreeOp]:
    p1, p2 = op1.path, op2.path
    tp = transformation_point(p1, p2)
    if effect_independent(p1, p2):
        return op1, op2
    if p1[tp] > p2[tp]:
        return TreeDelete(decrement_at(p1, tp)), op2
    if p1[tp] < p2[tp]:
        return op1, TreeDelete(decrement_at(p2, tp))
    if len(p1) > len(p2):
        # op1 targets a node inside the subtree op2 already removed.
        return NO_OP, op2
    if len(p1) < len(p2):
        return op1, NO_OP
    return NO_OP, NO_OP


def _insert_delete(op1: TreeInsert, op2: TreeDelete) -> tuple[TreeOp, TreeOp]:
    p1, p2 = op1.path, op2.path
    tp = transformation_point(p1, p2)
    if effect_independent(p1, p2):
        return op1, op2
    if p1[tp] > p2[tp]:
        return TreeInsert(op1.tree, decrement_at(p1, tp)), op2
    if p1[tp] < p2[tp]:
        return op1, TreeDelete(increment_at(p2, tp))
    if len(p1) > len(p2):
        # Inserting under a node the delete removes: the insert vanishes.
        return NO_OP, op2
    return op1, TreeDelete(increment_at(p2, tp))
