"""Transformation of concurrent list operations.

Two operations generated against the same list are rewritten so that
each can be applied after the other with a convergent result. Positions
shift by one across a concurrent insert or delete at a smaller index;
two deletes of the same element cancel to no-ops. When two inserts
target the same position, the operation from the lower site id keeps
its position and the other is shifted right.
"""

from __future__ import annotations

from typing import Sequence

from . import lists
from .ops import NO_OP, ListDelete, ListInsert, ListOp, NoOp, SiteId


def apply_op(items: Sequence, op: ListOp) -> lists.Items:
    """Apply a single list operation, returning the new list."""
    if isinstance(op, NoOp):
        return tuple(items)
    if isinstance(op, ListInsert):
        return lists.insert(items, op.pos, op.item)
    if isinstance(op, ListDelete):
        return lists.delete(items, op.pos)
    raise TypeError(f"not a list operation: {op!r}")


def transform(op1: ListOp, site1: SiteId, op2: ListOp, site2: SiteId) -> tuple[ListOp, ListOp]:
    """Transform two same-context list operations against each other.

    Returns ``(op1', op2')`` where ``op1'`` applies after ``op2`` and
    ``op2'`` applies after ``op1``. Site ids only break the tie between
    equal-position inserts and must differ in that case.
    """
    if isinstance(op1, NoOp) or isinstance(op2, NoOp):
        return op1, op2

    if isinstance(op1, ListInsert) and isinstance(op2, ListInsert):
        if op1.pos < op2.pos:
            return op1, ListInsert(op2.item, op2.pos + 1)
        if op1.pos > op2.pos:
            return ListInsert(op1.item, op1.pos + 1), op2
        if site1 == site2:
            raise ValueError("equal-position concurrent inserts require distinct sites")
        if site1 < site2:
            return op1, ListInsert(op2.item, op2.pos + 1)
        return ListInsert(op1.item, op1.pos + 1), op2

    if isinstance(op1, ListInsert) and isinstance(op2, ListDelete):
        if op1.pos < op2.pos:
            return op1, ListDelete(op2.pos + 1)
        if op1.pos > op2.pos:
            return ListInsert(op1.item, op1.pos - 1), op2
        return op1, ListDelete(op2.pos + 1)

    if isinstance(op1, ListDelete) and isinstance(op2, ListInsert):
        if op1.pos < op2.pos:
            return op1, ListInsert(op2.item, op2.pos - 1)
        if op1.pos > op2.pos:
            return ListDelete(op1.pos + 1), op2
        return ListDelete(op1.pos + 1), op2

    if isinstance(op1, ListDelete) and isinstance(op2, ListDelete):
        if op1.pos < op2.pos:
            return op1, ListDelete(op2.pos - 1)
        if op1.pos > op2.pos:
            return ListDelete(op1.pos - 1), op2
        return NO_OP, NO_OP

    raise TypeError(f"not list operations: {op1!r}, {op2!r}")
