"""Immutable sequence primitives shared by the list and tree layers.

All functions treat their inputs as read-only and return fresh tuples.
"""

from __future__ import annotations

from typing import Any, Sequence

Items = tuple[Any, ...]


class PositionError(IndexError):
    """An insert or delete position lies outside the valid range."""


def insert(items: Sequence[Any], pos: int, item: Any) -> Items:
    """Return a copy of ``items`` with ``item`` inserted at ``pos``.

    ``pos`` may equal ``len(items)`` (append); anything beyond that, or
    negative, raises :class:`PositionError`.
    """
    if not 0 <= pos <= len(items):
        raise PositionError(f"insert position {pos} out of range for length {len(items)}")
    items = tuple(items)
    return items[:pos] + (item,) + items[pos:]


def delete(items: Sequence[Any], pos: int) -> Items:
    """Return a copy of ``items`` without the element at ``pos``."""
    if not 0 <= pos < len(items):
        raise PositionError(f"delete position {pos} out of range for length {len(items)}")
    items = tuple(items)
    return items[:pos] + items[pos + 1 :]


def interval(items: Sequence[Any], start: int, end: int) -> Items:
    """Return the elements ``start`` through ``end`` inclusive.

    Out-of-range bounds are clamped rather than rejected: the result is
    empty when ``start > end`` or ``start`` is past the last element, and
    runs to the end of ``items`` when only ``end`` overshoots.
    """
    if start > end:
        return ()
    return tuple(items[start : end + 1])


def is_prefix(candidate: Sequence[Any], items: Sequence[Any]) -> bool:
    """True iff ``items`` starts with ``candidate``."""
    candidate = tuple(candidate)
    return len(candidate) <= len(items) and tuple(items[: len(candidate)]) == candidate
