"""Operational transformation for lists, ordered trees and JSON documents."""

from .ops import (
    NO_OP,
    ListDelete,
    ListInsert,
    ListOp,
    NoOp,
    Path,
    SiteId,
    TreeDelete,
    TreeInsert,
    TreeOp,
)
from .tree import PathError, Tree

__all__ = [
    "NO_OP",
    "ListDelete",
    "ListInsert",
    "ListOp",
    "NoOp",
    "Path",
    "PathError",
    "SiteId",
    "Tree",
    "TreeDelete",
    "TreeInsert",
    "TreeOp",
]
