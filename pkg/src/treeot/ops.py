"""Operation variants exchanged between replicas.

Operations are immutable values; the functions that apply and transform
them live in :mod:`treeot.list_transform` and :mod:`treeot.tree_transform`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Union

if TYPE_CHECKING:
    from .tree import Tree

Path = tuple[int, ...]
SiteId = int


@dataclass(frozen=True, slots=True)
class NoOp:
    """Identity operation, produced when a transform cancels an operation."""


NO_OP = NoOp()


@dataclass(frozen=True, slots=True)
class ListInsert:
    item: Any
    pos: int


@dataclass(frozen=True, slots=True)
class ListDelete:
    pos: int


@dataclass(frozen=True, slots=True)
class TreeInsert:
    tree: "Tree"
    path: Path

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


@dataclass(frozen=True, slots=True)
class TreeDelete:
    path: Path

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


ListOp = Union[ListInsert, ListDelete, NoOp]
TreeOp = Union[TreeInsert, TreeDelete, NoOp]
