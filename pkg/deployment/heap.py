"""
Mergeable min-heap (pairing heap).

The tree decomposition melds the heaps of all children at every vertex, so
meld has to be O(1). Pairing heaps give O(1) push/meld and O(log n)
amortized pop, which is all the decomposition relies on.

Usage:
    heap = PairingHeap()
    heap.push((3, "b"), item)
    heap.meld(other)          # other is emptied
    while heap and heap.peek_key() <= limit:
        key, item = heap.pop()
"""

from typing import Any, Generic, Iterator, Optional, TypeVar

T = TypeVar("T")


class _Node:
    __slots__ = ("key", "value", "subs")

    def __init__(self, key: Any, value: Any):
        self.key = key
        self.value = value
        self.subs: list["_Node"] = []


def _link(a: Optional[_Node], b: Optional[_Node]) -> Optional[_Node]:
    """Meld two heap roots destructively; the smaller key wins."""
    if a is None:
        return b
    if b is None:
        return a
    if b.key < a.key:
        a, b = b, a
    a.subs.append(b)
    return a


def _pair(subs: list[_Node]) -> Optional[_Node]:
    """Two-pass pairing: meld neighbours left to right, then fold right to left."""
    if not subs:
        return None
    paired = [_link(subs[i], subs[i + 1] if i + 1 < len(subs) else None)
              for i in range(0, len(subs), 2)]
    root = paired[-1]
    for node in reversed(paired[:-1]):
        root = _link(node, root)
    return root


class PairingHeap(Generic[T]):
    """Min-heap of (key, value) pairs. Keys must be mutually comparable."""

    __slots__ = ("_root", "_size")

    def __init__(self):
        self._root: Optional[_Node] = None
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def __bool__(self) -> bool:
        return self._root is not None

    def push(self, key: Any, value: T) -> None:
        self._root = _link(self._root, _Node(key, value))
        self._size += 1

    def peek_key(self) -> Any:
        if self._root is None:
            raise IndexError("peek into an empty PairingHeap")
        return self._root.key

    def pop(self) -> tuple[Any, T]:
        """Remove and return the (key, value) pair with the smallest key."""
        root = self._root
        if root is None:
            raise IndexError("pop from an empty PairingHeap")
        self._root = _pair(root.subs)
        self._size -= 1
        return root.key, root.value

    def meld(self, other: "PairingHeap[T]") -> "PairingHeap[T]":
        """Absorb `other` into this heap; `other` is left empty."""
        if other is self:
            return self
        self._root = _link(self._root, other._root)
        self._size += other._size
        other._root = None
        other._size = 0
        return self

    def drain(self) -> Iterator[tuple[Any, T]]:
        """Pop everything in increasing key order."""
        while self._root is not None:
            yield self.pop()
