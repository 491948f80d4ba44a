"""
Bitset helpers. Propositions are subsets of a finite cell space and are
stored as Python integers where bit `i` stands for cell `i`.
"""

from typing import Iterable, Iterator, Sequence

import numpy as np

# spaces with at most this many cells fit into an unsigned 64 bit word and can
# be scanned with vectorized numpy operations
WORD_BITS = 64
_WORD_MASK = (1 << WORD_BITS) - 1


def full_mask(size: int) -> int:
    """
    Returns the mask containing all `size` cells.
    """
    return (1 << size) - 1


def mask_of(cells: Iterable[int]) -> int:
    """
    Builds a mask from an iterable of cell indices.
    """
    mask = 0
    for cell in cells:
        mask |= 1 << cell
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """
    Yields the indices of all set bits of `mask` in increasing order.
    """
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    """
    Returns the index of the lowest set bit (`mask` must be nonzero).
    """
    return (mask & -mask).bit_length() - 1


def product_mask(left: int, right: int, right_size: int) -> int:
    """
    Computes the mask of the Cartesian product `left × right` where the cells
    of the product space are indexed as `i * right_size + j` (left factor
    slowest).

    Args:
        left (int) : Mask over the left factor.
        right (int) : Mask over the right factor.
        right_size (int) : Number of cells of the right factor.

    Returns:
        (int) The product mask.
    """
    result = 0
    for i in iter_bits(left):
        result |= right << (i * right_size)
    return result


def to_hex(mask: int) -> str:
    # pylint: disable=missing-function-docstring
    return format(mask, "x")


def from_hex(text: str) -> int:
    # pylint: disable=missing-function-docstring
    return int(text, 16)


class MaskTable:
    """
    An immutable, indexed list of masks supporting subset and superset scans.
    For cell spaces that fit into a machine word the scans are vectorized.
    """

    def __init__(self, masks: Sequence[int], size: int) -> None:
        self.masks = tuple(masks)
        self.size = size
        self._words = (np.array(self.masks, dtype=np.uint64)
                       if size <= WORD_BITS else None)

    def __len__(self) -> int:
        return len(self.masks)

    def subsets_of(self, outer: int) -> list[int]:
        """
        Returns the indices of all masks contained in `outer`.
        """
        if self._words is not None:
            outside = np.uint64(~outer & _WORD_MASK)
            return [int(i) for i in np.flatnonzero((self._words & outside) == 0)]
        return [i for i, m in enumerate(self.masks) if m & outer == m]

    def supersets_of(self, inner: int) -> list[int]:
        """
        Returns the indices of all masks containing `inner`.
        """
        if self._words is not None:
            word = np.uint64(inner)
            return [int(i) for i in np.flatnonzero((self._words & word) == word)]
        return [i for i, m in enumerate(self.masks) if m & inner == inner]
