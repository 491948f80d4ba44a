"""
Exact covers of cell sets by pairwise disjoint atoms.
"""

import logging as log
from threading import Lock
from typing import Optional, Sequence

from .bitsets import iter_bits, lowest_bit

# memo value for residuals without any cover
_NO_COVER = -1


class DecompositionOracle:
    """
    Decides whether a mask is a disjoint union of atoms and produces the first
    such cover in canonical atom order.

    The search is depth first and always branches on the atoms covering the
    lowest uncovered cell. Every residual mask reached during a search is
    memoized with the index of the first atom of its cover (or `-1` if it has
    none), so certificates are rebuilt by following the chain.

    The memo is safe to share between threads; inserts are idempotent.
    """

    def __init__(self, atoms: Sequence[int], size: int) -> None:
        """
        Args:
            atoms (Sequence[int]) : The atom masks in canonical order.
            size (int) : Number of cells of the underlying space.
        """
        self.atoms = tuple(atoms)
        self.size = size
        # atoms containing each cell, in canonical order
        self._containing: list[list[int]] = [[] for _ in range(size)]
        for i, atom in enumerate(self.atoms):
            for cell in iter_bits(atom):
                self._containing[cell].append(i)
        self._memo: dict[int, int] = {0: len(self.atoms)}
        self._lock = Lock()

    def __len__(self) -> int:
        return len(self._memo)

    def _first(self, mask: int) -> int:
        known = self._memo.get(mask)
        if known is not None:
            return known
        result = _NO_COVER
        for i in self._containing[lowest_bit(mask)]:
            atom = self.atoms[i]
            if atom & mask == atom and self._first(mask ^ atom) != _NO_COVER:
                result = i
                break
        with self._lock:
            self._memo.setdefault(mask, result)
        return result

    def decomposable(self, mask: int) -> bool:
        """
        Returns whether `mask` is a disjoint union of atoms.
        """
        return self._first(mask) != _NO_COVER

    def decompose(self, mask: int) -> Optional[list[int]]:
        """
        Returns the first disjoint atom cover of `mask` as a list of atom
        indices (in the order found), or None if there is none. The empty mask
        has the empty cover.
        """
        if self._first(mask) == _NO_COVER:
            return None
        cover = []
        residual = mask
        while residual:
            i = self._memo[residual]
            cover.append(i)
            residual ^= self.atoms[i]
        assert self.is_certificate(mask, cover)
        return cover

    def all_covers(self, mask: int, limit: int = 1 << 16) -> list[list[int]]:
        """
        Enumerates all disjoint atom covers of `mask` (up to `limit`).
        """
        covers: list[list[int]] = []

        def search(residual: int, chosen: list[int]) -> None:
            if len(covers) >= limit:
                return
            if not residual:
                covers.append(list(chosen))
                return
            if not self.decomposable(residual):
                return
            for i in self._containing[lowest_bit(residual)]:
                atom = self.atoms[i]
                if atom & residual == atom:
                    chosen.append(i)
                    search(residual ^ atom, chosen)
                    chosen.pop()

        search(mask, [])
        log.debug('Found %d covers of mask %x', len(covers), mask)
        return covers

    def is_certificate(self, mask: int, cover: Sequence[int]) -> bool:
        """
        Checks that the atoms of `cover` are pairwise disjoint and unite to
        `mask`.
        """
        acc = 0
        for i in cover:
            atom = self.atoms[i]
            if acc & atom:
                return False
            acc |= atom
        return acc == mask


def decompose_into_atoms(mask: int, atoms: Sequence[int], size: int) -> Optional[list[int]]:
    """
    One-shot exact cover of `mask` by the given atoms.

    Returns:
        (Optional[list[int]]) The atom masks of the first cover or None.
    """
    oracle = DecompositionOracle(atoms, size)
    cover = oracle.decompose(mask)
    return None if cover is None else [atoms[i] for i in cover]
