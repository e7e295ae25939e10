"""Linear algebra over F2 on flat indices of ``(Z/2)^n``.

In the flat layout an element of ``(Z/2)^n`` is an integer whose bits are
its coordinates, so addition is XOR and the pairing ``gamma . x`` is the
parity of ``gamma & x``.
"""

from __future__ import annotations

import numpy as np


def parity(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


class F2Basis:
    """Echelon basis: each stored vector has a distinct highest bit."""

    def __init__(self, vectors=()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(int(v))

    def __len__(self):
        return len(self.pivots)

    @property
    def vectors(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots, reverse=True)]

    def reduce(self, v: int) -> int:
        for p in sorted(self.pivots, reverse=True):
            if (v >> p) & 1:
                v ^= self.pivots[p]
        return v

    def reduce_many(self, vs) -> np.ndarray:
        """Canonical coset representatives of ``vs`` modulo the span."""
        out = np.asarray(vs, dtype=np.int64).copy()
        for p in sorted(self.pivots, reverse=True):
            hit = ((out >> p) & 1).astype(bool)
            out[hit] ^= self.pivots[p]
        return out

    def add(self, v: int) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        r = self.reduce(int(v))
        if r == 0:
            return False
        self.pivots[r.bit_length() - 1] = r
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(int(v)) == 0

    def copy(self) -> "F2Basis":
        b = F2Basis()
        b.pivots = dict(self.pivots)
        return b


def rank(vectors) -> int:
    return len(F2Basis(vectors))


def coset_keys(basis: F2Basis, order: int) -> np.ndarray:
    """For every ``x`` the bit string ``(b . x)_b``; equal keys means same coset of the annihilator."""
    x = np.arange(order, dtype=np.int64)
    key = np.zeros(order, dtype=np.int64)
    for i, b in enumerate(basis.vectors):
        key |= parity(x & b) << i
    return key


def span_mask(basis: F2Basis, order: int) -> np.ndarray:
    return basis.reduce_many(np.arange(order)) == 0
