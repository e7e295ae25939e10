"""Dissociated sets, their spans, and greedy maximal subsets.

For ``Lambda = (lambda_1, ..., lambda_k)`` and ``m`` in ``{-1, 0, 1}^k`` write
``m.Lambda = sum_i m_i lambda_i``.  The span is the set of all such
characters; ``Lambda`` is S-dissociated when ``m.Lambda`` lands in ``S``
only for ``m = 0``, and dissociated when this holds for ``S = {0}``.

Spans are handled through an integer array ``counts[gamma]`` equal to the
number of ``m`` with ``m.Lambda = gamma``.  Adding a character ``lambda``
maps ``c`` to ``c + c(. - lambda) + c(. + lambda)``, which is exact integer
arithmetic on the whole dual group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Constants
from .errors import NotDissociatedError, SizeCapError
from .groups import CharacterSet, Group


def _check_cap(k: int, consts: Constants):
    if k > consts.dissociation_cap:
        raise SizeCapError(f"|Lambda| = {k} exceeds the dissociation cap {consts.dissociation_cap}")


def _shift_pair(group: Group, arr: np.ndarray, gamma: int) -> np.ndarray:
    """``arr(. - gamma) + arr(. + gamma)`` on the reshaped dual group."""
    c = tuple(int(v) for v in group.coords(gamma))
    axes = tuple(range(group.rank))
    return np.roll(arr, c, axis=axes) + np.roll(arr, tuple(-v for v in c), axis=axes)


def span_counts(group: Group, lam, consts: Constants = DEFAULT) -> np.ndarray:
    """``counts[gamma] = #{m : m.Lambda = gamma}`` as a flat int64 array."""
    lam = list(lam)
    _check_cap(len(lam), consts)
    arr = np.zeros(group.shape, dtype=np.int64)
    arr.flat[0] = 1
    for g in lam:
        arr = arr + _shift_pair(group, arr, g)
    return arr.reshape(group.order)


def span_counts_by_weight(group: Group, lam, consts: Constants = DEFAULT) -> np.ndarray:
    """``out[r, gamma] = #{m : |m| = r, m.Lambda = gamma}`` where ``|m|`` counts nonzero entries."""
    lam = list(lam)
    _check_cap(len(lam), consts)
    k = len(lam)
    layers = np.zeros((k + 1,) + group.shape, dtype=np.int64)
    layers[0].flat[0] = 1
    for i, g in enumerate(lam):
        # shift layer r-1 into layer r, highest first so nothing is reused
        for r in range(i + 1, 0, -1):
            layers[r] = layers[r] + _shift_pair(group, layers[r - 1], g)
    return layers.reshape(k + 1, group.order)


@dataclass(frozen=True, eq=False)
class SpanSet:
    group: Group
    generators: tuple
    counts: np.ndarray

    @property
    def mask(self) -> np.ndarray:
        return self.counts > 0

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.counts)

    def __contains__(self, gamma):
        return bool(self.counts[int(gamma)] > 0)

    def __len__(self):
        return int(np.count_nonzero(self.counts))


def span(group: Group, lam, consts: Constants = DEFAULT) -> SpanSet:
    lam = tuple(int(v) for v in lam)
    return SpanSet(group, lam, span_counts(group, lam, consts))


def symmetric_mask(group: Group, s_set) -> np.ndarray:
    """Boolean mask of ``S u -S``, always containing 0."""
    if isinstance(s_set, np.ndarray) and s_set.dtype == bool:
        mask = s_set.copy()
    else:
        mask = np.zeros(group.order, dtype=bool)
        mask[np.asarray(list(s_set), dtype=np.int64)] = True
    idx = np.flatnonzero(mask)
    mask[group.neg(idx)] = True
    mask[0] = True
    return mask


def minimal_witness(group: Group, lam, s_mask: np.ndarray):
    """Nonzero ``m`` of least support with ``m.Lambda`` in S, or None."""
    lam = np.asarray(list(lam), dtype=np.int64)
    k = lam.size
    coords = group.coords(lam) if k else np.zeros((0, group.rank), dtype=np.int64)
    mods = np.asarray(group.factors, dtype=np.int64)
    for r in range(1, k + 1):
        # first nonzero sign fixed to +1; S is symmetric so -m is covered
        signs = np.array([(1,) + s for s in itertools.product((1, -1), repeat=r - 1)], dtype=np.int64)
        combos = np.array(list(itertools.combinations(range(k), r)), dtype=np.int64)
        sums = np.einsum("sr,crd->csd", signs, coords[combos]) % mods
        hits = s_mask[group.index(sums)]
        if hits.any():
            c, s = np.unravel_index(int(np.argmax(hits)), hits.shape)
            m = np.zeros(k, dtype=np.int64)
            m[combos[c]] = signs[s]
            return tuple(int(v) for v in m)
    return None


def is_s_dissociated(group: Group, lam, s_set, consts: Constants = DEFAULT):
    """Return ``(ok, witness)``; the witness has minimal support when ``ok`` is False."""
    lam = list(lam)
    mask = symmetric_mask(group, s_set)
    counts = span_counts(group, lam, consts)
    ok = int(counts[mask].sum()) == 1
    if ok:
        return True, None
    return False, minimal_witness(group, lam, mask)


def is_dissociated(group: Group, lam, consts: Constants = DEFAULT):
    return is_s_dissociated(group, lam, [0], consts)


def require_dissociated(group: Group, lam, consts: Constants = DEFAULT):
    ok, witness = is_dissociated(group, lam, consts)
    if not ok:
        raise NotDissociatedError(f"set is not dissociated; witness m = {witness}")


def rider_count(group: Group, lam, gamma: int, r: int, consts: Constants = DEFAULT) -> int:
    """``#{m : |m| = r, m.Lambda = gamma}``; at most ``2^r`` when Lambda is dissociated."""
    layers = span_counts_by_weight(group, lam, consts)
    if r < 0 or r >= layers.shape[0]:
        return 0
    return int(layers[r, int(gamma)])


def sumset_mask(group: Group, a_mask: np.ndarray, b_mask: np.ndarray) -> np.ndarray:
    """Boolean mask of ``A + B``."""
    b_idx = np.flatnonzero(b_mask)
    if b_idx.size <= 32:
        out = np.zeros(group.order, dtype=bool)
        for b in b_idx:
            out |= group.roll(a_mask, int(b))
        return out
    fa = np.fft.fftn(a_mask.reshape(group.shape).astype(float))
    fb = np.fft.fftn(b_mask.reshape(group.shape).astype(float))
    conv = np.real(np.fft.ifftn(fa * fb)).reshape(group.order)
    return conv > 0.5


@dataclass(frozen=True, eq=False)
class DissociatedSelection:
    """Greedy S-dissociated subset and what it covers."""

    chosen: CharacterSet
    covered: bool
    capped: bool
    scanned: int
    cover_mask: np.ndarray


def max_dissociated_subset(group: Group, candidates, s_set=(0,), limit: int | None = None,
                           consts: Constants = DEFAULT) -> DissociatedSelection:
    """Scan ``candidates`` in order and keep ``gamma`` iff it is outside ``span(Lambda) + S``.

    The result is S-dissociated and every scanned candidate lies in
    ``span(Lambda) + S``.  If ``limit`` is reached, growth stops and
    ``capped`` is set; the remaining candidates are then not covered.
    """
    cand = [int(v) for v in candidates]
    s_mask = symmetric_mask(group, s_set)
    cap = consts.dissociation_cap if limit is None else min(limit, consts.dissociation_cap)
    chosen: list[int] = []
    counts = np.zeros(group.shape, dtype=np.int64)
    counts.flat[0] = 1
    cover = s_mask.copy()
    capped = False
    scanned = 0
    for g in cand:
        if cover[g]:
            scanned += 1
            continue
        if len(chosen) >= cap:
            capped = True
            break
        chosen.append(g)
        counts = counts + _shift_pair(group, counts, g)
        cover = sumset_mask(group, counts.reshape(group.order) > 0, s_mask)
        scanned += 1
    covered = (not capped) and bool(cover[np.asarray(cand, dtype=np.int64)].all()) if cand else True
    return DissociatedSelection(CharacterSet(group, tuple(chosen)), covered, capped, scanned, cover)
