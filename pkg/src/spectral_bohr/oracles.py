"""Slow reference implementations used to cross-check the fast paths.

Nothing here touches an FFT, a Walsh-Hadamard butterfly or the span
counting arrays; everything is a direct sum or a brute-force enumeration,
so agreement with the main code is a genuine second route.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np

from .groups import Group


def character_value(group: Group, gamma: int, x: int) -> complex:
    g = np.unravel_index(gamma, group.shape)
    c = np.unravel_index(x, group.shape)
    phase = sum(int(a) * int(b) / n for a, b, n in zip(g, c, group.factors))
    return cmath.exp(2j * math.pi * phase)


def dft_matrix(group: Group) -> np.ndarray:
    """``M[gamma, x] = conj(gamma(x))`` built coordinate by coordinate."""
    mats = []
    for n in group.factors:
        k = np.arange(n)
        mats.append(np.exp(-2j * np.pi * np.outer(k, k) / n))
    m = mats[0]
    for nxt in mats[1:]:
        m = np.kron(m, nxt)
    return m


def direct_fourier(group: Group, values) -> np.ndarray:
    return dft_matrix(group) @ np.asarray(values, dtype=complex) / group.order


def direct_inverse(group: Group, coeffs) -> np.ndarray:
    return np.conj(dft_matrix(group)).T @ np.asarray(coeffs, dtype=complex)


def direct_convolution(group: Group, a, b) -> np.ndarray:
    """``E_y a(y) b(x - y)`` by a double loop over coordinates."""
    coords = [np.unravel_index(i, group.shape) for i in range(group.order)]
    out = np.zeros(group.order, dtype=complex)
    for x in range(group.order):
        cx = coords[x]
        s = 0j
        for y in range(group.order):
            cy = coords[y]
            d = np.ravel_multi_index(tuple((p - q) % n for p, q, n in zip(cx, cy, group.factors)), group.shape)
            s += a[y] * b[d]
        out[x] = s / group.order
    return out


def nearest_integer_distance(group: Group, gamma: int, x: int) -> float:
    g = np.unravel_index(gamma, group.shape)
    c = np.unravel_index(x, group.shape)
    t = sum(int(a) * int(b) / n for a, b, n in zip(g, c, group.factors)) % 1.0
    return min(t, 1.0 - t)


def brute_bohr_set(group: Group, gammas, delta: float) -> list[int]:
    return [
        x
        for x in range(group.order)
        if all(nearest_integer_distance(group, g, x) <= delta + 1e-12 for g in gammas)
    ]


def signed_sum(group: Group, lam, m) -> int:
    """The character ``sum_i m_i lambda_i``."""
    coord = np.zeros(group.rank, dtype=np.int64)
    for g, mi in zip(lam, m):
        coord += mi * np.array(np.unravel_index(g, group.shape), dtype=np.int64)
    return int(np.ravel_multi_index(tuple(coord % np.array(group.factors)), group.shape))


def enumerate_span(group: Group, lam):
    """Every ``(m, m.lam)`` with ``m`` in ``{-1, 0, 1}^k``."""
    for m in itertools.product((-1, 0, 1), repeat=len(lam)):
        yield m, signed_sum(group, lam, m)


def brute_is_s_dissociated(group: Group, lam, s_set) -> bool:
    s = set(int(v) for v in s_set)
    for m, val in enumerate_span(group, lam):
        if any(m) and val in s:
            return False
    return True


def brute_is_dissociated(group: Group, lam) -> bool:
    return brute_is_s_dissociated(group, lam, [0])


def riesz_product_direct(group: Group, lam, omega, t: float = 1.0, model: bool = False) -> np.ndarray:
    """Pointwise product, one factor per character."""
    out = np.ones(group.order, dtype=complex)
    for g, w in zip(lam, omega):
        vals = np.array([character_value(group, g, x) for x in range(group.order)])
        if model:
            out *= 1.0 + t * w * vals
        else:
            out *= 1.0 + t * (w * vals + np.conj(w * vals)) / 2.0
    return out
