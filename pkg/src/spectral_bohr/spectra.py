"""Large spectra and their cardinality bounds.

Two thresholds are supported:

* ``"l1"``:   ``{gamma : |fhat(gamma)| >= eps ||f||_1}``, size at most
  ``eps^-2 (||f||_2 / ||f||_1)^2`` by Parseval;
* ``"linf"``: ``{gamma : |fhat(gamma)| >= eps ||f||_inf}``, size at most
  ``eps^-1 A_f`` by counting A-norm mass.

Ties are included.  Comparisons use a relative tolerance so that values that
are equal in exact arithmetic are treated as equal after rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Constants
from .errors import DegenerateInputError, ParameterError
from .groups import CharacterSet, GroupFunction, GroupMeasure, Spectrum, _same_group, fourier, norm

KINDS = ("l1", "linf")


@dataclass(frozen=True)
class SpectrumThreshold:
    kind: str
    epsilon: float

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in KINDS:
            raise ParameterError(f"threshold kind must be one of {KINDS}, got {self.kind!r}")
        if not 0.0 < self.epsilon <= 1.0:
            raise ParameterError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        object.__setattr__(self, "kind", kind)


@dataclass(frozen=True)
class LargeSpectrum:
    """Characters above threshold, ordered by decreasing |fhat| then index."""

    characters: CharacterSet
    spectrum: Spectrum
    threshold: SpectrumThreshold
    level: float
    bound: float

    def __len__(self):
        return len(self.characters)


def order_by_magnitude(spectrum: Spectrum, members) -> np.ndarray:
    """Sort characters by decreasing |coefficient|, ties by increasing index."""
    members = np.asarray(members, dtype=np.int64)
    mags = spectrum.magnitudes[members]
    order = np.lexsort((members, -mags))
    return members[order]


def above(values: np.ndarray, level: float, tol: float) -> np.ndarray:
    """Indices with ``values >= level`` up to relative tolerance ``tol``."""
    return np.flatnonzero(values >= level * (1.0 - tol) - 1e-300)


def large_spectrum(f: GroupFunction, epsilon: float, kind: str = "linf", consts: Constants = DEFAULT) -> LargeSpectrum:
    threshold = SpectrumThreshold(kind, epsilon)
    ref = norm(f, "L1") if threshold.kind == "l1" else norm(f, "Linf")
    if ref == 0.0:
        raise DegenerateInputError("large spectrum of the zero function")
    spec = fourier(f)
    level = epsilon * ref
    members = order_by_magnitude(spec, above(spec.magnitudes, level, consts.tol))
    if threshold.kind == "l1":
        bound = l1_spectrum_bound(f, epsilon)
    else:
        bound = linf_spectrum_bound(f, epsilon, spec)
    return LargeSpectrum(CharacterSet(f.group, tuple(members)), spec, threshold, level, bound)


def linf_spectrum_bound(f: GroupFunction, epsilon: float, spec: Spectrum | None = None) -> float:
    """``eps^-1 A_f``: bound on the size of the L-infinity large spectrum."""
    spec = fourier(f) if spec is None else spec
    sup = norm(f, "Linf")
    if sup == 0.0:
        raise DegenerateInputError("zero function")
    return float(np.abs(spec.coeffs).sum()) / sup / epsilon


def l1_spectrum_bound(f: GroupFunction, epsilon: float) -> float:
    """``eps^-2 (||f||_2/||f||_1)^2``: bound on the size of the L1 large spectrum."""
    l1 = norm(f, "L1")
    if l1 == 0.0:
        raise DegenerateInputError("zero function")
    return (norm(f, "L2") / l1) ** 2 / epsilon**2


def local_large_spectrum(f: GroupFunction, cutoff: GroupMeasure, threshold: SpectrumThreshold,
                         reference: float, consts: Constants = DEFAULT) -> CharacterSet:
    """``{gamma : |(f dbeta)^(gamma)| >= eps * reference}`` for a probability measure ``beta``.

    ``(f dbeta)^(gamma) = sum_x f(x) beta(x) conj(gamma(x))``.  With the uniform
    measure on ``G`` this is the global large spectrum at the same level.
    """
    _same_group(f, cutoff)
    w = cutoff.weights
    if np.iscomplexobj(w) and np.abs(w.imag).max() > 0:
        raise ParameterError("cutoff must be a real measure")
    w = np.real(w)
    if w.min() < 0 or abs(w.sum() - 1.0) > 1e-9:
        raise ParameterError("cutoff must be a probability measure")
    if not reference > 0:
        raise ParameterError(f"reference value must be positive, got {reference}")
    spec = fourier(GroupMeasure(f.group, f.values * w))
    members = order_by_magnitude(spec, above(spec.magnitudes, threshold.epsilon * reference, consts.tol))
    return CharacterSet(f.group, tuple(int(v) for v in members))


def within_bound(size: int, bound: float, tol: float = DEFAULT.tol) -> bool:
    return size <= bound * (1.0 + tol)
