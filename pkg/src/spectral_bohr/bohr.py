"""Bohr sets, regularity, smoothed cutoffs and local Fourier analysis.

``B(Gamma, delta) = {x : ||gamma(x)|| <= delta for all gamma in Gamma}``
where ``||.||`` is the distance to the nearest integer of the phase.  Phases
are computed exactly as integers modulo the group exponent ``L``, so
membership is decided by comparing integers with ``delta * L`` (plus a tiny
guard band so that boundary points count as members).

Below the resolution ``1/L`` a Bohr set stops shrinking: it equals the
subgroup annihilated by ``Gamma``.  Such sets are perfectly regular and all
statements below remain valid for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Constants
from .errors import (
    DegenerateInputError,
    ParameterError,
    RegularityError,
    VerificationError,
    WidthUnderflowError,
)
from .groups import (
    CharacterSet,
    Group,
    GroupFunction,
    GroupMeasure,
    Spectrum,
    fourier,
    tv_norm,
)


def pair_numerators(group: Group, gammas, xs) -> np.ndarray:
    """``L * (sum_j gamma_j x_j / N_j mod 1)`` as integers, shape ``(len(gammas), len(xs))``."""
    g = group.coords(np.asarray(gammas, dtype=np.int64).reshape(-1))
    x = group.coords(np.asarray(xs, dtype=np.int64).reshape(-1))
    scale = np.array([group.exponent // n for n in group.factors], dtype=np.int64)
    return ((g * scale) % group.exponent) @ x.T % group.exponent


class BohrProfile:
    """Per-element valuation ``v(x) = max_gamma L ||gamma(x)||`` for a fixed Gamma.

    Sorting ``v`` once makes every size query a binary search, which is what
    the regularity search needs.
    """

    def __init__(self, group: Group, gamma):
        self.group = group
        self.gamma = tuple(int(g) for g in group.check_index(list(gamma)))
        if self.gamma:
            v = np.zeros(group.order, dtype=np.int64)
            for g in self.gamma:
                v = np.maximum(v, group.valuation_numerators([g])[0])
        else:
            v = np.zeros(group.order, dtype=np.int64)
        self.valuations = v
        self.sorted = np.sort(v)

    def limit(self, delta: float, guard: float = DEFAULT.boundary_guard) -> float:
        return (delta + guard) * self.group.exponent

    def count(self, delta: float, guard: float = DEFAULT.boundary_guard) -> int:
        return int(np.searchsorted(self.sorted, self.limit(delta, guard), side="right"))

    def mask(self, delta: float, guard: float = DEFAULT.boundary_guard) -> np.ndarray:
        return self.valuations <= self.limit(delta, guard)


@dataclass(frozen=True, eq=False)
class BohrSet:
    group: Group
    gamma: tuple
    delta: float
    mask: np.ndarray = field(repr=False)

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def density(self) -> float:
        return self.size / self.group.order

    @property
    def rank(self) -> int:
        return len(self.gamma)

    @property
    def underflow(self) -> bool:
        """True when the width is below the group resolution."""
        return self.delta * self.group.exponent < 1.0

    def density_bound(self) -> float:
        return self.delta ** self.rank

    def cutoff(self) -> GroupMeasure:
        return GroupMeasure.uniform_on(self.group, self.members)

    def __contains__(self, x):
        return bool(self.mask[int(x)])


def _bohr(group: Group, gamma, delta: float, profile: BohrProfile | None = None) -> BohrSet:
    profile = BohrProfile(group, gamma) if profile is None else profile
    return BohrSet(group, profile.gamma, float(delta), profile.mask(delta))


def bohr_set(group: Group, gamma, delta: float) -> BohrSet:
    """``B(Gamma, delta)`` for ``delta`` in ``(0, 1]``."""
    if not 0.0 < delta <= 1.0:
        raise ParameterError(f"delta must lie in (0, 1], got {delta}")
    return _bohr(group, gamma, delta)


# ----------------------------------------------------------------------
# regularity


@dataclass(frozen=True, eq=False)
class RegularBohrSet:
    """A Bohr set whose size varies at most linearly with the width.

    ``constant`` is the largest measured ``|ratio - 1| / (|kappa| d)`` over the
    probes, where ``ratio = |B((1+kappa) delta)| / |B(delta)|``.
    """

    bohr: BohrSet
    constant: float
    window: float
    probes: tuple

    @property
    def group(self):
        return self.bohr.group

    @property
    def gamma(self):
        return self.bohr.gamma

    @property
    def delta(self):
        return self.bohr.delta

    @property
    def rank(self):
        return self.bohr.rank


def _probe_kappas(d: int, consts: Constants) -> np.ndarray:
    d = max(d, 1)
    k = np.linspace(-consts.c_reg_window / d, consts.c_reg_window / d, consts.reg_probes)
    return k[np.abs(k) > 0]


def measured_regularity(profile: BohrProfile, delta: float, consts: Constants = DEFAULT) -> float:
    d = max(len(profile.gamma), 1)
    base = profile.count(delta)
    worst = 0.0
    for kappa in _probe_kappas(d, consts):
        ratio = profile.count((1.0 + kappa) * delta) / base
        worst = max(worst, abs(ratio - 1.0) / (abs(kappa) * d))
    return worst


def find_regular(group: Group, gamma, delta: float, consts: Constants = DEFAULT,
                 profile: BohrProfile | None = None) -> RegularBohrSet:
    """First regular width among ``delta * 2^(-j/64)``, ``j = 1..64``.

    The candidates lie in ``[delta/2, delta)``.  Raises
    :class:`RegularityError` carrying the best candidate if none passes.
    """
    if not delta > 0.0:
        raise ParameterError(f"delta must be positive, got {delta}")
    profile = BohrProfile(group, gamma) if profile is None else profile
    n = consts.reg_candidates
    best = (math.inf, None)
    for j in range(1, n + 1):
        cand = delta * 2.0 ** (-j / n)
        c = measured_regularity(profile, cand, consts)
        if c <= consts.c_reg:
            probes = tuple(float(k) for k in _probe_kappas(len(profile.gamma), consts))
            return RegularBohrSet(_bohr(group, gamma, cand, profile), c, consts.c_reg_window, probes)
        if c < best[0]:
            best = (c, cand)
    raise RegularityError(
        f"no regular width in [{delta / 2}, {delta}) with constant <= {consts.c_reg}",
        best_delta=best[1],
        best_constant=best[0],
    )


def translate_defect(bohr: BohrSet, y: int) -> float:
    """``||(y + beta) - beta||``: total variation between the cutoff and its translate."""
    moved = bohr.group.roll(bohr.mask, int(y))
    return np.count_nonzero(moved ^ bohr.mask) / bohr.size


def translate_defect_bound(reg: RegularBohrSet, inner_delta: float) -> float:
    """Certified bound on the translate defect for ``y`` in ``B(Gamma, inner_delta)``.

    ``B \\ (y + B)`` lies in ``B(delta) \\ B(delta - inner_delta)``, whose relative
    size is at most ``c kappa d`` at the next probe ``kappa >= inner_delta / delta``,
    so the defect is at most twice that.  Returns ``inf`` outside the probed window.
    """
    d = max(reg.rank, 1)
    ratio = inner_delta / reg.delta
    probes = np.array([k for k in reg.probes if k > 0])
    ok = probes[probes >= ratio * (1 - 1e-12)]
    if ok.size == 0:
        return math.inf
    return 2.0 * reg.constant * float(ok.min()) * d


# ----------------------------------------------------------------------
# smoothing


@dataclass(frozen=True, eq=False)
class SmoothedCutoff:
    """``beta_{(1-kappa) delta} * beta_{kappa delta / L}^L``, supported on ``B(Gamma, delta)``."""

    measure: GroupMeasure
    inner: BohrSet
    steps: int
    kappa: float
    distance: float

    def measured_constant(self, d: int) -> float:
        return self.distance / (self.kappa * max(d, 1))


def smoothed_cutoff(group: Group, gamma, delta: float, steps: int, kappa: float,
                    profile: BohrProfile | None = None) -> SmoothedCutoff:
    if steps < 2 or steps % 2:
        raise ParameterError(f"the number of convolution factors must be even and >= 2, got {steps}")
    if not 0.0 < kappa <= 1.0:
        raise ParameterError(f"kappa must lie in (0, 1], got {kappa}")
    profile = BohrProfile(group, gamma) if profile is None else profile
    outer = _bohr(group, gamma, (1.0 - kappa) * delta, profile)
    inner = _bohr(group, gamma, kappa * delta / steps, profile)
    base = _bohr(group, gamma, delta, profile)
    coeffs = fourier(outer.cutoff()).coeffs * fourier(inner.cutoff()).coeffs ** steps
    if group.is_boolean:
        from .groups import walsh_hadamard

        w = np.real(walsh_hadamard(coeffs)) / group.order
    else:
        w = np.real(np.fft.ifftn(coeffs.reshape(group.shape))).reshape(group.order)
    w[np.abs(w) < 1e-18] = 0.0
    smooth = GroupMeasure(group, w)
    dist = tv_norm(smooth - base.cutoff())
    return SmoothedCutoff(smooth, inner, steps, kappa, dist)


# ----------------------------------------------------------------------
# annihilator classes


def class_threshold(eta: float) -> float:
    """Largest ``||theta||`` with ``|1 - e(theta)| <= eta``."""
    if eta >= 2.0:
        return 0.5
    return math.asin(eta / 2.0) / math.pi


def max_valuation(group: Group, members, candidates=None, stop_above: float | None = None,
                  chunk_elems: int = 1 << 22) -> np.ndarray:
    """``max_{x in members} L ||gamma(x)||`` for each candidate character.

    With ``stop_above`` set, candidates whose running maximum already exceeds
    it are dropped early (their value is then only a lower bound).
    """
    members = np.asarray(members, dtype=np.int64)
    cand = np.arange(group.order) if candidates is None else np.asarray(candidates, dtype=np.int64)
    out = np.zeros(cand.size, dtype=np.int64)
    if members.size == 0 or cand.size == 0:
        return out
    alive = np.ones(cand.size, dtype=bool)
    step = max(1, chunk_elems // max(cand.size, 1))
    L = group.exponent
    for start in range(0, members.size, step):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        r = pair_numerators(group, cand[idx], members[start:start + step])
        v = np.minimum(r, L - r).max(axis=1)
        out[idx] = np.maximum(out[idx], v)
        if stop_above is not None:
            alive[idx[out[idx] > stop_above]] = False
    return out


def annihilates(bohr: BohrSet, gammas, eta: float) -> np.ndarray:
    """Mask of ``gamma`` with ``|1 - gamma(x)| <= eta`` for every ``x`` in the set."""
    limit = class_threshold(eta) * bohr.group.exponent * (1 + 1e-12) + 1e-9
    v = max_valuation(bohr.group, bohr.members, gammas, stop_above=limit)
    return v <= limit


def annihilator_class(bohr: BohrSet, eta: float) -> CharacterSet:
    """``{gamma : |1 - gamma(x)| <= eta for all x in B}``, ordered by index."""
    ok = annihilates(bohr, np.arange(bohr.group.order), eta)
    return CharacterSet(bohr.group, tuple(np.flatnonzero(ok)))


def cutoff_spectrum(bohr: BohrSet, eta: float, tol: float = DEFAULT.tol) -> np.ndarray:
    """Characters with ``|betahat| >= eta``."""
    mags = fourier(bohr.cutoff()).magnitudes
    return np.flatnonzero(mags >= eta * (1.0 - tol))


def nest_delta(group: Group, gamma, delta: float, eta1: float, eta2: float,
               consts: Constants = DEFAULT, start: float | None = None) -> float:
    """A width ``delta'`` with ``{|betahat| >= eta1} <= class(B(Gamma, delta'), eta2)``.

    Searches downward by halving from ``eta1 eta2 delta / d`` and checks the
    inclusion exhaustively at each step.
    """
    profile = BohrProfile(group, gamma)
    base = _bohr(group, gamma, delta, profile)
    large = cutoff_spectrum(base, eta1, consts.tol)
    d = max(len(profile.gamma), 1)
    cand = eta1 * eta2 * delta / d if start is None else start
    floor_reached = False
    for _ in range(consts.width_search_steps):
        inner = _bohr(group, gamma, cand, profile)
        if annihilates(inner, large, eta2).all():
            return cand
        if floor_reached:
            break
        cand /= 2.0
        floor_reached = cand * group.exponent < 0.5
    raise WidthUnderflowError("no width below the group resolution gives the required inclusion")


# ----------------------------------------------------------------------
# local analysis


def _translated_weights(bohr: BohrSet, x0: int) -> np.ndarray:
    w = bohr.cutoff().weights
    return bohr.group.roll(w, int(x0))


def local_fourier(f: GroupFunction, x0: int, bohr: BohrSet, weights: np.ndarray | None = None) -> Spectrum:
    """Transform of the measure ``f d(x0 + beta)``."""
    w = _translated_weights(bohr, x0) if weights is None else weights
    return fourier(GroupMeasure(f.group, f.values * w))


def local_norm(f: GroupFunction, x0: int, bohr: BohrSet, p) -> float:
    """``L^p(x0 + beta)`` norm; ``p`` may be ``inf``."""
    w = _translated_weights(bohr, x0)
    v = np.abs(f.values)
    if p in (math.inf, "inf", "Linf"):
        return float(v[w > 0].max())
    p = float(p)
    if p < 1:
        raise ParameterError("p must be at least 1")
    return float(np.sum(w * v**p) ** (1.0 / p))


def local_sup(f: GroupFunction, bohr: BohrSet, x0: int = 0) -> float:
    members = bohr.group.add(bohr.members, x0)
    return float(np.abs(f.values[members]).max())


def require_nonzero_on(f: GroupFunction, bohr: BohrSet, x0: int = 0) -> float:
    s = local_sup(f, bohr, x0)
    if s == 0.0:
        raise DegenerateInputError("function vanishes on the Bohr set")
    return s


def check_density(bohr: BohrSet) -> None:
    if bohr.density < bohr.density_bound() * (1 - 1e-12):
        raise VerificationError(f"density {bohr.density} below delta^d = {bohr.density_bound()}")
