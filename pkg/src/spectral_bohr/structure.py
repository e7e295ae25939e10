"""Covering large spectra by spans of dissociated sets.

Each routine picks a small set ``Lambda`` whose span (plus a thickening
set, locally) contains a large spectrum, and reports the size of
``Lambda`` against a logarithmic budget.  The size bounds are certified
from an explicit pairing ``<f, mu>`` with an auxiliary measure ``mu``;
both sides of that sandwich are computed and recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bohr import (
    BohrProfile,
    BohrSet,
    RegularBohrSet,
    _bohr,
    annihilates,
    cutoff_spectrum,
    find_regular,
    nest_delta,
    require_nonzero_on,
    smoothed_cutoff,
)
from .config import DEFAULT, Constants
from .dissociation import max_dissociated_subset, require_dissociated
from .errors import (
    ParameterError,
    RegularityError,
    VerificationError,
    WidthUnderflowError,
    WrongGroupKindError,
)
from .f2 import F2Basis
from .groups import (
    CharacterSet,
    Group,
    GroupFunction,
    GroupMeasure,
    Spectrum,
    a_ratio,
    convolve,
    fourier,
    norm,
    pair,
    tv_norm,
)
from .riesz import aux_measure_with_report
from .spectra import above, large_spectrum, order_by_magnitude


@dataclass(frozen=True, eq=False)
class CoverResult:
    """``Lambda`` covering ``target``; ``measured_constant = |Lambda| / budget``."""

    target: CharacterSet
    lam: CharacterSet
    budget: float
    measured_constant: float
    constant_cap: float
    covered: bool
    capped: bool = False
    details: dict = field(default_factory=dict)


def _check_eps(eps: float):
    if not 0.0 < eps <= 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1], got {eps}")


def _finish(target, sel, budget, cap, details=None) -> CoverResult:
    lam = sel.chosen
    c = len(lam) / budget
    res = CoverResult(target, lam, budget, c, cap, sel.covered, sel.capped, details or {})
    if not sel.covered:
        raise VerificationError("large spectrum is not contained in the span of the chosen set")
    if c > cap:
        raise VerificationError(f"measured constant {c:.3f} exceeds the cap {cap}")
    return res


def chang_cover(f: GroupFunction, eps: float, consts: Constants = DEFAULT) -> CoverResult:
    """Cover the L1 large spectrum; budget ``eps^-2 (1 + log(||f||_2 / ||f||_1))``."""
    _check_eps(eps)
    spec = large_spectrum(f, eps, "l1", consts)
    sel = max_dissociated_subset(f.group, spec.characters.members, [0], consts=consts)
    ratio = norm(f, "L2") / norm(f, "L1")
    budget = (1.0 + math.log(ratio)) / eps**2
    return _finish(spec.characters, sel, budget, consts.c_chang, {"l2_over_l1": ratio})


def ag_cover(f: GroupFunction, eps: float, consts: Constants = DEFAULT) -> CoverResult:
    """Cover the L-infinity large spectrum; budget ``eps^-1 (1 + log A_f)``."""
    _check_eps(eps)
    spec = large_spectrum(f, eps, "linf", consts)
    sel = max_dissociated_subset(f.group, spec.characters.members, [0], consts=consts)
    af = a_ratio(f)
    budget = (1.0 + math.log(af)) / eps
    return _finish(spec.characters, sel, budget, consts.c_ag, {"a_ratio": af})


# ----------------------------------------------------------------------
# certification through a pairing with an auxiliary measure


@dataclass(frozen=True)
class CertificationLedger:
    """``lower <= |<f, mu>| <= upper`` together with the size bound it implies."""

    eta: float
    lower: float
    value: float
    upper: float
    mu_norm: float
    lam_size: int
    implied_bound: float
    measured_constant: float
    on_target_defect: float
    holds: bool
    chain_sup: float | None = None
    chain_probes: tuple = ()


def dissprop_certify(f: GroupFunction, lam, eps: float, consts: Constants = DEFAULT) -> CertificationLedger:
    """Certify ``|Lambda| << eps^-1 (1 + log A_f)`` for dissociated ``Lambda`` in the large spectrum.

    With ``eta = 1/A_f`` and ``mu`` interpolating the phases of ``fhat`` on
    ``Lambda``: ``|Lambda| eps ||f||_inf - eta ||f||_A <= |<f, mu>| <= ||f||_inf ||mu||``.
    """
    _check_eps(eps)
    group = f.group
    lam = [int(v) for v in lam]
    require_dissociated(group, lam, consts)
    spec = fourier(f)
    sup = norm(f, "Linf")
    a_norm = norm(spec, "A")
    af = a_ratio(f)
    mags = spec.magnitudes[lam] if lam else np.zeros(0)
    if np.any(mags < eps * sup * (1.0 - consts.tol)):
        raise ParameterError("every character of Lambda must lie in the large spectrum")
    eta = 1.0 / af
    omega = spec.coeffs[lam] / mags if lam else np.zeros(0, dtype=complex)
    mu, report = aux_measure_with_report(group, lam, omega, eta, consts)
    direct = pair(f, mu)
    via_fourier = complex(np.sum(spec.coeffs * np.conj(fourier(mu).coeffs)))
    scale = max(1.0, sup * report.total_variation)
    if abs(direct - via_fourier) > 1e-9 * scale:
        raise VerificationError("pairing disagrees between space and frequency sides")
    value = abs(direct)
    lower = len(lam) * eps * sup - eta * a_norm
    upper = sup * report.total_variation
    slack = 1e-9 * scale
    holds = lower - slack <= value <= upper + slack
    implied = (report.total_variation + 1.0) / eps
    ledger = CertificationLedger(
        eta, lower, value, upper, report.total_variation, len(lam), implied,
        len(lam) * eps / (1.0 + math.log(af)), report.on_target_defect, holds,
    )
    if not holds:
        raise VerificationError(f"certification sandwich failed: {ledger}")
    return ledger


# ----------------------------------------------------------------------
# local covering on a regular Bohr set


def _regular_near(group: Group, gamma, target: float, consts: Constants, profile: BohrProfile) -> RegularBohrSet:
    last = None
    for _ in range(8):
        try:
            return find_regular(group, gamma, target, consts, profile)
        except RegularityError as exc:
            last = exc
            target /= 2.0
    raise last


def dual_correlation(group: Group, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``c(gamma) = sum_lambda a(lambda) b(lambda - gamma)`` over the dual group."""
    b_rev = b[group.neg(np.arange(group.order))]
    fa = np.fft.fftn(a.reshape(group.shape))
    fb = np.fft.fftn(b_rev.reshape(group.shape))
    return np.real(np.fft.ifftn(fa * fb)).reshape(group.order)


@dataclass(frozen=True, eq=False)
class LocalCoverResult:
    lam: CharacterSet
    delta_prime: float
    cover: CoverResult
    ledger: CertificationLedger | None
    kappa: float
    inner_delta: float
    steps: int
    growth_cap: int
    thickening_size: int


def _local_certify(f, bohr, smooth, lam, sup, a_norm, af, consts) -> CertificationLedger:
    group = f.group
    lam = list(lam)
    if lam:
        q = np.prod(1.0 + np.real(group.characters(lam)), axis=0)
    else:
        q = np.ones(group.order)
    q_fun = GroupFunction(group, q)
    q_hat = np.real(fourier(q_fun).coeffs)
    bt = smooth.measure
    bt_hat = fourier(bt).coeffs
    chain = dual_correlation(group, np.abs(q_hat), np.abs(bt_hat))
    chain_sup = float(chain.max())
    probes = np.unique(np.linspace(0, group.order - 1, consts.crty_probes).astype(np.int64))
    local = fourier(GroupMeasure(group, f.values * bt.weights))
    eta = 1.0 / af
    if lam:
        mags = local.magnitudes[lam]
        omega = local.coeffs[lam] / np.where(mags > 0, mags, 1.0)
    else:
        mags = np.zeros(0)
        omega = np.zeros(0, dtype=complex)
    mu, report = aux_measure_with_report(group, lam, omega, eta, consts)
    h = convolve(q_fun, mu)
    value_c = complex(np.sum(f.values * bt.weights * np.conj(h.values)))
    via_fourier = complex(np.sum(local.coeffs * np.conj(fourier(mu).coeffs * q_hat)))
    smear = float(convolve(q_fun, bt).values.max())
    upper = sup * report.total_variation * smear
    scale = max(1.0, upper, a_norm)
    if abs(value_c - via_fourier) > 1e-9 * scale:
        raise VerificationError("local pairing disagrees between space and frequency sides")
    value = abs(value_c)
    lower = 0.5 * float(mags.sum()) - 2.0 * eta * a_norm
    slack = 1e-9 * scale
    holds = lower - slack <= value <= upper + slack and chain_sup <= 2.0 + 1e-9
    eps_lam = float(mags.min()) / sup if lam else 1.0
    implied = (2.0 * report.total_variation * smear + 4.0) / max(eps_lam, 1e-300)
    ledger = CertificationLedger(
        eta, lower, value, upper, report.total_variation, len(lam), implied,
        len(lam) * eps_lam / (1.0 + math.log(af)), report.on_target_defect, holds,
        chain_sup, tuple(float(chain[p]) for p in probes),
    )
    if not holds:
        raise VerificationError(f"local certification failed: {ledger}")
    return ledger


def local_ag_cover(f: GroupFunction, reg: RegularBohrSet, eps: float, eta: float,
                   consts: Constants = DEFAULT, x0: int = 0, certify: bool = True) -> LocalCoverResult:
    """Cover the local large spectrum of ``f`` on ``x0 + B(Gamma, delta)``.

    The local spectrum ``{gamma : |(f d(x0 + beta))^(gamma)| >= eps ||f||_{L^inf(x0+B)}}``
    is placed inside ``class(B(Gamma u Lambda, delta'), eta)`` with
    ``Lambda`` S-dissociated for ``S = {|betahat''| >= 1/3}``, where ``beta''`` is
    the cutoff of a narrow regular Bohr set used to smooth ``beta``.
    """
    _check_eps(eps)
    if not 0.0 < eta <= 2.0:
        raise ParameterError(f"eta must lie in (0, 2], got {eta}")
    group = f.group
    if x0:
        f = f.translate(x0)
    bohr = reg.bohr
    gamma = list(reg.gamma)
    d = max(len(gamma), 1)
    sup = require_nonzero_on(f, bohr)
    a_norm = norm(f, "A")
    af = a_norm / sup
    beta = bohr.cutoff()
    local = fourier(GroupMeasure(group, f.values * beta.weights))
    delta_set = order_by_magnitude(local, above(local.magnitudes, eps * sup, consts.tol))
    log_term = 1.0 + math.log(af)
    growth_cap = math.ceil(consts.c_local * log_term / eps) + 1
    steps = 2 * growth_cap
    profile = BohrProfile(group, gamma)

    kappa_target = min(1.0, eps / (4.0 * d))
    smooth = None
    for _ in range(consts.width_search_steps):
        inner_reg = _regular_near(group, gamma, kappa_target * reg.delta / steps, consts, profile)
        kappa = inner_reg.delta * steps / reg.delta
        smooth = smoothed_cutoff(group, gamma, reg.delta, steps, kappa, profile)
        if smooth.distance <= eps / 2.0:
            break
        kappa_target /= 2.0
    else:
        raise VerificationError("could not smooth the cutoff within eps/2")
    inner = inner_reg.bohr

    thickening = cutoff_spectrum(inner, 1.0 / 3.0, consts.tol)
    sel = max_dissociated_subset(group, delta_set, thickening, limit=growth_cap, consts=consts)
    lam = list(sel.chosen)

    delta_a = eta / (4.0 * math.pi * len(lam)) if lam else 1.0
    delta_b = nest_delta(group, gamma, inner.delta, 1.0 / 3.0, eta / 2.0, consts)
    delta_p = min(delta_a, delta_b, inner.delta)
    full = list(CharacterSet(group, tuple(gamma)).union(lam))
    full_profile = BohrProfile(group, full)
    covered = False
    for _ in range(consts.width_search_steps):
        target = _bohr(group, full, delta_p, full_profile)
        if annihilates(target, delta_set, eta).all():
            covered = True
            break
        if delta_p * group.exponent < 0.5:
            break
        delta_p /= 2.0
    if not covered and not sel.capped:
        raise WidthUnderflowError("local spectrum not captured even below the group resolution")

    budget = log_term / eps
    cover = CoverResult(
        CharacterSet(group, tuple(int(v) for v in delta_set)), sel.chosen, budget,
        len(lam) / budget, consts.c_local, covered, sel.capped,
        {"a_ratio": af, "thickening": int(thickening.size)},
    )
    ledger = _local_certify(f, bohr, smooth, lam, sup, a_norm, af, consts) if certify else None
    return LocalCoverResult(sel.chosen, delta_p, cover, ledger, kappa, inner.delta, steps,
                            growth_cap, int(thickening.size))


# ----------------------------------------------------------------------
# the model setting: cosets of subspaces of (Z/2)^n


def _require_boolean(group: Group, consts: Constants):
    if not group.is_boolean:
        raise WrongGroupKindError("this routine needs a power of Z/2")
    if group.rank > consts.model_dimension_cap:
        raise ParameterError(f"dimension {group.rank} exceeds the cap {consts.model_dimension_cap}")


def subspace_transform(f: GroupFunction, basis: F2Basis, x0: int = 0):
    """Transform of ``f d mu_{x0 + V}`` with ``V`` the annihilator of the span of ``basis``.

    Returns the spectrum and the coset mask.
    """
    from .f2 import coset_keys

    group = f.group
    keys = coset_keys(basis, group.order)
    mask = keys == keys[int(x0)]
    size = int(np.count_nonzero(mask))
    w = np.where(mask, 1.0 / size, 0.0)
    return fourier(GroupMeasure(group, f.values * w)), mask


def cover_modulo(chars, basis: F2Basis, refined: bool) -> list[int]:
    """Characters so that ``chars`` lies in ``span(basis + result)``.

    Plain: one representative per coset of the span that is not the span
    itself.  Refined: a greedy basis of ``chars`` modulo the span.
    """
    out = []
    if refined:
        work = basis.copy()
        for g in chars:
            if work.add(int(g)):
                out.append(int(g))
        return out
    seen = set()
    reduced = basis.reduce_many(np.asarray(list(chars), dtype=np.int64)) if len(chars) else []
    for g, r in zip(chars, reduced):
        r = int(r)
        if r == 0 or r in seen:
            continue
        seen.add(r)
        out.append(int(g))
    return out


def model_local_cover(f: GroupFunction, gamma, eps: float, refined: bool = False, x0: int = 0,
                      consts: Constants = DEFAULT):
    """Cover the local large spectrum on the coset ``x0 + Gamma^perp``.

    Returns ``(Lambda, report)``.  Plain mode satisfies
    ``|Lambda| <= eps^-1 A_loc``; refined mode picks an independent set and
    reports ``|Lambda| eps / (1 + log A_loc)``.
    """
    _check_eps(eps)
    group = f.group
    _require_boolean(group, consts)
    basis = F2Basis(gamma)
    local, mask = subspace_transform(f, basis, x0)
    sup = float(np.abs(f.values[mask]).max())
    if sup == 0.0:
        from .errors import DegenerateInputError

        raise DegenerateInputError("function vanishes on the coset")
    chars = order_by_magnitude(local, above(local.magnitudes, eps * sup, consts.tol))
    lam = cover_modulo(chars, basis, refined)
    restricted = GroupFunction(group, np.where(mask, f.values, 0.0))
    a_loc = norm(restricted, "A") / sup
    final = basis.copy()
    for g in lam:
        final.add(g)
    covered = all(final.contains(int(g)) for g in chars)
    if not covered:
        raise VerificationError("local spectrum not inside the enlarged span")
    report = {
        "spectrum_size": int(len(chars)),
        "lam_size": len(lam),
        "a_local": a_loc,
        "plain_bound": a_loc / eps,
        "measured_constant": len(lam) * eps / (1.0 + math.log(a_loc)),
        "refined": refined,
    }
    if not refined and len(lam) > a_loc / eps * (1 + consts.tol):
        raise VerificationError(f"plain cover of size {len(lam)} exceeds eps^-1 A_loc = {a_loc / eps}")
    return CharacterSet(group, tuple(lam)), report
