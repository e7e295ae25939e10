"""Energy-increment approximation of bounded functions.

Both iterations grow a frequency set ``Gamma`` until ``f`` is
L2-approximated on every translate of a structured set:

* ``f2n_approximate`` works with subspaces ``V = Gamma^perp`` of ``(Z/2)^n``;
* ``bohr_approximate`` works with Bohr sets on any group.

Progress is tracked through an A-mass ledger ``L_k``: the sum of ``|fhat|``
over the frequencies already captured.  ``L_k <= ||f||_A`` and every failed
round raises it by an explicitly computed amount, which bounds the number of
rounds.  Each round's numbers are recorded in a :class:`RoundRecord`.
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
    find_regular,
)
from .config import DEFAULT, Constants
from .errors import (
    DegenerateInputError,
    ParameterError,
    RoundBudgetError,
    SizeCapError,
    VerificationError,
    WidthUnderflowError,
    WrongGroupKindError,
)
from .f2 import F2Basis, coset_keys, span_mask
from .groups import (
    CharacterSet,
    Group,
    GroupFunction,
    GroupMeasure,
    convolve,
    cyclic,
    fourier,
    norm,
)
from .structure import cover_modulo, local_ag_cover, subspace_transform, _regular_near
from .spectra import order_by_magnitude

SLACK = 1e-12


@dataclass(frozen=True)
class RoundRecord:
    round: int
    frequencies: int
    codim: int | None
    delta: float | None
    delta_prime: float | None
    ledger: float
    local_error: float
    worst_point: int
    eps_prime: float | None = None
    sup_ratio: float | None = None
    s_index: int | None = None
    class_sizes: tuple = ()
    branch: str | None = None
    lam_size: int = 0
    required_increment: float | None = None
    increment: float | None = None
    underflow: bool = False


@dataclass(frozen=True, eq=False)
class ApproxResult:
    mode: str
    epsilon: float
    a_ratio: float
    gamma: CharacterSet
    rounds: list
    l2_error: float
    dimension: int
    delta: float | None = None
    delta_prime: float | None = None
    oscillation: float | None = None
    bound: float | None = None
    measured_constant: float | None = None
    verified: bool = True
    extras: dict = field(default_factory=dict)

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)


def round_budget(eps: float, af: float, consts: Constants = DEFAULT) -> int:
    """Hard cap ``4 ceil(eps^-2 A_f (1 + log(A_f / eps)))``."""
    return consts.round_budget_factor * math.ceil(af / eps**2 * (1.0 + math.log(af / eps)))


def _prepare(f: GroupFunction, eps: float):
    if not 0.0 < eps <= 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1], got {eps}")
    sup = norm(f, "Linf")
    if sup == 0.0:
        raise DegenerateInputError("cannot approximate the zero function relative to its sup norm")
    spec = fourier(f)
    a_norm = float(spec.magnitudes.sum())
    return sup, spec, a_norm, a_norm / sup


# ----------------------------------------------------------------------
# subspaces of (Z/2)^n


def dyadic_index(values: np.ndarray, sup: float) -> np.ndarray:
    """``s`` with ``2^-s sup < v <= 2^-(s-1) sup``."""
    with np.errstate(divide="ignore"):
        t = np.log2(sup / values)
    s = np.floor(t).astype(np.int64) + 1
    # repair rounding right at the class boundaries
    hi = values > 2.0 ** (-(s - 1)) * sup
    s[hi] -= 1
    lo = values <= 2.0 ** (-s) * sup
    s[lo] += 1
    return s


def f2n_approximate(f: GroupFunction, eps: float, refined: bool = False,
                    consts: Constants = DEFAULT) -> ApproxResult:
    """Subspace ``V`` with ``sup_x ||f - f * mu_V||_{L2(x + V)} <= eps ||f||_inf``.

    Plain mode guarantees ``codim V <= 8 eps^-4 A_f^3``.  Refined mode adds
    only a dyadic slice of the local spectrum each round and reports its
    constant against ``eps^-2 A_f (1 + log A_f)(1 + log(A_f / eps))``.
    """
    group = f.group
    if not group.is_boolean:
        raise WrongGroupKindError("f2n_approximate needs a power of Z/2")
    if group.rank > consts.model_dimension_cap:
        raise SizeCapError(f"dimension {group.rank} exceeds the cap {consts.model_dimension_cap}")
    sup, spec, a_norm, af = _prepare(f, eps)
    mags = spec.magnitudes
    budget = round_budget(eps, af, consts)
    basis = F2Basis()
    gamma = [0]
    ledger = float(mags[0])
    records = []
    vals = f.values
    n_classes = int(math.floor(2.0 + math.log2(af / eps**2))) + 1
    for k in range(budget + 1):
        keys = coset_keys(basis, group.order)
        counts = np.bincount(keys)
        avg_r = np.bincount(keys, weights=np.real(vals)) / np.maximum(counts, 1)
        if np.iscomplexobj(vals):
            avg = avg_r + 1j * np.bincount(keys, weights=np.imag(vals)) / np.maximum(counts, 1)
        else:
            avg = avg_r
        g_vals = vals - avg[keys]
        sq = np.bincount(keys, weights=np.abs(g_vals) ** 2) / np.maximum(counts, 1)
        per_coset = np.sqrt(sq)
        worst_key = int(np.argmax(per_coset))
        err = float(per_coset[worst_key])
        x_worst = int(np.flatnonzero(keys == worst_key)[0])
        if err <= eps * sup * (1.0 + SLACK):
            records.append(RoundRecord(k, len(gamma), len(basis), None, None, ledger, err, x_worst))
            break
        if k == budget:
            raise RoundBudgetError(f"no convergence within {budget} rounds")
        g = GroupFunction(group, g_vals)
        gsup = float(np.abs(g_vals[keys == worst_key]).max())
        local, _ = subspace_transform(g, basis, x_worst)
        lm = local.magnitudes
        eps_p = 0.5 * eps**2 / af * sup / gsup
        big = np.flatnonzero(lm > eps_p * gsup)
        g_hat = np.where(span_mask(basis, group.order), 0.0, mags)
        s_index = None
        sizes: tuple = ()
        if refined:
            s = dyadic_index(lm[big], sup)
            if s.size and (s.min() < 0 or s.max() >= n_classes):
                raise VerificationError("dyadic classes do not cover the local spectrum")
            weight = np.bincount(s, weights=lm[big] * g_hat[big], minlength=n_classes)
            sizes = tuple(int(c) for c in np.bincount(s, minlength=n_classes))
            s_index = int(np.argmax(weight))
            chosen = big[s == s_index]
            required = 2.0 ** (s_index - 1) * weight[s_index] / sup
        else:
            chosen = big
            required = 0.25 * eps**2 * sup
        chosen = order_by_magnitude(local, chosen)
        lam = cover_modulo(chosen, basis, refined)
        for g_new in lam:
            basis.add(g_new)
            gamma.append(int(g_new))
        new_ledger = float(mags[span_mask(basis, group.order)].sum())
        inc = new_ledger - ledger
        if inc < required - SLACK * max(1.0, a_norm):
            raise VerificationError(f"ledger rose by {inc}, less than the guaranteed {required}")
        records.append(RoundRecord(
            k, len(gamma), len(basis), None, None, ledger, err, x_worst, eps_p, gsup / sup,
            s_index, sizes, None, len(lam), required, inc,
        ))
        ledger = new_ledger
    codim = len(basis)
    plain_bound = 8.0 * af**3 / eps**4
    scale = af / eps**2 * (1.0 + math.log(af)) * (1.0 + math.log(af / eps))
    if not refined and codim > plain_bound * (1 + SLACK):
        raise VerificationError(f"codimension {codim} exceeds 8 eps^-4 A_f^3 = {plain_bound}")
    return ApproxResult(
        "refined" if refined else "plain", eps, af,
        CharacterSet(group, tuple(dict.fromkeys(gamma))), records, records[-1].local_error, codim,
        bound=plain_bound if not refined else scale,
        measured_constant=codim / scale if refined else codim / plain_bound,
        extras={"basis": tuple(basis.vectors)},
    )


# ----------------------------------------------------------------------
# Bohr sets on general groups


def oscillation(F: GroupFunction, bohr: BohrSet, stop_above: float | None = None) -> float:
    """``sup_x sup_{y in B} |F(x + y) - F(x)|``."""
    group = F.group
    vals = F.values
    if np.ptp(np.real(vals)) == 0 and np.ptp(np.imag(vals)) == 0:
        return 0.0
    ys = bohr.members
    ys = ys[ys <= group.neg(ys)]  # B is symmetric; y and -y give the same value
    coords = group.element_coords
    mods = np.asarray(group.factors)
    worst = 0.0
    chunk = max(1, (1 << 22) // group.order)
    for start in range(0, ys.size, chunk):
        yc = group.coords(ys[start:start + chunk])
        idx = group.index((coords[None, :, :] + yc[:, None, :]) % mods)
        worst = max(worst, float(np.abs(vals[idx] - vals[None, :]).max()))
        if stop_above is not None and worst > stop_above:
            break
    return worst


def _oscillation_width(F: GroupFunction, reg: RegularBohrSet, limit: float, eps: float,
                       consts: Constants, profile: BohrProfile):
    d = max(reg.rank, 1)
    target = eps * reg.delta / (2.0 * d)
    for _ in range(consts.width_search_steps):
        cand = _regular_near(F.group, list(reg.gamma), target, consts, profile)
        osc = oscillation(F, cand.bohr, stop_above=limit * (1 + SLACK))
        if osc <= limit * (1 + SLACK):
            return cand, osc
        target /= 2.0
    raise VerificationError("no width gives the oscillation bound")


def local_l2(g: GroupFunction, bohr: BohrSet) -> np.ndarray:
    """``x -> ||g||_{L2(x + B)}`` for every ``x``."""
    sq = GroupFunction(g.group, np.abs(g.values) ** 2)
    v = np.real(convolve(sq, bohr.cutoff()).values)
    return np.sqrt(np.maximum(v, 0.0))


def ledger_mass(mags: np.ndarray, bohr: BohrSet, eta: float) -> float:
    ok = annihilates(bohr, np.arange(bohr.group.order), eta)
    return float(mags[ok].sum())


def bohr_approximate(f: GroupFunction, eps: float, consts: Constants = DEFAULT,
                     strict_width: bool = False) -> ApproxResult:
    """Regular ``B(Gamma, delta)`` and narrower ``delta'`` with

    * ``sup_x ||f - f * beta||_{L2(x + B(Gamma, delta'))} <= eps ||f||_inf`` and
    * ``sup_x ||f * beta - f * beta(x)||_{L^inf(x + B(Gamma, delta'))} <= eps ||f||_inf``,

    both verified exhaustively.  When widths drop below the group resolution
    the Bohr sets become subgroups; this is recorded per round and raises
    :class:`WidthUnderflowError` only with ``strict_width=True``.
    """
    group = f.group
    if group.order > consts.iteration_order_cap:
        raise SizeCapError(f"|G| = {group.order} exceeds the iteration cap {consts.iteration_order_cap}")
    sup, spec, a_norm, af = _prepare(f, eps)
    mags = spec.magnitudes
    eta = consts.c_eta * eps**3 / af**2
    budget = round_budget(eps, af, consts)
    m_log = 3.0 + math.log2(af / eps**2)
    n_classes = int(math.floor(m_log)) + 1
    gamma = [0]
    profile = BohrProfile(group, gamma)
    reg = find_regular(group, gamma, 1.0, consts, profile)
    ledger = ledger_mass(mags, reg.bohr, eta)
    records = []
    result = None
    for k in range(budget + 1):
        beta = reg.bohr.cutoff()
        F = convolve(f, beta)
        inner, osc = _oscillation_width(F, reg, eps * sup, eps, consts, profile)
        g = f - F
        errs = local_l2(g, inner.bohr)
        x_worst = int(np.argmax(errs))
        err = float(errs[x_worst])
        under = reg.bohr.underflow
        if err <= eps * sup * (1.0 + SLACK):
            records.append(RoundRecord(k, len(gamma), None, reg.delta, inner.delta, ledger, err, x_worst,
                                       underflow=under))
            result = (reg, inner, err, osc)
            break
        if k == budget:
            raise RoundBudgetError(f"no convergence within {budget} rounds")
        members = group.add(inner.bohr.members, x_worst)
        gsup = float(np.abs(g.values[members]).max())
        w = group.roll(inner.bohr.cutoff().weights, x_worst)
        local = fourier(GroupMeasure(group, g.values * w))
        lm = local.magnitudes
        eps_p = 0.25 * eps**2 / af * sup / gsup
        big = np.flatnonzero(lm > eps_p * gsup)
        g_hat = fourier(g).magnitudes
        s = dyadic_index(lm[big], sup)
        if s.size and (s.min() < 0 or s.max() >= n_classes):
            raise VerificationError("dyadic classes do not cover the local spectrum")
        weight = np.bincount(s, weights=lm[big] * g_hat[big], minlength=n_classes)
        sizes = tuple(int(c) for c in np.bincount(s, minlength=n_classes))
        small = np.array([2.0**j <= m_log for j in range(n_classes)])
        if weight[small].sum() >= 0.25 * eps**2 * sup**2:
            branch = "small-s"
            score = np.where(small, weight * 2.0 ** np.arange(n_classes), -1.0)
        else:
            branch = "large-s"
            score = np.where(~small, weight, -1.0)
        s_index = int(np.argmax(score))
        chosen = big[s == s_index]
        floor_inc = 0.5 * (2.0 ** (s_index - 1) * weight[s_index] / sup - eta * a_norm)
        required = 0.5 * (float(g_hat[chosen].sum()) - eta * ledger)
        if floor_inc <= 0:
            raise VerificationError("chosen class does not guarantee a positive increment")
        eps_loc = min(1.0, 2.0 ** (-s_index) * sup / gsup)
        cover = local_ag_cover(g, inner, eps_loc, eta, consts, x0=x_worst)
        new_gamma = list(CharacterSet(group, tuple(gamma)).union(cover.lam))
        new_profile = BohrProfile(group, new_gamma)
        new_reg = _regular_near(group, new_gamma, cover.delta_prime, consts, new_profile)
        if not annihilates(new_reg.bohr, chosen, eta).all():
            raise VerificationError("chosen class escaped the new annihilator class")
        new_ledger = ledger_mass(mags, new_reg.bohr, eta)
        inc = new_ledger - ledger
        if inc < required - SLACK * max(1.0, a_norm) or inc <= 0:
            raise VerificationError(f"ledger rose by {inc}, less than the guaranteed {required}")
        if strict_width and new_reg.bohr.underflow:
            raise WidthUnderflowError("group too small for parameters")
        records.append(RoundRecord(
            k, len(gamma), None, reg.delta, inner.delta, ledger, err, x_worst, eps_p, gsup / sup,
            s_index, sizes, branch, len(cover.lam), required, inc, under,
        ))
        gamma, profile, reg, ledger = new_gamma, new_profile, new_reg, new_ledger
    reg, inner, err, osc = result
    d = len(gamma)
    scale = af / eps**2 * (1.0 + math.log(af / eps))
    return ApproxResult(
        "bohr", eps, af, CharacterSet(group, tuple(gamma)), records, err, d,
        delta=reg.delta, delta_prime=inner.delta, oscillation=osc,
        bound=float(budget), measured_constant=d / scale,
        extras={
            "eta": eta,
            "regularity_constant": reg.constant,
            "log_inv_delta": math.log(1.0 / reg.delta),
            "underflow": reg.bohr.underflow,
        },
    )


def verify_bohr_clauses(f: GroupFunction, res: ApproxResult) -> dict:
    """Recompute both output clauses from scratch."""
    group = f.group
    sup = norm(f, "Linf")
    outer = _bohr(group, res.gamma.members, res.delta)
    inner = _bohr(group, res.gamma.members, res.delta_prime)
    F = convolve(f, outer.cutoff())
    l2 = float(local_l2(f - F, inner).max())
    osc = oscillation(F, inner)
    tol = res.epsilon * sup * (1 + SLACK)
    return {"l2": l2, "oscillation": osc, "limit": res.epsilon * sup, "ok": l2 <= tol and osc <= tol}


def poor_approximate(f: GroupFunction, eps: float, consts: Constants = DEFAULT) -> ApproxResult:
    """Bohr set from the top of the spectrum with ``||f - f * beta||_inf <= eps ||f||_inf``.

    ``Gamma`` is the shortest prefix of characters by decreasing ``|fhat|``
    whose tail has A-mass at most ``eps ||f||_inf / 3``; the width
    ``eps / (6 pi A_f)`` keeps every ``gamma in Gamma`` within ``eps / (3 A_f)``
    of 1 on the Bohr set.
    """
    group = f.group
    sup, spec, a_norm, af = _prepare(f, eps)
    order = order_by_magnitude(spec, np.arange(group.order))
    tail = a_norm - np.cumsum(spec.magnitudes[order])
    cut = int(np.argmax(tail <= eps * sup / 3.0 * (1 + SLACK))) + 1
    gamma = [int(v) for v in order[:cut]]
    profile = BohrProfile(group, gamma)
    reg = _regular_near(group, gamma, eps / (6.0 * math.pi * af), consts, profile)
    if not annihilates(reg.bohr, gamma, eps / (3.0 * af)).all():
        raise VerificationError("frequencies drift too far on the Bohr set")
    F = convolve(f, reg.bohr.cutoff())
    err = float(np.abs(f.values - F.values).max())
    if err > eps * sup * (1 + SLACK):
        raise VerificationError(f"sup error {err} exceeds eps ||f||_inf")
    return ApproxResult(
        "poor", eps, af, CharacterSet(group, tuple(gamma)), [], err, len(gamma),
        delta=reg.delta, extras={"sup_error": err, "regularity_constant": reg.constant},
    )


# ----------------------------------------------------------------------
# intermediate values and the certificate for sets of residues


def discrete_ivt(f: GroupFunction, y: int, eps: float) -> int:
    """Point ``x`` with ``|f(x) - E f| <= eps ||f||_inf / 2``.

    Requires a real ``f`` on ``Z/N``, ``gcd(y, N) = 1`` and
    ``|f(x + y) - f(x)| <= eps ||f||_inf`` everywhere.  Walking the orbit
    ``0, y, 2y, ...`` the values must cross the mean, and one of the two
    values at the crossing is close enough.
    """
    group = f.group
    if group.rank != 1:
        raise WrongGroupKindError("discrete_ivt works on a cyclic group")
    if np.iscomplexobj(f.values):
        raise ParameterError("discrete_ivt needs a real function")
    n = group.order
    y = int(y) % n
    if y == 0 or math.gcd(y, n) != 1:
        raise ParameterError(f"step {y} must be a unit modulo {n}")
    vals = f.values
    sup = float(np.abs(vals).max())
    steps = np.abs(np.roll(vals, -y) - vals)
    if steps.max() > eps * sup * (1 + 1e-12) + 1e-15:
        raise ParameterError("step condition |f(x+y) - f(x)| <= eps ||f||_inf fails")
    mean = float(vals.mean())
    orbit = (np.arange(n, dtype=np.int64) * y) % n
    close = np.flatnonzero(np.abs(vals[orbit] - mean) <= eps * sup / 2.0 * (1 + 1e-12) + 1e-15)
    if close.size == 0:
        raise VerificationError("no value near the mean along the orbit")
    return int(orbit[close[0]])


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, int(math.isqrt(p)) + 1):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True)
class LittlewoodReport:
    p: int
    size: int
    density: float
    epsilon: float
    a_norm: float
    a_norm_over_log: float
    dimension: int
    delta_prime: float
    certified_lhs: float
    log_p: float
    nonzero_elements: int
    contradiction_avoided: bool
    rounds: int
    reference_lower: float


def littlewood_certificate(p: int, members, consts: Constants = DEFAULT) -> LittlewoodReport:
    """Certify ``d (1 + log(1/delta')) >= log p`` for a set of residues of density in ``[1/4, 3/4]``.

    The Bohr approximation of the indicator leaves no nonzero element in
    ``B(Gamma, delta')``: a nonzero ``y`` would let :func:`discrete_ivt` and the
    two approximation clauses produce a point where the indicator is within
    ``alpha(1 - alpha)`` of ``alpha``, which a 0/1 function cannot do.  That
    chain is run for every nonzero ``y`` found, and completing it is reported
    as an error.
    """
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    group = cyclic(p)
    f = GroupFunction.indicator(group, members)
    size = int(f.values.sum())
    alpha = size / p
    if not 0.25 <= alpha <= 0.75:
        raise ParameterError(f"density {alpha} outside [1/4, 3/4]")
    eps = 0.25 * alpha * (1.0 - alpha)
    res = bohr_approximate(f, eps, consts)
    inner = _bohr(group, res.gamma.members, res.delta_prime)
    nonzero = inner.members[inner.members != 0]
    F = convolve(f, _bohr(group, res.gamma.members, res.delta).cutoff())
    for y in nonzero:
        fs = float(np.abs(F.values).max())
        x = discrete_ivt(GroupFunction(group, np.real(F.values)), int(y), eps / fs)
        near = group.add(inner.members, x)
        gaps = np.abs(f.values[near] - np.real(F.values[near]))
        x2 = int(near[int(np.argmin(gaps))])
        if gaps.min() <= eps and abs(f.values[x2] - alpha) <= alpha * (1 - alpha):
            raise VerificationError(f"contradiction chain completed at y = {y}")
    d = res.dimension
    lhs = d * (1.0 + math.log(1.0 / res.delta_prime))
    log_p = math.log(p)
    if lhs < log_p:
        raise VerificationError(f"d (1 + log 1/delta') = {lhs} < log p = {log_p}")
    a_norm = norm(f, "A")
    reference = math.sqrt(log_p / math.log(log_p) ** 3) if p > 15 else 0.0
    return LittlewoodReport(
        p, size, alpha, eps, a_norm, a_norm / log_p, d, res.delta_prime, lhs, log_p,
        int(nonzero.size), nonzero.size == 0, res.num_rounds, reference,
    )
