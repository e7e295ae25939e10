"""Riesz products, interval measures and auxiliary measures.

For a dissociated ``Lambda`` and weights ``omega`` the Riesz product is

    model (powers of Z/2):  p_omega = prod_lambda (1 + omega(lambda) lambda)
    general:                p_omega = prod_lambda (1 + Re(omega(lambda) lambda)).

Both are nonnegative with mean one when ``|omega| <= 1``, and their
transform is supported on the span of ``Lambda``.  Averaging ``p_{t omega}``
against a signed measure ``tau`` on ``[-1/2, 1/2]`` multiplies the
coefficient at ``m.Lambda`` by the moment of order ``|m|``; choosing ``tau``
with moment one at order 1 and vanishing moments up to ``2l`` gives a
measure whose transform interpolates ``omega`` on ``Lambda`` and is tiny
everywhere else.

Non-hermitian targets are handled by lifting to ``G x Z/4`` where
``(lambda, 1)`` and ``-(lambda, 1) = (-lambda, 3)`` are distinct
characters, so the hermitian constraint disappears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT, Constants
from .dissociation import is_dissociated
from .errors import (
    NotDissociatedError,
    ParameterError,
    SizeCapError,
    VerificationError,
    WrongGroupKindError,
)
from .groups import Group, GroupFunction, GroupMeasure, Spectrum, fourier, tv_norm


def _order_two(group: Group, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=np.int64)
    return group.neg(lam) == lam


@dataclass(frozen=True, eq=False)
class HermitianWeights:
    """Weights ``omega`` on ``Lambda`` with ``|omega| <= 1``.

    The general Riesz product uses ``Re(omega lambda)``, which implicitly sets
    ``omega(-lambda) = conj(omega(lambda))``; for characters of order two this
    forces ``omega`` to be real.
    """

    group: Group
    lam: tuple
    values: np.ndarray

    def __post_init__(self):
        lam = tuple(int(v) for v in self.group.check_index(self.lam))
        vals = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != len(lam):
            raise ParameterError(f"{vals.size} weights for {len(lam)} characters")
        if vals.size and np.abs(vals).max() > 1.0 + 1e-12:
            raise ParameterError("weights must lie in the closed unit disc")
        two = _order_two(self.group, lam) if lam else np.zeros(0, dtype=bool)
        if np.any(np.abs(vals[two].imag) > 1e-12):
            raise ParameterError("weights on characters of order two must be real")
        neg = set(int(v) for v in self.group.neg(np.asarray(lam, dtype=np.int64))) if lam else set()
        for i, g in enumerate(lam):
            if g in neg and not two[i]:
                raise ParameterError("Lambda contains a character and its inverse")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "values", vals)

    def scaled(self, t: float) -> "HermitianWeights":
        return HermitianWeights(self.group, self.lam, self.values * t)


def _check_mode(group: Group, mode: str):
    if mode not in ("model", "general"):
        raise ParameterError(f"mode must be 'model' or 'general', got {mode!r}")
    if mode == "model" and not group.is_boolean:
        raise WrongGroupKindError("model mode needs a power of Z/2")


def _factor_matrix(group: Group, lam, omega, mode: str) -> np.ndarray:
    """Rows ``Re(omega_i lambda_i(x))`` (general) or ``omega_i lambda_i(x)`` (model)."""
    if not len(lam):
        return np.zeros((0, group.order))
    chars = group.characters(list(lam))
    prod = np.asarray(omega, dtype=np.complex128)[:, None] * chars
    return np.real(prod)


def _product_rows(rows: np.ndarray, t: float, order: int) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.ones(order)
    return np.prod(1.0 + t * rows, axis=0)


def riesz_product(weights: HermitianWeights, t: float = 1.0, mode: str = "general") -> GroupFunction:
    """``p_{t omega}`` evaluated pointwise."""
    group = weights.group
    _check_mode(group, mode)
    if abs(t) * (np.abs(weights.values).max() if weights.values.size else 0.0) > 1.0 + 1e-12:
        raise ParameterError("|t omega| must not exceed 1")
    rows = _factor_matrix(group, weights.lam, weights.values, mode)
    return GroupFunction(group, _product_rows(rows, t, group.order))


# ----------------------------------------------------------------------
# interval measures


@dataclass(frozen=True, eq=False)
class IntervalMeasure:
    """A finite signed measure ``sum_i w_i delta_{t_i}`` on ``[-1/2, 1/2]``."""

    nodes: np.ndarray
    weights: np.ndarray
    degree: int = 0

    def moment(self, k: int) -> float:
        return float(np.sum(self.weights * self.nodes**k))

    @property
    def norm(self) -> float:
        return float(np.abs(self.weights).sum())


@lru_cache(maxsize=None)
def make_tau(l: int) -> IntervalMeasure:
    """Odd measure with moment one at order 1 and zero moments up to ``2l``.

    Atoms sit at ``+-cos(j pi / (2l-1)) / 2`` for ``j < l``, the extrema of
    the Chebyshev polynomial ``T_{2l-1}`` rescaled to ``[-1/2, 1/2]``.  On
    that grid the moment conditions form a square system, solved in the
    Chebyshev basis for stability: the functional ``q -> q'(0)`` on odd
    polynomials of degree ``< 2l`` is represented exactly, which makes the
    total variation ``2(2l-1)``, the least possible.  Higher moments obey
    ``|moment(k)| <= 2^(1-k)``.
    """
    if int(l) != l or l < 1:
        raise ParameterError(f"l must be a positive integer, got {l}")
    l = int(l)
    n = 2 * l - 1
    s = np.cos(np.arange(l) * np.pi / n)
    k = np.arange(1, 2 * l, 2)
    system = 2.0 * np.cos(np.outer(k, np.arccos(np.clip(s, -1.0, 1.0))))
    rhs = k * np.where(((k - 1) // 2) % 2 == 0, 1.0, -1.0)  # T_k'(0)
    w = np.linalg.solve(system, rhs)
    nodes = np.concatenate([s / 2.0, -s / 2.0])
    weights = np.concatenate([2.0 * w, -2.0 * w])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return IntervalMeasure(nodes, weights, degree=2 * l)


def riesz_mixture(weights: HermitianWeights, tau: IntervalMeasure, mode: str = "general") -> GroupFunction:
    """``sum_i w_i p_{t_i omega}``."""
    group = weights.group
    _check_mode(group, mode)
    rows = _factor_matrix(group, weights.lam, weights.values, mode)
    out = np.zeros(group.order)
    for t, w in zip(tau.nodes, tau.weights):
        out += w * _product_rows(rows, float(t), group.order)
    return GroupFunction(group, out)


def two_term_measure(weights: HermitianWeights, t: float, mode: str = "general") -> GroupFunction:
    """``(p_{t omega} - p_{-t omega}) / 2``: odd part of the Riesz product in ``t``."""
    tau = IntervalMeasure(np.array([t, -t]), np.array([0.5, -0.5]))
    return riesz_mixture(weights, tau, mode)


# ----------------------------------------------------------------------
# formal transforms


@dataclass(frozen=True, eq=False)
class FormalTransform:
    """Coefficients of a Riesz mixture listed term by term over ``m``."""

    group: Group
    lam: tuple
    m: np.ndarray
    characters: np.ndarray
    values: np.ndarray

    def realize(self) -> Spectrum:
        out = np.zeros(self.group.order, dtype=np.complex128)
        np.add.at(out, self.characters, self.values)
        return Spectrum(self.group, out)


_FORMAL_CAP = 14


def sign_vectors(group: Group, lam) -> np.ndarray:
    """All ``m`` to enumerate: entries in {-1,0,1}, or {0,1} on order-two characters."""
    lam = list(lam)
    if len(lam) > _FORMAL_CAP:
        raise SizeCapError(f"formal expansion over {len(lam)} characters exceeds cap {_FORMAL_CAP}")
    two = _order_two(group, lam) if lam else np.zeros(0, dtype=bool)
    grids = [np.array([0, 1]) if o else np.array([-1, 0, 1]) for o in two]
    if not grids:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*grids, indexing="ij")
    return np.stack([g.reshape(-1) for g in mesh], axis=1).astype(np.int64)


def formal_transform(weights: HermitianWeights, tau: IntervalMeasure | None = None, t: float = 1.0,
                     mode: str = "general") -> FormalTransform:
    """Term-by-term transform of ``int p_{s omega} dtau(s)``.

    With ``tau=None`` this is the transform of the single product
    ``p_{t omega}``, i.e. the moments are ``t^|m|``.
    """
    group = weights.group
    _check_mode(group, mode)
    lam = weights.lam
    m = sign_vectors(group, lam)
    k = len(lam)
    two = _order_two(group, lam) if k else np.zeros(0, dtype=bool)
    size = np.count_nonzero(m, axis=1)
    if tau is None:
        moments = t ** size.astype(float)
    else:
        table = np.array([tau.moment(j) for j in range(k + 1)])
        moments = table[size]
    omega = weights.values
    half = np.where(two, 1.0, 0.5) if mode == "general" else np.ones(k)
    vals = moments.astype(np.complex128)
    for i in range(k):
        col = m[:, i]
        factor = np.where(col == 1, omega[i] * half[i], np.where(col == -1, np.conj(omega[i]) * half[i], 1.0))
        vals = vals * factor
    if k:
        coords = group.coords(np.asarray(lam, dtype=np.int64))
        chars = group.index((m @ coords) % np.asarray(group.factors))
    else:
        chars = np.zeros(1, dtype=np.int64)
    return FormalTransform(group, tuple(lam), m, np.asarray(chars, dtype=np.int64), vals)


# ----------------------------------------------------------------------
# auxiliary measures


def _require_dissociated(group: Group, lam, consts: Constants):
    ok, witness = is_dissociated(group, lam, consts)
    if not ok:
        raise NotDissociatedError(f"Lambda is not dissociated (witness {witness})")


def _check_eta(eta: float):
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"eta must lie in (0, 1], got {eta}")


def primitive_aux(weights: HermitianWeights, eta: float, consts: Constants = DEFAULT) -> GroupMeasure:
    """``eta^-1 p_{eta omega}`` on a power of Z/2.

    Interpolates ``omega`` on ``Lambda``, has ``|muhat(m.Lambda)| <= eta^(|m|-1)``
    and total variation at most ``eta^-1``.
    """
    group = weights.group
    if not group.is_boolean:
        raise WrongGroupKindError("the primitive construction lives on a power of Z/2")
    _check_eta(eta)
    _require_dissociated(group, weights.lam, consts)
    p = riesz_product(weights, t=eta, mode="model")
    return GroupMeasure(group, p.values / (eta * group.order))


def model_degree(eta: float) -> int:
    """``l = max(2, ceil(log2(1/eta) / 2))`` so that ``2^-2l <= eta``."""
    return max(2, math.ceil(0.5 * math.log2(1.0 / eta) - 1e-12))


def aux_measure_model(weights: HermitianWeights, eta: float, consts: Constants = DEFAULT) -> GroupMeasure:
    """``int p_{t omega} dtau_{2l}(t)`` on a power of Z/2."""
    group = weights.group
    if not group.is_boolean:
        raise WrongGroupKindError("the model construction lives on a power of Z/2")
    _check_eta(eta)
    _require_dissociated(group, weights.lam, consts)
    tau = make_tau(model_degree(eta))
    nu = riesz_mixture(weights, tau, mode="model")
    return GroupMeasure(group, nu.values / group.order)


@dataclass(frozen=True)
class Lift:
    """``G x Z/M`` with ``lambda -> (lambda, 1)``."""

    base: Group
    modulus: int = 4

    @property
    def group(self) -> Group:
        return Group(self.base.factors + (self.modulus,))

    def embed(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=np.int64)
        return lam * self.modulus + 1

    def push_down(self, f: GroupFunction) -> GroupMeasure:
        """Measure on G whose transform at ``gamma`` is ``fhat(gamma, 1)``."""
        m = self.modulus
        vals = f.values.reshape(self.base.order, m)
        twist = np.exp(-2j * np.pi * np.arange(m) / m)
        return GroupMeasure(self.base, (vals @ twist) / (m * self.base.order))


def nearly_degree(eta: float) -> int:
    """Least ``l >= 2`` with ``2^(3-2l) <= eta``."""
    return max(2, math.ceil((3.0 + math.log2(1.0 / eta)) / 2.0 - 1e-12))


@dataclass(frozen=True, eq=False)
class NearlyAux:
    function: GroupFunction
    rounds: int
    defect: float
    degree: int


def nearly_aux(weights: HermitianWeights, eta: float, consts: Constants = DEFAULT) -> NearlyAux:
    """Real function with transform ``omega`` on ``Lambda`` up to ``2^-n`` and at most ``eta`` elsewhere.

    Each round builds ``f_k = 2 int p_{t omega_k} dtau(t)`` and feeds the
    doubled residual ``omega_{k+1} = 2(omega_k - fhat_k)`` back in; the result
    is ``sum_k 2^-(k-1) f_k``.  The loop stops once the on-target defect is
    below ``consts.on_target_tol`` or after ``consts.nearly_rounds`` rounds.
    """
    group = weights.group
    _check_eta(eta)
    lam = list(weights.lam)
    if lam and np.any(_order_two(group, lam)):
        raise ParameterError("Lambda must not contain characters of order two")
    _require_dissociated(group, lam, consts)
    l = nearly_degree(eta)
    tau = make_tau(l)
    chars = group.characters(lam) if lam else np.zeros((0, group.order), dtype=np.complex128)
    conj_chars = np.conj(chars)
    target = weights.values.astype(np.complex128)
    omega_k = target.copy()
    residual = target.copy()
    total = np.zeros(group.order)
    rounds = 0
    for r in range(consts.nearly_rounds):
        if omega_k.size and np.abs(omega_k).max() > 1.0 + 1e-9:
            raise VerificationError("residual weights left the unit disc")
        rows = np.real(omega_k[:, None] * chars)
        f_r = np.zeros(group.order)
        for t, w in zip(tau.nodes, tau.weights):
            f_r += w * _product_rows(rows, float(t), group.order)
        f_r *= 2.0
        coeffs = (conj_chars @ f_r) / group.order
        scale = 2.0 ** (-r)
        total += scale * f_r
        residual = residual - scale * coeffs
        omega_k = 2.0 * (omega_k - coeffs)
        rounds = r + 1
        if not residual.size or np.abs(residual).max() <= consts.on_target_tol:
            break
    defect = float(np.abs(residual).max()) if residual.size else 0.0
    return NearlyAux(GroupFunction(group, total), rounds, defect, l)


def aux_measure(group: Group, lam, omega, eta: float, consts: Constants = DEFAULT) -> GroupMeasure:
    """Measure with transform ``omega`` on a dissociated ``Lambda`` and ``<= eta`` elsewhere.

    ``omega`` is any map into the closed unit disc; no hermitian condition is
    needed.  Total variation grows like ``log(1/eta)``.
    """
    return aux_measure_with_report(group, lam, omega, eta, consts)[0]


@dataclass(frozen=True)
class AuxReport:
    eta: float
    degree: int
    rounds: int
    on_target_defect: float
    total_variation: float


def aux_measure_with_report(group: Group, lam, omega, eta: float, consts: Constants = DEFAULT):
    _check_eta(eta)
    lam = [int(v) for v in group.check_index(list(lam))]
    omega = np.asarray(omega, dtype=np.complex128).reshape(-1)
    if omega.size != len(lam):
        raise ParameterError(f"{omega.size} weights for {len(lam)} characters")
    if omega.size and np.abs(omega).max() > 1.0 + 1e-12:
        raise ParameterError("weights must lie in the closed unit disc")
    _require_dissociated(group, lam, consts)
    lift = Lift(group, consts.lift_modulus)
    lifted = HermitianWeights(lift.group, tuple(int(v) for v in lift.embed(lam)), omega)
    res = nearly_aux(lifted, eta, consts)
    mu = lift.push_down(res.function)
    report = AuxReport(eta, res.degree, res.rounds, res.defect, tv_norm(mu))
    return mu, report


def aux_checks(mu: GroupMeasure, lam, omega, eta: float) -> dict:
    """Measured interpolation defect, off-target leakage and total variation."""
    spec = fourier(mu).coeffs
    lam = np.asarray(list(lam), dtype=np.int64)
    mask = np.ones(mu.group.order, dtype=bool)
    mask[lam] = False
    on = float(np.abs(spec[lam] - np.asarray(omega)).max()) if lam.size else 0.0
    off = float(np.abs(spec[mask]).max()) if mask.any() else 0.0
    return {"interpolation": on, "leakage": off, "eta": eta, "total_variation": tv_norm(mu)}
