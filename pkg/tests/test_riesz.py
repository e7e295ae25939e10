import math

import numpy as np
import pytest

from spectral_bohr import oracles
from spectral_bohr.errors import NotDissociatedError, ParameterError, WrongGroupKindError
from spectral_bohr.groups import boolean_cube, cyclic, fourier, make_group
from spectral_bohr.riesz import (
    HermitianWeights,
    IntervalMeasure,
    Lift,
    aux_checks,
    aux_measure,
    aux_measure_model,
    aux_measure_with_report,
    formal_transform,
    make_tau,
    model_degree,
    nearly_aux,
    nearly_degree,
    primitive_aux,
    riesz_mixture,
    riesz_product,
    two_term_measure,
)


def test_single_factor_on_f2_squared():
    g = boolean_cube(2)
    p = riesz_product(HermitianWeights(g, (1,), [1.0]), mode="model")
    assert list(p.values) == [2, 0, 2, 0]
    s = fourier(p).coeffs
    assert abs(s[0] - 1) < 1e-15 and abs(s[1] - 1) < 1e-15


@pytest.mark.parametrize("factors, lam", [([101], (1, 3, 9)), ([4, 27], (1, 4, 13)), ([2] * 6, (1, 2, 12))])
def test_riesz_product_matches_direct(factors, lam, rng):
    g = make_group(factors)
    two = g.neg(np.array(lam)) == np.array(lam)
    omega = rng.uniform(0, 1, len(lam)) * np.where(two, 1.0, np.exp(2j * np.pi * rng.uniform(size=len(lam))))
    w = HermitianWeights(g, lam, omega)
    p = riesz_product(w)
    assert np.abs(p.values - oracles.riesz_product_direct(g, lam, omega).real).max() < 1e-12
    assert p.values.min() >= -1e-9
    # supported on the span, with unit mass when Lambda is dissociated
    s = fourier(p).coeffs
    reach = {t for _, t in oracles.enumerate_span(g, lam)}
    off = np.array([i not in reach for i in range(g.order)])
    assert np.abs(s[off]).max(initial=0) < 1e-12
    assert abs(np.mean(np.abs(p.values)) - 1) < 1e-9


def test_weights_validation():
    g = cyclic(12)
    with pytest.raises(ParameterError):
        HermitianWeights(g, (1,), [1.5])
    with pytest.raises(ParameterError):
        HermitianWeights(g, (6,), [0.5j])
    with pytest.raises(ParameterError):
        HermitianWeights(g, (1, 11), [0.5, 0.5])
    with pytest.raises(ParameterError):
        HermitianWeights(g, (1, 2), [0.5])


def test_model_mode_needs_boolean_group():
    with pytest.raises(WrongGroupKindError):
        riesz_product(HermitianWeights(cyclic(8), (1,), [0.5]), mode="model")


def test_formal_transform_constant_term_is_moment_zero():
    g = cyclic(50)
    w = HermitianWeights(g, (1, 3), [0.4, 0.3j])
    tau = IntervalMeasure(np.array([0.2, -0.1]), np.array([0.7, 0.5]))
    ft = formal_transform(w, tau)
    zero_rows = np.flatnonzero(~ft.m.any(axis=1))
    assert len(zero_rows) == 1
    assert abs(ft.values[zero_rows[0]] - tau.moment(0)) < 1e-15


def test_formal_transform_point_mass_recovers_product():
    g = boolean_cube(5)
    w = HermitianWeights(g, (1, 2, 4), [0.5, -0.3, 0.9])
    point = IntervalMeasure(np.array([1.0]), np.array([1.0]))
    a = formal_transform(w, point, mode="model").realize().coeffs
    b = fourier(riesz_product(w, mode="model")).coeffs
    assert np.abs(a - b).max() < 1e-14


def test_formal_transform_realizes_mixture_on_z101():
    rng = np.random.default_rng(5)
    g = cyclic(101)
    lam = (1, 3, 9)
    omega = rng.uniform(0, 1, 3) * np.exp(2j * np.pi * rng.uniform(size=3))
    w = HermitianWeights(g, lam, omega)
    tau = make_tau(2)
    mixture = np.zeros(101)
    for t, wt in zip(tau.nodes, tau.weights):
        mixture += wt * oracles.riesz_product_direct(g, lam, omega, t).real
    direct = oracles.direct_fourier(g, mixture)
    assert np.abs(formal_transform(w, tau).realize().coeffs - direct).max() < 1e-9
    assert np.abs(fourier(riesz_mixture(w, tau)).coeffs - direct).max() < 1e-12


def test_two_term_measure_is_odd_part():
    g = cyclic(31)
    w = HermitianWeights(g, (2, 5), [0.6, 0.4j])
    got = two_term_measure(w, 0.5).values
    expect = (riesz_product(w, 0.5).values - riesz_product(w, -0.5).values) / 2
    assert np.abs(got - expect).max() < 1e-14


@pytest.mark.parametrize("l", [2, 5, 12, 16])
def test_tau_contract_up_to_sixteen(l):
    tau = make_tau(l)
    assert abs(tau.moment(1) - 1) < 1e-9
    assert max(abs(tau.moment(k)) for k in range(2 * l + 1) if k != 1) < 1e-9
    assert tau.norm <= 2 * (2 * l - 1) + 1e-9
    assert all(abs(tau.moment(k)) <= 2.0 ** (1 - k) + 1e-9 for k in range(2, 4 * l + 1))
    assert np.allclose(np.sort(tau.nodes), -np.sort(tau.nodes)[::-1])


def test_primitive_aux():
    g = boolean_cube(6)
    w = HermitianWeights(g, (1, 2, 4), [1.0, -0.5, 0.25])
    mu = primitive_aux(w, 1.0)
    p = riesz_product(w, mode="model")
    assert np.abs(mu.weights * g.order - p.values).max() < 1e-14
    eta = 1 / 8
    mu = primitive_aux(w, eta)
    s = fourier(mu).coeffs
    assert np.abs(s[[1, 2, 4]] - w.values).max() < 1e-9
    rest = np.ones(g.order, dtype=bool)
    rest[[0, 1, 2, 4]] = False
    assert np.abs(s[rest]).max() <= eta + 1e-12
    assert np.abs(mu.weights).sum() <= 1 / eta + 1e-9


def test_model_aux_on_f2_cubed():
    g = boolean_cube(3)
    w = HermitianWeights(g, (1, 2), [1.0, 1.0])
    mu = aux_measure_model(w, 0.25)
    s = fourier(mu).coeffs
    assert abs(s[1] - 1) < 1e-9 and abs(s[2] - 1) < 1e-9
    for gamma in (0, 3, 4, 5, 6, 7):
        assert abs(s[gamma]) <= 0.25 + 1e-12
    l = model_degree(0.25)
    assert np.abs(mu.weights).sum() <= 4 * (2 * l - 1)


def test_model_aux_boundary_eta():
    g = boolean_cube(4)
    w = HermitianWeights(g, (1, 6), [0.3, -1.0])
    assert model_degree(1.0) == 2
    s = fourier(aux_measure_model(w, 1.0)).coeffs
    assert np.abs(s[[1, 6]] - w.values).max() < 1e-9


def test_model_aux_rejects_dependent_set():
    g = boolean_cube(3)
    with pytest.raises(NotDissociatedError):
        aux_measure_model(HermitianWeights(g, (1, 2, 3), [0.1, 0.1, 0.1]), 0.5)


def test_nearly_aux_single_character():
    g = cyclic(13)
    res = nearly_aux(HermitianWeights(g, (1,), [1.0]), 0.5)
    s = fourier(res.function).coeffs
    assert abs(s[1] - 1) <= 2.0**-40
    rest = np.ones(13, dtype=bool)
    rest[[1, 12]] = False
    assert np.abs(s[rest]).max() <= 0.5
    assert np.mean(np.abs(res.function.values)) <= 4 * make_tau(nearly_degree(0.5)).norm


def test_nearly_aux_zero_weights():
    res = nearly_aux(HermitianWeights(cyclic(11), (2, 3), [0, 0]), 0.1)
    assert np.abs(res.function.values).max() == 0


def test_nearly_aux_rejects_order_two():
    with pytest.raises(ParameterError):
        nearly_aux(HermitianWeights(cyclic(8), (4,), [0.5]), 0.5)


def test_lift_push_down():
    base = cyclic(5)
    lift = Lift(base, 4)
    assert lift.group.order == 20
    assert list(lift.embed([0, 2])) == [1, 9]
    rng = np.random.default_rng(0)
    from spectral_bohr.groups import GroupFunction

    f = GroupFunction(lift.group, rng.standard_normal(20))
    fh = fourier(f).coeffs.reshape(5, 4)
    mu = lift.push_down(f)
    assert np.abs(fourier(mu).coeffs - fh[:, 1]).max() < 1e-14


def test_general_aux_on_z243():
    rng = np.random.default_rng(6)
    g = cyclic(243)
    lam = [1, 3, 9, 27]
    omega = np.exp(2j * np.pi * rng.uniform(size=4))
    eta = 2.0**-6
    mu, rep = aux_measure_with_report(g, lam, omega, eta)
    direct = oracles.direct_fourier(g, mu.weights * g.order)
    assert np.abs(direct[lam] - omega).max() <= 2.0**-30
    rest = np.ones(243, dtype=bool)
    rest[lam] = False
    assert np.abs(direct[rest]).max() <= eta
    assert np.abs(mu.weights).sum() <= 8 * (1 + math.log2(1 / eta))
    c = aux_checks(mu, lam, omega, eta)
    assert c["interpolation"] == pytest.approx(np.abs(direct[lam] - omega).max(), abs=1e-12)
    assert rep.rounds >= 1


def test_general_aux_handles_order_two_characters():
    g = make_group([4, 27])
    lam = [g.index([2, 0]), g.index([1, 1])]
    omega = np.array([0.3 + 0.4j, -0.9])
    mu = aux_measure(g, lam, omega, 0.01)
    c = aux_checks(mu, lam, omega, 0.01)
    assert c["interpolation"] <= 2.0**-30 and c["leakage"] <= 0.01


def test_general_aux_rejects_dependent_set():
    with pytest.raises(NotDissociatedError):
        aux_measure(cyclic(30), [1, 2, 3], [0.1, 0.1, 0.1], 0.5)
