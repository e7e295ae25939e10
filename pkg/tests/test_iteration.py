import math

import numpy as np
import pytest

from spectral_bohr.errors import ParameterError, SizeCapError, WrongGroupKindError
from spectral_bohr.families import quadratic_residues
from spectral_bohr.f2 import F2Basis, coset_keys
from spectral_bohr.groups import GroupFunction, boolean_cube, cyclic, make_group
from spectral_bohr.iteration import (
    bohr_approximate,
    discrete_ivt,
    dyadic_index,
    f2n_approximate,
    is_prime,
    littlewood_certificate,
    poor_approximate,
    round_budget,
    verify_bohr_clauses,
)


def _coset_l2(f, basis):
    keys = coset_keys(F2Basis(basis), f.group.order)
    worst = 0.0
    for k in np.unique(keys):
        v = f.values[keys == k]
        worst = max(worst, float(np.sqrt(np.mean(np.abs(v - v.mean()) ** 2))))
    return worst


def test_round_budget_formula():
    assert round_budget(0.5, 1.0) == 4 * math.ceil(4 * (1 + math.log(2)))


def test_constant_function_needs_no_frequencies():
    res = f2n_approximate(GroupFunction(boolean_cube(5), np.full(32, 0.7)), 0.1)
    assert res.dimension == 0 and res.l2_error < 1e-12


def test_single_character_gives_codim_one():
    g = boolean_cube(6)
    res = f2n_approximate(GroupFunction(g, g.character(13).real), 0.5)
    assert res.dimension == 1
    assert res.extras["basis"] == (13,)


def test_subspace_plus_small_character():
    g = boolean_cube(8)
    w = [x for x in range(256) if x & 0b11 == 0]
    f = GroupFunction(g, GroupFunction.indicator(g, w).values + 0.1 * g.character(0b10000000).real)
    for refined in (False, True):
        res = f2n_approximate(f, 0.2, refined=refined)
        assert _coset_l2(f, res.extras["basis"]) <= 0.2 * np.abs(f.values).max() * (1 + 1e-9)
        assert res.dimension <= 3


def test_f2n_ledger_increases(rng):
    g = boolean_cube(8)
    f = GroupFunction(g, rng.choice([0.0, 1.0], 256, p=[0.7, 0.3]))
    res = f2n_approximate(f, 0.4)
    ledgers = [r.ledger for r in res.rounds]
    assert all(b > a for a, b in zip(ledgers, ledgers[1:]))
    assert res.num_rounds <= round_budget(0.4, res.a_ratio) + 1
    assert _coset_l2(f, res.extras["basis"]) <= 0.4 * (1 + 1e-9)


def test_f2n_rejects_cyclic():
    with pytest.raises(WrongGroupKindError):
        f2n_approximate(GroupFunction(cyclic(16), np.ones(16)), 0.5)


def test_dyadic_index():
    s = dyadic_index(np.array([1.0, 0.5, 0.4, 0.25, 0.2]), 1.0)
    assert list(s) == [1, 2, 2, 3, 3]


def test_bohr_approximate_clauses_hold():
    g = cyclic(101)
    f = GroupFunction.indicator(g, range(30))
    res = bohr_approximate(f, 0.3)
    check = verify_bohr_clauses(f, res)
    assert check["ok"]
    assert res.delta_prime <= res.delta
    assert 0 in res.gamma


def test_bohr_approximate_on_product_group():
    g = make_group([4, 9])
    f = GroupFunction(g, np.cos(2 * np.pi * np.arange(36) / 36))
    res = bohr_approximate(f, 0.5)
    assert verify_bohr_clauses(f, res)["ok"]


def test_bohr_approximate_size_cap():
    from spectral_bohr.config import Constants

    with pytest.raises(SizeCapError):
        bohr_approximate(GroupFunction.indicator(cyclic(64), [0]), 0.5, Constants(iteration_order_cap=32))


def test_poor_approximate_of_character():
    g = cyclic(97)
    f = GroupFunction(g, g.character(4))
    res = poor_approximate(f, 0.3)
    assert list(res.gamma.members) == [4]
    assert res.extras["sup_error"] <= 0.3


def test_poor_approximate_of_interval():
    g = cyclic(211)
    f = GroupFunction.indicator(g, range(20))
    res = poor_approximate(f, 0.5)
    assert res.l2_error <= 0.5 * (1 + 1e-9)


def test_ivt_on_z7():
    f = GroupFunction(cyclic(7), np.array([0, 1, 2, 3, 3, 2, 1], dtype=float))
    assert discrete_ivt(f, 1, 1 / 3) == 2


def test_ivt_other_step():
    f = GroupFunction(cyclic(7), np.array([0, 1, 2, 3, 3, 2, 1], dtype=float))
    with pytest.raises(ParameterError):
        discrete_ivt(f, 2, 1 / 3)
    with pytest.raises(ParameterError):
        discrete_ivt(f, 7, 1.0)


def test_is_prime():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_littlewood_on_residues():
    rep = littlewood_certificate(101, quadratic_residues(101))
    assert rep.size == 50
    assert rep.certified_lhs >= rep.log_p
    assert rep.contradiction_avoided


def test_littlewood_parameter_checks():
    with pytest.raises(ParameterError):
        littlewood_certificate(100, range(50))
    with pytest.raises(ParameterError):
        littlewood_certificate(101, range(101))
    with pytest.raises(ParameterError):
        littlewood_certificate(101, range(10))

