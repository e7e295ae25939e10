import itertools

import numpy as np
import pytest

from spectral_bohr import oracles
from spectral_bohr.bohr import find_regular
from spectral_bohr.errors import NotDissociatedError, ParameterError, WrongGroupKindError
from spectral_bohr.f2 import F2Basis
from spectral_bohr.groups import GroupFunction, boolean_cube, cyclic, fourier, norm
from spectral_bohr.spectra import large_spectrum
from spectral_bohr.structure import (
    ag_cover,
    chang_cover,
    cover_modulo,
    dissprop_certify,
    local_ag_cover,
    model_local_cover,
    subspace_transform,
)


def _reach(g, lam):
    return {oracles.signed_sum(g, lam, m) for m in itertools.product((-1, 0, 1), repeat=len(lam))}


def test_chang_cover_of_interval():
    g = cyclic(211)
    f = GroupFunction.indicator(g, range(60))
    res = chang_cover(f, 0.3)
    lam = list(res.lam.members)
    assert set(res.target.members) <= _reach(g, lam)
    assert res.measured_constant <= res.constant_cap


def test_ag_cover_of_character_sum():
    g = cyclic(127)
    f = GroupFunction(g, g.character(3) + 0.5 * g.character(10))
    res = ag_cover(f, 0.2)
    assert set(res.target.members) == {3, 10}
    assert set(res.target.members) <= _reach(g, list(res.lam.members))


def test_cover_epsilon_range():
    f = GroupFunction.indicator(cyclic(11), [0, 1])
    with pytest.raises(ParameterError):
        chang_cover(f, 0.0)


def test_dissprop_certify_sandwich():
    g = cyclic(257)
    lam = [1, 3, 9, 27]
    f = GroupFunction(g, sum(g.character(t) for t in lam))
    ledger = dissprop_certify(f, lam, 0.2)
    assert ledger.holds
    assert ledger.lower <= ledger.value + 1e-9 <= ledger.upper + 2e-9
    assert ledger.lam_size <= ledger.implied_bound


def test_dissprop_certify_rejects_dependent_and_small():
    g = cyclic(100)
    f = GroupFunction(g, (g.character(1) + g.character(2) + g.character(3)).real)
    with pytest.raises(NotDissociatedError):
        dissprop_certify(f, [1, 2, 3], 0.1)
    with pytest.raises(ParameterError):
        dissprop_certify(f, [5], 0.1)


def test_local_ag_cover_contains_local_spectrum():
    g = cyclic(1009)
    rng = np.random.default_rng(3)
    f = GroupFunction.indicator(g, rng.choice(1009, 500, replace=False))
    reg = find_regular(g, [1], 0.25)
    res = local_ag_cover(f, reg, 0.25, 0.5)
    assert res.cover.covered
    assert res.ledger is None or res.ledger.holds
    assert 0 < res.delta_prime <= reg.delta


def test_subspace_transform_whole_group():
    g = boolean_cube(4)
    f = GroupFunction(g, np.arange(16.0))
    spec, mask = subspace_transform(f, F2Basis())
    assert mask.all()
    assert np.abs(spec.coeffs - fourier(f).coeffs).max() < 1e-14


def test_cover_modulo_modes():
    basis = F2Basis([1])
    chars = [3, 2, 5, 7, 4]
    plain = cover_modulo(chars, basis, refined=False)
    refined = cover_modulo(chars, basis, refined=True)
    assert len(refined) <= len(plain)
    for lam in (plain, refined):
        work = basis.copy()
        for v in lam:
            work.add(v)
        assert all(work.contains(c) for c in chars)


def test_model_local_cover_of_subspace_indicator():
    g = boolean_cube(6)
    w = [x for x in range(64) if bin(x & 0b000111).count("1") == 0]
    f = GroupFunction.indicator(g, w)
    lam, rep = model_local_cover(f, [], 0.5)
    spec = set(large_spectrum(f, 0.5, "linf").characters.members)
    final = F2Basis(list(lam.members))
    assert all(final.contains(int(c)) for c in spec)
    assert rep["lam_size"] <= rep["plain_bound"]
    # on a coset of W the function is constant, so the local spectrum is the
    # whole annihilator of W and nothing new is needed
    lam2, rep2 = model_local_cover(f, [1, 2, 4], 0.5)
    assert len(lam2) == 0 and rep2["spectrum_size"] == 8


def test_model_local_cover_refined_not_larger(rng):
    g = boolean_cube(8)
    f = GroupFunction(g, rng.choice([0.0, 1.0], 256))
    plain, _ = model_local_cover(f, [3], 0.2)
    refined, rep = model_local_cover(f, [3], 0.2, refined=True)
    assert len(refined) <= len(plain)
    assert rep["refined"]


def test_model_local_cover_needs_boolean_group():
    with pytest.raises(WrongGroupKindError):
        model_local_cover(GroupFunction(cyclic(8), np.ones(8)), [], 0.5)


def test_norm_of_restricted_function():
    g = boolean_cube(3)
    f = GroupFunction.indicator(g, [0])
    assert norm(f, "A") == pytest.approx(1.0)
