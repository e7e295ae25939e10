import numpy as np
import pytest

from spectral_bohr import oracles
from spectral_bohr.errors import DegenerateInputError, ParameterError
from spectral_bohr.groups import GroupFunction, GroupMeasure, cyclic, make_group
from spectral_bohr.spectra import (
    SpectrumThreshold,
    l1_spectrum_bound,
    large_spectrum,
    linf_spectrum_bound,
    local_large_spectrum,
    within_bound,
)


def test_point_mass_has_flat_spectrum():
    n = 23
    f = GroupFunction.indicator(cyclic(n), [0])
    sp = large_spectrum(f, 1 / n, "linf")
    assert len(sp) == n
    assert abs(sp.bound - n) < 1e-9
    assert within_bound(len(sp), sp.bound)


@pytest.mark.parametrize("kind", ["l1", "linf"])
def test_character_spectrum(kind):
    g = make_group([4, 5])
    f = GroupFunction.character(g, 7)
    assert list(large_spectrum(f, 1.0, kind).characters.members) == [7]


def test_l1_kind_matches_direct_filter():
    rng = np.random.default_rng(7)
    g = cyclic(101)
    members = rng.choice(101, 50, replace=False)
    f = GroupFunction.indicator(g, members)
    mags = np.abs(oracles.direct_fourier(g, f.values))
    expected = set(np.flatnonzero(mags >= 0.5 * 50 / 101 * (1 - 1e-9)))
    got = large_spectrum(f, 0.5, "l1")
    assert set(got.characters.members) == expected
    assert len(got) <= l1_spectrum_bound(f, 0.5)


def test_order_is_by_decreasing_magnitude_then_index():
    f = GroupFunction.indicator(cyclic(30), range(10))
    sp = large_spectrum(f, 0.05, "linf")
    mags = sp.spectrum.magnitudes[list(sp.characters.members)]
    assert np.all(np.diff(mags) <= 1e-15)
    # conjugate pairs tie; the smaller index comes first
    members = list(sp.characters.members)
    assert members.index(1) < members.index(29)


def test_zero_function_rejected():
    with pytest.raises(DegenerateInputError):
        large_spectrum(GroupFunction(cyclic(5), np.zeros(5)), 0.5)


@pytest.mark.parametrize("eps", [0.0, -0.1, 1.5])
def test_epsilon_range(eps):
    with pytest.raises(ParameterError):
        SpectrumThreshold("l1", eps)


def test_threshold_kind_checked():
    with pytest.raises(ParameterError):
        SpectrumThreshold("l2", 0.5)


def test_bounds_formulas():
    f = GroupFunction.indicator(cyclic(12), [0, 1, 2])
    assert abs(l1_spectrum_bound(f, 0.5) - (np.sqrt(0.25) / 0.25) ** 2 / 0.25) < 1e-12
    a = np.abs(np.fft.fft(f.values)).sum() / 12
    assert abs(linf_spectrum_bound(f, 0.5) - a / 0.5) < 1e-12


def test_local_spectrum_with_global_cutoff_equals_global():
    rng = np.random.default_rng(3)
    g = cyclic(64)
    f = GroupFunction(g, rng.standard_normal(64))
    haar = GroupMeasure.uniform_on(g, range(64))
    for eps in (0.1, 0.3):
        glob = large_spectrum(f, eps, "linf")
        loc = local_large_spectrum(f, haar, SpectrumThreshold("linf", eps), np.abs(f.values).max())
        assert loc.members == glob.characters.members


def test_local_spectrum_of_constant():
    g = cyclic(40)
    beta = GroupMeasure.uniform_on(g, range(5))
    c = 0.7
    f = GroupFunction(g, np.full(40, c))
    level = 0.2
    loc = local_large_spectrum(f, beta, SpectrumThreshold("linf", level), 1.0)
    bhat = np.abs(oracles.direct_fourier(g, beta.weights * 40))
    assert set(loc.members) == set(np.flatnonzero(c * bhat >= level * (1 - 1e-9)))
    assert 0 in loc


def test_local_spectrum_matches_direct_weighted_sum():
    rng = np.random.default_rng(11)
    g = cyclic(1009)
    f = GroupFunction.indicator(g, rng.choice(1009, 400, replace=False))
    beta = GroupMeasure.uniform_on(g, [x % 1009 for x in range(-20, 21)])
    x = np.arange(1009)
    w = beta.weights.real
    direct = np.array([abs(np.sum(f.values * w * np.exp(-2j * np.pi * k * x / 1009))) for k in range(1009)])
    loc = local_large_spectrum(f, beta, SpectrumThreshold("linf", 0.1), 1.0)
    assert set(loc.members) == set(np.flatnonzero(direct >= 0.1 * (1 - 1e-9)))


def test_local_spectrum_checks_cutoff():
    g = cyclic(8)
    f = GroupFunction(g, np.ones(8))
    with pytest.raises(ParameterError):
        local_large_spectrum(f, GroupMeasure(g, np.full(8, 0.5)), SpectrumThreshold("l1", 0.5), 1.0)
    with pytest.raises(ParameterError):
        local_large_spectrum(f, GroupMeasure.uniform_on(g, [0]), SpectrumThreshold("l1", 0.5), 0.0)
