"""A compact invariant suite, runnable from the command line.

Each check draws a small seeded corpus, runs the fast path, and compares
with a direct computation or a certified inequality.  The full-scale
versions live in the test suite.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import oracles
from .bohr import bohr_set, find_regular, translate_defect, translate_defect_bound
from .config import DEFAULT, Constants
from .dissociation import is_dissociated, span_counts_by_weight
from .groups import GroupFunction, boolean_cube, cyclic, fourier, inverse, make_group, norm
from .iteration import (
    bohr_approximate,
    discrete_ivt,
    f2n_approximate,
    littlewood_certificate,
    verify_bohr_clauses,
)
from .riesz import (
    HermitianWeights,
    aux_checks,
    aux_measure,
    formal_transform,
    make_tau,
    riesz_product,
)
from .spectra import large_spectrum, within_bound
from .structure import ag_cover, chang_cover


def random_dissociated(rng, group, k, tries=400):
    lam: list[int] = []
    for _ in range(tries):
        if len(lam) >= k:
            break
        g = int(rng.integers(1, group.order))
        if g in lam:
            continue
        if is_dissociated(group, lam + [g])[0]:
            lam.append(g)
    return lam


def check_transform(rng, consts):
    worst = 0.0
    for factors in ([12], [4, 6], [2] * 7, [3, 5, 2]):
        g = make_group(factors)
        v = rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order)
        s = fourier(GroupFunction(g, v))
        worst = max(worst, np.abs(s.coeffs - oracles.direct_fourier(g, v)).max())
        worst = max(worst, np.abs(inverse(s).values - v).max())
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_spectra(rng, consts):
    bad = 0
    for _ in range(40):
        g = cyclic(int(rng.integers(8, 200)))
        f = GroupFunction(g, rng.standard_normal(g.order))
        eps = float(rng.uniform(0.05, 1.0))
        for kind in ("l1", "linf"):
            sp = large_spectrum(f, eps, kind, consts)
            bad += not within_bound(len(sp), sp.bound, consts.tol)
    return bad == 0, f"{bad} violations"


def check_dissociation(rng, consts):
    bad = 0
    for _ in range(20):
        g = cyclic(int(rng.integers(20, 300)))
        lam = list(dict.fromkeys(int(v) for v in rng.integers(1, g.order, size=int(rng.integers(1, 6)))))
        bad += is_dissociated(g, lam, consts)[0] != oracles.brute_is_dissociated(g, lam)
    return bad == 0, f"{bad} disagreements with enumeration"


def check_rider(rng, consts):
    bad = 0
    for _ in range(10):
        g = cyclic(int(rng.choice([1009, 4096, 3 ** 6])))
        lam = random_dissociated(rng, g, int(rng.integers(2, 8)))
        layers = span_counts_by_weight(g, lam, consts)
        for r in range(layers.shape[0]):
            bad += int(layers[r].max() > 2 ** r)
    return bad == 0, f"{bad} violations of the 2^r count"


def check_riesz(rng, consts):
    g = boolean_cube(8)
    worst = 0.0
    for _ in range(5):
        lam = random_dissociated(rng, g, 5)
        w = HermitianWeights(g, tuple(lam), rng.uniform(-1, 1, len(lam)))
        real = fourier(riesz_product(w, mode="model")).coeffs
        formal = formal_transform(w, mode="model").realize().coeffs
        worst = max(worst, np.abs(real - formal).max())
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def check_tau(rng, consts):
    bad = 0
    for l in range(2, 11):
        t = make_tau(l)
        bad += abs(t.moment(1) - 1) > 1e-9
        bad += any(abs(t.moment(k)) > 1e-9 for k in range(0, 2 * l + 1) if k != 1)
        bad += t.norm > 2 * (2 * l - 1) + 1e-9
        bad += any(abs(t.moment(k)) > 2.0 ** (1 - k) + 1e-9 for k in range(2, 4 * l + 1))
    return bad == 0, f"{bad} failed clauses"


def check_aux(rng, consts):
    bad = 0
    for group in (make_group([243]), make_group([4, 27])):
        for _ in range(5):
            lam = random_dissociated(rng, group, int(rng.integers(1, 5)))
            om = rng.uniform(0, 1, len(lam)) * np.exp(2j * np.pi * rng.uniform(size=len(lam)))
            eta = 2.0 ** -int(rng.integers(1, 11))
            c = aux_checks(aux_measure(group, lam, om, eta, consts), lam, om, eta)
            bad += c["interpolation"] > 2.0 ** -30
            bad += c["leakage"] > eta * (1 + 1e-9)
            bad += c["total_variation"] > consts.c_aux * (1 + math.log2(1 / eta))
    return bad == 0, f"{bad} failed clauses"


def check_bohr(rng, consts):
    bad = 0
    for _ in range(10):
        g = cyclic(int(rng.choice([257, 1009, 2048])))
        gam = [int(v) for v in rng.integers(1, g.order, size=int(rng.integers(1, 3)))]
        reg = find_regular(g, gam, float(rng.uniform(0.1, 0.5)), consts)
        bad += reg.bohr.density < reg.bohr.density_bound()
        inner = reg.delta * consts.c_reg_window / (4 * reg.rank)
        bound = translate_defect_bound(reg, inner)
        for y in bohr_set(g, gam, inner).members[:20]:
            bad += translate_defect(reg.bohr, int(y)) > bound + 1e-12
    return bad == 0, f"{bad} violations"


def check_cover(rng, consts):
    g = cyclic(1009)
    members = rng.choice(g.order, 504, replace=False)
    f = GroupFunction.indicator(g, members)
    a = ag_cover(f, 0.05, consts)
    c = chang_cover(f, 0.5, consts)
    return a.covered and c.covered, f"constants {a.measured_constant:.3f}, {c.measured_constant:.3f}"


def check_f2n(rng, consts):
    g = boolean_cube(8)
    bad = 0
    for _ in range(4):
        f = GroupFunction.indicator(g, rng.choice(g.order, 100, replace=False))
        res = f2n_approximate(f, 0.3, consts=consts)
        bad += res.l2_error > 0.3 * norm(f, "Linf") * (1 + 1e-12)
    return bad == 0, f"{bad} failures"


def check_bohr_approx(rng, consts):
    g = cyclic(257)
    f = GroupFunction.indicator(g, rng.choice(g.order, 128, replace=False))
    res = bohr_approximate(f, 0.25, consts)
    v = verify_bohr_clauses(f, res)
    return v["ok"], f"l2 {v['l2']:.3g}, oscillation {v['oscillation']:.3g}"


def check_littlewood(rng, consts):
    rep = littlewood_certificate(101, rng.choice(101, 50, replace=False), consts)
    return rep.contradiction_avoided and rep.certified_lhs >= rep.log_p, f"lhs {rep.certified_lhs:.2f} vs log p {rep.log_p:.2f}"


def check_ivt(rng, consts):
    bad = 0
    for _ in range(50):
        n = int(rng.integers(3, 60))
        y = int(rng.integers(1, n))
        if math.gcd(y, n) != 1:
            continue
        walk = np.cumsum(rng.uniform(-1, 1, n))
        vals = np.empty(n)
        vals[(np.arange(n) * y) % n] = walk - np.linspace(0, walk[-1] - walk[0], n)
        steps = np.abs(np.roll(vals, -y) - vals).max()
        sup = np.abs(vals).max()
        eps = max(steps / sup, 1e-9) if sup else 1.0
        if eps > 1:
            continue
        x = discrete_ivt(GroupFunction(cyclic(n), vals), y, eps)
        bad += abs(vals[x] - vals.mean()) > eps * sup / 2 + 1e-12
    return bad == 0, f"{bad} failures"


SUITE: dict[str, Callable] = {
    "transform": check_transform,
    "spectra": check_spectra,
    "dissociation": check_dissociation,
    "rider": check_rider,
    "riesz": check_riesz,
    "tau": check_tau,
    "aux": check_aux,
    "bohr": check_bohr,
    "cover": check_cover,
    "f2n": check_f2n,
    "bohr-approx": check_bohr_approx,
    "littlewood": check_littlewood,
    "ivt": check_ivt,
}


def run_suite(name: str = "all", seed: int = 7, consts: Constants = DEFAULT):
    names = list(SUITE) if name == "all" else [name]
    rows = []
    for n in names:
        if n not in SUITE:
            raise KeyError(n)
        rng = np.random.default_rng([seed, list(SUITE).index(n)])
        ok, detail = SUITE[n](rng, consts)
        rows.append((n, bool(ok), detail))
    return rows
