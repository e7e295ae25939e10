"""``spectral-bohr`` command-line front end.

Every subcommand reads its inputs (a group, a set or value file, or a
generated family), runs the library operation and writes a CSV whose rows
follow the input order.  Boolean columns are verification outcomes; the
process exits 0 only when all of them are true.

Exit codes: 0 success, 1 failed verification, 2 bad input or parameters,
3 size or round cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import errors
from .bohr import (
    BohrProfile,
    bohr_set,
    cutoff_spectrum,
    find_regular,
    smoothed_cutoff,
)
from .config import Constants, load_config
from .dissociation import is_s_dissociated, max_dissociated_subset
from .families import FAMILIES, generate_family, read_set, read_values, read_weights, write_set
from .groups import (
    Group,
    GroupFunction,
    a_ratio,
    fourier,
    inverse,
    norm,
    parse_group,
)
from .iteration import (
    bohr_approximate,
    f2n_approximate,
    littlewood_certificate,
    poor_approximate,
    verify_bohr_clauses,
)
from .riesz import (
    HermitianWeights,
    aux_checks,
    aux_measure_model,
    aux_measure_with_report,
    formal_transform,
    make_tau,
    primitive_aux,
    riesz_product,
)
from .spectra import large_spectrum, within_bound
from .structure import ag_cover, chang_cover, local_ag_cover, model_local_cover
from .verify import SUITE, run_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class UsageError(errors.SpectralBohrError):
    """Missing or contradictory command-line inputs."""


# ----------------------------------------------------------------------
# output


class Output:
    """Collects CSV tables and JSON-lines traces for one invocation."""

    def __init__(self, out_dir: str | None, timing: bool):
        self.out_dir = out_dir
        self.timing = timing
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str | None:
        return os.path.join(self.out_dir, name) if self.out_dir else None

    def table(self, name: str, rows: list[dict], stdout: bool = True):
        """Write ``rows`` as ``<name>.csv``; without ``--out`` print them if ``stdout``."""
        if not rows or not (self.out_dir or stdout):
            return
        cols = ["schema_version"]
        for r in rows:
            for k in r:
                if k not in cols and (self.timing or k != "runtime_ms"):
                    cols.append(k)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({"schema_version": SCHEMA_VERSION, **{k: _cell(v) for k, v in r.items()}})
        text = buf.getvalue()
        target = self.path(f"{name}.csv")
        if target:
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def trace(self, path: str | None, kind: str, records: list[dict]):
        if path is None:
            return
        if not os.path.isabs(path) and self.out_dir:
            path = os.path.join(self.out_dir, path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"schema": f"spectral-bohr/{kind}", "schema_version": SCHEMA_VERSION}) + "\n")
            for rec in records:
                fh.write(json.dumps(rec, default=_json_default, sort_keys=True) + "\n")

    def json(self, name: str, payload: dict):
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        text = json.dumps(payload, default=_json_default, sort_keys=True, indent=1)
        target = self.path(f"{name}.json")
        if target:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            sys.stdout.write(text + "\n")


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return ";".join(str(_cell(x)) for x in v)
    if v is None:
        return ""
    return v


def _json_default(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, complex):
        return [v.real, v.imag]
    raise TypeError(type(v))


def _all_verified(rows: list[dict]) -> bool:
    return all(bool(v) for r in rows for v in r.values() if isinstance(v, (bool, np.bool_)))


# ----------------------------------------------------------------------
# inputs


def _group(args, consts: Constants) -> Group:
    if not args.group:
        raise UsageError("--group is required for this subcommand")
    return parse_group(args.group, cap=consts.size_cap)


def _inputs(args, group: Group) -> list[tuple[str, GroupFunction]]:
    """The functions to process, in a fixed order."""
    given = [x for x in (getattr(args, "values", None), getattr(args, "set", None)) if x]
    if len(given) > 1 or (given and getattr(args, "family", None)):
        raise UsageError("give exactly one of --values, --set, --family")
    if getattr(args, "values", None):
        return [(f"values:{os.path.basename(args.values)}", read_values(group, args.values))]
    if getattr(args, "set", None):
        return [(f"set:{os.path.basename(args.set)}", GroupFunction.indicator(group, read_set(group, args.set)))]
    family = getattr(args, "family", None) or "ap"
    return generate_family(family, group, seed=args.seed, trials=args.trials)


def _characters(group: Group, path: str | None, what: str) -> list[int]:
    if not path:
        raise UsageError(f"{what} file is required")
    return read_set(group, path)


def _map(args, fn, items):
    """Apply ``fn`` to each item; rows keep input order whatever the pool does."""

    def timed(item):
        t0 = time.perf_counter()
        row = fn(item)
        row["runtime_ms"] = round(1000 * (time.perf_counter() - t0), 3)
        return row

    if args.workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            return list(pool.map(timed, items))
    return [timed(it) for it in items]


# ----------------------------------------------------------------------
# subcommands


def cmd_transform(args, consts, out):
    group = _group(args, consts)

    def one(item):
        desc, f = item
        s = fourier(f)
        back = inverse(s).values
        scale = max(np.abs(f.values).max(), 1e-300)
        roundtrip = float(np.abs(back - f.values).max() / scale)
        parseval = abs(float(np.sum(s.magnitudes**2)) - float(np.mean(np.abs(f.values) ** 2)))
        parseval /= max(float(np.mean(np.abs(f.values) ** 2)), 1e-300)
        return {"input": desc, "coeffs": s.coeffs, "roundtrip_defect": roundtrip,
                "parseval_defect": parseval, "roundtrip_ok": roundtrip <= 1e-10, "parseval_ok": parseval <= 1e-10}

    rows = _map(args, one, _inputs(args, group))
    coeff_rows = []
    for r in rows:
        c = r.pop("coeffs")
        for g in range(group.order):
            coeff_rows.append({"input": r["input"], "gamma": g, "re": float(c[g].real), "im": float(c[g].imag)})
    out.table("transform", rows)
    out.table("coefficients", coeff_rows, stdout=False)
    return rows


def cmd_anorm(args, consts, out):
    group = _group(args, consts)

    def one(item):
        desc, f = item
        return {"input": desc, "size": int(np.count_nonzero(f.values)), "a_norm": norm(f, "A"),
                "a_ratio": a_ratio(f), "l1": norm(f, "L1"), "l2": norm(f, "L2"), "linf": norm(f, "Linf"),
                "log_n": math.log(group.order)}

    rows = _map(args, one, _inputs(args, group))
    out.table("anorm", rows)
    return rows


def cmd_spectrum(args, consts, out):
    group = _group(args, consts)

    def one(item):
        desc, f = item
        sp = large_spectrum(f, args.epsilon, args.kind, consts)
        return {"input": desc, "kind": args.kind, "epsilon": args.epsilon, "level": sp.level, "size": len(sp),
                "bound": sp.bound, "members": sp.characters.members, "coeffs": sp.spectrum.coeffs,
                "bound_ok": within_bound(len(sp), sp.bound, consts.tol)}

    rows = _map(args, one, _inputs(args, group))
    chars = []
    for r in rows:
        c = r.pop("coeffs")
        for g in r.pop("members"):
            chars.append({"input": r["input"], "char_index": int(g), "abs_coeff": float(abs(c[g])),
                          "re": float(c[g].real), "im": float(c[g].imag)})
    out.table("spectrum", chars)
    out.table("spectrum_summary", rows, stdout=False)
    return rows


def _s_set(args, group, consts):
    if args.s_set == "zero":
        return [0]
    if args.s_set.startswith("bohr:"):
        try:
            delta = float(args.s_set.split(":", 1)[1])
        except ValueError as exc:
            raise errors.ParameterError(f"bad --s-set {args.s_set!r}") from exc
        gamma = _characters(group, args.gamma, "--gamma")
        b = bohr_set(group, gamma, delta)
        return [int(v) for v in cutoff_spectrum(b, 1.0 / 3.0, consts.tol)]
    raise errors.ParameterError(f"--s-set must be 'zero' or 'bohr:<delta>', got {args.s_set!r}")


def cmd_dissociate(args, consts, out):
    group = _group(args, consts)
    s_set = _s_set(args, group, consts)
    if args.candidates:
        items = [(f"set:{os.path.basename(args.candidates)}", read_set(group, args.candidates))]
    else:
        items = [(desc, list(large_spectrum(f, args.epsilon, "linf", consts).characters.members))
                 for desc, f in _inputs(args, group)]

    def one(item):
        desc, cands = item
        sel = max_dissociated_subset(group, cands, s_set, consts=consts)
        ok, _ = is_s_dissociated(group, sel.chosen.members, s_set, consts)
        return {"input": desc, "candidates": len(cands), "s_size": len(s_set), "chosen": list(sel.chosen.members),
                "size": len(sel.chosen), "s_dissociated": ok, "covered": sel.covered}

    rows = _map(args, one, items)
    if out.out_dir:
        for i, r in enumerate(rows):
            write_set(group, r["chosen"], out.path(f"lambda_{i}.txt"))
    out.table("dissociate", rows)
    return rows


def _weights(args, group):
    lam = _characters(group, args.lam, "--lambda")
    omega = read_weights(args.omega) if args.omega else np.ones(len(lam), dtype=np.complex128)
    if omega.size != len(lam):
        raise errors.ParameterError(f"{omega.size} weights for {len(lam)} characters")
    return lam, omega


def cmd_riesz(args, consts, out):
    group = _group(args, consts)
    lam, omega = _weights(args, group)
    w = HermitianWeights(group, tuple(lam), omega)
    p = riesz_product(w, args.t, args.mode)
    real = fourier(p).coeffs
    formal = formal_transform(w, t=args.t, mode=args.mode).realize().coeffs
    row = {"group": str(group), "mode": args.mode, "t": args.t, "lam_size": len(lam),
           "l1_norm": norm(p, "L1"), "min_value": float(p.values.min()),
           "formal_defect": float(np.abs(real - formal).max()),
           "nonnegative": bool(p.values.min() >= -1e-12),
           "formal_ok": bool(np.abs(real - formal).max() <= 1e-10)}
    out.table("riesz", [row])
    out.table("riesz_values", [{"x": x, "value": float(v)} for x, v in enumerate(p.values)], stdout=False)
    return [row]


def cmd_tau(args, consts, out):
    tau = make_tau(args.l)
    rows = []
    for k in range(0, 4 * args.l + 1):
        m = tau.moment(k)
        if k == 1:
            ok = abs(m - 1.0) <= 1e-9
        elif k <= 2 * args.l:
            ok = abs(m) <= 1e-9
        else:
            ok = abs(m) <= 2.0 ** (1 - k) + 1e-9
        rows.append({"l": args.l, "k": k, "moment": m, "moment_ok": ok})
    rows.append({"l": args.l, "k": "norm", "moment": tau.norm, "moment_ok": tau.norm <= 2 * (2 * args.l - 1) + 1e-9})
    out.table("tau", rows)
    out.table("tau_nodes", [{"node": float(x), "weight": float(w)} for x, w in zip(tau.nodes, tau.weights)],
              stdout=False)
    return rows


def cmd_aux(args, consts, out):
    group = _group(args, consts)
    lam, omega = _weights(args, group)
    if args.mode == "general":
        mu, rep = aux_measure_with_report(group, lam, omega, args.eta, consts)
        extra = {"degree": rep.degree, "rounds": rep.rounds, "on_target_defect": rep.on_target_defect}
    else:
        w = HermitianWeights(group, tuple(lam), omega)
        mu = primitive_aux(w, args.eta, consts) if args.mode == "primitive" else aux_measure_model(w, args.eta, consts)
        extra = {}
    c = aux_checks(mu, lam, omega, args.eta)
    tv_cap = consts.c_aux * (1 + math.log2(1 / args.eta))
    # the primitive construction has norm of order 1/eta, so only its exact clauses are checked
    row = {"group": str(group), "mode": args.mode, "eta": args.eta, "lam_size": len(lam), **extra,
           "interpolation_defect": c["interpolation"], "max_leakage": c["leakage"],
           "total_variation": c["total_variation"], "tv_cap": tv_cap,
           "interpolation_ok": c["interpolation"] <= 2.0 ** -30,
           "leakage_ok": c["leakage"] <= args.eta * (1 + consts.tol)}
    if args.mode != "primitive":
        row["tv_ok"] = c["total_variation"] <= tv_cap
    out.table("aux", [row])
    out.table("aux_weights", [{"x": x, "re": float(v.real), "im": float(v.imag)}
                              for x, v in enumerate(np.asarray(mu.weights, dtype=np.complex128))], stdout=False)
    return [row]


def cmd_bohr(args, consts, out):
    group = _group(args, consts)
    gamma = _characters(group, args.gamma, "--gamma")
    profile = BohrProfile(group, gamma)
    b = bohr_set(group, gamma, args.delta)
    payload = {"group": str(group), "gamma": gamma, "delta": args.delta, "size": b.size, "density": b.density,
               "density_bound": b.density_bound(), "underflow": b.underflow,
               "density_ok": b.density >= b.density_bound(), "members": b.members}
    if args.regular:
        reg = find_regular(group, gamma, args.delta, consts, profile)
        payload["regular"] = {"delta": reg.delta, "constant": reg.constant, "size": reg.bohr.size,
                              "constant_ok": reg.constant <= consts.c_reg}
    if args.smooth:
        try:
            steps, kappa = args.smooth.split(",")
            steps, kappa = int(steps), float(kappa)
        except ValueError as exc:
            raise errors.ParameterError(f"--smooth expects L,KAPPA, got {args.smooth!r}") from exc
        sm = smoothed_cutoff(group, gamma, args.delta, steps, kappa, profile)
        payload["smooth"] = {"steps": steps, "kappa": kappa, "distance": sm.distance,
                             "measured_constant": sm.measured_constant(len(gamma)),
                             "constant_ok": sm.measured_constant(len(gamma)) <= consts.c_smooth}
    out.json("bohr", payload)
    flags = [payload["density_ok"]] + [payload[k]["constant_ok"] for k in ("regular", "smooth") if k in payload]
    return [{"ok": all(flags)}]


def cmd_cover(args, consts, out):
    group = _group(args, consts)

    def one(item):
        desc, f = item
        row = {"input": desc, "kind": args.kind, "epsilon": args.epsilon}
        if args.kind in ("chang", "ag"):
            res = (chang_cover if args.kind == "chang" else ag_cover)(f, args.epsilon, consts)
            row.update(target_size=len(res.target), lam_size=len(res.lam), budget=res.budget,
                       measured_constant=res.measured_constant, lam=list(res.lam.members),
                       covered=res.covered, constant_ok=res.measured_constant <= res.constant_cap)
        elif args.kind == "model":
            gamma = read_set(group, args.gamma) if args.gamma else []
            lam, rep = model_local_cover(f, gamma, args.epsilon, refined=args.refined, consts=consts)
            row.update(lam_size=len(lam), lam=list(lam.members), covered=bool(rep.get("covered", True)))
        else:
            gamma = read_set(group, args.gamma) if args.gamma else []
            reg = find_regular(group, gamma, args.delta, consts)
            eta = args.eta if args.eta else args.epsilon / 4
            res = local_ag_cover(f, reg, args.epsilon, eta, consts)
            row.update(delta=reg.delta, lam_size=len(res.lam), lam=list(res.lam.members),
                       delta_prime=res.delta_prime, covered=res.cover.covered,
                       certified=res.ledger.holds if res.ledger else True,
                       chain_ok=(res.ledger.chain_sup is None or res.ledger.chain_sup <= 2 + 1e-9)
                       if res.ledger else True)
        return row

    rows = _map(args, one, _inputs(args, group))
    out.table("cover", rows)
    return rows


def _round_dict(r) -> dict:
    return {"round": r.round, "gamma_count": r.frequencies, "codim": r.codim, "delta": r.delta,
            "delta_prime": r.delta_prime, "ledger": r.ledger, "s_index": r.s_index,
            "class_sizes": list(r.class_sizes), "branch": r.branch, "local_error": r.local_error,
            "increment": r.increment, "underflow": r.underflow}


def cmd_approximate(args, consts, out):
    group = _group(args, consts)
    traces = []

    def one(item):
        desc, f = item
        row = {"input": desc, "mode": args.mode, "epsilon": args.epsilon}
        if args.mode in ("f2n-plain", "f2n-refined"):
            res = f2n_approximate(f, args.epsilon, refined=args.mode == "f2n-refined", consts=consts)
            row.update(codim=res.dimension, rounds=res.num_rounds, l2_error=res.l2_error, bound=res.bound,
                       measured_constant=res.measured_constant, verified=res.verified)
        elif args.mode == "bohr":
            res = bohr_approximate(f, args.epsilon, consts)
            v = verify_bohr_clauses(f, res)
            row.update(dimension=res.dimension, rounds=res.num_rounds, delta=res.delta,
                       delta_prime=res.delta_prime, l2_error=v["l2"], oscillation=v["oscillation"],
                       width_underflow="yes" if res.extras.get("underflow") else "no", verified=v["ok"])
        else:
            res = poor_approximate(f, args.epsilon, consts)
            row.update(dimension=res.dimension, delta=res.delta, sup_error=res.l2_error, verified=res.verified)
        traces.append((desc, [_round_dict(r) for r in res.rounds]))
        return row

    rows = _map(args, one, _inputs(args, group))
    if args.trace:
        order = {r["input"]: i for i, r in enumerate(rows)}
        recs = [{"input": d, **rec} for d, recs in sorted(traces, key=lambda t: order[t[0]]) for rec in recs]
        out.trace(args.trace, "approximate", recs)
    out.table("approximate", rows)
    return rows


def cmd_littlewood(args, consts, out):
    p = args.p
    group = parse_group(f"Z{p}", cap=consts.size_cap)
    if args.set:
        items = [(f"set:{os.path.basename(args.set)}", read_set(group, args.set))]
    else:
        fam = args.family or "random"
        items = [(d, np.flatnonzero(f.values)) for d, f in generate_family(fam, group, args.seed, args.trials)]
        if fam == "ap":
            items = [it for it in items if ":len=" in it[0] and 0.25 <= len(it[1]) / p <= 0.75]

    def one(item):
        desc, members = item
        rep = littlewood_certificate(p, members, consts)
        return {"input": desc, "p": p, "size": rep.size, "a_norm": rep.a_norm,
                "a_norm_over_log": rep.a_norm_over_log, "reference_lower": rep.reference_lower,
                "dimension": rep.dimension, "delta_prime": rep.delta_prime,
                "certified_lhs": rep.certified_lhs, "log_p": rep.log_p, "rounds": rep.rounds,
                "contradiction_avoided": rep.contradiction_avoided,
                "certificate_ok": rep.certified_lhs >= rep.log_p}

    rows = _map(args, one, items)
    out.table("littlewood", rows)
    return rows


def cmd_verify(args, consts, out):
    if args.suite != "all" and args.suite not in SUITE:
        raise errors.ParameterError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITE)}")
    rows = []
    for name, ok, detail in run_suite(args.suite, args.seed, consts):
        rows.append({"check": name, "detail": detail, "passed": ok})
    out.table("verify", rows)
    return rows


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help='group, e.g. "Z101", "F2^8", "Z4xZ3"')
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", metavar="DIR", help="write CSV/JSON files here instead of stdout")
    common.add_argument("--config", metavar="FILE", help="key = value constants file")
    common.add_argument("--constants", metavar="K=V,...", help="constant overrides")
    common.add_argument("--workers", type=int, default=1, help="thread pool size for corpus entries")
    common.add_argument("--timing", action="store_true", help="add a runtime_ms column")

    def inputs(sp, trials=10):
        sp.add_argument("--values", metavar="FILE", help="function values, one re[,im] per line")
        sp.add_argument("--set", metavar="FILE", help="set file; the indicator is used")
        sp.add_argument("--family", choices=FAMILIES)
        sp.add_argument("--trials", type=int, default=trials)

    p = argparse.ArgumentParser(prog="spectral-bohr", description="Fourier-analytic structure on finite abelian groups.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("transform", parents=[common], help="Fourier transform with roundtrip checks")
    inputs(sp)
    sp = sub.add_parser("anorm", parents=[common], help="A(G)-norm and related norms")
    inputs(sp)
    sp = sub.add_parser("spectrum", parents=[common], help="large spectrum and its size bound")
    inputs(sp)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--kind", choices=("l1", "linf"), default="linf")

    sp = sub.add_parser("dissociate", parents=[common], help="maximal S-dissociated subset")
    inputs(sp)
    sp.add_argument("--candidates", metavar="FILE", help="candidate characters (default: large spectrum)")
    sp.add_argument("--epsilon", type=float, default=0.25)
    sp.add_argument("--s-set", default="zero", help="zero | bohr:<delta'> (uses --gamma)")
    sp.add_argument("--gamma", metavar="FILE")

    sp = sub.add_parser("riesz", parents=[common], help="Riesz product and its formal transform")
    sp.add_argument("--lambda", dest="lam", metavar="FILE", required=True)
    sp.add_argument("--omega", metavar="FILE")
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--mode", choices=("model", "general"), default="general")

    sp = sub.add_parser("tau", parents=[common], help="odd moment-matching measure on [-1, 1]")
    sp.add_argument("--l", type=int, required=True)

    sp = sub.add_parser("aux", parents=[common], help="auxiliary measure interpolating omega on Lambda")
    sp.add_argument("--mode", choices=("primitive", "model", "general"), default="general")
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", metavar="FILE", required=True)
    sp.add_argument("--omega", metavar="FILE")

    sp = sub.add_parser("bohr", parents=[common], help="Bohr set, regular width and smoothed cutoff")
    sp.add_argument("--gamma", metavar="FILE", required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--regular", action="store_true")
    sp.add_argument("--smooth", metavar="L,KAPPA")

    sp = sub.add_parser("cover", parents=[common], help="cover a large spectrum by a dissociated span")
    inputs(sp)
    sp.add_argument("--kind", choices=("chang", "ag", "local", "model"), default="ag")
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--delta", type=float, default=0.25)
    sp.add_argument("--gamma", metavar="FILE")
    sp.add_argument("--refined", action="store_true")

    sp = sub.add_parser("approximate", parents=[common], help="subspace or Bohr set approximation")
    inputs(sp)
    sp.add_argument("--mode", choices=("f2n-plain", "f2n-refined", "bohr", "poor"), required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--trace", metavar="FILE.json")

    sp = sub.add_parser("littlewood", parents=[common], help="certificate for sets of residues mod p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--set", metavar="FILE")
    sp.add_argument("--family", choices=("ap", "random", "qr"))
    sp.add_argument("--trials", type=int, default=10)

    sp = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    sp.add_argument("--suite", default="all", help="all or one of: " + ", ".join(SUITE))
    return p


COMMANDS = {
    "transform": cmd_transform,
    "anorm": cmd_anorm,
    "spectrum": cmd_spectrum,
    "dissociate": cmd_dissociate,
    "riesz": cmd_riesz,
    "tau": cmd_tau,
    "aux": cmd_aux,
    "bohr": cmd_bohr,
    "cover": cmd_cover,
    "approximate": cmd_approximate,
    "littlewood": cmd_littlewood,
    "verify": cmd_verify,
}


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, errors.SizeCapError):
        return EXIT_CAP
    if isinstance(exc, (errors.VerificationError, errors.RegularityError, errors.WidthUnderflowError)):
        return EXIT_VERIFY
    if isinstance(exc, (errors.SpectralBohrError, ValueError, OSError)):
        return EXIT_INPUT
    raise exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        consts = load_config(args.config, args.constants)
        out = Output(args.out, args.timing)
        rows = COMMANDS[args.command](args, consts, out)
    except Exception as exc:  # mapped onto the exit-code contract
        code = exit_code(exc)
        print(f"spectral-bohr: error: {exc}", file=sys.stderr)
        return code
    return EXIT_OK if _all_verified(rows) else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
