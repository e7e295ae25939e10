"""Deterministic input families and plain-text I/O.

Families return ``(descriptor, GroupFunction)`` pairs.  All randomness goes
through ``numpy.random.default_rng(seed)`` so equal seeds give equal
corpora.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np

from .errors import ParameterError, WrongGroupKindError
from .groups import Group, GroupFunction

FAMILIES = ("ap", "random", "qr", "subspace-union", "character-noise")
DENSITIES = (0.25, 0.5, 0.75)


def interval(group: Group, length: int, start: int = 0, step: int = 1) -> np.ndarray:
    return (start + step * np.arange(length)) % group.order


def ap_family(group: Group):
    """Initial intervals of densities 1/4, 1/2, 3/4 (flat order)."""
    out = []
    for rho in DENSITIES:
        length = math.ceil(rho * group.order)
        members = interval(group, length)
        out.append((f"ap:start=0:step=1:len={length}", GroupFunction.indicator(group, members)))
    return out


def random_sets(group: Group, seed: int, trials: int, density: float = 0.5):
    rng = np.random.default_rng(seed)
    size = int(round(density * group.order))
    out = []
    for t in range(trials):
        members = np.sort(rng.choice(group.order, size=size, replace=False))
        out.append((f"random:trial={t}:size={size}", GroupFunction.indicator(group, members)))
    return out


def quadratic_residues(p: int) -> np.ndarray:
    return np.unique((np.arange(1, p, dtype=np.int64) ** 2) % p)


def qr_family(group: Group):
    if group.rank != 1:
        raise WrongGroupKindError("quadratic residues need a cyclic group")
    p = group.order
    from .iteration import is_prime

    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    members = quadratic_residues(p)
    return [(f"qr:p={p}", GroupFunction.indicator(group, members))]


def random_subspace(rng, n: int, codim: int) -> np.ndarray:
    """Members of a random subspace of (Z/2)^n of the given codimension."""
    from .f2 import F2Basis, coset_keys

    basis = F2Basis()
    while len(basis) < codim:
        basis.add(int(rng.integers(1, 1 << n)))
    keys = coset_keys(basis, 1 << n)
    return np.flatnonzero(keys == 0)


def subspace_union_family(group: Group, seed: int, trials: int):
    if not group.is_boolean:
        raise WrongGroupKindError("subspace unions live in a power of Z/2")
    n = group.rank
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        parts = int(rng.integers(1, 4))
        mask = np.zeros(group.order, dtype=bool)
        for _ in range(parts):
            codim = int(rng.integers(1, min(4, n) + 1))
            shift = int(rng.integers(0, group.order))
            mask[np.bitwise_xor(random_subspace(rng, n, codim), shift)] = True
        out.append((f"subspace-union:trial={t}:parts={parts}", GroupFunction.indicator(group, np.flatnonzero(mask))))
    return out


def character_noise_family(group: Group, seed: int, trials: int, noise: float = 0.1):
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        k = int(rng.integers(1, 5))
        chars = rng.choice(np.arange(1, group.order), size=min(k, group.order - 1), replace=False)
        vals = np.zeros(group.order)
        for g in chars:
            vals = vals + np.real(group.character(int(g)))
        vals = vals + noise * rng.standard_normal(group.order)
        out.append((f"character-noise:trial={t}:k={len(chars)}", GroupFunction(group, vals)))
    return out


def generate_family(name: str, group: Group, seed: int = 0, trials: int = 10):
    if name == "ap":
        return ap_family(group)
    if name == "random":
        return random_sets(group, seed, trials)
    if name == "qr":
        return qr_family(group)
    if name == "subspace-union":
        return subspace_union_family(group, seed, trials)
    if name == "character-noise":
        return character_noise_family(group, seed, trials)
    raise ParameterError(f"unknown family {name!r}; choose from {FAMILIES}")


def set_digest(members) -> str:
    data = ",".join(str(int(v)) for v in sorted(int(m) for m in members))
    return hashlib.sha256(data.encode()).hexdigest()


# ----------------------------------------------------------------------
# set and weight files


def format_element(group: Group, index: int) -> str:
    if group.rank == 1:
        return str(int(index))
    return ",".join(str(int(c)) for c in group.coords(index))


def parse_element(group: Group, text: str) -> int:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        coords = [int(p) for p in parts]
    except ValueError as exc:
        raise ParameterError(f"bad element {text!r}") from exc
    if len(coords) == 1 and group.rank > 1:
        if not 0 <= coords[0] < group.order:
            raise ParameterError(f"flat index {coords[0]} out of range")
        return coords[0]
    if len(coords) != group.rank:
        raise ParameterError(f"element {text!r} has {len(coords)} coordinates, group has {group.rank}")
    return int(group.index(np.array(coords) % np.array(group.factors)))


def read_set(group: Group, path: str) -> list[int]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(parse_element(group, line))
    return out


def write_set(group: Group, members, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for m in members:
            fh.write(format_element(group, int(m)) + "\n")


def read_weights(path: str) -> np.ndarray:
    """One ``re,im`` (or just ``re``) per line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                re_ = float(parts[0])
                im_ = float(parts[1]) if len(parts) > 1 else 0.0
            except (ValueError, IndexError) as exc:
                raise ParameterError(f"bad weight line {line!r}") from exc
            out.append(complex(re_, im_))
    return np.asarray(out, dtype=np.complex128)


def read_values(group: Group, path: str) -> GroupFunction:
    vals = read_weights(path)
    if vals.size != group.order:
        raise ParameterError(f"expected {group.order} values, got {vals.size}")
    if np.all(vals.imag == 0):
        return GroupFunction(group, vals.real)
    return GroupFunction(group, vals)
