"""Finite abelian groups, their characters, and the Fourier transform.

A group is a product of cyclic factors ``Z/N_1 x ... x Z/N_r``.  Elements
and characters are both addressed by a flat index in mixed radix with the
first factor most significant (numpy C order).  The dual group is
identified with the group itself: the character ``gamma`` acts by

    gamma(x) = exp(2 pi i * sum_j gamma_j x_j / N_j).

Transforms use Haar probability on the group and counting measure on the
dual::

    fhat(gamma) = |G|^-1 sum_x f(x) conj(gamma(x)),    f = sum_gamma fhat(gamma) gamma.

Measures are complex weight vectors; their transform is
``muhat(gamma) = sum_x w(x) conj(gamma(x))`` so that ``(a * b)^ = ahat bhat``
holds for every pairing of functions and measures.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT
from .errors import (
    DegenerateInputError,
    GroupMismatchError,
    GroupSpecError,
    SizeCapError,
)

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Group:
    """``Z/N_1 x ... x Z/N_r`` with every ``N_j >= 2``."""

    factors: tuple

    def __post_init__(self):
        facs = tuple(int(n) for n in self.factors)
        if not facs:
            raise GroupSpecError("a group needs at least one factor")
        for n in facs:
            if n < 2:
                raise GroupSpecError(f"cyclic factor must be >= 2, got {n}")
        object.__setattr__(self, "factors", facs)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def shape(self) -> tuple:
        return self.factors

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_boolean(self) -> bool:
        """True for powers of Z/2 (the model setting)."""
        return all(n == 2 for n in self.factors)

    @property
    def kind(self) -> str:
        if self.is_boolean and self.rank > 1:
            return "boolean-cube"
        if self.rank == 1:
            return "cyclic"
        return "mixed"

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.factors)

    @cached_property
    def _scale(self) -> np.ndarray:
        return np.array([self.exponent // n for n in self.factors], dtype=np.int64)

    @cached_property
    def element_coords(self) -> np.ndarray:
        """``(|G|, r)`` array of coordinates of every element in flat order."""
        idx = np.arange(self.order)
        return np.stack(np.unravel_index(idx, self.shape), axis=1).astype(np.int64)

    def __str__(self):
        if self.is_boolean and self.rank > 1:
            return f"F2^{self.rank}"
        return "x".join(f"Z{n}" for n in self.factors)

    # element arithmetic on flat indices -------------------------------

    def coords(self, index) -> np.ndarray:
        return np.stack(np.unravel_index(np.asarray(index), self.shape), axis=-1).astype(np.int64)

    def index(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        return np.ravel_multi_index(tuple(np.moveaxis(c, -1, 0)), self.shape, mode="wrap")

    def add(self, a, b):
        if self.is_boolean:
            return np.bitwise_xor(np.asarray(a), np.asarray(b))
        return self.index(self.coords(a) + self.coords(b))

    def neg(self, a):
        if self.is_boolean:
            return np.asarray(a)
        return self.index(-self.coords(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def check_index(self, values: Iterable[int]) -> np.ndarray:
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise GroupSpecError(f"index out of range for {self}")
        return arr

    def roll(self, values: np.ndarray, shift: int) -> np.ndarray:
        """Return ``v`` with ``v_new(x) = v(x - shift)``."""
        c = tuple(int(v) for v in self.coords(shift))
        out = np.roll(np.asarray(values).reshape(self.shape), c, axis=tuple(range(self.rank)))
        return out.reshape(self.order)

    # characters --------------------------------------------------------

    def phase_numerators(self, gammas) -> np.ndarray:
        """Integer phases ``L * sum_j gamma_j x_j / N_j mod L`` with ``L`` the exponent.

        Returns shape ``(k, |G|)`` for ``k`` characters.
        """
        g = self.coords(np.atleast_1d(np.asarray(gammas, dtype=np.int64)))
        weighted = (g * self._scale) % self.exponent
        return (weighted @ self.element_coords.T) % self.exponent

    def valuation_numerators(self, gammas) -> np.ndarray:
        """``L * ||gamma(x)||`` where ``||.||`` is distance to the nearest integer."""
        r = self.phase_numerators(gammas)
        return np.minimum(r, self.exponent - r)

    def characters(self, gammas) -> np.ndarray:
        """Values of the given characters, shape ``(k, |G|)``."""
        return np.exp(1j * _TWO_PI * self.phase_numerators(gammas) / self.exponent)

    def character(self, gamma: int) -> np.ndarray:
        return self.characters([gamma])[0]


_CYCLIC = re.compile(r"^Z(\d+)$")
_POWER = re.compile(r"^(?:F2|Z2)\^(\d+)$")


def parse_group(text: str, cap: int | None = None) -> Group:
    """Parse ``Z<N>``, ``F2^<n>`` or products like ``Z4xZ3``."""
    text = text.strip().replace(" ", "")
    if not text:
        raise GroupSpecError("empty group description")
    factors = []
    for part in re.split(r"[x*]", text):
        m = _CYCLIC.match(part)
        if m:
            factors.append(int(m.group(1)))
            continue
        m = _POWER.match(part)
        if m:
            factors.extend([2] * int(m.group(1)))
            continue
        raise GroupSpecError(f"cannot parse group factor {part!r}")
    return make_group(factors, cap)


def make_group(factors: Sequence[int], cap: int | None = None) -> Group:
    group = Group(tuple(factors))
    cap = DEFAULT.size_cap if cap is None else cap
    if group.order > cap:
        raise SizeCapError(f"|G| = {group.order} exceeds the size cap {cap}")
    return group


def boolean_cube(n: int) -> Group:
    return make_group([2] * n)


def cyclic(n: int) -> Group:
    return make_group([n])


# ----------------------------------------------------------------------
# value containers


def _same_group(a, b):
    if a.group != b.group:
        raise GroupMismatchError(f"{a.group} vs {b.group}")


def _as_values(group: Group, values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.shape != (group.order,):
        arr = arr.reshape(-1)
        if arr.shape != (group.order,):
            raise GroupMismatchError(f"expected {group.order} values, got {arr.size}")
    if not np.issubdtype(arr.dtype, np.complexfloating):
        arr = arr.astype(np.float64)
    return arr


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """A complex (or real) valued function on a group."""

    group: Group
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.group, self.values))

    @classmethod
    def indicator(cls, group: Group, members) -> "GroupFunction":
        v = np.zeros(group.order)
        v[group.check_index(members)] = 1.0
        return cls(group, v)

    @classmethod
    def character(cls, group: Group, gamma: int) -> "GroupFunction":
        return cls(group, group.character(gamma))

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def _wrap(self, other, op):
        if isinstance(other, GroupFunction):
            _same_group(self, other)
            other = other.values
        return GroupFunction(self.group, op(self.values, other))

    def __add__(self, other):
        return self._wrap(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(other, np.subtract)

    def __rsub__(self, other):
        return self._wrap(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._wrap(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return GroupFunction(self.group, -self.values)

    def translate(self, shift: int) -> "GroupFunction":
        """``x -> f(x + shift)``."""
        return GroupFunction(self.group, self.group.roll(self.values, self.group.neg(shift)))


@dataclass(frozen=True, eq=False)
class GroupMeasure:
    """A complex measure given by its weights on each element."""

    group: Group
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", _as_values(self.group, self.weights))

    @classmethod
    def uniform_on(cls, group: Group, members) -> "GroupMeasure":
        idx = group.check_index(members)
        if idx.size == 0:
            raise DegenerateInputError("uniform measure on an empty set")
        w = np.zeros(group.order)
        w[idx] = 1.0 / idx.size
        return cls(group, w)

    @classmethod
    def from_density(cls, f: GroupFunction) -> "GroupMeasure":
        """The measure ``f dmu_G``."""
        return cls(f.group, f.values / f.group.order)

    def density(self) -> GroupFunction:
        return GroupFunction(self.group, self.weights * self.group.order)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.weights)

    def __sub__(self, other):
        _same_group(self, other)
        return GroupMeasure(self.group, self.weights - other.weights)

    def __add__(self, other):
        _same_group(self, other)
        return GroupMeasure(self.group, self.weights + other.weights)

    def __mul__(self, scalar):
        return GroupMeasure(self.group, self.weights * scalar)

    __rmul__ = __mul__

    def translate(self, shift: int) -> "GroupMeasure":
        """The measure ``A -> mu(A - shift)``."""
        return GroupMeasure(self.group, self.group.roll(self.weights, shift))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients indexed by the dual group."""

    group: Group
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.shape != (self.group.order,):
            raise GroupMismatchError(f"expected {self.group.order} coefficients, got {c.size}")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, gamma):
        return self.coeffs[gamma]

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coeffs)


@dataclass(frozen=True, eq=False)
class CharacterSet:
    """An ordered set of distinct characters (flat indices)."""

    group: Group
    members: tuple = field(default=())

    def __post_init__(self):
        idx = self.group.check_index(self.members)
        if len(set(idx.tolist())) != idx.size:
            raise DegenerateInputError("character set has repeated members")
        object.__setattr__(self, "members", tuple(int(v) for v in idx))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, gamma):
        return int(gamma) in set(self.members)

    @property
    def indices(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.indices] = True
        return m

    def union(self, other: Iterable[int]) -> "CharacterSet":
        seen = list(self.members)
        have = set(seen)
        for g in other:
            if int(g) not in have:
                seen.append(int(g))
                have.add(int(g))
        return CharacterSet(self.group, tuple(seen))


# ----------------------------------------------------------------------
# transforms


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly on a length ``2^n`` vector."""
    a = np.array(values, copy=True)
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0, :] + a[:, 1, :], a[:, 0, :] - a[:, 1, :]), axis=1)
        h *= 2
    return a.reshape(n)


def _forward(group: Group, values: np.ndarray) -> np.ndarray:
    if group.is_boolean:
        return walsh_hadamard(values).astype(np.complex128)
    return np.fft.fftn(values.reshape(group.shape)).reshape(group.order)


def _backward(group: Group, coeffs: np.ndarray) -> np.ndarray:
    if group.is_boolean:
        return walsh_hadamard(coeffs)
    return np.fft.ifftn(coeffs.reshape(group.shape)).reshape(group.order) * group.order


def fourier(obj) -> Spectrum:
    """Fourier transform of a :class:`GroupFunction` or :class:`GroupMeasure`."""
    if isinstance(obj, GroupFunction):
        return Spectrum(obj.group, _forward(obj.group, obj.values) / obj.group.order)
    if isinstance(obj, GroupMeasure):
        return Spectrum(obj.group, _forward(obj.group, obj.weights))
    raise TypeError(f"cannot transform {type(obj).__name__}")


def inverse(s: Spectrum, real: bool = False) -> GroupFunction:
    """``sum_gamma s(gamma) gamma``; ``real=True`` drops the imaginary part."""
    v = _backward(s.group, s.coeffs)
    if real:
        v = np.real(v)
    return GroupFunction(s.group, v)


def _real_output(*objs) -> bool:
    return all(o.is_real for o in objs)


def convolve(a, b):
    """Convolution of functions and measures.

    function * function is Haar-normalised, ``E_y a(y) b(x - y)``;
    function * measure is ``sum_y a(x - y) w(y)``; measure * measure is a
    measure.  In every case the transform is the product of transforms.
    """
    _same_group(a, b)
    prod = Spectrum(a.group, fourier(a).coeffs * fourier(b).coeffs)
    real = _real_output(a, b)
    if isinstance(a, GroupMeasure) and isinstance(b, GroupMeasure):
        w = _backward(a.group, prod.coeffs) / a.group.order
        return GroupMeasure(a.group, np.real(w) if real else w)
    return inverse(prod, real=real)


def norm(f, kind: str) -> float:
    """``L1``/``L2``/``Linf`` (Haar probability) or ``A`` (sum of |fhat|)."""
    if isinstance(f, Spectrum):
        if kind.upper() != "A":
            raise ValueError("only the A-norm is defined on a spectrum")
        return float(np.abs(f.coeffs).sum())
    k = kind.lower()
    v = np.abs(f.values)
    if k == "l1":
        return float(v.mean())
    if k == "l2":
        return float(math.sqrt(np.mean(v * v)))
    if k in ("linf", "inf", "sup"):
        return float(v.max())
    if k == "a":
        return float(np.abs(fourier(f).coeffs).sum())
    raise ValueError(f"unknown norm {kind!r}")


def tv_norm(mu: GroupMeasure) -> float:
    return float(np.abs(mu.weights).sum())


def a_ratio(f: GroupFunction) -> float:
    """``A_f = ||f||_A / ||f||_inf``, at least 1 by Hausdorff-Young."""
    sup = norm(f, "Linf")
    if sup == 0.0:
        raise DegenerateInputError("A_f is undefined for the zero function")
    return norm(f, "A") / sup


def pair(f: GroupFunction, mu: GroupMeasure) -> complex:
    """``<f, mu> = sum_x f(x) conj(w(x))`` (equals ``sum fhat conj(muhat)``)."""
    _same_group(f, mu)
    return complex(np.sum(f.values * np.conj(mu.weights)))
