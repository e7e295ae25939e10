"""Numeric constants and caps, gathered in one place.

Every tunable used by the algorithms lives on :class:`Constants`.  The CLI
reads overrides from a ``key = value`` file (``--config``) and from
``--constants k=v,k=v``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields

from .errors import ParameterError


@dataclass(frozen=True)
class Constants:
    # floating point
    tol: float = 1e-9
    boundary_guard: float = 1e-12
    # caps
    size_cap: int = 1 << 24
    dissociation_cap: int = 20
    model_dimension_cap: int = 16
    iteration_order_cap: int = 1 << 14
    # Bohr regularity search
    c_reg_window: float = 1e-2
    c_reg: float = 32.0
    reg_candidates: int = 64
    reg_probes: int = 33
    c_smooth: float = 64.0
    # covering constants
    c_chang: float = 8.0
    c_ag: float = 8.0
    c_local: float = 16.0
    c_aux: float = 8.0
    crty_probes: int = 16
    # auxiliary measures
    nearly_rounds: int = 40
    on_target_tol: float = 2.0 ** -40
    lift_modulus: int = 4
    # iterations
    c_eta: float = 1.0 / 64
    round_budget_factor: int = 4
    width_search_steps: int = 60

    def replace(self, **changes) -> "Constants":
        return dataclasses.replace(self, **changes)


DEFAULT = Constants()


def _coerce(name: str, raw: str):
    kinds = {f.name: f.type for f in fields(Constants)}
    if name not in kinds:
        raise ParameterError(f"unknown constant {name!r}")
    kind = kinds[name]
    try:
        if kind in ("int", int):
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        return float(raw)
    except ValueError as exc:
        raise ParameterError(f"bad value for {name}: {raw!r}") from exc


def parse_overrides(text: str | None) -> dict:
    """Parse ``k=v,k=v`` into a dict of typed overrides."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ParameterError(f"expected key=value, got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        out[key] = _coerce(key, raw)
    return out


def load_config(path: str | None, overrides: str | None = None) -> Constants:
    """Build constants from an optional config file plus CLI overrides.

    The file holds one ``key = value`` per line; ``#`` starts a comment.
    """
    values = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ParameterError(f"bad config line: {line!r}")
                key, raw = (part.strip() for part in line.split("=", 1))
                values[key] = _coerce(key, raw)
    values.update(parse_overrides(overrides))
    return DEFAULT.replace(**values)
