"""Search budgets.

Every exhaustive routine takes an optional `budgets` argument; when it is
omitted the defaults below apply. A TOML file with a `[budgets]` table (or
top-level keys) can override any field.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace, asdict
from pathlib import Path

import tomli

from .errors import PreconditionError


@dataclass(frozen=True)
class Budgets:
    max_cliques: int = 100_000
    chi_max_n: int = 20
    qperfect_max_n: int = 12
    perfect_max_n: int = 16
    parity_max_n: int = 12
    orientation_max_n: int = 14
    tu_max_minors: int = 5_000_000
    max_dicycles: int = 1_000_000
    esp_max_cliques: int = 16
    esp_max_states: int = 2_000_000
    reform_max_points: int = 2_000_000
    dual_max_states: int = 2_000_000
    falsify_max_w: int = 2
    falsify_denoms: tuple[int, ...] = (1, 2, 3)
    falsify_max_evals: int = 1_000_000_000
    enumerate_q_max_side: int = 5
    enumerate_s_max_n: int = 14

    def to_dict(self) -> dict:
        d = asdict(self)
        d["falsify_denoms"] = list(self.falsify_denoms)
        return d


DEFAULT = Budgets()


def budgets_from_mapping(data: dict) -> Budgets:
    known = {f.name: f for f in fields(Budgets)}
    if "budgets" in data and isinstance(data["budgets"], dict):
        data = data["budgets"]
    kw = {}
    for key, value in data.items():
        if key not in known:
            raise PreconditionError(f"unknown budget key {key!r}")
        if key == "falsify_denoms":
            if not isinstance(value, (list, tuple)) or not value:
                raise PreconditionError("falsify_denoms must be a nonempty list")
            value = tuple(int(v) for v in value)
            if any(v <= 0 for v in value):
                raise PreconditionError("falsify_denoms must be positive")
        else:
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise PreconditionError(f"budget {key} must be a nonnegative integer")
        kw[key] = value
    return replace(DEFAULT, **kw)


def load_budgets(path: str | Path | None) -> Budgets:
    if path is None:
        return DEFAULT
    with open(path, "rb") as fh:
        data = tomli.load(fh)
    return budgets_from_mapping(data)
