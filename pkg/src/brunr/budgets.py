"""Resource budgets for the brute-force paths, with an environment override.

``BRUNR_BUDGET`` holds comma-separated ``key=value`` pairs, for example
``b0=64,h2=96``.  Keys are the field names of :class:`Budgets`.  A bare
number (``BRUNR_BUDGET=64``) sets the primary budget of whichever command
reads it, exactly like the ``--budget`` flag.  The value ``none`` removes a
limit.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace

from brunr.class2 import DEFAULT_SBIC_BUDGET
from brunr.cohomology import DEFAULT_B0_BUDGET, DEFAULT_H2_BUDGET
from brunr.lattices import DEFAULT_DIRECT_BUDGET, DEFAULT_RANK_BUDGET

ENV_VAR = "BRUNR_BUDGET"


@dataclass(frozen=True)
class Budgets:
    h2: int | None = DEFAULT_H2_BUDGET  # |G| for h2_qz / h2_trivial_mod
    b0: int | None = DEFAULT_B0_BUDGET  # |G| for b0
    sbic: int | None = DEFAULT_SBIC_BUDGET  # p^dim S for decomposable enumeration
    lattice: int | None = DEFAULT_DIRECT_BUDGET  # |G|^2 * rank for direct H^2(G, L)
    rank: int | None = DEFAULT_RANK_BUDGET  # |G|^2 for the standard kernel lattice
    primary: int | None = None  # bare-number override, interpreted per command

    def lifted(self) -> "Budgets":
        """Every limit removed (the slow flag)."""
        return Budgets(None, None, None, None, None, None)

    def to_json(self) -> dict:
        return asdict(self)


def _value(text: str):
    text = text.strip().lower()
    if text in ("none", "inf", "off"):
        return None
    v = int(text)
    if v < 1:
        raise ValueError(f"budget values must be positive, got {v}")
    return v


def parse_budget_string(text: str, base: Budgets | None = None) -> Budgets:
    """Apply a ``BRUNR_BUDGET``-style string on top of ``base``."""
    base = base or Budgets()
    text = (text or "").strip()
    if not text:
        return base
    names = {f.name for f in fields(Budgets)}
    changes = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            key, val = part.split("=", 1)
            key = key.strip().lower()
            if key not in names:
                raise ValueError(f"unknown budget key {key!r}; known: {sorted(names)}")
            changes[key] = _value(val)
        else:
            changes["primary"] = _value(part)
    return replace(base, **changes)


def from_env(environ=None) -> Budgets:
    environ = os.environ if environ is None else environ
    return parse_budget_string(environ.get(ENV_VAR, ""))
