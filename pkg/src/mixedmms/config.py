"""Size guards for exhaustive routines.

Each guard can be overridden through an environment variable, read at call
time so tests and the CLI can adjust them without reimporting.

=============================  =========  ==========================================
variable                       default    meaning
=============================  =========  ==========================================
MIXEDMMS_MAX_GOODS             24         goods per exact max-min search
MIXEDMMS_NODE_LIMIT            5000000    search nodes before giving up
MIXEDMMS_EXACT_GOODS           12         goods below which maxmin is always exact
MIXEDMMS_EXACT_ASSIGNMENTS     10000000   k**m below which maxmin is always exact
MIXEDMMS_GAMMA_MAX_AGENTS      4          agents for brute-force gamma
MIXEDMMS_GAMMA_MAX_GOODS       8          goods for brute-force gamma
=============================  =========  ==========================================
"""

from __future__ import annotations

import os
from dataclasses import dataclass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


@dataclass(frozen=True)
class SizeGuards:
    max_goods: int = 24
    node_limit: int = 5_000_000
    exact_goods: int = 12
    exact_assignments: int = 10_000_000
    gamma_max_agents: int = 4
    gamma_max_goods: int = 8

    @classmethod
    def from_env(cls) -> "SizeGuards":
        d = cls()
        return cls(
            max_goods=_env_int("MIXEDMMS_MAX_GOODS", d.max_goods),
            node_limit=_env_int("MIXEDMMS_NODE_LIMIT", d.node_limit),
            exact_goods=_env_int("MIXEDMMS_EXACT_GOODS", d.exact_goods),
            exact_assignments=_env_int("MIXEDMMS_EXACT_ASSIGNMENTS", d.exact_assignments),
            gamma_max_agents=_env_int("MIXEDMMS_GAMMA_MAX_AGENTS", d.gamma_max_agents),
            gamma_max_goods=_env_int("MIXEDMMS_GAMMA_MAX_GOODS", d.gamma_max_goods),
        )
