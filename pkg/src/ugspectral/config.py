"""Global numeric configuration.

One record holds every tolerance and budget; tests pin these values.  The
environment variable UGSPEC_NUMERIC_CONFIG may name a JSON file overriding
individual fields.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class NumericConfig:
    residual_tol: float = 1e-9        # per-eigenpair residual / orthonormality
    aggregate_tol: float = 1e-8       # reconstruction, trace, multiset checks
    regularity_rel_tol: float = 1e-9  # d-regularity acceptance
    net_cap: int = 10**8              # max projected net points before erroring
    brute_budget: int = 10**8         # max labelings the oracle enumerates

    def to_dict(self):
        return asdict(self)


_config: NumericConfig | None = None


def numeric_config() -> NumericConfig:
    global _config
    if _config is None:
        cfg = NumericConfig()
        path = os.environ.get("UGSPEC_NUMERIC_CONFIG")
        if path:
            with open(path, "r", encoding="utf-8") as fh:
                cfg = replace(cfg, **json.load(fh))
        _config = cfg
    return _config


def set_numeric_config(cfg: NumericConfig):
    """Install a config (tests use this); pass None via reset to reload."""
    global _config
    _config = cfg


def reset_numeric_config():
    global _config
    _config = None
