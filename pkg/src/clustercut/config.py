"""Runtime caps shared by the oracles, solvers and CLI.

Every field can be overridden from the environment with a ``CLUSTERCUT_``
prefix, e.g. ``CLUSTERCUT_ORACLE_N_K2=16``.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_PREFIX = "CLUSTERCUT_"


@dataclass(frozen=True)
class Caps:
    coord_max: int = 2**31 - 1
    oracle_n_k2: int = 14
    oracle_n_k3: int = 10
    oracle_n_other: int = 8
    maxcut_oracle_n: int = 22
    # sums of up to six table entries must stay inside int64
    w_max: int = 2**60
    solver_max_n: int = 24
    strassen_crossover: int = 64

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None, **overrides: int) -> "Caps":
        environ = os.environ if environ is None else environ
        values: dict[str, int] = {}
        for f in dataclasses.fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key in environ:
                try:
                    values[f.name] = int(environ[key])
                except ValueError as exc:
                    raise ValueError(f"{key} must be an integer, got {environ[key]!r}") from exc
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


DEFAULT_CAPS = Caps()
