"""Size caps, overridable through the ``TRL_CAPS`` environment variable.

``TRL_CAPS="vertex_dim=12,tensor_size=1024"`` overrides individual entries.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Caps:
    vertex_dim: int = 16
    facets: int = 4096
    vertices: int = 1 << 17
    tensor_size: int = 4096
    sign_vectors: int = 1 << 20
    vertex_tuples: int = 1 << 20
    lp_rows_exact: int = 400


def _parse(spec: str) -> dict:
    known = {f.name for f in fields(Caps)}
    out = {}
    for item in filter(None, (s.strip() for s in spec.split(","))):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in known:
            raise ValueError(f"unknown cap {key!r} in TRL_CAPS")
        out[key] = int(value)
    return out


def get_caps() -> Caps:
    return replace(Caps(), **_parse(os.environ.get("TRL_CAPS", "")))
