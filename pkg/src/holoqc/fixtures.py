"""Published loops shipped with the package (vertex coordinates rounded to two decimals)."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .gatelib import GateSpec
from .loops import PolygonalLoop, loads_loop

PUBLISHED = {
    "hadamard": "published_hadamard.json",
    "su2": "published_su2.json",
}

# e^{i} exp(i pi/7 sz) exp(i sy/3) exp(i sz)
SU2_GATE = GateSpec("su2", (1.0, np.pi / 7, 1.0 / 3.0, 1.0))
HADAMARD_GATE = GateSpec("hadamard")


def published_loop(name: str) -> PolygonalLoop:
    try:
        filename = PUBLISHED[name]
    except KeyError:
        raise ValueError(f"unknown published loop {name!r}; choose from {sorted(PUBLISHED)}") from None
    text = resources.files("holoqc").joinpath("data", filename).read_text(encoding="utf-8")
    return loads_loop(text, filename)


def published_path(name: str):
    """Filesystem path of a shipped loop file (for CLI use)."""
    return resources.files("holoqc").joinpath("data", PUBLISHED[name])
