"""Design, mesh and netlist data types plus their JSON serializations.

A Design is the physical problem (die, sinks, loads). A MeshSpec is the
chosen grid plus buffer sites. A MeshNetlist is the flattened electrical
RC network: nodes with grounded caps, two-terminal resistors, linear ramp
drivers and sink taps. All JSON documents are schema-versioned and carry
a top-level "units" object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import SCHEMA_VERSION, UNITS, DataError

SIZE_CLASSES = ("small", "medium", "large")
MESH_STYLES = ("uniform", "nonuniform", "fixed")


@dataclass(frozen=True)
class Sink:
    x: float
    y: float
    load_cap: float  # fF


@dataclass(frozen=True)
class Design:
    width: float
    height: float
    sinks: tuple[Sink, ...]
    size_class: str
    rng_seed: int
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.size_class not in SIZE_CLASSES:
            raise DataError(f"unknown size class {self.size_class!r}")
        if len(self.sinks) < 1:
            raise DataError("design must have at least one sink")
        for s in self.sinks:
            if not (0.0 <= s.x <= self.width and 0.0 <= s.y <= self.height):
                raise DataError(f"sink ({s.x},{s.y}) outside die "
                                f"{self.width}x{self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def design_id(self) -> str:
        return f"{self.size_class}-{self.rng_seed}"

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "units": UNITS,
            "width": self.width,
            "height": self.height,
            "size_class": self.size_class,
            "rng_seed": self.rng_seed,
            "sinks": [[s.x, s.y, s.load_cap] for s in self.sinks],
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Design":
        return cls(
            width=d["width"],
            height=d["height"],
            sinks=tuple(Sink(x, y, c) for x, y, c in d["sinks"]),
            size_class=d["size_class"],
            rng_seed=d["rng_seed"],
            meta=d.get("meta", {}),
        )


@dataclass(frozen=True)
class BufferSite:
    gx: int
    gy: int
    drive: float


@dataclass(frozen=True)
class MeshSpec:
    nx: int
    ny: int
    pitch_x: float
    pitch_y: float
    style: str
    buffer_sites: tuple[BufferSite, ...] = ()

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise DataError("mesh needs at least 2 grid lines per axis")
        if self.style not in MESH_STYLES:
            raise DataError(f"unknown mesh style {self.style!r}")
        for b in self.buffer_sites:
            if not (0 <= b.gx < self.nx and 0 <= b.gy < self.ny):
                raise DataError(f"buffer site ({b.gx},{b.gy}) off the grid")

    @property
    def extent_x(self) -> float:
        return (self.nx - 1) * self.pitch_x

    @property
    def extent_y(self) -> float:
        return (self.ny - 1) * self.pitch_y

    def intersection(self, gx: int, gy: int) -> tuple[float, float]:
        return gx * self.pitch_x, gy * self.pitch_y

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "units": UNITS,
            "nx": self.nx,
            "ny": self.ny,
            "pitch_x": self.pitch_x,
            "pitch_y": self.pitch_y,
            "style": self.style,
            "buffer_sites": [[b.gx, b.gy, b.drive] for b in self.buffer_sites],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "MeshSpec":
        return cls(
            nx=d["nx"], ny=d["ny"],
            pitch_x=d["pitch_x"], pitch_y=d["pitch_y"],
            style=d["style"],
            buffer_sites=tuple(BufferSite(gx, gy, dr)
                               for gx, gy, dr in d["buffer_sites"]),
        )


@dataclass(frozen=True)
class Resistor:
    a: int
    b: int
    ohms: float
    wire_cap: float  # total distributed cap of this segment, fF


@dataclass(frozen=True)
class Driver:
    node: int
    out_res: float
    out_cap: float
    input_delay: float  # ps, arrival at the buffer input
    input_slew: float   # ps


@dataclass
class MeshNetlist:
    node_x: list[float]
    node_y: list[float]
    grounded_caps: list[float]  # fF per node, parallel to node_x/node_y
    resistors: list[Resistor]
    drivers: list[Driver]
    sink_nodes: list[tuple[int, int, float]]  # (node, sink_index, load_cap fF)
    meta: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.node_x)

    def total_cap(self) -> float:
        return sum(self.grounded_caps)

    def validate(self) -> None:
        """Connectivity, positivity and reachability invariants."""
        n = self.n_nodes
        for r in self.resistors:
            if r.ohms <= 0.0:
                raise DataError(f"zero/negative resistor {r.a}-{r.b}")
            if not (0 <= r.a < n and 0 <= r.b < n) or r.a == r.b:
                raise DataError(f"bad resistor endpoints {r.a}-{r.b}")
        if any(c < 0 for c in self.grounded_caps):
            raise DataError("negative grounded cap")
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for r in self.resistors:
            ra, rb = find(r.a), find(r.b)
            if ra != rb:
                parent[ra] = rb
        roots = {find(i) for i in range(n)}
        if len(roots) > 1:
            raise DataError(f"resistor graph is disconnected ({len(roots)} components)")
        if self.drivers:
            driver_root = find(self.drivers[0].node)
            for node, _idx, _load in self.sink_nodes:
                if find(node) != driver_root:
                    raise DataError(f"sink node {node} unreachable from drivers")

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "units": UNITS,
            "electrical_nodes": [[i, self.node_x[i], self.node_y[i]]
                                 for i in range(self.n_nodes)],
            "resistors": [[r.a, r.b, r.ohms, r.wire_cap] for r in self.resistors],
            "grounded_caps": [[i, c] for i, c in enumerate(self.grounded_caps)],
            "drivers": [[d.node, d.out_res, d.out_cap, d.input_delay, d.input_slew]
                        for d in self.drivers],
            "sink_nodes": [[node, idx, load] for node, idx, load in self.sink_nodes],
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "MeshNetlist":
        nodes = d["electrical_nodes"]
        n = len(nodes)
        node_x = [0.0] * n
        node_y = [0.0] * n
        for i, x, y in nodes:
            node_x[i] = x
            node_y[i] = y
        caps = [0.0] * n
        for i, c in d["grounded_caps"]:
            caps[i] = c
        return cls(
            node_x=node_x,
            node_y=node_y,
            grounded_caps=caps,
            resistors=[Resistor(a, b, ohms, wc) for a, b, ohms, wc in d["resistors"]],
            drivers=[Driver(node, r, c, dly, slw)
                     for node, r, c, dly, slw in d["drivers"]],
            sink_nodes=[(node, idx, load) for node, idx, load in d["sink_nodes"]],
            meta=d.get("meta", {}),
        )


def dump_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"cannot read {path}: {e}") from e
