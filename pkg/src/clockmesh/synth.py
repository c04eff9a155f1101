"""Synthetic clock-mesh generation.

Pipeline: generate_design -> size_mesh -> place_buffers ->
assign_input_arrivals -> build_netlist. Everything is a pure function of
(inputs, seed); `synthesize` chains the whole pipeline for one design.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort

import numpy as np

from . import DataError
from .design import BufferSite, Design, Driver, MeshNetlist, MeshSpec, Resistor, Sink
from .tech import TechParams, DEFAULT_TECH

OHM_FF_TO_PS = 1e-3  # 1 ohm * 1 fF = 1e-15 s

CLASS_AREA = {"small": (500.0, 1500.0),
              "medium": (40000.0, 60000.0),
              "large": (180000.0, 220000.0)}
CLASS_DENSITY = {"small": 0.033, "large": 0.021}  # medium sampled per design
MEDIUM_DENSITY_RANGE = (0.01, 0.04)

SINKS_PER_CELL_TARGET = 36     # smallest nx=ny with sinks/cell <= target
FIXED_PITCH = 50.0
UNIFORM_ALL_SITES_MAX = 4      # meshes up to 4x4 lines buffer every intersection
CAP_PER_UNIT_DRIVE = 50.0      # fF of load one unit of drive strength serves
MIN_STUB_LEN = 0.1             # um, degenerate-stub floor
TAP_MERGE_TOL = 0.05           # um, taps closer than this share a node
SKEW_SIGMA_DEFAULT = 10.0      # ps, top-tree leaf perturbation half-width
SLEW_BASE = 30.0               # ps
SLEW_REF_LOAD = 8.0            # fF

_DESIGN_STREAM = 0xD5
_ARRIVAL_STREAM = 0xA7


def generate_design(size_class: str, seed: int, tech: TechParams = DEFAULT_TECH) -> Design:
    """Sample a die, sink placement and sink loads for one size class."""
    if size_class not in CLASS_AREA:
        raise DataError(f"unknown size class {size_class!r}")
    rng = np.random.default_rng([int(seed), _DESIGN_STREAM])
    lo, hi = CLASS_AREA[size_class]
    area = rng.uniform(lo, hi)
    aspect = rng.uniform(0.8, 1.25)
    width = math.sqrt(area * aspect)
    height = area / width

    if size_class == "medium":
        density = rng.uniform(*MEDIUM_DENSITY_RANGE)
    else:
        density = CLASS_DENSITY[size_class]
    n_sinks = max(1, round(area * density))

    blockages: list[list[float]] = []
    if size_class == "large":
        # Rectangular whitespace blockages; sinks cluster in the free area.
        for _ in range(int(rng.integers(2, 5))):
            bw = width * rng.uniform(0.12, 0.3)
            bh = height * rng.uniform(0.12, 0.3)
            bx = rng.uniform(0.0, width - bw)
            by = rng.uniform(0.0, height - bh)
            blockages.append([bx, by, bx + bw, by + bh])

    def blocked(x: float, y: float) -> bool:
        return any(x0 <= x <= x1 and y0 <= y <= y1 for x0, y0, x1, y1 in blockages)

    sinks = []
    while len(sinks) < n_sinks:
        x = rng.uniform(0.0, width)
        y = rng.uniform(0.0, height)
        if blockages and blocked(x, y):
            continue
        load = rng.uniform(1.0, 4.0)
        sinks.append(Sink(x, y, load))

    return Design(
        width=width, height=height, sinks=tuple(sinks),
        size_class=size_class, rng_seed=int(seed),
        meta={"density": density, "aspect": aspect, "blockages": blockages},
    )


def mesh_lines_for_sinks(n_sinks: int) -> int:
    """Smallest nx=ny >= 2 with mean sinks per mesh cell <= target."""
    cells_needed = n_sinks / SINKS_PER_CELL_TARGET
    return max(2, math.ceil(math.sqrt(cells_needed)) + 1)


def size_mesh(design: Design, style: str) -> MeshSpec:
    if style not in ("uniform", "nonuniform", "fixed"):
        raise DataError(f"unknown mesh style {style!r}")
    if style == "fixed":
        # Exact 50um pitch; the outermost lines may overhang the die by
        # less than one pitch so the grid always covers it.
        nx = max(2, math.ceil(design.width / FIXED_PITCH - 1e-9) + 1)
        ny = max(2, math.ceil(design.height / FIXED_PITCH - 1e-9) + 1)
        return MeshSpec(nx=nx, ny=ny, pitch_x=FIXED_PITCH, pitch_y=FIXED_PITCH,
                        style=style)
    n = mesh_lines_for_sinks(len(design.sinks))
    return MeshSpec(nx=n, ny=n,
                    pitch_x=design.width / (n - 1),
                    pitch_y=design.height / (n - 1),
                    style=style)


def _quantize_drive(needed: float, strengths: tuple[float, ...]) -> float:
    for s in strengths:
        if s >= needed:
            return s
    return strengths[-1]


def place_buffers(design: Design, spec: MeshSpec, tech: TechParams = DEFAULT_TECH) -> MeshSpec:
    """Attach buffer sites to a sized mesh. Uniform: identical buffers on a
    regular subgrid. NonUniform/Fixed: a buffer at every intersection, sized
    by the sink load within one pitch."""
    if spec.buffer_sites:
        raise DataError("mesh already has buffers placed")
    total_load = sum(s.load_cap for s in design.sinks)

    if spec.style == "uniform":
        if max(spec.nx, spec.ny) > UNIFORM_ALL_SITES_MAX:
            gxs = sorted(set(range(0, spec.nx, 2)) | {spec.nx - 1})
            gys = sorted(set(range(0, spec.ny, 2)) | {spec.ny - 1})
        else:
            gxs = list(range(spec.nx))
            gys = list(range(spec.ny))
        n_sites = len(gxs) * len(gys)
        drive = _quantize_drive(total_load / (n_sites * CAP_PER_UNIT_DRIVE),
                                tech.drive_strengths)
        sites = tuple(BufferSite(gx, gy, drive) for gy in gys for gx in gxs)
        return MeshSpec(spec.nx, spec.ny, spec.pitch_x, spec.pitch_y,
                        spec.style, sites)

    # nonuniform / fixed: weight every intersection by nearby sink load
    reach = max(spec.pitch_x, spec.pitch_y)
    sites = []
    for gy in range(spec.ny):
        for gx in range(spec.nx):
            cx, cy = spec.intersection(gx, gy)
            local = sum(s.load_cap for s in design.sinks
                        if math.hypot(s.x - cx, s.y - cy) <= reach)
            drive = _quantize_drive(local / CAP_PER_UNIT_DRIVE, tech.drive_strengths)
            sites.append(BufferSite(gx, gy, drive))
    return MeshSpec(spec.nx, spec.ny, spec.pitch_x, spec.pitch_y,
                    spec.style, tuple(sites))


class _TreeNode:
    __slots__ = ("point", "children", "leaf", "down_cap", "delay")

    def __init__(self, point, children=(), leaf=None):
        self.point = point
        self.children = children
        self.leaf = leaf
        self.down_cap = 0.0
        self.delay = 0.0


def _build_bisection_tree(points: list[tuple[float, float]], idxs: list[int]) -> _TreeNode:
    if len(idxs) == 1:
        return _TreeNode(points[idxs[0]], leaf=idxs[0])
    xs = [points[i][0] for i in idxs]
    ys = [points[i][1] for i in idxs]
    axis = 0 if (max(xs) - min(xs)) >= (max(ys) - min(ys)) else 1
    order = sorted(idxs, key=lambda i: (points[i][axis], points[i][1 - axis], i))
    mid = len(order) // 2
    kids = (_build_bisection_tree(points, order[:mid]),
            _build_bisection_tree(points, order[mid:]))
    cx = sum(points[i][0] for i in idxs) / len(idxs)
    cy = sum(points[i][1] for i in idxs) / len(idxs)
    return _TreeNode((cx, cy), children=kids)


def assign_input_arrivals(spec: MeshSpec, tech: TechParams, seed: int,
                          skew_sigma: float = SKEW_SIGMA_DEFAULT,
                          perturb: bool = True) -> list[tuple[float, float]]:
    """Per-buffer (input_delay ps, input_slew ps) from a simplified
    zero-skew top-level tree: nominal = worst leaf Elmore delay of a
    recursive-bisection tree, plus a uniform per-leaf perturbation that
    stands in for Elmore-vs-transient mismatch."""
    if not spec.buffer_sites:
        raise DataError("buffers must be placed before assigning arrivals")
    sites = spec.buffer_sites
    loads = [tech.buffer_in_cap(b.drive) for b in sites]
    slews = [SLEW_BASE * (1.0 + load / SLEW_REF_LOAD) for load in loads]

    points = [spec.intersection(b.gx, b.gy) for b in sites]
    if len(sites) == 1:
        nominal = tech.buf_out_res * loads[0] * OHM_FF_TO_PS
        return [(nominal, slews[0])]

    root = _build_bisection_tree(points, list(range(len(sites))))
    r, c = tech.wire_res_per_um, tech.wire_cap_per_um

    def fill_caps(node: _TreeNode) -> float:
        if node.leaf is not None:
            node.down_cap = loads[node.leaf]
            return node.down_cap
        total = 0.0
        for child in node.children:
            wire = abs(node.point[0] - child.point[0]) + abs(node.point[1] - child.point[1])
            total += fill_caps(child) + c * wire
        node.down_cap = total
        return total

    leaf_delay = [0.0] * len(sites)

    def fill_delays(node: _TreeNode) -> None:
        if node.leaf is not None:
            leaf_delay[node.leaf] = node.delay
            return
        for child in node.children:
            wire = abs(node.point[0] - child.point[0]) + abs(node.point[1] - child.point[1])
            child.delay = node.delay + r * wire * (c * wire / 2.0 + child.down_cap) * OHM_FF_TO_PS
            fill_delays(child)

    total_cap = fill_caps(root)
    root.delay = tech.buf_out_res * total_cap * OHM_FF_TO_PS
    fill_delays(root)

    nominal = max(leaf_delay)
    rng = np.random.default_rng([int(seed), _ARRIVAL_STREAM])
    out = []
    for i in range(len(sites)):
        jitter = rng.uniform(-skew_sigma, skew_sigma) if perturb else 0.0
        out.append((nominal + jitter, slews[i]))
    return out


class _Wire:
    """One full-span mesh wire; collects its tap points before segmentation."""

    __slots__ = ("horizontal", "coord", "span", "positions", "nodes")

    def __init__(self, horizontal: bool, coord: float, span: float,
                 positions: list[float], nodes: list[int]):
        self.horizontal = horizontal
        self.coord = coord   # y for horizontal wires, x for vertical
        self.span = span
        self.positions = positions  # sorted along-wire coordinates
        self.nodes = nodes          # node id per position

    def find_or_insert(self, pos: float, make_node) -> int:
        i = bisect_left(self.positions, pos)
        for j in (i - 1, i):
            if 0 <= j < len(self.positions) and abs(self.positions[j] - pos) <= TAP_MERGE_TOL:
                return self.nodes[j]
        if self.horizontal:
            node = make_node(pos, self.coord)
        else:
            node = make_node(self.coord, pos)
        self.positions.insert(i, pos)
        self.nodes.insert(i, node)
        return node


def build_netlist(design: Design, spec: MeshSpec, tech: TechParams = DEFAULT_TECH,
                  arrivals: list[tuple[float, float]] | None = None) -> MeshNetlist:
    """Flatten (design, spec) into the electrical RC network.

    Mesh segments use a pi capacitance model (half at each end) and are
    split at every tap; each sink hangs off its nearest wire through a stub
    of at least MIN_STUB_LEN.
    """
    if not spec.buffer_sites:
        raise DataError("mesh has no buffers placed")
    if arrivals is None:
        arrivals = [(0.0, SLEW_BASE)] * len(spec.buffer_sites)
    if len(arrivals) != len(spec.buffer_sites):
        raise DataError("one arrival per buffer required")

    r_um, c_um = tech.wire_res_per_um, tech.wire_cap_per_um
    node_x: list[float] = []
    node_y: list[float] = []
    caps: list[float] = []

    def make_node(x: float, y: float) -> int:
        node_x.append(x)
        node_y.append(y)
        caps.append(0.0)
        return len(node_x) - 1

    inter = {}
    for gy in range(spec.ny):
        for gx in range(spec.nx):
            x, y = spec.intersection(gx, gy)
            inter[(gx, gy)] = make_node(x, y)

    xs = [spec.intersection(i, 0)[0] for i in range(spec.nx)]
    ys = [spec.intersection(0, j)[1] for j in range(spec.ny)]
    wires: list[_Wire] = []
    for j in range(spec.ny):  # horizontal wires first: row-major wire order
        wires.append(_Wire(True, ys[j], spec.extent_x, list(xs),
                           [inter[(i, j)] for i in range(spec.nx)]))
    for i in range(spec.nx):
        wires.append(_Wire(False, xs[i], spec.extent_y, list(ys),
                           [inter[(i, j)] for j in range(spec.ny)]))

    resistors: list[Resistor] = []
    sink_nodes: list[tuple[int, int, float]] = []

    for k, s in enumerate(design.sinks):
        best = None
        for w_idx, w in enumerate(wires):
            along = s.x if w.horizontal else s.y
            along = min(max(along, 0.0), w.span)
            tapx, tapy = (along, w.coord) if w.horizontal else (w.coord, along)
            dist = math.hypot(s.x - tapx, s.y - tapy)
            cand = (dist, w_idx, along)
            if best is None or cand < best:
                best = cand
        dist, w_idx, along = best
        tap_node = wires[w_idx].find_or_insert(along, make_node)
        stub_len = max(dist, MIN_STUB_LEN)
        sink_node = make_node(s.x, s.y)
        stub_cap = c_um * stub_len
        resistors.append(Resistor(tap_node, sink_node, r_um * stub_len, stub_cap))
        caps[tap_node] += stub_cap / 2.0
        caps[sink_node] += stub_cap / 2.0 + s.load_cap
        sink_nodes.append((sink_node, k, s.load_cap))

    for w in wires:
        for a_pos, b_pos, a_node, b_node in zip(w.positions, w.positions[1:],
                                                w.nodes, w.nodes[1:]):
            length = b_pos - a_pos
            if length <= 0.0:
                continue
            seg_cap = c_um * length
            resistors.append(Resistor(a_node, b_node, r_um * length, seg_cap))
            caps[a_node] += seg_cap / 2.0
            caps[b_node] += seg_cap / 2.0

    drivers: list[Driver] = []
    for b, (dly, slw) in zip(spec.buffer_sites, arrivals):
        node = inter[(b.gx, b.gy)]
        out_cap = tech.buffer_out_cap(b.drive)
        caps[node] += out_cap
        drivers.append(Driver(node, tech.buffer_out_res(b.drive), out_cap, dly, slw))

    net = MeshNetlist(
        node_x=node_x, node_y=node_y, grounded_caps=caps,
        resistors=resistors, drivers=drivers, sink_nodes=sink_nodes,
        meta={
            "design_id": design.design_id,
            "style": spec.style,
            "pitch_x": spec.pitch_x,
            "pitch_y": spec.pitch_y,
            "segment_res": r_um * max(spec.pitch_x, spec.pitch_y),
            "buf_intrinsic_delay": tech.buf_intrinsic_delay,
            "buf_slew_gain": tech.buf_slew_gain,
        },
    )
    net.validate()
    return net


def synthesize(size_class: str, style: str, seed: int,
               tech: TechParams = DEFAULT_TECH,
               skew_sigma: float = SKEW_SIGMA_DEFAULT,
               ) -> tuple[Design, MeshSpec, MeshNetlist]:
    """Full pipeline for one design; deterministic in (class, style, seed, tech)."""
    design = generate_design(size_class, seed, tech)
    spec = place_buffers(design, size_mesh(design, style), tech)
    arrivals = assign_input_arrivals(spec, tech, seed, skew_sigma=skew_sigma)
    net = build_netlist(design, spec, tech, arrivals)
    net.meta["design_id"] = f"{size_class}-{style}-{seed}"
    return design, spec, net
