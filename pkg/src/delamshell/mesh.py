"""Structured layered meshes for the four delamination benchmarks.

Each shell layer is a regular grid of rectangles split into two triangles,
sharing one in-plane (x, y) grid; layers differ only in their mid-plane z and,
for the single-leg case, in the x range they cover.  Cohesive elements pair
the coincident triangles of two neighbouring layers; the pre-cracked part of
the delaminating interface carries no cohesive elements and can instead be
covered with compression-only contact elements.

Node DoF layout is (u, v, w, dw/dx, dw/dy), five per node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cohesive import CohesiveProperties, penalty_stiffness
from .errors import ModelError
from .laminate import OrthotropicPly, PlyLayup, LaminateSection, section_from_layup

N_DOF_PER_NODE = 5

DEFAULT_SLB_LAYUP = "0/90/0 // 90/0/90"


@dataclass(frozen=True)
class BenchmarkGeometry:
    """Specimen dimensions in mm; ``span`` is the full length 2L."""

    case: str
    span: float
    a0: float
    width: float
    arm_thickness: float = 0.0   # h of one arm (unidirectional cases)
    t_top: float = 0.0           # upper-leg thickness (SLB)
    t_bot: float = 0.0           # lower-leg thickness (SLB)
    lever: float = 0.0           # MMB lever length c

    def __post_init__(self):
        if self.case not in ("dcb", "enf", "mmb", "slb"):
            raise ModelError(f"unknown case '{self.case}'")
        if not 0.0 < self.a0 < self.span:
            raise ModelError("pre-crack must satisfy 0 < a0 < span")
        if self.width <= 0.0:
            raise ModelError("width must be positive")


_GEOMETRY_TABLE = {
    "dcb": dict(span=150.0, a0=30.5, width=25.0, arm_thickness=1.50),
    "enf": dict(span=101.6, a0=35.0, width=25.4, arm_thickness=2.25),
    "mmb": dict(span=100.8, a0=25.4, width=25.4, arm_thickness=2.25, lever=41.3),
    "slb": dict(span=177.8, a0=60.0, width=25.4, t_top=2.0, t_bot=2.0),
}

DEFAULT_MATERIAL = {"dcb": "T300/1076", "enf": "IM7/8552",
                    "mmb": "IM7/8552", "slb": "C12K/R6376"}


def default_geometry(case: str, **overrides) -> BenchmarkGeometry:
    if case not in _GEOMETRY_TABLE:
        raise ModelError(f"unknown case '{case}'")
    params = dict(_GEOMETRY_TABLE[case])
    params.update(overrides)
    return BenchmarkGeometry(case=case, **params)


def parse_slb_layup(text: str) -> tuple:
    """Split an SLB layup string 'a/b/... // c/d/...' into the ply angle
    lists of the upper and lower legs (each listed top to bottom)."""
    if "//" not in text:
        raise ModelError("SLB layup needs '//' separating the two legs")
    top_txt, bot_txt = text.split("//", 1)

    def _angles(chunk):
        vals = [v for v in chunk.replace(",", "/").split("/") if v.strip()]
        if not vals:
            raise ModelError("empty leg in SLB layup")
        return tuple(float(v) for v in vals)

    return _angles(top_txt), _angles(bot_txt)


@dataclass
class Layer:
    """One shell layer: its mid-plane height, section and node grid.

    ``node_grid[iy, k]`` is the node id at gridline ix = ix0 + k.
    """

    index: int
    z_mid: float
    thickness: float
    angle: float
    section: LaminateSection
    ix0: int
    node_grid: np.ndarray


@dataclass
class ShellBlock:
    layer: int
    tris: np.ndarray      # (ne, 3) node ids, counter-clockwise
    halves: np.ndarray    # (ne,) 0 = lower half-cell, 1 = upper


@dataclass
class InterfaceBlock:
    bot_layer: int
    top_layer: int
    tris_bot: np.ndarray
    tris_top: np.ndarray
    halves: np.ndarray
    props: CohesiveProperties
    h_top: float
    h_bot: float
    contact: bool = False
    delaminating: bool = False


@dataclass
class LayeredModel:
    geometry: BenchmarkGeometry
    material: OrthotropicPly
    coords: np.ndarray            # (nn, 2)
    node_layer: np.ndarray        # (nn,)
    layers: list
    shells: list                  # ShellBlock per layer
    interfaces: list              # InterfaceBlock
    sets: dict                    # name -> node id array
    nx: int
    ny: int
    dx: float
    dy: float
    a0_col: int
    a0_actual: float
    width_scale: float = 1.0      # full width / modelled width (strip runs)

    @property
    def n_nodes(self) -> int:
        return self.coords.shape[0]

    @property
    def n_dof(self) -> int:
        return N_DOF_PER_NODE * self.n_nodes

    def node_dofs(self, nodes, comp) -> np.ndarray:
        return np.asarray(nodes, dtype=np.int64) * N_DOF_PER_NODE + comp

    def summary(self) -> str:
        lines = [
            f"case = {self.geometry.case}",
            f"nodes = {self.n_nodes}",
            f"dofs = {self.n_dof}",
            f"layers = {len(self.layers)}",
            f"shell_elements = {sum(len(b.tris) for b in self.shells)}",
            f"cohesive_elements = "
            f"{sum(len(b.tris_bot) for b in self.interfaces if not b.contact)}",
            f"contact_elements = "
            f"{sum(len(b.tris_bot) for b in self.interfaces if b.contact)}",
            f"grid = {self.nx} x {self.ny}",
            f"element_size = {self.dx:.6g} x {self.dy:.6g} mm",
            f"a0_requested = {self.geometry.a0}",
            f"a0_actual = {self.a0_actual:.6g}",
            f"width_scale = {self.width_scale:.6g}",
        ]
        for name, nodes in sorted(self.sets.items()):
            lines.append(f"set {name} = {len(nodes)} nodes")
        return "\n".join(lines)


def _layer_stack(geometry, material, slb_layup):
    """(z_mid, thickness, angle) of every layer from bottom to top, plus the
    index of the delaminating interface (between layer i and i+1)."""
    if geometry.case == "slb":
        top_angles, bot_angles = parse_slb_layup(slb_layup or DEFAULT_SLB_LAYUP)
        t_ply_top = geometry.t_top / len(top_angles)
        t_ply_bot = geometry.t_bot / len(bot_angles)
        stack = [(a, t_ply_bot) for a in reversed(bot_angles)]
        stack += [(a, t_ply_top) for a in reversed(top_angles)]
        delam = len(bot_angles) - 1
    else:
        h = geometry.arm_thickness
        if h <= 0.0:
            raise ModelError(f"{geometry.case}: arm thickness must be positive")
        stack = [(0.0, h), (0.0, h)]
        delam = 0
    total = sum(t for _, t in stack)
    layers = []
    z = -total / 2.0
    for angle, t in stack:
        layers.append((z + t / 2.0, t, angle))
        z += t
    return layers, delam


def build_model(geometry: BenchmarkGeometry, material: OrthotropicPly,
                element_size: float, slb_layup: str = None,
                strip_elements: int = 0, alpha: float = 50.0) -> LayeredModel:
    """Mesh a benchmark specimen into layers of shells plus cohesive
    interfaces.

    The pre-crack front is snapped to the nearest gridline and the snapped
    value recorded on the model.  ``strip_elements`` > 0 meshes a narrow
    strip of that many width elements instead of the full width; reported
    loads are then scaled back to the full width.
    """
    if element_size <= 0.0:
        raise ModelError("element size must be positive")
    if element_size >= min(geometry.span, geometry.width):
        raise ModelError("element size must be smaller than the specimen")

    nx = max(2, int(math.floor(geometry.span / element_size + 0.5)))
    if geometry.case in ("enf", "mmb", "slb") and nx % 2 == 1:
        nx += 1  # centre load needs a mid-span gridline
    dx = geometry.span / nx

    if strip_elements > 0:
        ny = int(strip_elements)
        dy = element_size
        width_scale = geometry.width / (ny * dy)
    else:
        ny = max(1, int(math.floor(geometry.width / element_size + 0.5)))
        dy = geometry.width / ny
        width_scale = 1.0

    a0_col = int(round(geometry.a0 / dx))
    a0_col = min(max(a0_col, 1), nx - 1)
    a0_actual = a0_col * dx

    stack, delam = _layer_stack(geometry, material, slb_layup)

    coords = []
    node_layer = []
    layers = []
    shells = []
    for li, (z_mid, t, angle) in enumerate(stack):
        if geometry.case == "slb" and li <= delam:
            ix0 = a0_col  # lower leg is absent over the pre-crack
        else:
            ix0 = 0
        ncols = nx - ix0 + 1
        grid = np.empty((ny + 1, ncols), dtype=np.int64)
        for iy in range(ny + 1):
            for k in range(ncols):
                grid[iy, k] = len(coords)
                coords.append(((ix0 + k) * dx, iy * dy))
                node_layer.append(li)
        section = section_from_layup(PlyLayup.build([(material, angle, t)]))
        layers.append(Layer(index=li, z_mid=z_mid, thickness=t, angle=angle,
                            section=section, ix0=ix0, node_grid=grid))
        tris, halves = _layer_triangles(grid, ix0, nx, ny)
        shells.append(ShellBlock(layer=li, tris=tris, halves=halves))

    coords = np.asarray(coords)
    node_layer = np.asarray(node_layer, dtype=np.int64)

    interfaces = []
    layer_t = [t for _, t, _ in stack]
    for li in range(len(stack) - 1):
        ix_start = a0_col if li == delam else max(layers[li].ix0,
                                                  layers[li + 1].ix0)
        props = _interface_properties(material, layer_t, li, alpha)
        tb, tt, hv = _interface_triangles(layers[li], layers[li + 1],
                                          ix_start, nx, ny)
        interfaces.append(InterfaceBlock(
            bot_layer=li, top_layer=li + 1, tris_bot=tb, tris_top=tt,
            halves=hv, props=props, h_top=layer_t[li + 1], h_bot=layer_t[li],
            delaminating=(li == delam)))

    model = LayeredModel(
        geometry=geometry, material=material, coords=coords,
        node_layer=node_layer, layers=layers, shells=shells,
        interfaces=interfaces, sets={}, nx=nx, ny=ny, dx=dx, dy=dy,
        a0_col=a0_col, a0_actual=a0_actual, width_scale=width_scale)
    model.sets = _node_sets(model)
    return model


def _layer_triangles(grid, ix0, nx, ny):
    tris = []
    halves = []
    ncells = nx - ix0
    for iy in range(ny):
        for k in range(ncells):
            n00 = grid[iy, k]
            n10 = grid[iy, k + 1]
            n01 = grid[iy + 1, k]
            n11 = grid[iy + 1, k + 1]
            tris.append((n00, n10, n11))
            halves.append(0)
            tris.append((n00, n11, n01))
            halves.append(1)
    return np.asarray(tris, dtype=np.int64), np.asarray(halves, dtype=np.int64)


def _interface_triangles(bot: Layer, top: Layer, ix_start, nx, ny):
    tris_bot = []
    tris_top = []
    halves = []
    for iy in range(ny):
        for ix in range(ix_start, nx):
            kb = ix - bot.ix0
            kt = ix - top.ix0
            for half in (0, 1):
                if half == 0:
                    tb = (bot.node_grid[iy, kb], bot.node_grid[iy, kb + 1],
                          bot.node_grid[iy + 1, kb + 1])
                    tt = (top.node_grid[iy, kt], top.node_grid[iy, kt + 1],
                          top.node_grid[iy + 1, kt + 1])
                else:
                    tb = (bot.node_grid[iy, kb], bot.node_grid[iy + 1, kb + 1],
                          bot.node_grid[iy + 1, kb])
                    tt = (top.node_grid[iy, kt], top.node_grid[iy + 1, kt + 1],
                          top.node_grid[iy + 1, kt])
                tris_bot.append(tb)
                tris_top.append(tt)
                halves.append(half)
    return (np.asarray(tris_bot, dtype=np.int64),
            np.asarray(tris_top, dtype=np.int64),
            np.asarray(halves, dtype=np.int64))


def _interface_properties(material, layer_t, li, alpha) -> CohesiveProperties:
    # penalty stiffness from the thinner of the two sublaminates either side
    # of the interface
    t_below = sum(layer_t[:li + 1])
    t_above = sum(layer_t[li + 1:])
    t = min(t_below, t_above)
    k = penalty_stiffness(material.E33, t, alpha)
    return CohesiveProperties(K=k, GIc=material.GIc, GIIc=material.GIIc,
                              tauIc=material.tauIc, tauIIc=material.tauIIc,
                              eta=material.eta)


def precrack_contact(model: LayeredModel, alpha: float = 1.0) -> LayeredModel:
    """Cover the pre-crack with compression-only contact elements.

    They are cohesive elements permanently at full damage, so only the
    interpenetration branch acts.  The contact penalty only has to bound
    interpenetration, so it defaults to a much softer alpha than the
    cohesive interface; grazing contact stays well conditioned that way.
    For the single-leg specimen the lower leg does not exist over the
    pre-crack and nothing is added.
    """
    delam = next(b for b in model.interfaces if b.delaminating)
    bot = model.layers[delam.bot_layer]
    top = model.layers[delam.top_layer]
    if bot.ix0 >= model.a0_col:
        return model
    tb, tt, hv = _interface_triangles(bot, top, 0, model.a0_col, model.ny)
    layer_t = [lay.thickness for lay in model.layers]
    props = _interface_properties(model.material, layer_t,
                                  delam.bot_layer, alpha)
    model.interfaces.append(InterfaceBlock(
        bot_layer=bot.index, top_layer=top.index, tris_bot=tb, tris_top=tt,
        halves=hv, props=props, h_top=delam.h_top, h_bot=delam.h_bot,
        contact=True))
    return model


def _grid_nodes(layer: Layer, ix: int) -> np.ndarray:
    return layer.node_grid[:, ix - layer.ix0]


def _node_sets(model: LayeredModel) -> dict:
    case = model.geometry.case
    nx = model.nx
    bottom = model.layers[0]
    topmost = model.layers[-1]
    sets = {}
    if case == "dcb":
        sets["load_top"] = _grid_nodes(topmost, 0)
        sets["load_bot"] = _grid_nodes(bottom, 0)
        sets["far_bottom"] = _grid_nodes(bottom, nx)
    elif case in ("enf", "mmb"):
        sets["support_left"] = _grid_nodes(bottom, 0)
        sets["support_right"] = _grid_nodes(bottom, nx)
        sets["load_mid"] = _grid_nodes(topmost, nx // 2)
        if case == "mmb":
            sets["load_end"] = _grid_nodes(topmost, 0)
    elif case == "slb":
        delam = next(b for b in model.interfaces if b.delaminating)
        leg = model.layers[delam.top_layer]  # lowest layer present at x = 0
        sets["support_left"] = _grid_nodes(leg, 0)
        sets["support_right"] = _grid_nodes(bottom, nx)
        sets["load_mid"] = _grid_nodes(topmost, nx // 2)
    return sets


@dataclass
class LoadSpec:
    """Constraints and control of one benchmark run.

    Displacement-controlled cases prescribe ``driven_dofs`` to
    ``driven_scale * U``; the mixed-mode bending case instead scales a fixed
    force pattern by an unknown load factor so that the mean displacement of
    ``control_dofs`` equals ``control_sign * U``.  The reported load is the
    sum of reactions over ``reaction_dofs`` times ``load_sign`` (or the load
    factor itself under force-path control).
    """

    case: str
    fixed_dofs: np.ndarray
    driven_dofs: np.ndarray
    driven_scale: np.ndarray
    reaction_dofs: np.ndarray
    load_sign: float = 1.0
    force_pattern: np.ndarray = None
    control_dofs: np.ndarray = None
    control_sign: float = 1.0


def boundary_and_load_sets(model: LayeredModel) -> LoadSpec:
    """Boundary conditions and the load path of the benchmark case."""
    case = model.geometry.case
    sets = model.sets
    w, u, v = 2, 0, 1
    bottom = model.layers[0]

    if case == "dcb":
        top_w = model.node_dofs(sets["load_top"], w)
        bot_w = model.node_dofs(sets["load_bot"], w)
        far = sets["far_bottom"]
        fixed = np.concatenate([
            model.node_dofs([far[0], far[-1]], w),
            model.node_dofs([far[0]], u),
            model.node_dofs([far[0]], v),
            model.node_dofs([sets["load_bot"][0]], v),
        ])
        driven = np.concatenate([top_w, bot_w])
        scale = np.concatenate([np.full(top_w.size, 0.5),
                                np.full(bot_w.size, -0.5)])
        return LoadSpec(case=case, fixed_dofs=fixed, driven_dofs=driven,
                        driven_scale=scale, reaction_dofs=top_w, load_sign=1.0)

    if case in ("enf", "slb"):
        mid_w = model.node_dofs(sets["load_mid"], w)
        left, right = sets["support_left"], sets["support_right"]
        fixed = np.concatenate([
            model.node_dofs(left, w),
            model.node_dofs(right, w),
            model.node_dofs([left[0]], u),
            model.node_dofs([left[0]], v),
            model.node_dofs([right[0]], v),
        ])
        driven = mid_w
        scale = np.full(mid_w.size, -1.0)
        return LoadSpec(case=case, fixed_dofs=fixed, driven_dofs=driven,
                        driven_scale=scale, reaction_dofs=mid_w, load_sign=-1.0)

    if case == "mmb":
        mid_w = model.node_dofs(sets["load_mid"], w)
        end_w = model.node_dofs(sets["load_end"], w)
        left, right = sets["support_left"], sets["support_right"]
        fixed = np.concatenate([
            model.node_dofs(left, w),
            model.node_dofs(right, w),
            model.node_dofs([left[0]], u),
            model.node_dofs([left[0]], v),
            model.node_dofs([right[0]], v),
        ])
        c = model.geometry.lever
        half_span = model.geometry.span / 2.0
        pattern = np.zeros(model.n_dof)
        # lever statics: downward (c + L)/L at mid-span, upward c/L at the
        # loaded arm end, per unit lever load
        pattern[mid_w] = -(c + half_span) / half_span / mid_w.size
        pattern[end_w] = c / half_span / end_w.size
        return LoadSpec(case=case, fixed_dofs=fixed,
                        driven_dofs=np.empty(0, dtype=np.int64),
                        driven_scale=np.empty(0),
                        reaction_dofs=mid_w, load_sign=1.0,
                        force_pattern=pattern, control_dofs=mid_w,
                        control_sign=-1.0)

    raise ModelError(f"unknown case '{case}'")
