"""Structural cohesive element between two shell layers.

The interface opening is reconstructed from shell kinematics: mode I from the
transverse displacements of the two mid-planes, modes II/III from the membrane
displacements plus the rotation of each ply times half its thickness.  The
transverse displacement and rotations inside a ply element are evaluated with
shape functions recovered from the plate element's cubic coefficient map, so
the cohesive element conforms exactly to its neighbours.

The traction-separation law is the bilinear mixed-mode law with a penalty
compression branch: linear rise to the mixed-mode onset opening, linear
softening to the mixed-mode final opening, irreversible scalar damage, and
full penalty stiffness against interpenetration.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import MaterialError, ModelError
from .plate import TriangleGeometry
from .quadrature import cowper_13, physical_points

N_CE_DOF = 30
N_GAUSS = 13


def penalty_stiffness(e3_gpa: float, t: float, alpha: float = 50.0) -> float:
    """Interface penalty stiffness alpha*E3/t in N/mm^3 (E3 in GPa, t in mm)."""
    if e3_gpa <= 0.0 or t <= 0.0:
        raise MaterialError("penalty stiffness needs E3 > 0 and t > 0")
    return alpha * e3_gpa * 1000.0 / t


@dataclass(frozen=True)
class CohesiveProperties:
    """Bilinear mixed-mode law parameters: penalty stiffness K (N/mm^3),
    toughnesses (N/mm), strengths (MPa) and the B-K exponent."""

    K: float
    GIc: float
    GIIc: float
    tauIc: float
    tauIIc: float
    eta: float

    def __post_init__(self):
        if self.K <= 0.0:
            raise MaterialError("penalty stiffness must be > 0")
        for mode, tau, g in (("I", self.tauIc, self.GIc), ("II", self.tauIIc, self.GIIc)):
            if tau <= 0.0 or g <= 0.0:
                raise MaterialError(f"mode {mode} strength and toughness must be > 0")
            if tau * tau / (2.0 * self.K) >= g:
                raise MaterialError(
                    f"mode {mode}: onset opening reaches the final opening "
                    "(tau^2 / 2K >= G); raise K or the toughness")

    @property
    def delta0_I(self) -> float:
        return self.tauIc / self.K

    @property
    def delta0_sh(self) -> float:
        return self.tauIIc / self.K

    @property
    def deltaf_I(self) -> float:
        return 2.0 * self.GIc / self.tauIc

    @property
    def deltaf_sh(self) -> float:
        return 2.0 * self.GIIc / self.tauIIc


@dataclass(frozen=True)
class CohesiveState:
    """History of one integration point.

    ``mode_mix`` holds the shear fraction frozen at damage onset; a negative
    value marks a point that has not yet reached onset.
    """

    lambda_max: float = 0.0
    mode_mix: float = -1.0

    @property
    def started(self) -> bool:
        return self.mode_mix >= 0.0


def mixed_mode_openings(props: CohesiveProperties, mode_mix: float) -> tuple:
    """Mixed-mode onset and final openings for a given shear fraction B."""
    b_eta = mode_mix ** props.eta if mode_mix > 0.0 else 0.0
    d01, d0s = props.delta0_I, props.delta0_sh
    df1, dfs = props.deltaf_I, props.deltaf_sh
    delta0 = np.sqrt(d01 * d01 + (d0s * d0s - d01 * d01) * b_eta)
    deltaf = (d01 * df1 + (d0s * dfs - d01 * df1) * b_eta) / delta0
    return delta0, deltaf


def damage_update(delta, state: CohesiveState, props: CohesiveProperties):
    """Advance one integration point by the current opening vector.

    Returns (new_state, d, d_I).  The effective opening ignores compressive
    mode I; the shear fraction is frozen the first time the historic opening
    passes the onset value; damage is monotone in the historic opening.
    """
    d1, d2, d3 = float(delta[0]), float(delta[1]), float(delta[2])
    d1p = d1 if d1 > 0.0 else 0.0
    sh2 = d2 * d2 + d3 * d3
    lam = np.sqrt(d1p * d1p + sh2)
    lam_max = max(state.lambda_max, lam)

    if state.started:
        mix = state.mode_mix
    else:
        denom = d1p * d1p + sh2
        mix = sh2 / denom if denom > 0.0 else 0.0

    delta0, deltaf = mixed_mode_openings(props, mix)
    if lam_max <= delta0:
        new = replace(state, lambda_max=lam_max)
        return new, 0.0, 0.0

    d = deltaf * (lam_max - delta0) / (lam_max * (deltaf - delta0))
    d = min(max(d, 0.0), 1.0)
    d_i = d if d1 >= 0.0 else 0.0
    new = CohesiveState(lambda_max=lam_max,
                        mode_mix=mix if not state.started else state.mode_mix)
    return new, d, d_i


def dissipated_energy_density(lambda_max: float, mode_mix: float,
                              props: CohesiveProperties) -> float:
    """Energy per unit area dissipated by a point with historic opening
    ``lambda_max`` (secant unloading to the origin)."""
    mix = max(mode_mix, 0.0)
    delta0, deltaf = mixed_mode_openings(props, mix)
    if lambda_max <= delta0:
        return 0.0
    gc = 0.5 * props.K * delta0 * deltaf
    frac = min((lambda_max - delta0) / (deltaf - delta0), 1.0)
    return gc * frac


def d_ce_matrix(d: float, d_i: float, k: float) -> np.ndarray:
    """Secant interface stiffness: diag((1-dI)K, (1-d)K, (1-d)K)."""
    return np.diag([(1.0 - d_i) * k, (1.0 - d) * k, (1.0 - d) * k])


# --- shape functions ----------------------------------------------------------


def _linear_solve_matrices(tri: TriangleGeometry, coeff_map: np.ndarray):
    """G = M_A^-1 (B_A - M_alpha C): the linear part of the cubic field in
    terms of nodal DoFs."""
    x = tri.verts[:, 0]
    y = tri.verts[:, 1]
    m_a = np.column_stack([np.ones(3), x, y])
    m_alpha = np.column_stack([x * x, x * y, y * y, x**3, x * x * y, x * y * y, y**3])
    b_a = np.zeros((3, 9))
    b_a[0, 0] = b_a[1, 3] = b_a[2, 6] = 1.0
    try:
        return np.linalg.solve(m_a, b_a - m_alpha @ coeff_map)
    except np.linalg.LinAlgError as exc:
        raise ModelError("collinear nodes in cohesive shape functions") from exc


def shape_w(tri: TriangleGeometry, coeff_map: np.ndarray, point) -> np.ndarray:
    """Row (9,) interpolating w at `point` from the plate DoFs."""
    x, y = float(point[0]), float(point[1])
    g = _linear_solve_matrices(tri, coeff_map)
    s = np.array([1.0, x, y])
    r = np.array([x * x, x * y, y * y, x**3, x * x * y, x * y * y, y**3])
    return s @ g + r @ coeff_map


def shape_theta(tri: TriangleGeometry, coeff_map: np.ndarray, point) -> tuple:
    """Rows (9,) interpolating dw/dx and dw/dy at `point`."""
    x, y = float(point[0]), float(point[1])
    g = _linear_solve_matrices(tri, coeff_map)
    rx = np.array([2.0 * x, y, 0.0, 3.0 * x * x, 2.0 * x * y, y * y, 0.0])
    ry = np.array([0.0, x, 2.0 * y, 0.0, x * x, 2.0 * x * y, 3.0 * y * y])
    n_x = g[1] + rx @ coeff_map
    n_y = g[2] + ry @ coeff_map
    return n_x, n_y


def area_coordinates(tri: TriangleGeometry, point) -> np.ndarray:
    """Barycentric coordinates of a point in the element-local frame."""
    x, y = float(point[0]), float(point[1])
    v = tri.verts
    l = np.linalg.solve(
        np.array([[1.0, 1.0, 1.0], [v[0, 0], v[1, 0], v[2, 0]],
                  [v[0, 1], v[1, 1], v[2, 1]]]),
        np.array([1.0, x, y]))
    return l


def b_ce(tri: TriangleGeometry, coeff_top: np.ndarray, coeff_bot: np.ndarray,
         h_top: float, h_bot: float, point) -> np.ndarray:
    """Opening matrix B_CE (3x30) at a point inside the shared triangle.

    DoF order: bottom membrane (6), bottom plate (9), top membrane (6),
    top plate (9).
    """
    l = area_coordinates(tri, point)
    if l.min() < -1.0e-12:
        raise ModelError("evaluation point outside the element")
    nw_top = shape_w(tri, coeff_top, point)
    nw_bot = shape_w(tri, coeff_bot, point)
    nx_top, ny_top = shape_theta(tri, coeff_top, point)
    nx_bot, ny_bot = shape_theta(tri, coeff_bot, point)
    return _assemble_b_ce(l, nw_bot, nx_bot, ny_bot, nw_top, nx_top, ny_top,
                          h_top, h_bot)


def _assemble_b_ce(l, nw_bot, nx_bot, ny_bot, nw_top, nx_top, ny_top,
                   h_top, h_bot) -> np.ndarray:
    b = np.zeros((3, N_CE_DOF))
    b[0, 6:15] = -nw_bot
    b[0, 21:30] = nw_top
    b[1, 0:6:2] = -l
    b[1, 6:15] = 0.5 * h_bot * nx_bot
    b[1, 15:21:2] = l
    b[1, 21:30] = 0.5 * h_top * nx_top
    b[2, 1:6:2] = -l
    b[2, 6:15] = 0.5 * h_bot * ny_bot
    b[2, 16:21:2] = l
    b[2, 21:30] = 0.5 * h_top * ny_top
    return b


def ce_b_matrices(tri: TriangleGeometry, coeff_top: np.ndarray,
                  coeff_bot: np.ndarray, h_top: float, h_bot: float) -> np.ndarray:
    """B_CE stacked at the 13 quadrature points, shape (13, 3, 30)."""
    bary, _ = cowper_13()
    pts = physical_points(bary, tri.verts)
    bmats = np.empty((N_GAUSS, 3, N_CE_DOF))
    g_top = _linear_solve_matrices(tri, coeff_top)
    g_bot = _linear_solve_matrices(tri, coeff_bot)
    for i, (point, l) in enumerate(zip(pts, bary)):
        x, y = point
        s = np.array([1.0, x, y])
        r = np.array([x * x, x * y, y * y, x**3, x * x * y, x * y * y, y**3])
        rx = np.array([2.0 * x, y, 0.0, 3.0 * x * x, 2.0 * x * y, y * y, 0.0])
        ry = np.array([0.0, x, 2.0 * y, 0.0, x * x, 2.0 * x * y, 3.0 * y * y])
        nw_top = s @ g_top + r @ coeff_top
        nw_bot = s @ g_bot + r @ coeff_bot
        nx_top = g_top[1] + rx @ coeff_top
        ny_top = g_top[2] + ry @ coeff_top
        nx_bot = g_bot[1] + rx @ coeff_bot
        ny_bot = g_bot[2] + ry @ coeff_bot
        bmats[i] = _assemble_b_ce(l, nw_bot, nx_bot, ny_bot,
                                  nw_top, nx_top, ny_top, h_top, h_bot)
    return bmats


@dataclass
class StructuralCE:
    """One cohesive element: shared geometry, ply thicknesses, law and the
    per-point history.  ``contact`` marks a pre-crack element that only
    resists interpenetration (damage pinned at one, no dissipation)."""

    tri: TriangleGeometry
    bmats: np.ndarray            # (13, 3, 30)
    props: CohesiveProperties
    h_top: float
    h_bot: float
    contact: bool = False
    states: list = None

    def __post_init__(self):
        if self.states is None:
            self.states = [CohesiveState() for _ in range(N_GAUSS)]


def opening_vector(b_at_point: np.ndarray, q_ce: np.ndarray) -> np.ndarray:
    """Opening (mode I, II, III) at a point from the element DoFs."""
    return b_at_point @ q_ce


def k_ce_and_f_int(element: StructuralCE, q_ce: np.ndarray, states=None):
    """Secant stiffness (30x30), internal force and updated states.

    Reference implementation used by tests and as the ground truth for the
    array kernels; states passed in (or stored on the element) are the last
    committed ones and are not mutated.
    """
    if states is None:
        states = element.states
    _, weights = cowper_13()
    area = element.tri.area
    k = np.zeros((N_CE_DOF, N_CE_DOF))
    new_states = []
    for g in range(N_GAUSS):
        b = element.bmats[g]
        delta = b @ q_ce
        if element.contact:
            d, d_i = 1.0, (1.0 if delta[0] >= 0.0 else 0.0)
            new_states.append(states[g])
        else:
            new_state, d, d_i = damage_update(delta, states[g], element.props)
            new_states.append(new_state)
        dmat = d_ce_matrix(d, d_i, element.props.K)
        k += weights[g] * area * b.T @ dmat @ b
    k = 0.5 * (k + k.T)
    return k, k @ q_ce, new_states
