"""Triangular cubic plate-bending element for orthotropic sections.

The element interpolates the transverse displacement with a full cubic in
centroid-origin local coordinates and couples it to the nine nodal DoFs
(w, dw/dx, dw/dy per node) through boundary work terms: a Hermite cubic for
the edge displacement and a linear normal slope along each edge.  The nodal
stiffness is K = (B T)^T H^-1 (B T) where H is the interior strain-energy
matrix of the seven curvature coefficients, B maps those coefficients to the
twelve generalized boundary forces and T maps nodal DoFs to the conjugate
generalized boundary displacements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import DegenerateElementError
from .laminate import BendingRigidity

MAX_ASPECT_RATIO = 1.0e4
MIN_AREA = 1.0e-12


@dataclass(frozen=True)
class TriangleGeometry:
    """Element-local triangle data: centroid-origin vertices (counter-
    clockwise), edge lengths, outward-normal angles and area.

    ``verts[k]`` is vertex k+1; edge k runs from vertex k to vertex (k+1)%3,
    so edges are ordered (1-2, 2-3, 3-1).  ``gamma[k]`` is the angle from the
    local x axis to the outward normal of edge k.  ``order`` records the
    permutation applied to the input vertices to enforce counter-clockwise
    ordering.
    """

    verts: np.ndarray     # (3, 2)
    lengths: np.ndarray   # (3,)
    gamma: np.ndarray     # (3,)
    area: float
    order: tuple = (0, 1, 2)


def triangle_local_frame(coords) -> TriangleGeometry:
    """Build the local element frame from three vertex coordinates.

    Only the in-plane (x, y) coordinates are used; the laminate is flat and
    every layer shares the global axes.  Vertices are re-ordered counter-
    clockwise if needed and shifted so the centroid is the origin.
    """
    pts = np.asarray(coords, dtype=float)[:, :2].copy()
    order = (0, 1, 2)
    signed = _signed_area(pts)
    if signed < 0.0:
        pts = pts[[0, 2, 1]]
        order = (0, 2, 1)
        signed = -signed
    if signed < MIN_AREA:
        raise DegenerateElementError("collinear or zero-area triangle")
    pts -= pts.mean(axis=0)

    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(edges, axis=1)
    if lengths.max() ** 2 / (2.0 * signed) > MAX_ASPECT_RATIO:
        raise DegenerateElementError(
            f"triangle aspect ratio beyond {MAX_ASPECT_RATIO:g}")
    # outward normal of a CCW boundary = tangent rotated -90 degrees
    gamma = np.arctan2(-edges[:, 0], edges[:, 1])
    return TriangleGeometry(verts=pts, lengths=lengths, gamma=gamma,
                            area=signed, order=order)


def _signed_area(pts) -> float:
    return 0.5 * ((pts[1, 0] - pts[0, 0]) * (pts[2, 1] - pts[0, 1])
                  - (pts[2, 0] - pts[0, 0]) * (pts[1, 1] - pts[0, 1]))


def monomial_integrals(tri: TriangleGeometry) -> dict:
    """Integrals of x^p y^q over the triangle for p+q <= 2.

    In centroid coordinates the first moments vanish and the second moments
    follow the closed-form vertex sums A/12 * sum(xi*xj).
    """
    x = tri.verts[:, 0]
    y = tri.verts[:, 1]
    a = tri.area
    return {
        (0, 0): a,
        (1, 0): 0.0,
        (0, 1): 0.0,
        (2, 0): a / 12.0 * np.dot(x, x),
        (1, 1): a / 12.0 * np.dot(x, y),
        (0, 2): a / 12.0 * np.dot(y, y),
    }


def h_matrix(D: BendingRigidity, tri: TriangleGeometry) -> np.ndarray:
    """Interior energy matrix H (7x7) of the cubic coefficient vector.

    Strain energy of the cubic interior field is 0.5 a^T H a; the six
    rigidity components each contribute a sparse polynomial block integrated
    with the closed-form monomial integrals.
    """
    m = monomial_integrals(tri)
    a, ixx, ixy, iyy = m[(0, 0)], m[(2, 0)], m[(1, 1)], m[(0, 2)]
    h = np.zeros((7, 7))

    def add(i, j, value):
        h[i, j] += value
        if i != j:
            h[j, i] += value

    add(0, 0, 4.0 * a * D.D11)
    add(3, 3, 36.0 * ixx * D.D11)
    add(4, 4, 4.0 * iyy * D.D11)
    add(3, 4, 12.0 * ixy * D.D11)

    add(2, 2, 4.0 * a * D.D22)
    add(5, 5, 4.0 * ixx * D.D22)
    add(6, 6, 36.0 * iyy * D.D22)
    add(5, 6, 12.0 * ixy * D.D22)

    add(0, 2, 4.0 * a * D.D12)
    add(3, 5, 12.0 * ixx * D.D12)
    add(3, 6, 36.0 * ixy * D.D12)
    add(4, 5, 4.0 * ixy * D.D12)
    add(4, 6, 12.0 * iyy * D.D12)

    add(0, 1, 4.0 * a * D.D16)
    add(3, 4, 24.0 * ixx * D.D16)
    add(3, 5, 24.0 * ixy * D.D16)
    add(4, 4, 16.0 * ixy * D.D16)
    add(4, 5, 8.0 * iyy * D.D16)

    add(1, 2, 4.0 * a * D.D26)
    add(4, 5, 8.0 * ixx * D.D26)
    add(5, 5, 16.0 * ixy * D.D26)
    add(4, 6, 24.0 * ixy * D.D26)
    add(5, 6, 24.0 * iyy * D.D26)

    add(1, 1, 4.0 * a * D.D66)
    add(4, 4, 16.0 * ixx * D.D66)
    add(5, 5, 16.0 * iyy * D.D66)
    add(4, 5, 16.0 * ixy * D.D66)
    return h


def _moment_rows(D: BendingRigidity, x: float, y: float):
    """Coefficient rows mapping the cubic coefficients to Mx, My, Mxy at a
    point."""
    bmx = -np.array([2.0 * D.D11, 2.0 * D.D16, 2.0 * D.D12, 6.0 * x * D.D11,
                     2.0 * y * D.D11 + 4.0 * x * D.D16,
                     2.0 * x * D.D12 + 4.0 * y * D.D16, 6.0 * y * D.D12])
    bmy = -np.array([2.0 * D.D12, 2.0 * D.D26, 2.0 * D.D22, 6.0 * x * D.D12,
                     2.0 * y * D.D12 + 4.0 * x * D.D26,
                     2.0 * x * D.D22 + 4.0 * y * D.D26, 6.0 * y * D.D22])
    bmxy = -np.array([2.0 * D.D16, 2.0 * D.D66, 2.0 * D.D26, 6.0 * x * D.D16,
                      4.0 * x * D.D66 + 2.0 * y * D.D16,
                      4.0 * y * D.D66 + 2.0 * x * D.D26, 6.0 * y * D.D26])
    return bmx, bmy, bmxy


def _moment_row_gradients(D: BendingRigidity):
    dbmx_dx = -np.array([0.0, 0.0, 0.0, 6.0 * D.D11, 4.0 * D.D16, 2.0 * D.D12, 0.0])
    dbmx_dy = -np.array([0.0, 0.0, 0.0, 0.0, 2.0 * D.D11, 4.0 * D.D16, 6.0 * D.D12])
    dbmy_dx = -np.array([0.0, 0.0, 0.0, 6.0 * D.D12, 4.0 * D.D26, 2.0 * D.D22, 0.0])
    dbmy_dy = -np.array([0.0, 0.0, 0.0, 0.0, 2.0 * D.D12, 4.0 * D.D26, 6.0 * D.D22])
    dbmxy_dx = -np.array([0.0, 0.0, 0.0, 6.0 * D.D16, 4.0 * D.D66, 2.0 * D.D26, 0.0])
    dbmxy_dy = -np.array([0.0, 0.0, 0.0, 0.0, 2.0 * D.D16, 4.0 * D.D66, 6.0 * D.D26])
    return (dbmx_dx, dbmx_dy), (dbmy_dx, dbmy_dy), (dbmxy_dx, dbmxy_dy)


def b_matrix(D: BendingRigidity, tri: TriangleGeometry) -> np.ndarray:
    """Boundary force matrix B (7x12).

    Column order matches the generalized force vector: the three vertex
    corner forces, the three edge Kirchhoff shear resultants, then the six
    edge-end normal moments (edge 1-2 at nodes 1 and 2, edge 2-3 at nodes 2
    and 3, edge 3-1 at nodes 3 and 1).
    """
    nodes = [_moment_rows(D, x, y) for x, y in tri.verts]
    grads = _moment_row_gradients(D)
    (dmx_dx, dmx_dy), (dmy_dx, dmy_dy), (dmxy_dx, dmxy_dy) = grads

    sin2 = np.sin(2.0 * tri.gamma)
    cos2 = np.cos(2.0 * tri.gamma)
    b = np.zeros((7, 12))

    # corner forces: jump of the twisting moment between the two edges
    # meeting at each vertex (outgoing edge k, incoming edge k-1)
    for n in range(3):
        bmx, bmy, bmxy = nodes[n]
        e_out, e_in = n, (n - 1) % 3
        s_bar = sin2[e_out] - sin2[e_in]
        c_bar = cos2[e_out] - cos2[e_in]
        b[:, n] = 0.5 * s_bar * (bmy - bmx) + c_bar * bmxy

    for e in range(3):
        g = tri.gamma[e]
        c, s = np.cos(g), np.sin(g)
        cc, ss, s2, c2 = c * c, s * s, sin2[e], cos2[e]

        mn_x = cc * dmx_dx + ss * dmy_dx + s2 * dmxy_dx
        mn_y = cc * dmx_dy + ss * dmy_dy + s2 * dmxy_dy
        mns_x = 0.5 * s2 * (dmy_dx - dmx_dx) + c2 * dmxy_dx
        mns_y = 0.5 * s2 * (dmy_dy - dmx_dy) + c2 * dmxy_dy
        b[:, 3 + e] = c * mn_x + s * mn_y - 2.0 * s * mns_x + 2.0 * c * mns_y

        for slot, n in enumerate((e, (e + 1) % 3)):
            bmx, bmy, bmxy = nodes[n]
            b[:, 6 + 2 * e + slot] = cc * bmx + ss * bmy + s2 * bmxy
    return b


def t_matrix(tri: TriangleGeometry) -> np.ndarray:
    """Generalized displacement matrix T (12x9).

    Rows 1-3 pick the nodal displacements, rows 4-6 integrate the Hermite
    cubic edge displacement, rows 7-12 integrate the linear normal slope
    against the two moment interpolation weights of each edge.
    """
    t = np.zeros((12, 9))
    for n in range(3):
        t[n, 3 * n] = 1.0

    cos_g = np.cos(tri.gamma)
    sin_g = np.sin(tri.gamma)
    for e in range(3):
        i, j = e, (e + 1) % 3
        l = tri.lengths[e]
        c, s = cos_g[e], sin_g[e]

        row = 3 + e
        t[row, 3 * i] = l / 2.0
        t[row, 3 * i + 1] = -l * l / 12.0 * s
        t[row, 3 * i + 2] = l * l / 12.0 * c
        t[row, 3 * j] = l / 2.0
        t[row, 3 * j + 1] = l * l / 12.0 * s
        t[row, 3 * j + 2] = -l * l / 12.0 * c

        first, second = 6 + 2 * e, 7 + 2 * e
        t[first, 3 * i + 1] = -l / 3.0 * c
        t[first, 3 * i + 2] = -l / 3.0 * s
        t[first, 3 * j + 1] = -l / 6.0 * c
        t[first, 3 * j + 2] = -l / 6.0 * s
        t[second, 3 * i + 1] = -l / 6.0 * c
        t[second, 3 * i + 2] = -l / 6.0 * s
        t[second, 3 * j + 1] = -l / 3.0 * c
        t[second, 3 * j + 2] = -l / 3.0 * s
    return t


def k_plate(D: BendingRigidity, tri: TriangleGeometry) -> tuple:
    """Plate stiffness (9x9) and the coefficient map C = H^-1 (B T) (7x9).

    C reconstructs the cubic coefficients from nodal DoFs and is reused by
    the cohesive interface shape functions.
    """
    h = h_matrix(D, tri)
    bt = b_matrix(D, tri) @ t_matrix(tri)
    try:
        cho = cho_factor(h, lower=True)
    except LinAlgError as exc:
        raise DegenerateElementError(
            "interior energy matrix not positive definite") from exc
    c = cho_solve(cho, bt)
    k = bt.T @ c
    return 0.5 * (k + k.T), c
