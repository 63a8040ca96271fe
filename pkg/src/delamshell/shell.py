"""Flat shell element: constant-strain membrane superposed on the cubic plate.

Element DoF order is (u1, v1, u2, v2, u3, v3, w1, tx1, ty1, w2, tx2, ty2,
w3, tx3, ty3) with t* = dw/dx, dw/dy.  Membrane and bending blocks do not
couple for the symmetric layer sections this package allows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .laminate import LaminateSection
from .plate import TriangleGeometry, k_plate

N_SHELL_DOF = 15


def membrane_b_matrix(tri: TriangleGeometry) -> np.ndarray:
    """Constant strain-displacement matrix of the linear membrane triangle."""
    x = tri.verts[:, 0]
    y = tri.verts[:, 1]
    b = np.array([y[1] - y[2], y[2] - y[0], y[0] - y[1]])
    c = np.array([x[2] - x[1], x[0] - x[2], x[1] - x[0]])
    bm = np.zeros((3, 6))
    bm[0, 0::2] = b
    bm[1, 1::2] = c
    bm[2, 0::2] = c
    bm[2, 1::2] = b
    return bm / (2.0 * tri.area)


def k_membrane(section: LaminateSection, tri: TriangleGeometry) -> np.ndarray:
    """6x6 membrane stiffness; the integrand is constant so the integral is
    a product with the element area."""
    bm = membrane_b_matrix(tri)
    k = bm.T @ (section.membrane.matrix * section.thickness) @ bm * tri.area
    return 0.5 * (k + k.T)


@dataclass(frozen=True)
class ShellElement:
    """One shell element: geometry, section, 15x15 stiffness and the plate
    coefficient map reused by adjacent cohesive elements."""

    tri: TriangleGeometry
    section: LaminateSection
    k: np.ndarray        # (15, 15)
    coeff_map: np.ndarray  # (7, 9), cubic coefficients from plate DoFs


def k_shell(section: LaminateSection, tri: TriangleGeometry) -> ShellElement:
    """Assemble the shell stiffness as a block diagonal of membrane and
    plate parts."""
    k = np.zeros((N_SHELL_DOF, N_SHELL_DOF))
    k[:6, :6] = k_membrane(section, tri)
    kp, coeff_map = k_plate(section.bending, tri)
    k[6:, 6:] = kp
    return ShellElement(tri=tri, section=section, k=k, coeff_map=coeff_map)


def f_int_shell(k: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Internal force of the linear shell; the residual contribution is its
    negative."""
    return k @ q
