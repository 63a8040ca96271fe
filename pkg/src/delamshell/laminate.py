"""Classical laminate theory for orthotropic plies and layered sections.

Working units are N, mm and MPa throughout the package.  Ply engineering
constants are entered in the units fracture handbooks use (moduli in GPa,
toughnesses in kJ/m^2, strengths in MPa) and converted here exactly once:
1 GPa = 1000 MPa and 1 kJ/m^2 = 1 N/mm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MaterialError

GPA_TO_MPA = 1000.0

# Membrane/bending coupling above this fraction of max |A| (scaled by the
# section thickness) marks a layup that must not be used for a single shell
# layer, which assumes a symmetric section.
COUPLING_RTOL = 1e-9


@dataclass(frozen=True)
class OrthotropicPly:
    """Engineering constants of a unidirectional ply.

    Parameters
    ----------
    E11, E22, E33 : float
        Young's moduli in GPa.
    nu12, nu13, nu23 : float
        Poisson ratios.
    G12, G13, G23 : float
        Shear moduli in GPa.
    GIc, GIIc : float
        Interlaminar fracture toughnesses in kJ/m^2 (numerically equal to
        N/mm).
    eta : float
        Benzeggagh-Kenane mixed-mode exponent.
    tauIc, tauIIc : float
        Interfacial strengths in MPa.
    """

    name: str
    E11: float
    E22: float
    E33: float
    nu12: float
    nu13: float
    nu23: float
    G12: float
    G13: float
    G23: float
    GIc: float
    GIIc: float
    eta: float
    tauIc: float
    tauIIc: float

    def __post_init__(self):
        for label in ("E11", "E22", "E33", "G12", "G13", "G23"):
            if getattr(self, label) <= 0.0:
                raise MaterialError(f"{self.name}: modulus {label} must be > 0")
        for label in ("nu12", "nu13", "nu23"):
            value = getattr(self, label)
            if not 0.0 <= value < 0.5:
                raise MaterialError(f"{self.name}: {label}={value} outside [0, 0.5)")
        if 1.0 - self.nu12 * self.nu21 <= 0.0:
            raise MaterialError(f"{self.name}: 1 - nu12*nu21 must be positive")
        if not self.GIIc >= self.GIc > 0.0:
            raise MaterialError(f"{self.name}: toughnesses must satisfy GIIc >= GIc > 0")
        if self.tauIc <= 0.0 or self.tauIIc <= 0.0:
            raise MaterialError(f"{self.name}: interfacial strengths must be > 0")
        if self.eta <= 0.0:
            raise MaterialError(f"{self.name}: eta must be > 0")

    @property
    def nu21(self) -> float:
        return self.nu12 * self.E22 / self.E11

    @property
    def E33_mpa(self) -> float:
        return self.E33 * GPA_TO_MPA


@dataclass(frozen=True)
class PlyLayup:
    """Ordered stack (top of list = top of section) of (ply, angle, thickness).

    Angles are in degrees, thicknesses in mm.  The z origin is placed at the
    section mid-plane.
    """

    entries: tuple  # of (OrthotropicPly, angle_deg, thickness_mm)

    def __post_init__(self):
        if len(self.entries) == 0:
            raise MaterialError("layup must contain at least one ply")
        for _, _, thickness in self.entries:
            if thickness <= 0.0:
                raise MaterialError("ply thicknesses must be > 0")

    @classmethod
    def build(cls, plies) -> "PlyLayup":
        return cls(entries=tuple(plies))

    @property
    def thickness(self) -> float:
        return sum(t for _, _, t in self.entries)

    def z_interfaces(self) -> np.ndarray:
        """z of ply boundaries from top (+t/2) to bottom (-t/2)."""
        total = self.thickness
        z = [total / 2.0]
        for _, _, t in self.entries:
            z.append(z[-1] - t)
        return np.asarray(z)

    def reversed(self) -> "PlyLayup":
        return PlyLayup(entries=tuple(reversed(self.entries)))


@dataclass(frozen=True)
class BendingRigidity:
    """Bending rigidities about the section mid-plane, in N*mm."""

    D11: float
    D12: float
    D16: float
    D22: float
    D26: float
    D66: float

    @classmethod
    def from_matrix(cls, D: np.ndarray) -> "BendingRigidity":
        return cls(D11=D[0, 0], D12=D[0, 1], D16=D[0, 2],
                   D22=D[1, 1], D26=D[1, 2], D66=D[2, 2])

    def as_matrix(self) -> np.ndarray:
        return np.array([
            [self.D11, self.D12, self.D16],
            [self.D12, self.D22, self.D26],
            [self.D16, self.D26, self.D66],
        ])


@dataclass(frozen=True)
class MembraneStiffness:
    """Thickness-averaged in-plane stiffness (MPa); multiply by t for the
    extensional stiffness of the section."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=float))


def reduced_stiffness(ply: OrthotropicPly) -> np.ndarray:
    """Plane-stress stiffness Q of the ply in its material axes, in MPa."""
    denom = 1.0 - ply.nu12 * ply.nu21
    if denom <= 0.0:
        raise MaterialError(f"{ply.name}: 1 - nu12*nu21 must be positive")
    e1 = ply.E11 * GPA_TO_MPA
    e2 = ply.E22 * GPA_TO_MPA
    q = np.zeros((3, 3))
    q[0, 0] = e1 / denom
    q[1, 1] = e2 / denom
    q[0, 1] = q[1, 0] = ply.nu12 * e2 / denom
    q[2, 2] = ply.G12 * GPA_TO_MPA
    return q


def transform_stiffness(q: np.ndarray, angle_deg: float) -> np.ndarray:
    """Rotate a plane-stress stiffness matrix by `angle_deg` about z.

    Standard CLT transformation of the [xx, yy, xy] stiffness with engineering
    shear strain.
    """
    th = np.radians(angle_deg)
    c, s = np.cos(th), np.sin(th)
    # Reuter-adjusted strain transform: eps_material = T_eps(theta) eps_lam
    t_sig = np.array([
        [c * c, s * s, 2.0 * c * s],
        [s * s, c * c, -2.0 * c * s],
        [-c * s, c * s, c * c - s * s],
    ])
    t_eps = np.array([
        [c * c, s * s, c * s],
        [s * s, c * c, -c * s],
        [-2.0 * c * s, 2.0 * c * s, c * c - s * s],
    ])
    qbar = np.linalg.solve(t_sig, q @ t_eps)
    return 0.5 * (qbar + qbar.T)


def abd_matrices(layup: PlyLayup) -> tuple:
    """Per-unit-width A (N/mm), B (N), D (N*mm) matrices of the layup."""
    a = np.zeros((3, 3))
    b = np.zeros((3, 3))
    d = np.zeros((3, 3))
    z = layup.z_interfaces()
    for (ply, angle, _), z_top, z_bot in zip(layup.entries, z[:-1], z[1:]):
        qbar = transform_stiffness(reduced_stiffness(ply), angle)
        a += qbar * (z_top - z_bot)
        b += qbar * (z_top**2 - z_bot**2) / 2.0
        d += qbar * (z_top**3 - z_bot**3) / 3.0
    return a, b, d


def bending_rigidity(layup: PlyLayup) -> BendingRigidity:
    """Bending rigidity matrix D of the layup about its mid-plane."""
    _, _, d = abd_matrices(layup)
    return BendingRigidity.from_matrix(d)


def membrane_stiffness(layup: PlyLayup) -> MembraneStiffness:
    """Thickness-averaged in-plane stiffness of the layup (A / t, in MPa)."""
    a, _, _ = abd_matrices(layup)
    return MembraneStiffness(matrix=a / layup.thickness)


def effective_rigidities_slb(layup_cracked_top: PlyLayup,
                             layup_uncracked: PlyLayup,
                             plane_strain: bool = False) -> tuple:
    """Effective per-unit-width bending rigidities (D1, D0, R) for the SLB
    reference solution.

    D1 belongs to the sublaminate above the crack, D0 to the intact section;
    R = D0 / D1.  Under generalized plane stress the rigidity is 1/delta11 of
    the inverted ABD relation; under plane strain it is D11 directly.
    """
    d1 = _effective_rigidity(layup_cracked_top, plane_strain)
    d0 = _effective_rigidity(layup_uncracked, plane_strain)
    r = d0 / d1
    if r <= 0.0:
        raise MaterialError("effective rigidities must be positive")
    return d1, d0, r


def _effective_rigidity(layup: PlyLayup, plane_strain: bool) -> float:
    a, b, d = abd_matrices(layup)
    if plane_strain:
        return d[0, 0]
    abd = np.block([[a, b], [b, d]])
    try:
        inv = np.linalg.inv(abd)
    except np.linalg.LinAlgError as exc:
        raise MaterialError("singular ABD matrix") from exc
    return 1.0 / inv[3, 3]


@dataclass(frozen=True)
class LaminateSection:
    """Constitutive data of one shell layer: bending rigidity, membrane
    stiffness, thickness and the out-of-plane modulus used for interface
    penalty stiffness."""

    bending: BendingRigidity
    membrane: MembraneStiffness
    thickness: float
    e3_gpa: float

    @property
    def extensional(self) -> np.ndarray:
        """A matrix of the layer (N/mm)."""
        return self.membrane.matrix * self.thickness


def section_from_layup(layup: PlyLayup) -> LaminateSection:
    """Build the shell-layer section, rejecting membrane/bending coupling.

    Each shell layer must be a symmetric section (a single ply always is);
    any B matrix beyond round-off is a model-build error.
    """
    a, b, d = abd_matrices(layup)
    tol = COUPLING_RTOL * np.abs(a).max() * layup.thickness
    if np.abs(b).max() > tol:
        raise MaterialError(
            "shell layer layup has membrane/bending coupling "
            f"(max |B| = {np.abs(b).max():.3e} N exceeds {tol:.3e})")
    e3 = sum(ply.E33 * t for ply, _, t in layup.entries) / layup.thickness
    return LaminateSection(
        bending=BendingRigidity.from_matrix(d),
        membrane=MembraneStiffness(matrix=a / layup.thickness),
        thickness=layup.thickness,
        e3_gpa=e3,
    )


# --- material tables ---------------------------------------------------------

_PLY_FIELDS = ("E11", "E22", "E33", "nu12", "nu13", "nu23",
               "G12", "G13", "G23", "GIc", "GIIc", "eta", "tauIc", "tauIIc")


def load_materials(text: str) -> dict:
    """Parse material blocks from flat key=value text.

    Blocks open with ``[material <name>]`` and list one ``key = value`` pair
    per line using the OrthotropicPly field names.  Lines outside any block
    and ``#`` comments are ignored.
    """
    materials = {}
    name = None
    fields = {}

    def _close():
        if name is None:
            return
        missing = [f for f in _PLY_FIELDS if f not in fields]
        if missing:
            raise MaterialError(f"material '{name}' missing keys: {', '.join(missing)}")
        materials[name] = OrthotropicPly(name=name, **fields)

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            _close()
            header = line[1:-1].strip()
            if not header.lower().startswith("material"):
                name, fields = None, {}
                continue
            name = header[len("material"):].strip()
            if not name:
                raise MaterialError("material block without a name")
            fields = {}
            continue
        if name is None:
            continue
        if "=" not in line:
            raise MaterialError(f"malformed material line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PLY_FIELDS:
            raise MaterialError(f"unknown material key '{key}' in block '{name}'")
        fields[key] = float(value)
    _close()
    return materials


def builtin_materials() -> dict:
    """The three benchmark material systems."""
    return {
        "T300/1076": OrthotropicPly(
            name="T300/1076",
            E11=139.4, E22=10.16, E33=10.16,
            nu12=0.30, nu13=0.30, nu23=0.436,
            G12=4.6, G13=4.6, G23=3.54,
            GIc=0.170, GIIc=0.494, eta=1.62,
            tauIc=30.0, tauIIc=60.0,
        ),
        "IM7/8552": OrthotropicPly(
            name="IM7/8552",
            E11=161.0, E22=11.38, E33=11.38,
            nu12=0.32, nu13=0.32, nu23=0.45,
            G12=5.2, G13=5.2, G23=3.9,
            GIc=0.212, GIIc=0.774, eta=2.1,
            tauIc=30.0, tauIIc=60.0,
        ),
        "C12K/R6376": OrthotropicPly(
            name="C12K/R6376",
            E11=146.9, E22=10.6, E33=10.6,
            nu12=0.33, nu13=0.33, nu23=0.33,
            G12=5.45, G13=5.45, G23=3.99,
            GIc=0.34, GIIc=1.286, eta=3.39,
            tauIc=25.0, tauIIc=38.0,
        ),
    }
