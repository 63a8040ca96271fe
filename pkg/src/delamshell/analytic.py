"""Closed-form reference load-displacement curves for the benchmarks.

The mode I curve uses corrected beam theory (crack-length correction for
root rotation), the mode II curve plain beam-theory LEFM, the mixed-mode
bending curve the lever decomposition with corrected crack lengths, and the
single-leg bending curve the two-rigidity beam solution with its three
branches (elastic, propagation before mid-span, propagation past mid-span).
Displacements are reported at the point the simulations control: the opening
for mode I and the mid-span deflection otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError
from .laminate import GPA_TO_MPA, OrthotropicPly
from .mesh import BenchmarkGeometry


@dataclass
class AnalyticCurve:
    """Piecewise reference curve: displacement/load samples, branch labels
    and (on propagation branches) the crack length behind each sample."""

    displacement: np.ndarray
    load: np.ndarray
    branch: list
    crack_length: np.ndarray
    gc: float = 0.0
    width: float = 0.0
    a0: float = 0.0
    metadata: dict = field(default_factory=dict)

    @property
    def peak_load(self) -> float:
        return float(np.max(np.abs(self.load)))

    def dissipation(self) -> np.ndarray:
        a = np.where(np.isnan(self.crack_length), self.a0, self.crack_length)
        return self.gc * self.width * np.clip(a - self.a0, 0.0, None)

    def to_csv_text(self) -> str:
        lines = [f"# {k} = {v}" for k, v in self.metadata.items()]
        lines.append("increment,displacement_mm,load_N,iterations,dissipation_Nmm")
        diss = self.dissipation()
        for i in range(self.displacement.size):
            lines.append(f"{i},{self.displacement[i]:.17g},"
                         f"{self.load[i]:.17g},0,{diss[i]:.17g}")
        return "\n".join(lines) + "\n"

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())


def williams_root_correction(material: OrthotropicPly) -> float:
    """Crack-length correction factor chi; the effective crack extension is
    chi times the arm thickness."""
    e11 = material.E11 * GPA_TO_MPA
    e22 = material.E22 * GPA_TO_MPA
    g13 = material.G13 * GPA_TO_MPA
    gamma = 1.18 * np.sqrt(e11 * e22) / g13
    return np.sqrt(e11 / (11.0 * g13) * (3.0 - 2.0 * (gamma / (1.0 + gamma)) ** 2))


def bk_toughness(g_ic: float, g_iic: float, eta: float, mode_mix: float) -> float:
    """Benzeggagh-Kenane mixed-mode critical energy release rate."""
    b = min(max(mode_mix, 0.0), 1.0)
    return g_ic + (g_iic - g_ic) * b**eta


def _stitch(branches):
    disp = np.concatenate([b[0] for b in branches])
    load = np.concatenate([b[1] for b in branches])
    labels = sum(([b[3]] * len(b[0]) for b in branches), [])
    crack = np.concatenate([b[2] for b in branches])
    return disp, load, labels, crack


def dcb_curve(geometry: BenchmarkGeometry, material: OrthotropicPly,
              g_ic: float = None, a_end: float = None,
              n_elastic: int = 30, n_prop: int = 300) -> AnalyticCurve:
    """Opening vs pull-apart force of the double cantilever beam, corrected
    beam theory."""
    g_ic = material.GIc if g_ic is None else g_ic
    e11 = material.E11 * GPA_TO_MPA
    h, b, a0 = geometry.arm_thickness, geometry.width, geometry.a0
    chi_h = williams_root_correction(material) * h
    a_end = 0.9 * geometry.span if a_end is None else a_end

    def compliance(a):
        return 8.0 * (a + chi_h) ** 3 / (e11 * b * h**3)

    p_crit = b * np.sqrt(g_ic * e11 * h**3 / 12.0) / (a0 + chi_h)
    p_el = np.linspace(0.0, p_crit, n_elastic)
    el = (compliance(a0) * p_el, p_el, np.full(n_elastic, np.nan), "elastic")

    a = np.linspace(a0, a_end, n_prop)
    p = b * np.sqrt(g_ic * e11 * h**3 / 12.0) / (a + chi_h)
    prop = (compliance(a) * p, p, a, "propagation")

    disp, load, labels, crack = _stitch([el, prop])
    return AnalyticCurve(displacement=disp, load=load, branch=labels,
                         crack_length=crack, gc=g_ic, width=b, a0=a0,
                         metadata={"case": "dcb", "model": "corrected beam theory",
                                   "chi_h_mm": f"{chi_h:.6g}"})


def enf_curve(geometry: BenchmarkGeometry, material: OrthotropicPly,
              g_iic: float = None, n_elastic: int = 30,
              n_prop: int = 300) -> AnalyticCurve:
    """Mid-span deflection vs load of the end-notched flexure specimen,
    beam-theory LEFM.  If the propagation branch folds back in displacement
    the curve still carries the crack length so it can be read as load vs
    crack length."""
    g_iic = material.GIIc if g_iic is None else g_iic
    e11 = material.E11 * GPA_TO_MPA
    h, b, a0 = geometry.arm_thickness, geometry.width, geometry.a0
    half = geometry.span / 2.0

    def compliance(a):
        return (2.0 * half**3 + 3.0 * a**3) / (8.0 * e11 * b * h**3)

    p_crit = 4.0 * b / (3.0 * a0) * np.sqrt(g_iic * e11 * h**3)
    p_el = np.linspace(0.0, p_crit, n_elastic)
    el = (compliance(a0) * p_el, p_el, np.full(n_elastic, np.nan), "elastic")

    a = np.linspace(a0, 0.999 * half, n_prop)
    p = 4.0 * b / (3.0 * a) * np.sqrt(g_iic * e11 * h**3)
    delta = compliance(a) * p
    prop = (delta, p, a, "propagation")

    disp, load, labels, crack = _stitch([el, prop])
    meta = {"case": "enf", "model": "beam-theory LEFM"}
    if np.any(np.diff(delta) < 0.0):
        meta["snapback"] = "propagation branch multivalued in displacement"
    return AnalyticCurve(displacement=disp, load=load, branch=labels,
                         crack_length=crack, gc=g_iic, width=b, a0=a0,
                         metadata=meta)


def mmb_curve(geometry: BenchmarkGeometry, material: OrthotropicPly,
              lever: float = None, n_elastic: int = 30,
              n_prop: int = 300) -> AnalyticCurve:
    """Mid-span deflection vs lever load of the mixed-mode bending specimen.

    Lever statics split the load into an opening pair and a three-point
    bend; crack lengths carry the corrected-beam-theory offsets, which puts
    the nominal lever arm at an even mode split.
    """
    c = geometry.lever if lever is None else lever
    if c <= 0.0:
        raise ModelError("MMB needs a positive lever length")
    e11 = material.E11 * GPA_TO_MPA
    h, b, a0 = geometry.arm_thickness, geometry.width, geometry.a0
    half = geometry.span / 2.0
    chi_h = williams_root_correction(material) * h
    k_i = (3.0 * c - half) / (4.0 * half)
    k_ii = (c + half) / half

    def g_coefficients(a):
        """G = P^2 / (E b^2 h^3) * (ci + cii) with the mode split ci:cii."""
        ci = 12.0 * k_i**2 * (a + chi_h) ** 2
        cii = 9.0 / 16.0 * k_ii**2 * (a + 0.42 * chi_h) ** 2
        return ci, cii

    def compliance_mid(a):
        return (2.0 * half**3 + 3.0 * a**3) / (8.0 * e11 * b * h**3) * k_ii

    ci0, cii0 = g_coefficients(a0)
    mix0 = cii0 / (ci0 + cii0)
    gc0 = bk_toughness(material.GIc, material.GIIc, material.eta, mix0)
    p_crit = np.sqrt(gc0 * e11 * b * b * h**3 / (ci0 + cii0))
    p_el = np.linspace(0.0, p_crit, n_elastic)
    el = (compliance_mid(a0) * p_el, p_el, np.full(n_elastic, np.nan), "elastic")

    a = np.linspace(a0, 0.999 * half, n_prop)
    ci, cii = g_coefficients(a)
    mix = cii / (ci + cii)
    gc = bk_toughness(material.GIc, material.GIIc, material.eta, mix)
    p = np.sqrt(gc * e11 * b * b * h**3 / (ci + cii))
    prop = (compliance_mid(a) * p, p, a, "propagation")

    disp, load, labels, crack = _stitch([el, prop])
    return AnalyticCurve(displacement=disp, load=load, branch=labels,
                         crack_length=crack, gc=float(gc0), width=b, a0=a0,
                         metadata={"case": "mmb",
                                   "model": "lever statics + corrected beam theory",
                                   "mode_mix": f"{mix0:.6g}",
                                   "lever_mm": f"{c:g}"})


def slb_curve(geometry: BenchmarkGeometry, d0: float, d1: float, props,
              mode_mix: float = 0.4, a_max: float = None,
              n_elastic: int = 30, n_prop: int = 300) -> AnalyticCurve:
    """Mid-span deflection vs load of the single-leg bending specimen from
    the two-rigidity beam solution.

    ``d0`` and ``d1`` are the effective per-unit-width bending rigidities of
    the intact section and of the leg above the crack; ``props`` provides
    GIc, GIIc and eta.  The load rises again once the crack passes mid-span.
    """
    r = d0 / d1
    if r <= 1.0:
        raise ModelError("SLB propagation needs R = D0/D1 > 1")
    b = geometry.width
    half = geometry.span / 2.0
    a0 = geometry.a0
    if not 0.0 < a0 < geometry.span:
        raise ModelError("pre-crack outside the specimen")
    gc = bk_toughness(props.GIc, props.GIIc, props.eta, mode_mix)
    a_max = 1.35 * half if a_max is None else a_max

    def delta_short(p, a):
        return p * (2.0 * half**3 + a**3 * (r - 1.0)) / (12.0 * b * d0)

    def delta_long(p, a):
        poly = a**3 - 6.0 * half * a**2 + 12.0 * half**2 * a
        return (p / (12.0 * b * d0)) * ((r - 1.0) * poly
                                        - (6.0 * r - 8.0) * half**3)

    def p_short(a):
        return np.sqrt(8.0 * gc * b * b * d0 / (a * a * (r - 1.0)))

    def p_long(a):
        poly = 3.0 * a**2 - 12.0 * a * half + 12.0 * half**2
        return np.sqrt(24.0 * gc * b * b * d0 / ((r - 1.0) * poly))

    p_crit = p_short(a0)
    p_el = np.linspace(0.0, p_crit, n_elastic)
    el = (delta_short(p_el, a0), p_el, np.full(n_elastic, np.nan), "elastic")

    branches = [el]
    a_bf = np.linspace(a0, min(half, a_max), n_prop)
    branches.append((delta_short(p_short(a_bf), a_bf), p_short(a_bf),
                     a_bf, "propagation a<L"))
    if a_max > half:
        a_fe = np.linspace(half, a_max, n_prop)
        branches.append((delta_long(p_long(a_fe), a_fe), p_long(a_fe),
                         a_fe, "propagation a>L"))

    disp, load, labels, crack = _stitch(branches)
    return AnalyticCurve(displacement=disp, load=load, branch=labels,
                         crack_length=crack, gc=gc, width=b, a0=a0,
                         metadata={"case": "slb",
                                   "model": "two-rigidity beam solution",
                                   "mode_mix": f"{mode_mix:g}",
                                   "R": f"{r:.8g}", "D0_Nmm": f"{d0:.8g}",
                                   "D1_Nmm": f"{d1:.8g}",
                                   "Gc_N_per_mm": f"{gc:.8g}"})


def slb_compliance(a, geometry: BenchmarkGeometry, d0: float, r: float):
    """Compliance of the cracked SLB specimen (both crack-length regimes);
    exposed for cross-checking the energy release rate."""
    b = geometry.width
    half = geometry.span / 2.0
    a = np.asarray(a, dtype=float)
    short = (2.0 * half**3 + a**3 * (r - 1.0)) / (12.0 * b * d0)
    poly = a**3 - 6.0 * half * a**2 + 12.0 * half**2 * a
    long = ((r - 1.0) * poly - (6.0 * r - 8.0) * half**3) / (12.0 * b * d0)
    return np.where(a < half, short, long)


def slb_energy_release_rate(p, a, geometry: BenchmarkGeometry,
                            d0: float, r: float):
    """Closed-form G for the SLB specimen, both regimes."""
    b = geometry.width
    half = geometry.span / 2.0
    a = np.asarray(a, dtype=float)
    g_short = p * p * a * a * (r - 1.0) / (8.0 * b * b * d0)
    poly = 3.0 * a**2 - 12.0 * a * half + 12.0 * half**2
    g_long = p * p * (r - 1.0) * poly / (24.0 * b * b * d0)
    return np.where(a < half, g_short, g_long)
