"""Displacement-controlled quasi-static solution of a layered model.

Shell stiffnesses are linear and cached; only the cohesive interfaces evolve.
Every iteration reassembles the interface secant stiffness from trial damage
states, solves the constrained linear system with a sparse direct
factorization and updates the trial states from the new displacements; the
increment is accepted once the force residual and the displacement correction
are both small.  States commit only on acceptance, so intra-increment
iterations never ratchet the damage history.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from . import kernels
from .cohesive import N_GAUSS, ce_b_matrices
from .errors import ConvergenceError, ModelError
from .mesh import LayeredModel, LoadSpec
from .plate import triangle_local_frame
from .quadrature import cowper_13
from .shell import k_shell

log = logging.getLogger("delamshell")

_TINY = 1.0e-30

# compression-engagement band as a fraction of the mode I onset opening;
# the allowed extra interpenetration (half the band) is negligible
GATE_BAND_FRACTION = 0.05


@dataclass(frozen=True)
class SolverSettings:
    """Quasi-Newton loop controls (conventional quasi-static defaults)."""

    tol_residual: float = 5.0e-3
    tol_displacement: float = 1.0e-2
    max_iterations: int = 60
    max_cuts: int = 6
    initial_fraction: float = 0.01
    growth: float = 1.5
    fast_iterations: int = 3
    max_fraction: float = 0.05
    elastic_only: bool = False


@dataclass
class LoadDisplacementCurve:
    """Per-increment record of one run plus energy tallies and metadata."""

    displacement: np.ndarray = field(default_factory=lambda: np.empty(0))
    load: np.ndarray = field(default_factory=lambda: np.empty(0))
    iterations: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))
    dissipation: np.ndarray = field(default_factory=lambda: np.empty(0))
    external_work: np.ndarray = field(default_factory=lambda: np.empty(0))
    strain_energy: np.ndarray = field(default_factory=lambda: np.empty(0))
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return self.displacement.size

    def energy_balance_error(self) -> float:
        """|W_ext - (U + D)| / W_ext at the end of the run."""
        if len(self) == 0:
            return 0.0
        w = self.external_work[-1]
        if w <= _TINY:
            return 0.0
        return abs(w - self.strain_energy[-1] - self.dissipation[-1]) / w

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())

    def to_csv_text(self) -> str:
        lines = [f"# {key} = {value}" for key, value in self.metadata.items()]
        lines.append("increment,displacement_mm,load_N,iterations,dissipation_Nmm")
        for i in range(len(self)):
            lines.append(
                f"{i},{self.displacement[i]:.17g},{self.load[i]:.17g},"
                f"{int(self.iterations[i])},{self.dissipation[i]:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, path) -> "LoadDisplacementCurve":
        metadata = {}
        rows = []
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    body = line[1:].strip()
                    if "=" in body:
                        key, value = body.split("=", 1)
                        metadata[key.strip()] = value.strip()
                    continue
                if line.startswith("increment"):
                    continue
                parts = line.split(",")
                rows.append((float(parts[1]), float(parts[2]),
                             int(parts[3]), float(parts[4])))
        if rows:
            disp, load, iters, diss = (np.asarray(col) for col in zip(*rows))
        else:
            disp = load = diss = np.empty(0)
            iters = np.empty(0, dtype=int)
        return cls(displacement=disp, load=load,
                   iterations=iters.astype(int), dissipation=diss,
                   external_work=np.full(disp.shape, np.nan),
                   strain_energy=np.full(disp.shape, np.nan),
                   metadata=metadata)


class _ShellGroup:
    """All shell elements of one layer that share a half-cell geometry."""

    __slots__ = ("k", "dofs")

    def __init__(self, k, dofs):
        self.k = k
        self.dofs = dofs


def _element_dofs_shell(tris) -> np.ndarray:
    """(ne, 15) global DoF ids in element order: membrane pairs then plate
    triplets."""
    ne = tris.shape[0]
    dofs = np.empty((ne, 15), dtype=np.int64)
    for n in range(3):
        base = tris[:, n] * 5
        dofs[:, 2 * n] = base          # u
        dofs[:, 2 * n + 1] = base + 1  # v
        dofs[:, 6 + 3 * n] = base + 2  # w
        dofs[:, 7 + 3 * n] = base + 3
        dofs[:, 8 + 3 * n] = base + 4
    return dofs


def _element_dofs_ce(tris_bot, tris_top) -> np.ndarray:
    ne = tris_bot.shape[0]
    dofs = np.empty((ne, 30), dtype=np.int64)
    dofs[:, :15] = _element_dofs_shell(tris_bot)
    dofs[:, 15:] = _element_dofs_shell(tris_top)
    return dofs


class GlobalSystem:
    """Compiled model: cached element matrices, DoF partition, sparse
    pattern and the committed cohesive history."""

    def __init__(self, model: LayeredModel, loads: LoadSpec,
                 settings: SolverSettings = None):
        self.model = model
        self.loads = loads
        self.settings = settings or SolverSettings()
        self.ndof = model.n_dof

        self._compile_shells()
        self._compile_interfaces()
        self._partition()
        self._build_pattern()

        self.q = np.zeros(self.ndof)
        self.load_factor = 0.0
        self._lu = None
        self._assembled_dmg = None
        self._assembled_dmg1 = None
        self._kmats = None

    # -- compilation ----------------------------------------------------------

    def _half_geometry(self, half):
        dx, dy = self.model.dx, self.model.dy
        if half == 0:
            return triangle_local_frame([(0.0, 0.0), (dx, 0.0), (dx, dy)])
        return triangle_local_frame([(0.0, 0.0), (dx, dy), (0.0, dy)])

    def _compile_shells(self):
        self._half_tris = [self._half_geometry(h) for h in (0, 1)]
        self._shell_elems = {}  # (layer, half) -> ShellElement
        for layer in self.model.layers:
            for half in (0, 1):
                self._shell_elems[(layer.index, half)] = k_shell(
                    layer.section, self._half_tris[half])
        self.shell_groups = []
        for block in self.model.shells:
            dofs = _element_dofs_shell(block.tris)
            for half in (0, 1):
                mask = block.halves == half
                if mask.any():
                    elem = self._shell_elems[(block.layer, half)]
                    self.shell_groups.append(_ShellGroup(elem.k, dofs[mask]))

    def _compile_interfaces(self):
        bmats = []
        dofs = []
        contact = []
        params = {key: [] for key in ("kpen", "d01", "df1", "d0s", "dfs",
                                      "eta", "band")}
        gc_i = []
        gc_ii = []
        for block in self.model.interfaces:
            top_elem = {h: self._shell_elems[(block.top_layer, h)] for h in (0, 1)}
            bot_elem = {h: self._shell_elems[(block.bot_layer, h)] for h in (0, 1)}
            variants = {
                h: ce_b_matrices(self._half_tris[h], top_elem[h].coeff_map,
                                 bot_elem[h].coeff_map, block.h_top, block.h_bot)
                for h in (0, 1)
            }
            bmats.append(np.stack([variants[h] for h in block.halves]))
            dofs.append(_element_dofs_ce(block.tris_bot, block.tris_top))
            ne = block.tris_bot.shape[0]
            contact.append(np.full(ne, block.contact))
            p = block.props
            params["kpen"].append(np.full(ne, p.K))
            params["d01"].append(np.full(ne, p.delta0_I))
            params["df1"].append(np.full(ne, p.deltaf_I))
            params["d0s"].append(np.full(ne, p.delta0_sh))
            params["dfs"].append(np.full(ne, p.deltaf_sh))
            params["eta"].append(np.full(ne, p.eta))
            params["band"].append(np.full(ne, GATE_BAND_FRACTION * p.delta0_I))
            gc_i.append(np.full(ne, p.GIc))
            gc_ii.append(np.full(ne, p.GIIc))

        if bmats:
            self.ce_bmats = np.ascontiguousarray(np.concatenate(bmats))
            self.ce_dofs = np.concatenate(dofs)
            self.ce_contact = np.concatenate(contact)
            self.ce_params = {key: np.concatenate(val) for key, val in params.items()}
            self.ce_gc_i = np.concatenate(gc_i)
            self.ce_gc_ii = np.concatenate(gc_ii)
        else:
            self.ce_bmats = np.zeros((0, N_GAUSS, 3, 30))
            self.ce_dofs = np.zeros((0, 30), dtype=np.int64)
            self.ce_contact = np.zeros(0, dtype=bool)
            self.ce_params = {key: np.zeros(0) for key in params}
            self.ce_gc_i = np.zeros(0)
            self.ce_gc_ii = np.zeros(0)
        self.n_ce = self.ce_dofs.shape[0]
        self.ce_area = np.full(self.n_ce, 0.5 * self.model.dx * self.model.dy)
        _, self.ce_weights = cowper_13()

        self.lam_committed = np.zeros((self.n_ce, N_GAUSS))
        self.mix_committed = np.full((self.n_ce, N_GAUSS), -1.0)

    def _partition(self):
        prescribed = np.zeros(self.ndof, dtype=bool)
        prescribed[self.loads.fixed_dofs] = True
        prescribed[self.loads.driven_dofs] = True
        self.prescribed_mask = prescribed
        self.free_idx = np.flatnonzero(~prescribed)
        self.n_free = self.free_idx.size
        self.full_to_free = np.full(self.ndof, -1, dtype=np.int64)
        self.full_to_free[self.free_idx] = np.arange(self.n_free)

    def _entry_arrays(self):
        """(rows, cols, static values) of every element stiffness entry in a
        fixed deterministic order; CE values are placeholders."""
        rows = []
        cols = []
        for group in self.shell_groups:
            d = group.dofs
            rows.append(np.repeat(d, 15, axis=1).ravel())
            cols.append(np.tile(d, (1, 15)).ravel())
        d = self.ce_dofs
        if d.size:
            rows.append(np.repeat(d, 30, axis=1).ravel())
            cols.append(np.tile(d, (1, 30)).ravel())
        return np.concatenate(rows), np.concatenate(cols)

    def _build_pattern(self):
        rows, cols = self._entry_arrays()
        n_shell_entries = sum(g.dofs.shape[0] * 225 for g in self.shell_groups)
        rf = self.full_to_free[rows]
        cf = self.full_to_free[cols]
        keep = (rf >= 0) & (cf >= 0)

        # entries sorted row-major; K is symmetric, so the row-compressed
        # arrays double as the CSC form the factorization wants
        keys = rf[keep].astype(np.int64) * self.n_free + cf[keep]
        uniq, slots = np.unique(keys, return_inverse=True)
        self._nnz = uniq.size
        self._indices = (uniq % self.n_free).astype(np.int32)
        counts = np.bincount((uniq // self.n_free).astype(np.int64),
                             minlength=self.n_free)
        self._indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)

        shell_vals = np.concatenate(
            [np.tile(g.k.ravel(), g.dofs.shape[0]) for g in self.shell_groups]
        ) if self.shell_groups else np.zeros(0)
        keep_shell = keep[:n_shell_entries]
        n_kept_shell = int(np.count_nonzero(keep_shell))
        self._base_data = np.zeros(self._nnz)
        kernels.csr_scatter(self._base_data, slots[:n_kept_shell],
                            shell_vals[keep_shell])
        self._ce_slots = slots[n_kept_shell:]
        self._ce_keep_idx = np.flatnonzero(keep[n_shell_entries:])

    # -- evaluation -----------------------------------------------------------

    def evaluate_states(self, q, lam_base=None, mix_base=None):
        """Trial cohesive state at displacements q, based on the committed
        history (states only mutate when an increment is accepted)."""
        lam_base = self.lam_committed if lam_base is None else lam_base
        mix_base = self.mix_committed if mix_base is None else mix_base
        qel = q[self.ce_dofs]
        delta, lam_t, mix_t, dmg, dmg1, soft, dn_tan = kernels.ce_evaluate(
            self.ce_bmats, qel, lam_base, mix_base, self.ce_contact,
            self.ce_params["kpen"], self.ce_params["d01"],
            self.ce_params["df1"], self.ce_params["d0s"],
            self.ce_params["dfs"], self.ce_params["eta"],
            self.ce_params["band"])
        if self.settings.elastic_only:
            live = ~self.ce_contact
            dmg[live] = 0.0
            dmg1[live] = 0.0
            dn_tan[live] = 1.0
            soft[:] = 0.0
            lam_t = self.lam_committed.copy()
            mix_t = self.mix_committed.copy()
        return delta, lam_t, mix_t, dmg, dmg1, soft, dn_tan

    def _ensure_stiffness(self, states):
        """Factorize the consistent tangent for the given trial states.

        When no point is on the softening envelope the tangent equals the
        secant diagonal and depends only on the damage field, so a matching
        factorization is reused (the whole elastic phase shares one).
        """
        delta, _, _, dmg, dmg1, soft, dn_tan = states
        soft_free = not np.any(soft)
        if (soft_free and self._assembled_dmg is not None
                and np.array_equal(dmg, self._assembled_dmg)
                and np.array_equal(dn_tan, self._assembled_dmg1)):
            return False
        kmats = kernels.ce_tangent(
            self.ce_bmats, delta, self.ce_area, self.ce_weights,
            self.ce_params["kpen"], dmg, dmg1, soft, dn_tan)
        data = self._base_data.copy()
        if self.n_ce:
            vals = kmats.reshape(-1)[self._ce_keep_idx]
            kernels.csr_scatter(data, self._ce_slots, vals)
        k_ff = csc_matrix((data, self._indices, self._indptr),
                          shape=(self.n_free, self.n_free))
        self._lu = splu(k_ff, permc_spec="MMD_AT_PLUS_A")
        if soft_free:
            self._assembled_dmg = dmg.copy()
            self._assembled_dmg1 = dn_tan.copy()
        else:
            self._assembled_dmg = None
            self._assembled_dmg1 = None
        return True

    def f_int(self, q, states=None) -> np.ndarray:
        """Global internal force vector from displacements and trial states;
        forces always follow the secant law."""
        if states is None:
            states = self.evaluate_states(q)
        delta, _, _, dmg, dmg1 = states[:5]
        f = np.zeros(self.ndof)
        for group in self.shell_groups:
            vals = q[group.dofs] @ group.k.T
            kernels.scatter_dofs(f, group.dofs, vals)
        if self.n_ce:
            fe = kernels.ce_fint(self.ce_bmats, delta, self.ce_area,
                                 self.ce_weights, self.ce_params["kpen"],
                                 dmg, dmg1)
            kernels.scatter_dofs(f, self.ce_dofs, fe)
        return f

    def assemble(self, q=None):
        """Full-size sparse stiffness and internal force for the committed
        states; intended for small models and tests."""
        if q is None:
            q = self.q
        states = self.evaluate_states(q)
        dmg, dmg1 = states[3], states[4]
        kmats = kernels.ce_stiffness(self.ce_bmats, self.ce_area,
                                     self.ce_weights, self.ce_params["kpen"],
                                     dmg, dmg1)
        rows, cols = self._entry_arrays()
        vals = [np.tile(g.k.ravel(), g.dofs.shape[0]) for g in self.shell_groups]
        if self.n_ce:
            vals.append(kmats.reshape(-1))
        vals = np.concatenate(vals) if vals else np.zeros(0)
        k = csc_matrix((vals, (rows, cols)), shape=(self.ndof, self.ndof))
        return k, self.f_int(q, states)

    # -- solution -------------------------------------------------------------

    def _apply_prescribed(self, q, u_control):
        q[self.loads.fixed_dofs] = 0.0
        if self.loads.driven_dofs.size:
            q[self.loads.driven_dofs] = self.loads.driven_scale * u_control

    def _residual_at(self, q, lam, lam_base=None, mix_base=None):
        states = self.evaluate_states(q, lam_base, mix_base)
        f_int = self.f_int(q, states)
        if self.loads.force_pattern is not None:
            f_ext_norm = abs(lam) * np.linalg.norm(self.loads.force_pattern)
            residual = (lam * self.loads.force_pattern - f_int)[self.free_idx]
        else:
            f_ext_norm = 0.0
            residual = -f_int[self.free_idx]
        # reference force scale: reactions carry the load under displacement
        # control (free-DoF forces vanish at equilibrium)
        reaction = np.linalg.norm(f_int[self.prescribed_mask])
        ref = max(reaction, f_ext_norm, _TINY)
        return states, residual, ref

    def solve_increment(self, u_control, predictor=None, ratchet=False):
        """Iterate one increment to convergence; returns (q, states tuple,
        iteration count) without committing.

        Newton iteration on the consistent tangent of the secant law, with
        a backtracking line search; the internal forces themselves always
        follow the secant law, so the converged state is identical to plain
        secant iteration but the path through softening is stable.

        With ``ratchet=True`` the trial history accumulates monotonically
        across iterations, which lets one increment unzip a chain of local
        snaps; the accumulated overshoot stands in for the energy a dynamic
        snap-through would radiate.
        """
        cfg = self.settings
        loads = self.loads
        q = self.q.copy() if predictor is None else predictor.copy()
        self._apply_prescribed(q, u_control)
        lam = self.load_factor
        force_path = loads.force_pattern is not None
        if force_path:
            pattern_f = loads.force_pattern[self.free_idx]
            ctl_free = self.full_to_free[loads.control_dofs]
            n_ctl = loads.control_dofs.size
            target = loads.control_sign * u_control

        lam_base = self.lam_committed
        mix_base = self.mix_committed
        states, residual, ref = self._residual_at(q, lam, lam_base, mix_base)
        if ratchet:
            lam_base, mix_base = states[1], states[2]
        res_norm = np.linalg.norm(residual)
        inc_norm = 0.0
        dq_norm = np.inf
        solves = 0
        res_hist = []
        fallback = 1.0
        while True:
            res_ok = res_norm <= cfg.tol_residual * ref
            deep_ok = res_norm <= 1.0e-3 * cfg.tol_residual * ref
            dq_ok = dq_norm <= cfg.tol_displacement * max(inc_norm, _TINY)
            if solves > 0 and res_ok and (dq_ok or deep_ok):
                return q, states, solves
            if solves >= cfg.max_iterations:
                raise ConvergenceError(
                    f"no convergence in {cfg.max_iterations} iterations",
                    diagnostics={"u_control": u_control,
                                 "residual": float(res_norm),
                                 "reference": float(ref)})

            self._ensure_stiffness(states)
            direction = self._lu.solve(residual)
            if force_path:
                dir_pattern = self._lu.solve(pattern_f)
                mean_pattern = dir_pattern[ctl_free].sum() / n_ctl

            def _try(omega):
                step = omega * direction
                lam_new = lam
                if force_path:
                    mean_now = (q[loads.control_dofs].sum()
                                + step[ctl_free].sum()) / n_ctl
                    d_lam = (target - mean_now) / mean_pattern
                    step = step + d_lam * dir_pattern
                    lam_new = lam + d_lam
                q_new = q.copy()
                q_new[self.free_idx] += step
                states_new, res_new, ref_new = self._residual_at(
                    q_new, lam_new, lam_base, mix_base)
                rn = np.linalg.norm(res_new)
                return (rn, q_new, states_new, res_new, ref_new, step, lam_new)

            omega = 1.0
            best = None
            for _ in range(5):
                trial = _try(omega)
                if best is None or trial[0] < best[0]:
                    best = trial
                if trial[0] <= (1.0 - 1.0e-3 * omega) * res_norm:
                    break
                omega *= 0.618034
            if best[0] >= res_norm:
                # no trial reduced the residual: the iterate is crossing a
                # local snap of the softening path.  Take an (increasingly
                # damped) step anyway; golden-ratio damping cannot lock
                # into a periodic bounce between state branches.
                repeat = any(abs(best[0] - r) < 1.0e-6 * max(best[0], _TINY)
                             for r in res_hist[-6:])
                fallback = 0.618034 * fallback if repeat else 1.0
                best = _try(fallback)
            else:
                fallback = 1.0
            rn, q_new, states_new, res_new, ref_new, step, lam_new = best
            if ratchet:
                lam_base, mix_base = states_new[1], states_new[2]
            res_hist.append(rn)
            log.debug("  it=%d |r|=%.4e ref=%.3e fallback=%.3f",
                      solves, rn, ref_new, fallback)

            dq_norm = np.linalg.norm(step)
            q, states, residual, ref = q_new, states_new, res_new, ref_new
            res_norm = rn
            lam = lam_new
            solves += 1
            inc_norm = np.linalg.norm(q[self.free_idx]
                                      - self.q[self.free_idx])
            self._last_lam = lam

    def commit(self, q, states, u_control):
        delta, lam_t, mix_t = states[0], states[1], states[2]
        self.q = q
        self.lam_committed = lam_t
        self.mix_committed = mix_t
        if self.loads.force_pattern is not None:
            self.load_factor = self._last_lam
        self.u_control = u_control
        self._last_states = states

    # -- reporting ------------------------------------------------------------

    def reaction_load(self, f_int) -> float:
        r = f_int[self.loads.reaction_dofs].sum()
        if self.loads.force_pattern is not None:
            r = self.load_factor
        else:
            r *= self.loads.load_sign
        return r * self.model.width_scale

    def strain_energy(self, q, states) -> float:
        delta, dmg, dmg1 = states[0], states[3], states[4]
        total = 0.0
        for group in self.shell_groups:
            qe = q[group.dofs]
            total += 0.5 * np.einsum("ei,ij,ej->", qe, group.k, qe)
        if self.n_ce:
            kp = self.ce_params["kpen"][:, None]
            wa = self.ce_weights[None, :] * self.ce_area[:, None]
            e_n = (1.0 - dmg1) * kp * delta[:, :, 0] ** 2
            e_s = (1.0 - dmg) * kp * (delta[:, :, 1] ** 2 + delta[:, :, 2] ** 2)
            total += 0.5 * np.sum(wa * (e_n + e_s))
        return total * self.model.width_scale

    def dissipated_energy(self) -> float:
        """Closed-form dissipation of the committed history (secant
        unloading makes it a function of the historic opening alone)."""
        if self.n_ce == 0:
            return 0.0
        live = (~self.ce_contact)[:, None] & (self.mix_committed >= 0.0)
        if not live.any():
            return 0.0
        mix = np.clip(self.mix_committed, 0.0, 1.0)
        eta = self.ce_params["eta"][:, None]
        b_eta = np.where(mix > 0.0, mix ** eta, 0.0)
        d01 = self.ce_params["d01"][:, None]
        d0s = self.ce_params["d0s"][:, None]
        df1 = self.ce_params["df1"][:, None]
        dfs = self.ce_params["dfs"][:, None]
        delta0 = np.sqrt(d01**2 + (d0s**2 - d01**2) * b_eta)
        deltaf = (d01 * df1 + (d0s * dfs - d01 * df1) * b_eta) / delta0
        gc = 0.5 * self.ce_params["kpen"][:, None] * delta0 * deltaf
        frac = np.clip((self.lam_committed - delta0) / (deltaf - delta0),
                       0.0, 1.0)
        wa = self.ce_weights[None, :] * self.ce_area[:, None]
        return float(np.sum(np.where(live, wa * gc * frac, 0.0))) \
            * self.model.width_scale


def _jump_across(system, u_target, settings) -> bool:
    """Cross a fold of the equilibrium path: a ratcheting solve with a
    raised iteration budget unzips the snapped points, then a clean solve
    from that state removes the ratchet overshoot.  Stores the result on
    the system and reports success."""
    relaxed = replace(settings, max_iterations=3 * settings.max_iterations)
    system.settings = relaxed
    try:
        q, states, iters = system.solve_increment(u_target)
        system._jump_result = (q, states, iters)
        return True
    except ConvergenceError:
        return False
    finally:
        system.settings = settings


def run_analysis(model: LayeredModel, loads: LoadSpec, ramp: float,
                 settings: SolverSettings = None) -> LoadDisplacementCurve:
    """Drive the control displacement from zero to ``ramp`` adaptively and
    record the load-displacement curve with energy bookkeeping."""
    settings = settings or SolverSettings()
    system = GlobalSystem(model, loads, settings)
    t0 = time.perf_counter()

    rows = []
    if ramp > 0.0:
        rows.append((0.0, 0.0, 0, 0.0, 0.0, 0.0))

    du = settings.initial_fraction * ramp
    du_max = settings.max_fraction * ramp
    u = 0.0
    w_ext = 0.0
    f_prev = np.zeros(model.n_dof)
    lam_prev = 0.0
    n_incr = 0
    q_old = None
    du_old = 0.0
    while u < ramp * (1.0 - 1.0e-12):
        du_try = min(du, ramp - u)
        cuts = 0
        # a coarse-mesh softening path can fold back locally; when cutting
        # the increment finds no equilibrium, step across the fold instead
        jumps = [2.0 * du_max, 4.0 * du_max, du_max, 6.0 * du_max,
                 0.5 * du_max, 0.25 * du_max]
        while True:
            predictor = None
            if q_old is not None and du_old > 0.0:
                predictor = system.q + (system.q - q_old) * (du_try / du_old)
            try:
                q, states, iters = system.solve_increment(u + du_try, predictor)
                break
            except ConvergenceError as exc:
                cuts += 1
                if cuts <= settings.max_cuts:
                    du_try *= 0.5
                    log.info("cut increment to du=%.3e", du_try)
                elif cuts <= settings.max_cuts + len(jumps):
                    du_try = min(jumps[cuts - settings.max_cuts - 1],
                                 ramp - u)
                    log.info("jump attempt with du=%.3e", du_try)
                    if _jump_across(system, u + du_try, settings):
                        q, states, iters = system._jump_result
                        break
                else:
                    raise ConvergenceError(
                        f"increment at u={u + du_try:.6g} failed after "
                        f"{settings.max_cuts} cuts and jump attempts",
                        exc.diagnostics) from exc

        f_now = system.f_int(q, states)
        # external work: reactions through the prescribed motion plus, under
        # force-path control, the applied pattern through the free motion
        if loads.force_pattern is None:
            dofs = loads.driven_dofs
            du_vec = loads.driven_scale * du_try
            w_ext += 0.5 * float((f_prev[dofs] + f_now[dofs]) @ du_vec) \
                * model.width_scale
        else:
            lam_now = system._last_lam
            pat = loads.force_pattern
            dq = q - system.q
            w_ext += 0.5 * (lam_prev + lam_now) * float(pat @ dq) \
                * model.width_scale
            lam_prev = lam_now
        f_prev = f_now

        q_old = system.q
        du_old = du_try
        system.commit(q, states, u + du_try)
        u += du_try
        n_incr += 1
        load = system.reaction_load(f_now)
        diss = system.dissipated_energy()
        energy = system.strain_energy(q, states)
        rows.append((u, load, iters, diss, w_ext, energy))
        log.info("increment %d: u=%.5g load=%.5g iters=%d dissipation=%.5g",
                 n_incr, u, load, iters, diss)
        if iters <= settings.fast_iterations:
            du = min(du_try * settings.growth, du_max)
        else:
            du = min(du_try, du_max)

    wall = time.perf_counter() - t0
    arrays = list(zip(*rows)) if rows else [[]] * 6
    curve = LoadDisplacementCurve(
        displacement=np.asarray(arrays[0], dtype=float),
        load=np.asarray(arrays[1], dtype=float),
        iterations=np.asarray(arrays[2], dtype=int),
        dissipation=np.asarray(arrays[3], dtype=float),
        external_work=np.asarray(arrays[4], dtype=float),
        strain_energy=np.asarray(arrays[5], dtype=float),
        metadata={
            "case": model.geometry.case,
            "a0_actual_mm": f"{model.a0_actual:.10g}",
            "nodes": str(model.n_nodes),
            "dofs": str(model.n_dof),
            "elements_shell": str(sum(len(b.tris) for b in model.shells)),
            "elements_cohesive": str(sum(
                len(b.tris_bot) for b in model.interfaces if not b.contact)),
            "elements_contact": str(sum(
                len(b.tris_bot) for b in model.interfaces if b.contact)),
            "tol_residual": f"{settings.tol_residual:g}",
            "tol_displacement": f"{settings.tol_displacement:g}",
            "kernel_backend": kernels.BACKEND,
            "width_scale": f"{model.width_scale:.10g}",
            "wall_time_s": f"{wall:.3f}",
        })
    return curve
