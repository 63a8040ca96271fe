"""Vectorized numpy implementation of the solver kernels."""

import numpy as np


def ce_evaluate(bmats, qel, lam_c, mix_c, contact,
                kpen, d01, df1, d0s, dfs, eta, band):
    """Openings and trial cohesive states for all elements at once.

    bmats (n,13,3,30), qel (n,30); history arrays are (n,13); law parameters
    are per-element (n,).  Returns (openings, lam_t, mix_t, dmg, dmg1, soft,
    dn_tan): dmg1 is the normal-direction damage behind the compression
    gate (smoothed over ``band`` so near-zero openings cannot chatter),
    soft the envelope slope factor and dn_tan the gated normal factor of
    the consistent tangent.
    """
    delta = np.einsum("ngij,nj->ngi", bmats, qel)
    d1 = delta[:, :, 0]
    d1p = np.maximum(d1, 0.0)
    sh2 = delta[:, :, 1] ** 2 + delta[:, :, 2] ** 2
    lam = np.sqrt(d1p * d1p + sh2)
    lam_t = np.maximum(lam_c, lam)

    denom = d1p * d1p + sh2
    mix_now = np.divide(sh2, denom, out=np.zeros_like(sh2), where=denom > 0.0)
    started = mix_c >= 0.0
    mix_used = np.where(started, mix_c, mix_now)

    b_eta = np.where(mix_used > 0.0,
                     np.power(np.maximum(mix_used, 1e-300), eta[:, None]), 0.0)
    d01e, d0se = d01[:, None], d0s[:, None]
    df1e, dfse = df1[:, None], dfs[:, None]
    delta0 = np.sqrt(d01e * d01e + (d0se * d0se - d01e * d01e) * b_eta)
    deltaf = (d01e * df1e + (d0se * dfse - d01e * df1e) * b_eta) / delta0

    live = lam_t > delta0
    with np.errstate(divide="ignore", invalid="ignore"):
        dmg = deltaf * (lam_t - delta0) / (lam_t * (deltaf - delta0))
    dmg = np.where(live, np.clip(dmg, 0.0, 1.0), 0.0)
    mix_t = np.where(started, mix_c, np.where(live, mix_now, -1.0))

    cmask = contact[:, None] & np.ones_like(dmg, dtype=bool)
    dmg = np.where(cmask, 1.0, dmg)
    mix_t = np.where(cmask, mix_c, mix_t)
    lam_t = np.where(cmask, lam_c, lam_t)

    # compression gate as a smoothstep over a hair-thin band around zero
    # opening: full penalty in compression, the plain law in tension, and
    # no stiffness dead zone at grazing contact
    b = band[:, None]
    t = np.clip((d1 + b) / (2.0 * b), 0.0, 1.0)
    hs = t * t * (3.0 - 2.0 * t)
    dmg1 = dmg * hs
    dn_tan = 1.0 - dmg * hs - dmg * d1 * 3.0 * t * (1.0 - t) / b

    # envelope slope K * dd/dlam / lam for points loading on the softening
    # branch; feeds the rank-one term of the consistent tangent
    loading = (lam >= lam_c) & live & (dmg < 1.0) & ~cmask & (lam > 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        dprime = deltaf * delta0 / (lam_t**2 * (deltaf - delta0))
        soft = kpen[:, None] * dprime / lam_t
    soft = np.where(loading, soft, 0.0)
    return delta, lam_t, mix_t, dmg, dmg1, soft, dn_tan


def ce_stiffness(bmats, areas, wts, kpen, dmg, dmg1):
    """Secant stiffness (n,30,30) from per-point damage."""
    n = bmats.shape[0]
    k = np.zeros((n, 30, 30))
    for g in range(bmats.shape[1]):
        b = bmats[:, g]                      # (n, 3, 30)
        w = wts[g] * areas * kpen            # (n,)
        dvals = np.empty((n, 3))
        dvals[:, 0] = w * (1.0 - dmg1[:, g])
        dvals[:, 1] = w * (1.0 - dmg[:, g])
        dvals[:, 2] = dvals[:, 1]
        k += np.transpose(b, (0, 2, 1)) @ (dvals[:, :, None] * b)
    return 0.5 * (k + np.transpose(k, (0, 2, 1)))


def ce_tangent(bmats, delta, areas, wts, kpen, dmg, dmg1, soft, dn_tan):
    """Consistent tangent (n,30,30): gated diagonal plus the rank-one
    softening term for points loading on the envelope."""
    n = bmats.shape[0]
    k = np.zeros((n, 30, 30))
    dplus = delta.copy()
    dplus[:, :, 0] = np.maximum(dplus[:, :, 0], 0.0)
    for g in range(bmats.shape[1]):
        b = bmats[:, g]
        w = wts[g] * areas * kpen
        dvals = np.empty((n, 3))
        dvals[:, 0] = w * dn_tan[:, g]
        dvals[:, 1] = w * (1.0 - dmg[:, g])
        dvals[:, 2] = dvals[:, 1]
        k += np.transpose(b, (0, 2, 1)) @ (dvals[:, :, None] * b)
        ws = wts[g] * areas * soft[:, g]
        if np.any(ws):
            bvec = np.einsum("nij,ni->nj", b, dplus[:, g])
            k -= ws[:, None, None] * bvec[:, :, None] * bvec[:, None, :]
    return 0.5 * (k + np.transpose(k, (0, 2, 1)))


def ce_fint(bmats, delta, areas, wts, kpen, dmg, dmg1):
    """Element internal force (n,30) from openings and damage: the weighted
    sum of B^T times the secant traction at each point."""
    tau = np.empty_like(delta)
    kp = kpen[:, None]
    tau[:, :, 0] = (1.0 - dmg1) * kp * delta[:, :, 0]
    tau[:, :, 1] = (1.0 - dmg) * kp * delta[:, :, 1]
    tau[:, :, 2] = (1.0 - dmg) * kp * delta[:, :, 2]
    w = wts[None, :] * areas[:, None]
    return np.einsum("ngij,ngi->nj", bmats, w[:, :, None] * tau)


def elem_fint(kmats, qel):
    """Element internal forces (n,m) = K_e q_e."""
    return np.einsum("nij,nj->ni", kmats, qel)


def scatter_dofs(out, dofs, vals):
    """Accumulate element vectors into a global vector."""
    np.add.at(out, dofs.ravel(), vals.ravel())


def csr_scatter(out_data, slots, vals):
    """Accumulate element stiffness entries into CSR data slots."""
    np.add.at(out_data, slots, vals)
