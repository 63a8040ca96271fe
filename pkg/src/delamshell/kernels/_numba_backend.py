"""Numba-compiled solver kernels; mirrors the numpy backend exactly."""

import numpy as np
from numba import njit


@njit(cache=True)
def ce_evaluate(bmats, qel, lam_c, mix_c, contact,
                kpen, d01, df1, d0s, dfs, eta, band):
    n, ng = bmats.shape[0], bmats.shape[1]
    delta = np.zeros((n, ng, 3))
    lam_t = np.zeros((n, ng))
    mix_t = np.zeros((n, ng))
    dmg = np.zeros((n, ng))
    dmg1 = np.zeros((n, ng))
    soft = np.zeros((n, ng))
    dn_tan = np.ones((n, ng))
    for e in range(n):
        for g in range(ng):
            o1 = 0.0
            o2 = 0.0
            o3 = 0.0
            for j in range(30):
                qj = qel[e, j]
                o1 += bmats[e, g, 0, j] * qj
                o2 += bmats[e, g, 1, j] * qj
                o3 += bmats[e, g, 2, j] * qj
            delta[e, g, 0] = o1
            delta[e, g, 1] = o2
            delta[e, g, 2] = o3

            if contact[e]:
                d = 1.0
                lam_t[e, g] = lam_c[e, g]
                mix_t[e, g] = mix_c[e, g]
            else:
                d1p = o1 if o1 > 0.0 else 0.0
                sh2 = o2 * o2 + o3 * o3
                lam = np.sqrt(d1p * d1p + sh2)
                lam_new = lam_c[e, g] if lam_c[e, g] > lam else lam

                started = mix_c[e, g] >= 0.0
                if started:
                    mix = mix_c[e, g]
                else:
                    denom = d1p * d1p + sh2
                    mix = sh2 / denom if denom > 0.0 else 0.0

                b_eta = mix ** eta[e] if mix > 0.0 else 0.0
                delta0 = np.sqrt(d01[e] * d01[e]
                                 + (d0s[e] * d0s[e] - d01[e] * d01[e]) * b_eta)
                deltaf = (d01[e] * df1[e]
                          + (d0s[e] * dfs[e] - d01[e] * df1[e]) * b_eta) / delta0

                lam_t[e, g] = lam_new
                if lam_new > delta0:
                    d = deltaf * (lam_new - delta0) / (lam_new * (deltaf - delta0))
                    if d < 0.0:
                        d = 0.0
                    elif d > 1.0:
                        d = 1.0
                    mix_t[e, g] = mix
                    if lam >= lam_c[e, g] and d < 1.0 and lam > 0.0:
                        dprime = (deltaf * delta0
                                  / (lam_new * lam_new * (deltaf - delta0)))
                        soft[e, g] = kpen[e] * dprime / lam_new
                else:
                    d = 0.0
                    mix_t[e, g] = mix_c[e, g] if started else -1.0
            dmg[e, g] = d

            # compression gate as a smoothstep over a hair-thin band around
            # zero opening: full penalty in compression, the plain law in
            # tension, and no stiffness dead zone at grazing contact
            b = band[e]
            if o1 >= b:
                dmg1[e, g] = d
                dn_tan[e, g] = 1.0 - d
            elif o1 <= -b:
                dmg1[e, g] = 0.0
                dn_tan[e, g] = 1.0
            else:
                t = (o1 + b) / (2.0 * b)
                hs = t * t * (3.0 - 2.0 * t)
                dmg1[e, g] = d * hs
                dn_tan[e, g] = (1.0 - d * hs
                                - d * o1 * 3.0 * t * (1.0 - t) / b)
    return delta, lam_t, mix_t, dmg, dmg1, soft, dn_tan


@njit(cache=True)
def ce_stiffness(bmats, areas, wts, kpen, dmg, dmg1):
    n, ng = bmats.shape[0], bmats.shape[1]
    k = np.zeros((n, 30, 30))
    for e in range(n):
        for g in range(ng):
            w = wts[g] * areas[e] * kpen[e]
            dn = w * (1.0 - dmg1[e, g])
            ds = w * (1.0 - dmg[e, g])
            for i in range(30):
                b0i = bmats[e, g, 0, i]
                b1i = bmats[e, g, 1, i]
                b2i = bmats[e, g, 2, i]
                for j in range(i, 30):
                    k[e, i, j] += (dn * b0i * bmats[e, g, 0, j]
                                   + ds * (b1i * bmats[e, g, 1, j]
                                           + b2i * bmats[e, g, 2, j]))
        for i in range(30):
            for j in range(i + 1, 30):
                k[e, j, i] = k[e, i, j]
    return k


@njit(cache=True)
def ce_tangent(bmats, delta, areas, wts, kpen, dmg, dmg1, soft, dn_tan):
    n, ng = bmats.shape[0], bmats.shape[1]
    k = np.zeros((n, 30, 30))
    bvec = np.zeros(30)
    for e in range(n):
        for g in range(ng):
            w = wts[g] * areas[e] * kpen[e]
            dn = w * dn_tan[e, g]
            ds = w * (1.0 - dmg[e, g])
            for i in range(30):
                b0i = bmats[e, g, 0, i]
                b1i = bmats[e, g, 1, i]
                b2i = bmats[e, g, 2, i]
                for j in range(i, 30):
                    v = (dn * b0i * bmats[e, g, 0, j]
                         + ds * (b1i * bmats[e, g, 1, j]
                                 + b2i * bmats[e, g, 2, j]))
                    k[e, i, j] += v
                    if i != j:
                        k[e, j, i] += v
            if soft[e, g] != 0.0:
                ws = wts[g] * areas[e] * soft[e, g]
                d1p = delta[e, g, 0] if delta[e, g, 0] > 0.0 else 0.0
                d2 = delta[e, g, 1]
                d3 = delta[e, g, 2]
                for j in range(30):
                    bvec[j] = (bmats[e, g, 0, j] * d1p
                               + bmats[e, g, 1, j] * d2
                               + bmats[e, g, 2, j] * d3)
                for i in range(30):
                    wbi = ws * bvec[i]
                    for j in range(30):
                        k[e, i, j] -= wbi * bvec[j]
    return k


@njit(cache=True)
def ce_fint(bmats, delta, areas, wts, kpen, dmg, dmg1):
    n, ng = bmats.shape[0], bmats.shape[1]
    f = np.zeros((n, 30))
    for e in range(n):
        for g in range(ng):
            w = wts[g] * areas[e] * kpen[e]
            t0 = w * (1.0 - dmg1[e, g]) * delta[e, g, 0]
            t1 = w * (1.0 - dmg[e, g]) * delta[e, g, 1]
            t2 = w * (1.0 - dmg[e, g]) * delta[e, g, 2]
            for j in range(30):
                f[e, j] += (bmats[e, g, 0, j] * t0 + bmats[e, g, 1, j] * t1
                            + bmats[e, g, 2, j] * t2)
    return f


@njit(cache=True)
def elem_fint(kmats, qel):
    n, m = qel.shape
    f = np.zeros((n, m))
    for e in range(n):
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc += kmats[e, i, j] * qel[e, j]
            f[e, i] = acc
    return f


@njit(cache=True)
def scatter_dofs(out, dofs, vals):
    n, m = dofs.shape
    for e in range(n):
        for i in range(m):
            out[dofs[e, i]] += vals[e, i]


@njit(cache=True)
def csr_scatter(out_data, slots, vals):
    for i in range(slots.shape[0]):
        out_data[slots[i]] += vals[i]
