"""Correlated Rayleigh channel realizations and linear-MMSE estimation.

Estimation model per AP l and pilot t (after despreading and normalization):

    y_tl = sum_{i: pilot_i = t} sqrt(p tau_p) h_il + n',   n' ~ CN(0, sigma2_ul I)

    Psi_tl  = sum_{i: pilot_i = t} p tau_p R_il + sigma2_ul I
    hhat_kl = sqrt(p tau_p) R_kl Psi_tl^{-1} y_tl
    C_kl    = R_kl - p tau_p R_kl Psi_tl^{-1} R_kl

Estimates exist only for served (k, l) pairs; everything else stays zero.
Psi and the MMSE filters depend only on the scenario, so they are computed
once per drop.
"""

import numpy as np

from . import rng


def crandn(gen, shape, scale=1.0):
    """CN(0, scale) i.i.d. samples."""
    std = np.sqrt(scale / 2.0)
    return std * (gen.standard_normal(shape) + 1j * gen.standard_normal(shape))


def hermT(a):
    return np.conj(np.swapaxes(a, -1, -2))


class ChannelModel:
    """Per-scenario channel generator and MMSE estimator."""

    def __init__(self, cfg, scn):
        if scn.R is None or scn.R_sqrt is None:
            raise ValueError("scenario was built without correlation matrices")
        self.cfg = cfg
        self.scn = scn
        K, L, M = scn.K, scn.L, cfg.M
        p, tau_p, s2 = cfg.p_ul_w, cfg.tau_p, cfg.sigma2_ul_w

        # pilot membership indicator (tau_p, K)
        self.pilot_ind = np.zeros((tau_p, K))
        self.pilot_ind[scn.pilot, np.arange(K)] = 1.0

        # Psi per (pilot, AP)
        psi = p * tau_p * np.einsum("tk,klmn->tlmn", self.pilot_ind, scn.R)
        psi += s2 * np.eye(M)
        # MMSE filter per served pair: F_kl = sqrt(p tau_p) R_kl Psi_{t_k,l}^{-1}
        psi_k = psi[scn.pilot]                       # (K, L, M, M)
        # R and Psi are Hermitian, so R Psi^{-1} = (Psi^{-1} R)^H
        F = np.sqrt(p * tau_p) * hermT(np.linalg.solve(psi_k, scn.R))
        C = scn.R - np.sqrt(p * tau_p) * (F @ scn.R)
        mask = scn.D[:, :, None, None]
        self.F = np.where(mask, F, 0.0)
        self.C = np.where(mask, C, 0.0)

    def realize(self, block, purpose_channel=rng.CHANNEL, purpose_noise=rng.PILOT_NOISE):
        """One coherence block: true channels h and MMSE estimates hhat, both (K, L, M)."""
        cfg, scn = self.cfg, self.scn
        K, L, M = scn.K, scn.L, cfg.M
        g_ch = rng.stream(cfg.master_seed, purpose_channel, scn.drop, block)
        e = crandn(g_ch, (K, L, M))
        h = np.einsum("klmn,kln->klm", scn.R_sqrt, e)

        g_n = rng.stream(cfg.master_seed, purpose_noise, scn.drop, block)
        noise = crandn(g_n, (cfg.tau_p, L, M), scale=cfg.sigma2_ul_w)
        y = np.sqrt(cfg.p_ul_w * cfg.tau_p) * np.einsum("tk,klm->tlm", self.pilot_ind, h)
        y += noise
        hhat = np.einsum("klmn,kln->klm", self.F, y[scn.pilot])
        return h, hhat
