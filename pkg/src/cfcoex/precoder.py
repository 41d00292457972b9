"""Downlink precoders: maximum ratio and local MMSE, with statistical
power normalization.

MR uses the estimate direction with exact unit norm per realization.
Local MMSE at AP j regularizes by the served-set estimation errors and
uplink noise:

    wbar_kj = p ( sum_{i in U_j} p (hhat_ij hhat_ij^H + C_ij) + sigma2_ul I )^{-1} hhat_kj

and is scaled by 1/sqrt(E||wbar||^2), the expectation estimated once per
scenario over a dedicated ensemble of channel realizations, so that every
transmitted precoder satisfies E||w||^2 = 1 without per-realization
renormalization. The precoder never looks at activation patterns: the
served set U_j always includes the AP's URLLC UEs (worst case all active).
"""

import numpy as np

from . import rng
from .channel import crandn, hermT

MR = "MR"
LPMMSE = "LP-MMSE"


class PrecoderContext:
    """Per-scenario cached structures for fast per-block precoding."""

    def __init__(self, cfg, scn, chan):
        self.cfg, self.scn = cfg, scn
        K, L, M = scn.K, scn.L, cfg.M
        served_lists = [np.flatnonzero(scn.D[:, j]) for j in range(L)]
        self.u_max = max((len(s) for s in served_lists), default=0)
        self.served_pad = np.zeros((L, self.u_max), dtype=np.int64)
        self.served_mask = np.zeros((L, self.u_max), dtype=bool)
        for j, s in enumerate(served_lists):
            self.served_pad[j, :len(s)] = s
            self.served_mask[j, :len(s)] = True
        # constant part of the per-AP regularizer: p * sum_{i in U_j} C_ij + sigma2 I
        # (chan.C is already zero outside served pairs)
        self.Z0 = cfg.p_ul_w * chan.C.sum(axis=0) + cfg.sigma2_ul_w * np.eye(M)

    def raw_lpmmse(self, hhat):
        """Unnormalized local-MMSE vectors wbar, (K, L, M), zero outside D."""
        cfg, scn = self.cfg, self.scn
        K, L, M = scn.K, scn.L, cfg.M
        lidx = np.arange(L)[:, None]
        Hs = hhat[self.served_pad, lidx, :] * self.served_mask[:, :, None]  # (L, U, M)
        Z = self.Z0 + cfg.p_ul_w * np.einsum("lum,lun->lmn", Hs, Hs.conj())
        Wb = cfg.p_ul_w * np.linalg.solve(Z, np.swapaxes(Hs, 1, 2))          # (L, M, U)
        w = np.zeros((K, L, M), dtype=np.complex128)
        w[self.served_pad, lidx, :] = np.swapaxes(Wb, 1, 2) * self.served_mask[:, :, None]
        return w


def mr_precode(hhat, D):
    """Unit-norm conjugate beamforming along the channel estimate."""
    norms = np.linalg.norm(hhat, axis=-1, keepdims=True)
    w = np.divide(hhat, norms, out=np.zeros_like(hhat), where=norms > 0)
    return np.where(D[:, :, None], w, 0.0)


def normalization_stats(cfg, scn, chan, ctx, scheme):
    """Statistical normalization constants and mean effective gains.

    Returns (norm_sq, mu):
      norm_sq: (K, L) E||wbar||^2 over the dedicated ensemble (ones for MR);
      mu: (K,) ensemble-mean of h_k,master^H w_k,master with the *normalized*
          precoder — the receiver-side channel statistic used as decoder CSI.
    """
    K, L = scn.K, scn.L
    masters = scn.master_ap
    acc_norm = np.zeros((K, L))
    acc_g = np.zeros(K, dtype=np.complex128)
    n = cfg.n_norm_blocks
    for b in range(n):
        h, hhat = chan.realize(b, rng.NORM_CHANNEL, rng.NORM_NOISE)
        if scheme == MR:
            w = mr_precode(hhat, scn.D)
        else:
            w = ctx.raw_lpmmse(hhat)
        acc_norm += (np.abs(w) ** 2).sum(axis=-1)
        hm = h[np.arange(K), masters, :]
        wm = w[np.arange(K), masters, :]
        acc_g += (hm.conj() * wm).sum(axis=-1)
    norm_sq = acc_norm / n
    mean_raw = acc_g / n
    if scheme == MR:
        norm_sq = np.ones((K, L))
        mu = mean_raw
    else:
        nm = np.sqrt(norm_sq[np.arange(K), masters])
        mu = np.divide(mean_raw, nm, out=np.zeros_like(mean_raw), where=nm > 0)
        norm_sq = np.where(norm_sq > 0, norm_sq, 1.0)
    return norm_sq, mu


def precode(scheme, hhat, scn, ctx, norm_sq):
    """Normalized precoding vectors for one block, (K, L, M)."""
    if scheme == MR:
        return mr_precode(hhat, scn.D)
    if scheme == LPMMSE:
        return ctx.raw_lpmmse(hhat) / np.sqrt(norm_sq)[:, :, None]
    raise ValueError(f"unknown precoder scheme {scheme!r}")
