"""eMBB spectral efficiency under a channel-hardening (use-and-then-forget)
lower bound, conditioned exactly on URLLC activation patterns.

The eMBB receiver only knows channel statistics, so for UE k in slot t

    gamma_kt = pe |sum_j d_tj c_kj m_kj|^2 /
               ( pe (d_t' Phi_k d_t - |sum_j d_tj c_kj m_kj|^2)
                 + sum_u rho_u[t, u] U2[k, u] + sigma2_d )

with pe = (1 - omega) rho_max, c_kj = sqrt(beta_kj^nu) on served pairs,
d_tj = Atilde_tj / sqrt(den_tj) the per-AP power scale of the slot, and the
channel-only moments

    m_kj    = E[g_kkj],
    Phi_k   = E[sum_{i in eMBB} (c_i g_ki)(c_i g_ki)^H]   (L x L),
    U2[k,u] = E|g_{k, u, master(u)}|^2,

where g_kij = h_kj^H w_ij is the effective gain of AP j precoding for UE i
as seen at UE k. Precoders do not depend on activations, so these moments
are pattern-free and one Monte-Carlo ensemble serves every
(strategy, policy) pair; the slot dependence enters only through the
deterministic vectors d_t and powers rho_u[t]. Because m and Phi come from
the same ensemble, the empirical Jensen inequality keeps the denominator
at or above sigma2_d up to float rounding; it is floored there.

Slot activation patterns repeat heavily (at most 2^K_u distinct ones), so
gamma is evaluated once per distinct pattern and gathered per slot.
"""

import logging

import numpy as np

log = logging.getLogger(__name__)


def effective_gains(h, w):
    """g[k, i, l] = h[k, l, :]^H w[i, l, :] for all UE pairs, (K, K, L)."""
    return np.einsum("klm,ilm->kil", h.conj(), w)


class GainStats:
    """Streaming accumulator of the channel-only moments above.

    nu_to_c maps each power-allocation exponent nu in use to its (K, L)
    served-eMBB weight matrix sqrt(beta^nu); Gram matrices are accumulated
    per nu in complex64 (they are the memory/flops-heavy part).
    """

    def __init__(self, scn, nu_to_c, single_precision=True):
        self.embb = scn.embb_idx
        self.urllc = scn.urllc_idx
        self.masters_u = scn.master_ap[self.urllc]
        k_e, k_u, L = self.embb.size, self.urllc.size, scn.L
        self.gram_dtype = np.complex64 if single_precision else np.complex128
        self.c_e = {nu: c[self.embb] for nu, c in nu_to_c.items()}
        self.m_sum = np.zeros((k_e, L), dtype=np.complex128)
        self.phi_sum = {nu: np.zeros((k_e, L, L), dtype=self.gram_dtype)
                        for nu in nu_to_c}
        self.u2_sum = np.zeros((k_e, k_u))
        self.n = 0

    def add_block(self, g):
        """Accumulate one realization of the (K, K, L) effective gains."""
        g_e = g[np.ix_(self.embb, self.embb)]                    # (K_e, K_e, L)
        k_e = self.embb.size
        self.m_sum += g_e[np.arange(k_e), np.arange(k_e), :]
        if self.urllc.size:
            g_u = g[self.embb][:, self.urllc, :]                 # (K_e, K_u, L)
            g_um = g_u[:, np.arange(self.urllc.size), self.masters_u]
            self.u2_sum += np.abs(g_um) ** 2
        for nu, c in self.c_e.items():
            a = (g_e * c[None, :, :]).astype(self.gram_dtype)
            self.phi_sum[nu] += np.matmul(a.transpose(0, 2, 1), a.conj())
        self.n += 1

    def finalize(self):
        if self.n == 0:
            raise ValueError("no blocks accumulated")
        self.m = self.m_sum / self.n
        self.phi = {nu: p / p.real.dtype.type(self.n)
                    for nu, p in self.phi_sum.items()}
        self.u2 = self.u2_sum / self.n
        return self


def gamma_patterns(stats, nu, d_pat, rho_u_pat, omega, rho_max, sigma2_d):
    """Hardening-bound SINR per (eMBB UE, distinct slot pattern), (K_e, P).

    d_pat: (P, L) per-AP scales of each distinct pattern;
    rho_u_pat: (P, K_u) URLLC powers (zero when inactive).
    """
    pe = (1.0 - omega) * rho_max
    w = stats.c_e[nu] * stats.m                                  # (K_e, L)
    amp = w @ d_pat.T                                            # (K_e, P)
    sig = np.abs(amp) ** 2
    d32 = d_pat.T.astype(stats.phi[nu].dtype)                    # (L, P)
    tmp = np.matmul(stats.phi[nu], d32)                          # (K_e, L, P)
    quad = np.einsum("pl,klp->kp", d_pat, tmp).real
    den = pe * (quad - sig)
    if rho_u_pat.shape[1]:
        den = den + stats.u2 @ rho_u_pat.T
    if np.any(den < -sigma2_d):
        log.warning("SINR denominator below -sigma2_d on %d of %d entries "
                    "(Monte-Carlo undersampling); flooring at sigma2_d",
                    int((den < -sigma2_d).sum()), den.size)
    den = np.maximum(den + sigma2_d, sigma2_d)
    return pe * sig / den


def block_se(gamma, pat_idx, tau_d, tau_c, T):
    """Per-block SE (K_e, B) from per-pattern SINRs and slot pattern ids."""
    se_p = np.log2(1.0 + gamma)                                  # (K_e, P)
    return se_p[:, pat_idx].sum(axis=2) * (tau_d / (tau_c * T))
