"""URLLC activation, per-AP coexistence coefficients, and power allocation.

Activations are i.i.d. Bernoulli(a_u) per (slot, URLLC UE) and live only on
the UE's master AP. The coexistence coefficient Atilde[t, j] in {0, 1} says
whether AP j may transmit eMBB payload in slot t:

    Atilde[t, j] = max(0, 1 - sum_{l in L(j)} n_act[t, l])

with L(j) = {j} for local puncturing (LPu), the coverage of AP j's served
users for cluster puncturing (CPu), all APs for network puncturing (NPu),
and Atilde = 1 identically for superposition coding (SPC).

Fractional power allocation per (slot t, AP j), exponent nu, URLLC share
omega:

    den      = (1-omega) Atilde[t,j] sum_{k in Ke_j} beta_kj^nu
               + omega sum_{u in Ku_j} A[t,u] beta_uj^nu
    rho_u    = omega rho_max A[t,u] beta_uj^nu / den
    rho_e    = (1-omega) rho_max Atilde[t,j] beta_kj^nu / den

All rows here are slot-shaped: functions accept any leading number of rows,
so a whole drop's (blocks x slots) can be processed in one call.
"""

import numpy as np

from . import rng

STRATEGY_NAMES = ("SPC", "LPu", "CPu", "NPu")


def sample_activation(cfg, drop, block, k_u):
    """(T, K_u) Bernoulli(a_u) activation indicators for one coherence block."""
    g = rng.stream(cfg.master_seed, rng.ACTIVATION, drop, block)
    return g.random((cfg.T, k_u)) < cfg.a_u


def master_onehot(scn):
    """(K_u, L) indicator of each URLLC UE's master AP."""
    u = scn.urllc_idx
    oh = np.zeros((u.size, scn.L))
    oh[np.arange(u.size), scn.master_ap[u]] = 1.0
    return oh


def coexistence_coefficients(act, strategy, scn, onehot=None, cov=None):
    """Per-AP transmission coefficients, shape (rows, L), values in {0., 1.}.

    act: (rows, K_u) activation indicators (a row is one slot).
    """
    if strategy not in STRATEGY_NAMES:
        raise ValueError(f"unknown strategy {strategy!r}; known: {list(STRATEGY_NAMES)}")
    rows = act.shape[0]
    if strategy == "SPC":
        return np.ones((rows, scn.L))
    if onehot is None:
        onehot = master_onehot(scn)
    n_act = act.astype(np.float64) @ onehot            # (rows, L)
    if strategy == "LPu":
        hit = n_act
    elif strategy == "CPu":
        if cov is None:
            cov = scn.cluster_cov()
        hit = n_act @ cov.astype(np.float64)           # cov is symmetric
    else:  # NPu
        hit = np.broadcast_to(n_act.sum(axis=1, keepdims=True), n_act.shape)
    return np.maximum(0.0, 1.0 - hit)


def distinct_patterns(act):
    """Compress (B, T, K_u) activations to their distinct slot patterns.

    Returns (act_pat, idx): act_pat is (P, K_u) bool with the P <= 2^K_u
    patterns that actually occur, idx is (B, T) int with
    act[b, t] == act_pat[idx[b, t]]. Per-slot quantities (coexistence
    coefficients, powers, SINRs) need only be evaluated once per pattern.
    """
    n_b, n_t, k_u = act.shape
    if k_u == 0:
        return np.zeros((1, 0), dtype=bool), np.zeros((n_b, n_t), dtype=np.intp)
    weights = 1 << np.arange(k_u, dtype=np.int64)
    code = act.reshape(-1, k_u).astype(np.int64) @ weights
    codes, inv = np.unique(code, return_inverse=True)
    act_pat = ((codes[:, None] >> np.arange(k_u)) & 1).astype(bool)
    return act_pat, inv.reshape(n_b, n_t)


class PowerContext:
    """Per-(scenario, nu) cached pieces of the FPA denominators."""

    def __init__(self, scn, nu):
        self.scn, self.nu = scn, nu
        u = scn.urllc_idx
        bnu = scn.beta ** nu
        embb_served = scn.D & ~scn.urllc_mask[:, None]
        self.s_embb = (bnu * embb_served).sum(axis=0)          # (L,)
        self.bu = bnu[u, scn.master_ap[u]]                     # (K_u,)
        self.onehot = master_onehot(scn)
        self.masters_u = scn.master_ap[u]
        self.c_embb = np.where(embb_served, np.sqrt(bnu), 0.0)  # (K, L) sqrt(beta^nu) mask


def slot_powers(ctx, act, a_tilde, omega, rho_max):
    """Compact per-slot FPA outputs for vectorized evaluation.

    Returns (den, d, rho_u):
      den:   (rows, L) FPA denominators;
      d:     (rows, L) Atilde/sqrt(den) where den > 0 else 0 — the per-AP
             scale such that sqrt(rho_e[k, j]) = sqrt((1-omega) rho_max) *
             sqrt(beta_kj^nu) * d[j];
      rho_u: (rows, K_u) URLLC powers at the master APs.
    """
    den = (1.0 - omega) * a_tilde * ctx.s_embb[None, :]
    den = den + omega * (act.astype(np.float64) * ctx.bu[None, :]) @ ctx.onehot
    pos = den > 0
    d = np.zeros_like(den)
    np.divide(a_tilde, np.sqrt(den, where=pos, out=np.ones_like(den)), out=d, where=pos)
    den_at_master = den[:, ctx.masters_u]                      # (rows, K_u)
    rho_u = np.zeros_like(den_at_master)
    np.divide(omega * rho_max * act * ctx.bu[None, :], den_at_master,
              out=rho_u, where=den_at_master > 0)
    return den, d, rho_u


def fpa_powers(scn, act, a_tilde, omega, nu, rho_max):
    """Dense per-(slot, UE, AP) powers (rho_e, rho_u).

    rho_e[t, k, j] is zero unless AP j serves eMBB UE k and Atilde[t, j] = 1;
    rho_u[t, u, j] is zero except at active URLLC UEs' master APs. Whenever
    anything is scheduled at (t, j), the allocated sum equals rho_max.
    """
    ctx = PowerContext(scn, nu)
    den, _, rho_u_c = slot_powers(ctx, act, a_tilde, omega, rho_max)
    rows = act.shape[0]
    K, L = scn.K, scn.L
    pos = den > 0

    bnu_e = ctx.c_embb ** 2                                     # beta^nu on served eMBB pairs
    rho_e = (1.0 - omega) * rho_max * a_tilde[:, None, :] * bnu_e[None, :, :]
    rho_e = np.divide(rho_e, den[:, None, :], out=np.zeros_like(rho_e),
                      where=pos[:, None, :])

    rho_u = np.zeros((rows, K, L))
    u = scn.urllc_idx
    rho_u[:, u, :] = rho_u_c[:, :, None] * ctx.onehot[None, :, :]
    return rho_e, rho_u
