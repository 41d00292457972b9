"""Network geometry and large-scale statistics for one drop.

A drop places APs and UEs uniformly on a D_km x D_km square, draws
log-normal shadow fading on top of a distance power law, builds local
scattering spatial correlation matrices for half-wavelength uniform linear
arrays, and derives the pilot assignment plus user-centric serving clusters.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import rng

log = logging.getLogger(__name__)

# Distance power law: -30.5 - 36.7 log10(d_3D) dB, urban microcell style,
# with 4 dB log-normal shadowing on top.
PL_CONST_DB = -30.5
PL_SLOPE_DB = 36.7
SHADOW_STD_DB = 4.0


def pathloss_db(d3d_m):
    """Median channel gain in dB at 3-D distance d3d_m (meters)."""
    return PL_CONST_DB - PL_SLOPE_DB * np.log10(d3d_m)


@dataclass
class NetworkScenario:
    """Everything that stays fixed over one drop's small-scale fading."""
    drop: int
    M: int
    ap_pos: np.ndarray          # (L, 2) meters
    ue_pos: np.ndarray          # (K, 2) meters
    urllc_mask: np.ndarray      # (K,) bool
    beta_db: np.ndarray         # (K, L)
    beta: np.ndarray            # (K, L) linear
    pilot: np.ndarray           # (K,) pilot index in [0, tau_p)
    master_ap: np.ndarray       # (K,) AP index
    D: np.ndarray               # (K, L) bool serving mask
    R: np.ndarray = None        # (K, L, M, M) spatial correlation, or None
    R_sqrt: np.ndarray = None   # (K, L, M, M) PSD square root of R, or None
    degenerate_urllc: bool = False

    @property
    def L(self):
        return self.ap_pos.shape[0]

    @property
    def K(self):
        return self.ue_pos.shape[0]

    @property
    def urllc_idx(self):
        return np.flatnonzero(self.urllc_mask)

    @property
    def embb_idx(self):
        return np.flatnonzero(~self.urllc_mask)

    def cluster_cov(self):
        """(L, L) bool: cov[j, l] iff some UE served by AP j is also served by AP l.

        Always includes the diagonal, even for APs that serve nobody.
        """
        cov = (self.D.astype(np.int32).T @ self.D.astype(np.int32)) > 0
        np.fill_diagonal(cov, True)
        return cov


def drop_positions(cfg, drop):
    """Uniform AP/UE placement plus the URLLC tagging shuffle."""
    side = 1000.0 * cfg.D_km
    g = rng.stream(cfg.master_seed, rng.POSITIONS, drop)
    ap_pos = g.uniform(0.0, side, size=(cfg.L, 2))
    ue_pos = g.uniform(0.0, side, size=(cfg.K, 2))

    k_u = cfg.K_u
    degenerate = False
    if cfg.alpha > 0 and k_u == 0:
        log.warning("alpha=%g rounds to zero URLLC UEs at K=%d; proceeding without URLLC",
                    cfg.alpha, cfg.K)
        degenerate = True
    order = rng.stream(cfg.master_seed, rng.CLASSES, drop).permutation(cfg.K)
    urllc_mask = np.zeros(cfg.K, dtype=bool)
    urllc_mask[order[:k_u]] = True
    return ap_pos, ue_pos, urllc_mask, degenerate


def large_scale_gains(cfg, drop, ap_pos, ue_pos):
    """(K, L) channel gains in dB and linear: power law + N(0, 4^2) dB shadowing."""
    diff = ue_pos[:, None, :] - ap_pos[None, :, :]
    d2d = np.hypot(diff[..., 0], diff[..., 1])
    dh = cfg.ap_height_m - cfg.ue_height_m
    d3d = np.sqrt(d2d ** 2 + dh ** 2)
    shadow = rng.stream(cfg.master_seed, rng.SHADOWING, drop).normal(
        0.0, SHADOW_STD_DB, size=d3d.shape)
    beta_db = pathloss_db(d3d) + shadow
    return beta_db, 10.0 ** (beta_db / 10.0)


def spatial_correlation(cfg, drop, ap_pos, ue_pos, beta):
    """Local-scattering correlation matrices for every (UE, AP) pair.

    R[k, l] = beta[k, l] * E[a(az+d, el+e) a(az+d, el+e)^H] with d, e
    independent N(0, asd^2) and a the half-wavelength ULA response,
    a_m = exp(j*pi*m*sin(az)cos(el)). The expectation is a seeded sample
    average over cfg.corr_samples draws per pair; because a_m = a_1^m the
    Gram average is Toeplitz in (m - m'), which keeps it exactly PSD.
    """
    K, L, M = ue_pos.shape[0], ap_pos.shape[0], cfg.M
    n = int(cfg.corr_samples)
    asd = np.deg2rad(cfg.asd_deg)
    dh = cfg.ue_height_m - cfg.ap_height_m

    diff = ue_pos[:, None, :] - ap_pos[None, :, :]
    az = np.arctan2(diff[..., 1], diff[..., 0])
    el = np.arctan2(dh, np.hypot(diff[..., 0], diff[..., 1]))

    R = np.empty((K, L, M, M), dtype=np.complex128)
    dcol, drow = np.arange(M)[:, None], np.arange(M)[None, :]
    lag = np.abs(dcol - drow)          # Toeplitz lag index
    take_conj = (dcol - drow) < 0
    for k in range(K):
        g = rng.stream(cfg.master_seed, rng.CORRELATION, drop, k)
        daz = g.normal(0.0, asd, size=(L, n))
        del_ = g.normal(0.0, asd, size=(L, n))
        w = np.sin(az[k][:, None] + daz) * np.cos(el[k][:, None] + del_)
        e1 = np.exp(1j * np.pi * w)
        c = np.empty((L, M), dtype=np.complex128)
        c[:, 0] = 1.0
        if M > 1:
            cur = e1.copy()
            c[:, 1] = cur.mean(axis=1)
            for d in range(2, M):
                cur *= e1
                c[:, d] = cur.mean(axis=1)
        Rk = c[:, lag]
        Rk = np.where(take_conj[None], np.conj(Rk), Rk)
        R[k] = beta[k][:, None, None] * Rk
    return R


def psd_sqrt(R):
    """Batched PSD matrix square root via eigendecomposition."""
    vals, vecs = np.linalg.eigh(R)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)[..., None, :]) @ np.conj(np.swapaxes(vecs, -1, -2))


def assign_pilots_and_clusters(beta, tau_p, urllc_mask):
    """Greedy pilot assignment and user-centric serving clusters.

    Pilots: the first tau_p UEs (index order) take pilots 0..tau_p-1; each
    later UE takes the pilot with the least contamination (sum of beta of
    the UEs already on that pilot) at its master AP, lowest index on ties.

    Serving sets: every UE is served by its master AP (argmax beta). URLLC
    UEs are served only by their master. Every remaining (AP, pilot) slot
    serves the strongest-beta eMBB UE on that pilot; a master-obligated UE
    preempts that slot at its own master AP.
    """
    K, L = beta.shape
    master = np.argmax(beta, axis=1)

    pilot = np.empty(K, dtype=np.int64)
    for k in range(K):
        if k < tau_p:
            pilot[k] = k
        else:
            contamination = np.zeros(tau_p)
            for t in range(tau_p):
                prior = np.flatnonzero(pilot[:k] == t)
                contamination[t] = beta[prior, master[k]].sum()
            pilot[k] = int(np.argmin(contamination))

    D = np.zeros((K, L), dtype=bool)
    D[np.arange(K), master] = True
    # (AP, pilot) slots already taken by a master obligation
    taken = np.zeros((L, tau_p), dtype=bool)
    taken[master, pilot] = True
    embb = np.flatnonzero(~urllc_mask)
    for t in range(tau_p):
        users_t = embb[pilot[embb] == t]
        if users_t.size == 0:
            continue
        best = users_t[np.argmax(beta[users_t, :], axis=0)]   # (L,)
        free = ~taken[:, t]
        D[best[free], np.flatnonzero(free)] = True
    return pilot, master, D


def make_scenario(cfg, drop, with_correlation=True):
    """Build the full per-drop scenario; correlation matrices are optional
    so structure-only studies stay cheap."""
    ap_pos, ue_pos, urllc_mask, degenerate = drop_positions(cfg, drop)
    beta_db, beta = large_scale_gains(cfg, drop, ap_pos, ue_pos)
    pilot, master, D = assign_pilots_and_clusters(beta, cfg.tau_p, urllc_mask)
    R = R_sqrt = None
    if with_correlation:
        R = spatial_correlation(cfg, drop, ap_pos, ue_pos, beta)
        R_sqrt = psd_sqrt(R)
    return NetworkScenario(drop=drop, M=cfg.M, ap_pos=ap_pos, ue_pos=ue_pos,
                           urllc_mask=urllc_mask, beta_db=beta_db, beta=beta,
                           pilot=pilot, master_ap=master, D=D,
                           R=R, R_sqrt=R_sqrt, degenerate_urllc=degenerate)
