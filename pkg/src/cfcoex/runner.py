"""Experiment orchestration: drops -> blocks -> slots -> result files.

Per drop: build the scenario, draw every block's URLLC activations, reduce
them to distinct slot patterns, and precompute each (policy, strategy)'s
per-pattern power coefficients. Then, per precoder, accumulate the
channel-only gain moments over the evaluation blocks (storing the URLLC-side
effective gains), and evaluate per (policy, strategy):

  * eMBB: pattern-conditioned hardening-bound SINRs -> per-block SE,
    per-UE mean SE, and the service-outage fraction;
  * URLLC: per active (block, slot, UE) link, the effective SINR inputs
    (true gain, decoder CSI from the normalization ensemble, interference
    variance) -> scaling-optimized saddlepoint error probability, averaged
    per UE over its active links. A UE with no active slot in the whole
    drop has no defined error probability; it is reported as excluded.

Channel and activation streams are keyed by (purpose, drop, block) only, so
every strategy/policy/precoder sees identical randomness (paired
comparisons) and any drop can be reproduced in isolation. Worker count
changes wall time, never output bytes: rows are generated per drop and
written in drop order.

Output files (UTF-8 CSV, floats at 9 significant digits, shared header
drop,ue,class,strategy,precoder,policy,metric,value,seed):

  results.csv  per-UE rows: metric se (eMBB, bits/s/Hz), eps / eps_excluded
               (URLLC), and per-combination rows ue=-1 class=net metric
               outage (fraction of blocks with zero sum SE);
  blocks.csv   per-block rows: ue=block index, class=block, metric sum_se.
"""

import csv
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import channel, coexistence, embb, precoder, rng, scenario, urllc

log = logging.getLogger(__name__)

CSV_HEADER = ("drop", "ue", "class", "strategy", "precoder", "policy",
              "metric", "value", "seed")


def evaluate_drop(cfg, drop):
    """All result rows of one drop: (result_rows, block_rows), value unformatted."""
    t0 = time.perf_counter()
    scn = scenario.make_scenario(cfg, drop)
    n_b, n_t = cfg.n_blocks, cfg.T
    u_idx, e_idx = scn.urllc_idx, scn.embb_idx
    k_u, k_e = u_idx.size, e_idx.size
    masters_u = scn.master_ap[u_idx]
    ln_m1 = urllc.ln_codebook(cfg.b_bits)

    act = np.stack([coexistence.sample_activation(cfg, drop, b, k_u)
                    for b in range(n_b)])                      # (B, T, K_u)
    act_pat, pat_idx = coexistence.distinct_patterns(act)

    nus = sorted({p.nu for p in cfg.policies})
    pctx = {nu: coexistence.PowerContext(scn, nu) for nu in nus}
    nu_to_c = {nu: pctx[nu].c_embb for nu in nus}
    onehot = coexistence.master_onehot(scn)
    cov = scn.cluster_cov()
    slot = {}
    for pol in cfg.policies:
        for strat in cfg.strategies:
            a_til = coexistence.coexistence_coefficients(act_pat, strat, scn,
                                                         onehot, cov)
            _, d_pat, rho_pat = coexistence.slot_powers(
                pctx[pol.nu], act_pat, a_til, pol.omega, cfg.rho_max_w)
            slot[pol.name, strat] = (d_pat, rho_pat)

    rows, brows = [], []
    for scheme in cfg.precoders:
        chan = channel.ChannelModel(cfg, scn)
        pctx_w = precoder.PrecoderContext(cfg, scn, chan)
        norm_sq, mu = precoder.normalization_stats(cfg, scn, chan, pctx_w, scheme)
        mu_u = mu[u_idx]

        stats = embb.GainStats(scn, nu_to_c, cfg.single_precision)
        gdtype = np.complex64 if cfg.single_precision else np.complex128
        g_ue = np.empty((n_b, k_u, k_e, scn.L), dtype=gdtype)
        g_uu = np.empty((n_b, k_u, k_u), dtype=np.complex128)
        for b in range(n_b):
            h, hhat = chan.realize(b)
            w = precoder.precode(scheme, hhat, scn, pctx_w, norm_sq)
            g = embb.effective_gains(h, w)
            stats.add_block(g)
            if k_u:
                gu = g[u_idx]
                g_ue[b] = gu[:, e_idx, :]
                g_uu[b] = gu[:, u_idx, masters_u]              # rx u, tx i at master(i)
        stats.finalize()

        g2_uu = np.abs(g_uu) ** 2                              # (B, K_u, K_u)
        g2_self = np.einsum("buu->bu", g2_uu)                  # |own-signal gain|^2
        g_des = g_uu[:, np.arange(k_u), np.arange(k_u)]        # (B, K_u)
        act_f = act.astype(np.float64)
        ue_of_link = np.broadcast_to(np.arange(k_u), act.shape).reshape(-1)
        sel = act.reshape(-1)

        for pol in cfg.policies:
            pe = (1.0 - pol.omega) * cfg.rho_max_w
            a_ue = g_ue * nu_to_c[pol.nu][e_idx].astype(np.float32)[None, None]
            for strat in cfg.strategies:
                d_pat, rho_pat = slot[pol.name, strat]
                gamma = embb.gamma_patterns(stats, pol.nu, d_pat, rho_pat,
                                            pol.omega, cfg.rho_max_w,
                                            cfg.sigma2_d_w)
                se_b = embb.block_se(gamma, pat_idx, cfg.tau_d, cfg.tau_c, n_t)
                sum_se = se_b.sum(axis=0)                      # (B,)
                outage = float((sum_se == 0.0).mean())

                for i in range(k_e):
                    rows.append((drop, int(e_idx[i]), "embb", strat, scheme,
                                 pol.name, "se", float(se_b[i].mean())))
                if k_u:
                    eps_ue, have = _urllc_eps(
                        cfg, a_ue, d_pat, rho_pat, pat_idx, act_f, sel,
                        ue_of_link, g2_uu, g2_self, g_des, mu_u, pe, ln_m1)
                    for i in range(k_u):
                        if have[i]:
                            rows.append((drop, int(u_idx[i]), "urllc", strat,
                                         scheme, pol.name, "eps",
                                         float(eps_ue[i])))
                        else:
                            rows.append((drop, int(u_idx[i]), "urllc", strat,
                                         scheme, pol.name, "eps_excluded", 1.0))
                rows.append((drop, -1, "net", strat, scheme, pol.name,
                             "outage", outage))
                for b in range(n_b):
                    brows.append((drop, b, "block", strat, scheme, pol.name,
                                  "sum_se", float(sum_se[b])))
            del a_ue
        del g_ue, g_uu, stats

    log.info("drop %d done in %.1fs (%d result rows)",
             drop, time.perf_counter() - t0, len(rows))
    return rows, brows


def _urllc_eps(cfg, a_ue, d_pat, rho_pat, pat_idx, act_f, sel, ue_of_link,
               g2_uu, g2_self, g_des, mu_u, pe, ln_m1):
    """Per-UE mean error probability over active links for one combination.

    Returns (eps_ue (K_u,), have (K_u,) bool); have is False where the UE was
    never active in the drop (error probability undefined, to be excluded).
    """
    n_b, k_u, k_e, L = a_ue.shape
    n_t = pat_idx.shape[1]
    d_bt = d_pat[pat_idx]                                      # (B, T, L)
    amp = np.matmul(a_ue.reshape(n_b, k_u * k_e, L),
                    d_bt.transpose(0, 2, 1).astype(a_ue.dtype))
    p_embb = pe * (np.abs(amp.reshape(n_b, k_u, k_e, n_t)
                          .astype(np.complex128)) ** 2).sum(axis=2)
    p_embb = p_embb.transpose(0, 2, 1)                         # (B, T, K_u)

    rho_bt = rho_pat[pat_idx] * act_f                          # (B, T, K_u)
    p_uu = np.einsum("bti,bui->btu", rho_bt, g2_uu)
    p_uu -= rho_bt * g2_self[:, None, :]                       # drop own signal
    sig2 = p_embb + p_uu + cfg.sigma2_d_w

    amp_u = np.sqrt(rho_bt)
    g_t = amp_u * g_des[:, None, :]
    g_h = amp_u * mu_u[None, None, :]

    idx = np.flatnonzero(sel)
    _, eps = urllc.optimize_s(g_t.reshape(-1)[idx], g_h.reshape(-1)[idx],
                              sig2.reshape(-1)[idx], cfg.n_d, ln_m1)
    sums = np.bincount(ue_of_link[idx], weights=eps, minlength=k_u)
    cnts = np.bincount(ue_of_link[idx], minlength=k_u)
    have = cnts > 0
    eps_ue = np.divide(sums, cnts, out=np.zeros(k_u), where=have)
    return eps_ue, have


def _drop_task(args):
    cfg, drop = args
    return evaluate_drop(cfg, drop)


def run_experiment(cfg, out_dir, workers=1):
    """Run all drops and write config.json, results.csv, blocks.csv.

    Identical (cfg, master_seed) produce byte-identical CSV files regardless
    of the worker count. Returns the paths of the written files.
    """
    cfg.validate()
    os.makedirs(out_dir, exist_ok=True)
    cfg_path = os.path.join(out_dir, "config.json")
    cfg.dump_json(cfg_path)

    res_path = os.path.join(out_dir, "results.csv")
    blk_path = os.path.join(out_dir, "blocks.csv")
    with open(res_path, "w", encoding="utf-8", newline="") as rf, \
         open(blk_path, "w", encoding="utf-8", newline="") as bf:
        wres = csv.writer(rf, lineterminator="\n")
        wblk = csv.writer(bf, lineterminator="\n")
        wres.writerow(CSV_HEADER)
        wblk.writerow(CSV_HEADER)

        def emit(drop_result):
            rows, brows = drop_result
            _write_rows(wres, cfg, rows)
            _write_rows(wblk, cfg, brows)

        if workers > 1:
            tasks = [(cfg, d) for d in range(cfg.n_drops)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for dr in pool.map(_drop_task, tasks, chunksize=1):
                    emit(dr)   # map yields in task order: bytes don't depend on workers
        else:
            for d in range(cfg.n_drops):
                emit(evaluate_drop(cfg, d))
    log.info("wrote %s and %s", res_path, blk_path)
    return {"config": cfg_path, "results": res_path, "blocks": blk_path}


def _write_rows(wr, cfg, rows):
    for drop, ue, klass, strat, scheme, policy, metric, value in rows:
        wr.writerow((drop, ue, klass, strat, scheme, policy, metric,
                     f"{float(value):.9g}", rng.lineage(cfg.master_seed, drop)))
