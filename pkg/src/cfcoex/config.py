"""Experiment configuration: validated parameters and the figure presets."""

import json
import math
from dataclasses import dataclass, field, fields, asdict

STRATEGIES = ("SPC", "LPu", "CPu", "NPu")
PRECODERS = ("MR", "LP-MMSE")


def dbm_to_watt(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass
class PowerPolicy:
    """One power-allocation policy: fractional exponent nu and URLLC share omega."""
    name: str
    omega: float
    nu: float

    def validate(self):
        if not 0.0 < self.omega < 1.0:
            raise ValueError(f"policy {self.name!r}: omega must lie in (0, 1), got {self.omega}")
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"policy {self.name!r}: nu must lie in [0, 1], got {self.nu}")


@dataclass
class SimConfig:
    """All knobs for one experiment run.

    Defaults reproduce the baseline dense deployment: 100 APs on a 1 km
    square, 40 UEs, 20 MHz, -94 dBm noise, 200 mW APs, 100 mW UE pilots.
    """
    # Deployment geometry
    L: int = 100                 # APs
    M: int = 4                   # antennas per AP
    K: int = 40                  # UEs
    alpha: float = 0.2           # URLLC fraction of K
    D_km: float = 1.0            # square side
    ap_height_m: float = 10.0
    ue_height_m: float = 1.5
    asd_deg: float = 15.0        # angular standard deviation (azimuth and elevation)

    # Frame structure
    tau_c: int = 580             # coherence block length (samples)
    tau_p: int = 10              # pilot length
    T: int = 5                   # slots per coherence block

    # Radio parameters (linear units, watts)
    bandwidth_hz: float = 20e6
    sigma2_d_w: float = dbm_to_watt(-94.0)
    sigma2_ul_w: float = dbm_to_watt(-94.0)
    rho_max_w: float = 0.2       # per-AP downlink budget
    p_ul_w: float = 0.1          # UE pilot power

    # Coexistence
    a_u: float = 10.0 ** -0.5    # URLLC activation probability per slot
    b_bits: int = 160            # URLLC payload
    eps_target: float = 1e-5

    # Sweep axes
    strategies: tuple = STRATEGIES
    precoders: tuple = PRECODERS
    policies: tuple = (PowerPolicy("FPA", omega=0.2, nu=0.5),
                       PowerPolicy("EPA", omega=0.5, nu=0.0))

    # Monte-Carlo scale
    n_drops: int = 100
    n_blocks: int = 500          # evaluation channel realizations per drop
    n_norm_blocks: int = 200     # dedicated precoder-normalization ensemble
    n_mc_trials: int = 100000    # trials for the Monte-Carlo error-bound reference
    corr_samples: int = 10000    # angle draws per (UE, AP) pair for correlation
    master_seed: int = 12061

    # Numerics
    single_precision: bool = True  # complex64 for the heavy gain-moment sums

    # ---- derived quantities -------------------------------------------------

    @property
    def K_u(self):
        return int(math.floor(self.alpha * self.K + 0.5))

    @property
    def tau_d(self):
        return self.tau_c - self.tau_p

    @property
    def n_d(self):
        return self.tau_d // self.T

    @property
    def R_nats(self):
        """ln(2^b - 1) / n_d, the per-use decoding threshold rate."""
        b = self.b_bits
        if b == 0:
            return -math.inf
        # ln(2^b - 1) = b ln2 + log1p(-2^-b), stable for large b
        return (b * math.log(2.0) + math.log1p(-(2.0 ** -b))) / self.n_d

    # ---- validation ----------------------------------------------------------

    def validate(self):
        def req(cond, msg):
            if not cond:
                raise ValueError(msg)

        req(self.L >= 1, f"L must be >= 1, got {self.L}")
        req(self.M >= 1, f"M must be >= 1, got {self.M}")
        req(self.K >= 1, f"K must be >= 1, got {self.K}")
        req(self.L * self.M > self.K,
            f"L*M must exceed K for a massive regime, got L*M={self.L * self.M} <= K={self.K}")
        req(0.0 <= self.alpha <= 1.0, f"alpha must lie in [0, 1], got {self.alpha}")
        req(self.D_km > 0, f"D_km must be positive, got {self.D_km}")
        req(self.asd_deg > 0, f"asd_deg must be positive, got {self.asd_deg}")
        req(self.tau_p >= 1, f"tau_p must be >= 1, got {self.tau_p}")
        req(self.tau_p <= self.tau_c, f"tau_p must not exceed tau_c, got {self.tau_p} > {self.tau_c}")
        req(self.T >= 1, f"T must be >= 1, got {self.T}")
        req(self.tau_d >= self.T,
            f"tau_d = tau_c - tau_p = {self.tau_d} must allow at least one symbol per slot (T={self.T})")
        for name, val in (("bandwidth_hz", self.bandwidth_hz), ("sigma2_d_w", self.sigma2_d_w),
                          ("sigma2_ul_w", self.sigma2_ul_w), ("rho_max_w", self.rho_max_w),
                          ("p_ul_w", self.p_ul_w)):
            req(val > 0, f"{name} must be positive, got {val}")
        req(0.0 <= self.a_u <= 1.0, f"a_u must lie in [0, 1], got {self.a_u}")
        req(self.b_bits >= 0, f"b_bits must be >= 0, got {self.b_bits}")
        req(0.0 < self.eps_target <= 1.0, f"eps_target must lie in (0, 1], got {self.eps_target}")
        for s in self.strategies:
            req(s in STRATEGIES, f"unknown strategy {s!r}; known: {list(STRATEGIES)}")
        for p in self.precoders:
            req(p in PRECODERS, f"unknown precoder {p!r}; known: {list(PRECODERS)}")
        req(len(self.policies) >= 1, "at least one power policy is required")
        names = [p.name for p in self.policies]
        req(len(set(names)) == len(names), f"policy names must be unique, got {names}")
        for p in self.policies:
            p.validate()
        for name, val in (("n_drops", self.n_drops), ("n_blocks", self.n_blocks),
                          ("n_norm_blocks", self.n_norm_blocks), ("n_mc_trials", self.n_mc_trials),
                          ("corr_samples", self.corr_samples)):
            req(int(val) >= 1, f"{name} must be >= 1, got {val}")
        req(self.n_blocks >= 2, f"n_blocks must be >= 2 for moment estimates, got {self.n_blocks}")
        return self

    # ---- (de)serialization ---------------------------------------------------

    def to_dict(self):
        d = asdict(self)
        d["strategies"] = list(self.strategies)
        d["precoders"] = list(self.precoders)
        d["policies"] = [{"name": p.name, "omega": p.omega, "nu": p.nu} for p in self.policies]
        return d

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}; known keys: {sorted(known)}")
        d = dict(d)
        if "policies" in d:
            pols = []
            for entry in d["policies"]:
                extra = set(entry) - {"name", "omega", "nu"}
                if extra:
                    raise ValueError(f"unknown policy keys: {sorted(extra)}")
                pols.append(PowerPolicy(str(entry["name"]), float(entry["omega"]), float(entry["nu"])))
            d["policies"] = tuple(pols)
        if "strategies" in d:
            d["strategies"] = tuple(d["strategies"])
        if "precoders" in d:
            d["precoders"] = tuple(d["precoders"])
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path):
        with open(path, "r", encoding="utf-8") as f:
            try:
                d = json.load(f)
            except json.JSONDecodeError as e:
                raise ValueError(f"config file {path} is not valid JSON: {e}") from e
        if not isinstance(d, dict):
            raise ValueError(f"config file {path} must contain a JSON object")
        return cls.from_dict(d)

    def dump_json(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


# ---- figure presets ----------------------------------------------------------

def preset_fig1(**overrides):
    """Dense deployment, M=4, T=5 (n_d=114), FPA(0.2, 0.5) and EPA, all strategies."""
    cfg = SimConfig(**overrides)
    return cfg.validate()


def preset_fig2(**overrides):
    """Same scenario as fig1 but only the LP-MMSE precoder (error-probability study)."""
    overrides.setdefault("precoders", ("LP-MMSE",))
    return preset_fig1(**overrides)


def preset_fig3(**overrides):
    """More antennas, shorter slots: M=16, T=2 (n_d=285), FPA with omega=0.8."""
    overrides.setdefault("M", 16)
    overrides.setdefault("T", 2)
    overrides.setdefault("policies", (PowerPolicy("FPA", omega=0.8, nu=0.5),))
    cfg = SimConfig(**overrides)
    return cfg.validate()


PRESETS = {"fig1": preset_fig1, "fig2": preset_fig2, "fig3": preset_fig3}
