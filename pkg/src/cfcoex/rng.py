"""Counter-based random streams with explicit lineage.

Every random draw in the simulator comes from a Philox stream keyed by
(master_seed, purpose, *indices), so any drop/block/slot can be regenerated
in isolation and results do not depend on execution order or worker count.
"""

import numpy as np

# Fixed purpose tags; values are part of the reproducibility contract and
# must never be renumbered.
POSITIONS = 0      # AP/UE placement for one drop
CLASSES = 1        # URLLC/eMBB tagging shuffle
SHADOWING = 2      # log-normal shadow fading
CORRELATION = 3    # angle draws for spatial correlation averaging
CHANNEL = 4        # evaluation-ensemble channel realizations, per block
PILOT_NOISE = 5    # pilot observation noise, per block
ACTIVATION = 6     # URLLC activation indicators, per block
NORM_CHANNEL = 7   # normalization-ensemble channels, per block
NORM_NOISE = 8     # normalization-ensemble pilot noise, per block
ORACLE = 9         # Monte-Carlo oracle trials


def stream(master_seed, purpose, *indices):
    """Return a numpy Generator for (master_seed, purpose, *indices).

    The same tuple always yields the same stream, and distinct tuples yield
    statistically independent Philox streams.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed),
                                spawn_key=(int(purpose),) + tuple(int(i) for i in indices))
    return np.random.Generator(np.random.Philox(ss))


def lineage(master_seed, drop=None):
    """Human-readable seed lineage tag for result rows."""
    tag = f"m{int(master_seed)}"
    if drop is not None:
        tag += f"/d{int(drop)}"
    return tag
