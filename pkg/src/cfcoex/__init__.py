"""Monte-Carlo downlink simulator for cell-free massive MIMO networks in
which eMBB and URLLC users coexist under superposition or puncturing.

Core pipeline: scenario geometry and spatial correlation (`scenario`),
MMSE channel estimation (`channel`), MR / LP-MMSE precoding (`precoder`),
URLLC activations and fractional power allocation (`coexistence`),
hardening-bound eMBB spectral efficiency (`embb`), saddlepoint
finite-blocklength URLLC error probability (`urllc`), experiment
orchestration and CSV emission (`runner`, `summarize`, `cli`).
"""

__version__ = "0.1.0"

from .config import (PRESETS, PowerPolicy, SimConfig, preset_fig1,
                     preset_fig2, preset_fig3)
from .runner import evaluate_drop, run_experiment
from .summarize import summarize_dir

__all__ = [
    "PRESETS", "PowerPolicy", "SimConfig",
    "preset_fig1", "preset_fig2", "preset_fig3",
    "evaluate_drop", "run_experiment", "summarize_dir",
    "__version__",
]
