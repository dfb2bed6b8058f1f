"""Deterministic VANET routing simulator.

Implements the target-driven mobility-prediction (TDMP) forwarding protocol
with a classic greedy/perimeter (GPSR) baseline and a prediction-only
ablation, on top of a Krauss car-following traffic model and a deterministic
two-ray radio. Entry points: the `tdmpsim` CLI (run/sweep/validate) and
`tdmpsim.engine.run_scenario`.
"""

from ._kernels import backend

__version__ = "0.1.0"

__all__ = ["backend", "__version__"]
