from .sweep_runner import SweepSpec, run_sweep

__all__ = ["SweepSpec", "run_sweep"]
