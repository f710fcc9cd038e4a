"""l1-regularized multiclass classification by saddle-point mirror descent."""

from ._l1saddle import duality_gap, load_dataset, primal_objective, synth, train

__all__ = ["duality_gap", "load_dataset", "primal_objective", "synth", "train"]
