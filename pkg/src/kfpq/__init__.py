"""Closed-form flows, norms, and positivity thresholds for quadratic
kinetic Fokker-Planck models, cross-checked against a Hermite-Galerkin
discretization.

The public surface mirrors the module layout: biquat (2x2 algebra),
symbols (model parameters and Hamilton maps), positivity (flow forms and
the threshold delta0), bargmann (holomorphic-side Gram analysis),
exactnorms (repelling-side norms and the optimality witness), degenerate
(linear-potential fibers), galerkin (discretization oracles), acceptance
and cli (the verification front ends).
"""

from .biquat import Biquaternion
from .symbols import ModelParams, PotentialSpec, constants
from .positivity import delta0, positivity_report, position_weight_decay_bound
from .bargmann import quotient, remainder_bound
from .exactnorms import optimality_witness, resolvent_bound, semigroup_norm
from .degenerate import decay_bound_degenerate, sup_weighted
from .galerkin import decay_curve, subelliptic_constant

__version__ = "0.1.0"

__all__ = [
    "Biquaternion",
    "ModelParams",
    "PotentialSpec",
    "constants",
    "delta0",
    "positivity_report",
    "position_weight_decay_bound",
    "quotient",
    "remainder_bound",
    "optimality_witness",
    "resolvent_bound",
    "semigroup_norm",
    "decay_bound_degenerate",
    "sup_weighted",
    "decay_curve",
    "subelliptic_constant",
    "__version__",
]
