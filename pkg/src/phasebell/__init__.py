"""Local phase-rotation model of correlated photon pairs, with a seeded
Monte Carlo Bell-test simulator and Bell-local baselines."""

from .ga3 import Bivector, Multivector, geometric_product, pseudoscalar, rotor_exp, scalar_part
from .model import (
    PairSourceSpec,
    PhaseRotor,
    RotatorStation,
    chsh,
    coincidence_probabilities,
    correlation,
    detection_probability,
    joint_probability,
    joint_probability_multi,
    rotation_backward,
    rotation_forward,
)
from .sim import (
    CoincidenceCounts,
    CorrelationEstimate,
    ExperimentConfig,
    ModelKind,
    estimate_chsh,
    estimate_correlation,
    merge_counts,
    run_experiment,
    sample_outcome,
)

__version__ = "0.1.0"
