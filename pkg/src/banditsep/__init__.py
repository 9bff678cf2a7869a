"""Bandit multiclass linear classification: learners that see only a
correct/incorrect bit per round, the kernel and polynomial machinery that
turns weak class separation into strong separation, hard-instance
generators, closed-form mistake bounds, and an experiment harness."""

from .core import (
    ExampleStream,
    LabeledExample,
    LinearSeparator,
    MistakeTrace,
    load_dataset,
    run_bandit_session,
    run_fullinfo_session,
    save_dataset,
    verify_strong_separability,
    verify_weak_separability,
)
from .learners import (
    BanditronLearner,
    KernelizedLearner,
    MulticlassPerceptron,
    NearestNeighborLearner,
    OvaLearner,
)

__all__ = [
    "ExampleStream",
    "LabeledExample",
    "LinearSeparator",
    "MistakeTrace",
    "load_dataset",
    "run_bandit_session",
    "run_fullinfo_session",
    "save_dataset",
    "verify_strong_separability",
    "verify_weak_separability",
    "BanditronLearner",
    "KernelizedLearner",
    "MulticlassPerceptron",
    "NearestNeighborLearner",
    "OvaLearner",
]

__version__ = "0.1.0"
