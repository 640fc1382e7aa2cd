"""Bell-state distinguishability for linear-evolution, local-measurement apparatuses."""

from .apparatus import (
    Apparatus,
    check_unitary,
    compose,
    diagonal_rotation,
    hadamard_lr,
    haar_random,
    load_apparatus,
    projective_separate,
    save_apparatus,
    separate,
    uopt_n1,
)
from .bellcore import BellLabel, Statistics, bell_vector, enumerate_bell_labels
from .detection import signature_table
from .kernels import BACKEND
from .partition import partition_classes, two_copy_partition, verify_bound

__version__ = "0.1.0"

__all__ = [
    "Apparatus", "BellLabel", "Statistics", "BACKEND",
    "bell_vector", "enumerate_bell_labels", "check_unitary", "compose",
    "diagonal_rotation", "hadamard_lr", "haar_random", "load_apparatus",
    "projective_separate", "save_apparatus", "separate", "uopt_n1",
    "signature_table", "partition_classes", "two_copy_partition", "verify_bound",
]
