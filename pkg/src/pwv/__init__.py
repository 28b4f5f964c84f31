"""Exact verification of P = W for hyper-Kähler-type cohomology rings."""

from importlib import resources

from .algebra import CohomologyClass, GradedAlgebra, ValidationError, build_k3, parse_and_validate
from .filtrations import (FiltrationTable, OperatorSuite, build_operator_suite,
                          deligne_filtration, monodromy_filtration, perverse_decomposition,
                          perverse_filtration, verify_pw)
from .linalg import GaussianRational, Matrix, Subspace, scalar
from .quadratic import QuadraticSpace, signature

__version__ = "0.1.0"


def k3_path() -> str:
    """Filesystem path of the shipped K3 document."""
    return str(resources.files("pwv") / "data" / "k3.json")
