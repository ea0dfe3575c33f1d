"""Free elasticae, polar tangential angles and the symmetric cone-obstacle problem.

Modules
    elliptic   Jacobi functions, elliptic integrals, critical constants
    curve      arclength curves, omega and its derivative identity, disks
    elastica   closed-form rectangular elastica, graph U, branch gamma*
    obstacle   existence verdict and the analytic symmetric minimiser
    oracle     independent discrete minimisation of the graph energy
    verify     invariant suites; cli wires everything to the command line
"""

from ._kernels import BACKEND_NAME, COMPILED
from .elliptic import (
    JacobiTriple,
    PaperConstants,
    complete_K,
    incomplete_F_primitive,
    jacobi,
    paper_constants,
)
from .errors import FreeElasticaError

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "COMPILED",
    "FreeElasticaError",
    "JacobiTriple",
    "PaperConstants",
    "complete_K",
    "incomplete_F_primitive",
    "jacobi",
    "paper_constants",
    "__version__",
]
