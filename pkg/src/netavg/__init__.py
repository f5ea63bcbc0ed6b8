"""Bootstrap model averaging for discrete Bayesian networks with an
L1-estimated edge significance threshold."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
