"""kolmlab: a desk-scale laboratory for algorithmic sequence prediction.

Concrete bounded reference machines, exact-rational program-mass and
description-length estimators, a computable-measure zoo with a dominant
mixture predictor, and verifiers for the prediction-bound inequalities the
package is built around.
"""

from ._isa import ISA_VERSION
from ._backend import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["ISA_VERSION", "KERNEL_BACKEND", "__version__"]
