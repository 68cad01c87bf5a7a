"""Exact computations around generating pairs of integer matrix rings."""

from .linalg import IntMatrix, ResourceCapExceeded
from .gentest import is_generating, subring_index
from .presentations import BoundedIdeal, standard_relators

__all__ = ["IntMatrix", "ResourceCapExceeded", "is_generating", "subring_index", "BoundedIdeal", "standard_relators"]
__version__ = "0.1.0"
