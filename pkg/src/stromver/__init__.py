"""Exact verification of heterotic (Strominger) equations on invariant data of complex Lie groups."""

from .errors import StromverError
from .scalars import GaussRational, gr, parse_scalar

__version__ = "0.1.0"

__all__ = ["GaussRational", "StromverError", "gr", "parse_scalar", "__version__"]
