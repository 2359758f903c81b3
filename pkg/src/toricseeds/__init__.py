"""Enumeration of weak pseudo-manifolds over GF(2) and classification of
toric colorable seeds of Picard number at most 4."""

from .complex import PureComplex, link, suspension, wedge
from .search import AffineProperty, enumerate_wpm, make_job, ubt_property

__all__ = ["AffineProperty", "PureComplex", "enumerate_wpm", "link", "make_job",
           "suspension", "ubt_property", "wedge"]
__version__ = "0.1.0"
