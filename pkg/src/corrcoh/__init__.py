"""Correspondence cohomology on finite discrete models.

Modules: ``model`` (spaces and maps), ``corr`` (correspondences and their
classes), ``zlinalg`` (exact integer linear algebra), ``homology`` (cubical
complexes, homotopy, invariance and cancellation checks), ``persist``
(persistence complexes, cones and the stand-in distance), ``parse``,
``verify``, ``report`` and ``cli``.
"""

__version__ = "0.1.0"

from .corr import Correspondence, Level, class_equal, compose, normalize
from .homology import CubicalComplex, homotopic
from .model import AdmissibleMap, MarkedSpace, Space, power, product
from .zlinalg import IntMatrix, homology_at, snf

__all__ = [
    "AdmissibleMap", "Correspondence", "CubicalComplex", "IntMatrix", "Level", "MarkedSpace",
    "Space", "class_equal", "compose", "homology_at", "homotopic", "normalize", "power",
    "product", "snf",
]
