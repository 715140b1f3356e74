"""Exact computations with DG and strictly unital A-infinity categories.

Modules, bottom up: ``coeff`` (exact linear algebra over Z, Q, F_p),
``complexes`` (finite cochain complexes), ``presentations`` (quivers and
elements), ``categories`` (presentations, hom windows, H^0), ``functors``
(strict functors and lifting), ``pushouts`` (cell attachments) and
``harness`` (end-to-end reports).  ``formats`` reads and writes the text
format and ``cli`` is the command-line front end.
"""

from .categories import builtin, check_structure, h0, hom_complex, terminal_category
from .coeff import GF, QQ, ZZ, RingSpec
from .complexes import FiniteComplex, disk, homology, sphere
from .functors import GeneratingMap, StrictFunctor, catalog, classify, has_rlp
from .harness import HarnessConfig, run_paper_computations, run_recognition
from .presentations import TruncationConfig
from .pushouts import check_inc_quasi_iso, pushout

__version__ = "0.1.0"

__all__ = [
    "GF", "QQ", "ZZ", "RingSpec",
    "FiniteComplex", "disk", "sphere", "homology",
    "TruncationConfig",
    "builtin", "terminal_category", "check_structure", "hom_complex", "h0",
    "StrictFunctor", "GeneratingMap", "catalog", "classify", "has_rlp",
    "pushout", "check_inc_quasi_iso",
    "HarnessConfig", "run_recognition", "run_paper_computations",
]
