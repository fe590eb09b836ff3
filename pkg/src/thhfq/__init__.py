"""Exact F_p linear algebra for the homotopy, homology and spectral-sequence
computations around THH of the p-completed algebraic K-theory of finite fields."""

from .algebra import Presentation, Generator, PoincareSeries, dpow, ext, poly, trunc
from .derivation import Assignment, Derivation, DifferentialSpec
from .ktheory import CaseParams, REFERENCE_PAIRS, classify, reference_params
from .report import Claim, Report
from .specseq import BigradedPage, check_collapse, einfty_compare, run_page

__version__ = "0.1.0"

__all__ = [
    "Presentation", "Generator", "PoincareSeries", "dpow", "ext", "poly", "trunc",
    "Assignment", "Derivation", "DifferentialSpec",
    "CaseParams", "REFERENCE_PAIRS", "classify", "reference_params",
    "Claim", "Report",
    "BigradedPage", "check_collapse", "einfty_compare", "run_page",
]
