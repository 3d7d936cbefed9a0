"""Kazhdan-Lusztig bases, M-polynomials and cells of finite Coxeter
groups with unequal parameters, in exact integer arithmetic.

Modules by layer: :mod:`klcells.coxeter` (group enumeration),
:mod:`klcells.laurent` (exact Laurent arithmetic and monomial orders),
:mod:`klcells.kl` (canonical bases, M- and R-polynomials),
:mod:`klcells.cells` (cell partitions and preorders),
:mod:`klcells.reps` (cell modules and characters),
:mod:`klcells.weights` (weight functions and the critical-ratio scan),
:mod:`klcells.pipeline` / :mod:`klcells.cli` (orchestration).
"""

__version__ = "0.1.0"

from .coxeter import CoxeterSpec, CoxeterSystem, build_system, parse_type
from .laurent import MonomialOrder, MonomialSpace
from .pipeline import RunConfig, run_pipeline

__all__ = [
    "CoxeterSpec", "CoxeterSystem", "build_system", "parse_type",
    "MonomialOrder", "MonomialSpace", "RunConfig", "run_pipeline",
    "__version__",
]
