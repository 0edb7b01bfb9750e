"""Exact computations behind the 21-fold Anderson self-duality of Tmf at p = 3.

Modules, bottom up: exact_core (integer linear algebra), lambda_rep (the
S3-representation Lambda), group_cohomology, sheaf_serre, ss_engine,
duality_checks, charts and cli.
"""

from .exact_core import FgModule, smith_normal_form
from .lambda_rep import LAMBDA, LAMBDA_DUAL, LAMBDA_DUAL_SGN, LAMBDA_SGN, EquivariantModule
from .group_cohomology import group_cohomology_at, homology_at
from .ss_engine import Window, compute_homotopy, run_tate_ss
from .duality_checks import anderson_dualize, check_tmf21_duality

__all__ = [
    "FgModule",
    "smith_normal_form",
    "EquivariantModule",
    "LAMBDA",
    "LAMBDA_SGN",
    "LAMBDA_DUAL",
    "LAMBDA_DUAL_SGN",
    "group_cohomology_at",
    "homology_at",
    "Window",
    "run_tate_ss",
    "compute_homotopy",
    "anderson_dualize",
    "check_tmf21_duality",
]
