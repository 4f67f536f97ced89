"""Brill--Noether loci in moduli of curves: exact arithmetic, chain decompositions and certificates."""

from .certificates import Certificate, Finding
from .chains import (
    ChainDecomposition,
    build_chain_prop31,
    build_chain_search,
    enumerate_schedules,
    star_classification,
    star_condition,
    verify_chain,
)
from .core import LocusId, PointedLocusId, adjusted_rho, canonicalize, rho, serre_dual, trivial_containments
from .dimension import expected_dim_certificate, verify_dim_certificate
from .errors import BNError, DomainError, NoDecompositionFound
from .maximal import conjecture_status, d_max, enumerate_expected_maximal, exp_max_rho, is_expected_maximal, r_max
from .noncontainment import (
    StratificationGraph,
    build_stratification_graph,
    consistency_check,
    recheck_certificate,
    rule_codim2_vs_deeper,
    rule_divisor_vs_deeper,
    thm34_certificate,
)
from .prym import cor54_certificates, cor55_check, prym_params

__version__ = "0.1.0"
