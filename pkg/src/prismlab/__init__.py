"""Exact checks for delta-rings, prisms and Frobenius flatness in truncation windows."""

__version__ = "0.1.0"

from .arith import (FpPoly, PrecScalar, SeriesRing, TruncSeries, coeff_inv, fiber_reduce,
                    series_inv, series_mul)
from .cohen import (build_presentation, correspondence_automorphism, rewrite_p,
                    small_base_check)
from .common import UNDECIDED
from .delta import DeltaRingSpec, check_delta_axioms, delta, is_distinguished, phi
from .exactalg import fp_reduce, howell_solve, quotient_length
from .groebner import buchberger, ideal_dim, ideal_member, quotient_basis
from .koszul import (ht_filtration_table, ht_rank, koszul_homology_window,
                     lci_discreteness_check, regular_sequence_verdict)
from .kunzartin import artin_build, free_rank_test, frobenius_flat
from .localring import (LocalPresentation, RegularityStatus, dim_estimate, emdim,
                        hilbert_samuel, linear_part, regularity_verdict)
from .pdenv import counterexample_report, pd_build, pd_frobenius
from .prism import classify, normalize_orientation, regseq_suite, verify_prism
from .reader import load_ringspec, parse_poly
