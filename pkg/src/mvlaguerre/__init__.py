"""Erdelyi's multivariate Laguerre polynomials: exact evaluation, upper bounds,
and numerical verification of the inequalities between them."""
from .bounds import (BoundReport, ab_coefficients, fit_ratio_exponent, ratio_asymptote,
                     theorem1_bound, theorem2_bound)
from .dirichlet import (DirichletParams, dirichlet_moment, dirichlet_sample,
                        integral_repr_check, specialization_check)
from .laguerre_mv import (EvalPoint, MultiIndex, TruncatedMvSeries, chain_check,
                          diagonal_sequence, gf_expansion_coeff, gf_truncated_series,
                          laguerre_mv, panda_reduce_check, phi2k)
from .laguerre_uv import (kummer_1f1, laguerre_uv, laguerre_uv_recurrence,
                          lewandowski_szynal_bound, rooney_bound_1, rooney_bound_2,
                          szego_bound)
from .numerics import LogValue, log_gamma, log_pochhammer, pochhammer, q_value
from .verify import SweepConfig, adjudicate_asymptote, emit_report, run_sweep

__version__ = "0.1.0"
