"""Spectral simulator and analysis toolkit for the fractional
Schroedinger-Poisson-Slater system in one space dimension."""
from .config import InitialCondition, SimConfig
from .diagnostics import (DiagnosticsRecord, critical_threshold, energy, gn_check,
                          l4linf_update, l4linf_value, momentum, oscillation_speed)
from .dynamics import (PicardResult, RunStatus, Trajectory, duhamel_iterate, local_term,
                       nonlocal_term, run_simulation, strang_step)
from .errors import (ConfigurationError, ContractionFailure, DomainError, FSPSError,
                     InputError, NumericError)
from .exponents import (DerivedExponents, ExponentReport, classify, derived_exponents,
                        is_admissible, region_raster, scaling_sigma, working_interval)
from .gronwall import (GronwallInstance, exp_bound, gamma_bound, verify_exp_lemma,
                       verify_gamma_lemma)
from .riesz import (Potential, RieszOrder, fractional_laplacian, hls_ratio, riesz_constants,
                    solve_poisson, solve_poisson_quadrature, solve_poisson_spectral)
from .spectral import (Grid1D, Spectrum, WaveField, forward_transform, free_propagate,
                       h1_norm, inverse_transform, lp_norm, make_grid)

__version__ = "0.1.0"
