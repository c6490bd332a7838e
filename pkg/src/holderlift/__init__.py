"""Strengthening uniform convergence of coupled path ensembles to convergence
in a fitted modified Hoelder space H^o(sqrt g), with Orlicz tail reports for
the domination coefficient and moment-convergence diagnostics."""

from .bernstein import (Functional, kappa_decomposition, moment_convergence_check,
                        truncate_functional, uniform_integrability_curve)
from .coupling import (DominationRecord, Ensemble, GeneratorKind, dominate_sequence, generate_ensemble,
                       load_ensemble, save_ensemble, uniform_deviations)
from .errors import DominationError, NumericalError, ValidationError
from .grid import GridPath, subtract, sup_norm
from .holder import (HolderNormBreakdown, covering_number_bound, holder_norm, little_o_check,
                     norm_convergence_curve)
from .modulus import (ModulusProfile, envelope, load_profiles, modulus_of_continuity, modulus_profile,
                      save_profiles)
from .orlicz import (YoungFunction, delta2_check, luxemburg_norm, normalize_sup_rv, theta_orlicz_report,
                     weaker_than)
from .pipeline import StrengthenConfig, run_strengthen, strengthen
from .scaling import ScalingTable, domination_coefficient, fit_scaling, merge_max, sqrt_scale
from .weak import TestFunctionalSuite, bounded_lipschitz_distance, test_functional_convergence

__version__ = "0.1.0"
