"""Delta calculus on finite time scales and Hyers-Ulam stability certificates."""
from tempus._backend import BACKEND
from tempus.errors import (CampaignError, ComplexRootsError, ConfigError, GridMismatchError,
                           HypothesisViolation, NonFiniteError, NonFiniteValuesError,
                           NonMonotoneError, NonRegressiveError, RepeatedRootsError,
                           RiccatiBreakdownError, RiccatiConditionError, TempusError,
                           TimeScaleError, TooFewPointsError)
from tempus.harness import (CampaignReport, PerturbationSpec, certify_equation,
                            make_timescale, perturb, q_scale, run_campaign, sample, uniform)
from tempus.hyers_ulam import (LemmaConstant, StabilityCertificate, cc_construct,
                               certify_first_order, certify_second_order_cc,
                               certify_second_order_icc, certify_second_order_ivc,
                               closing_identity_check, factorized_construct, lemma_constant)
from tempus.solvers import (CharacteristicRoots, EquationSpec, RiccatiSolution,
                            characteristic_roots, recurrence_oracle_second_order,
                            residual_second_order, riccati_check, riccati_forward,
                            solve_first_order_ivp, suggest_riccati_seed)
from tempus.timescale import (Coefficient, GridFunction, TimeScale, circle_minus,
                              delta_derivative, delta_integral, exponential_table,
                              graininess, sigma, ts_exponential, validate_timescale)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CampaignError",
    "CampaignReport",
    "CharacteristicRoots",
    "Coefficient",
    "ComplexRootsError",
    "ConfigError",
    "EquationSpec",
    "GridFunction",
    "GridMismatchError",
    "HypothesisViolation",
    "LemmaConstant",
    "NonFiniteError",
    "NonFiniteValuesError",
    "NonMonotoneError",
    "NonRegressiveError",
    "PerturbationSpec",
    "RepeatedRootsError",
    "RiccatiBreakdownError",
    "RiccatiConditionError",
    "RiccatiSolution",
    "StabilityCertificate",
    "TempusError",
    "TimeScale",
    "TimeScaleError",
    "TooFewPointsError",
    "cc_construct",
    "certify_equation",
    "certify_first_order",
    "certify_second_order_cc",
    "certify_second_order_icc",
    "certify_second_order_ivc",
    "characteristic_roots",
    "circle_minus",
    "closing_identity_check",
    "delta_derivative",
    "delta_integral",
    "exponential_table",
    "factorized_construct",
    "graininess",
    "lemma_constant",
    "make_timescale",
    "perturb",
    "q_scale",
    "recurrence_oracle_second_order",
    "residual_second_order",
    "riccati_check",
    "riccati_forward",
    "run_campaign",
    "sample",
    "sigma",
    "solve_first_order_ivp",
    "suggest_riccati_seed",
    "ts_exponential",
    "uniform",
    "validate_timescale",
]
