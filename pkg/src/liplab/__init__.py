"""Pointwise Lipschitz constants, length metrics and singular-set perturbation
on finite metric measure spaces."""

from .errors import (EmptySet, IdMismatch, LiplabError, NonAdjacentStep, NotQuasiConvex,
                     ThresholdTooCoarse)
from .lipschitz import (LipProfile, SingularSet, dinf_norm, global_lip, lip_field, pointwise_lip,
                        singular_measure, singular_set)
from .metric import (MetricSpace, SpaceReport, analyze_space, distance_to_set, length_distance,
                     length_distance_fw, path_length, quasi_convexity_constant, set_distance,
                     validate_metric)
from .sard import (DemoStep, PerturbParams, PerturbResult, VerifyReport, distance_to_complement,
                   eps_neighborhood, level_set_masses, openness_margin, perturb, residual_demo,
                   select_epsilon, verify)
from .spacegen import gen_grid, gen_path, gen_random_geometric, gen_sierpinski, snowflake

__version__ = "0.1.0"
