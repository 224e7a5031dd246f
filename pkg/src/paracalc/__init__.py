"""Paraproducts, paralinearization and Neumann-series parametrices for the
1-D semi-linear Dirichlet problem -u'' + u u' = f, with a regularity
calculus over the (s, p) parameter plane."""

from .dyadic import (BlockNormProfile, DyadicPartition, GridFunction, TorusGrid, apply_block,
                     block_norms, build_partition, estimate_smoothness, low_pass, make_grid,
                     sobolev_norm, synthesize_rough)
from .errors import (ConfigurationError, EstimationError, GridMismatchError, ParacalcError,
                     PreconditionError)
from .green import (BoundaryData, ProblemInstance, apply_A, manufacture, poisson_part,
                    solve_dirichlet, trace)
from .paraproduct import (DomainFunction, Paralinearization, apply_L, extend, paralinearize,
                          restrict)
from .parametrix import (ParametrixConfig, SmoothingReport, apply_parametrix, apply_RL,
                         parametrix_residual, smoothing_profile)
from .regcalc import (MinimalNResult, OperatorOrder, SmoothnessPoint, embeds, in_domain_A,
                      in_domain_Lu, in_domain_N, minimal_N, order_omega, rasterize_domains)

__version__ = "0.1.0"

__all__ = [
    "apply_A",
    "apply_block",
    "apply_L",
    "apply_parametrix",
    "apply_RL",
    "block_norms",
    "BlockNormProfile",
    "BoundaryData",
    "build_partition",
    "ConfigurationError",
    "DomainFunction",
    "DyadicPartition",
    "embeds",
    "estimate_smoothness",
    "EstimationError",
    "extend",
    "GridFunction",
    "GridMismatchError",
    "in_domain_A",
    "in_domain_Lu",
    "in_domain_N",
    "low_pass",
    "make_grid",
    "manufacture",
    "minimal_N",
    "MinimalNResult",
    "OperatorOrder",
    "order_omega",
    "ParacalcError",
    "Paralinearization",
    "paralinearize",
    "parametrix_residual",
    "ParametrixConfig",
    "poisson_part",
    "PreconditionError",
    "ProblemInstance",
    "rasterize_domains",
    "restrict",
    "smoothing_profile",
    "SmoothingReport",
    "SmoothnessPoint",
    "sobolev_norm",
    "solve_dirichlet",
    "synthesize_rough",
    "TorusGrid",
    "trace",
]
