"""Finite Neumann-series parametrix for -u'' + u u' = f with Dirichlet data.

For a solution u the identity

    u = P_N (R f + K phi) + Rem u + (R L_u)^N u,
    P_N = I + R L_u + ... + (R L_u)^(N-1),

holds with R the zero-boundary Green operator, K the harmonic extension of
boundary values and Rem = 0 for this problem.
"""

from dataclasses import dataclass
import math

import numpy as np

from .dyadic import (SATURATION_CURVATURE, GridFunction, block_norms, decay_curvature,
                     default_partition, estimate_smoothness, make_grid, synthesize_rough)
from .errors import ConfigurationError, EstimationError, GridMismatchError
from .green import manufacture, poisson_part, solve_dirichlet, trace
from .paraproduct import (DEFAULT_ORDER, DomainFunction, apply_L, domain_nodes, extend,
                          paralinearize, restrict, smooth_step)

MAX_TERMS = 64


@dataclass(frozen=True)
class ParametrixConfig:
    N: int = 3
    M: int = DEFAULT_ORDER
    partition: object = None

    def __post_init__(self):
        if not 0 <= self.N <= MAX_TERMS:
            raise ConfigurationError(f"series length N={self.N} outside [0, {MAX_TERMS}]")


def smoothing_remainder(u):
    """The smoothing remainder of the linear parametrix; identically zero here."""
    return DomainFunction.zeros(u.grid)


def apply_RL(L, v):
    return solve_dirichlet(apply_L(L, v))


def power_RL(L, v, k):
    for _ in range(k):
        v = apply_RL(L, v)
    return v


def apply_parametrix(L, cfg, w):
    """sum_{k<N} (R L_u)^k w by Horner's rule; N = 0 gives the zero operator."""
    if cfg.N == 0:
        return DomainFunction.zeros(w.grid)
    acc = w
    for _ in range(cfg.N - 1):
        acc = w + apply_RL(L, acc)
    return acc


def parametrix_residual(instance, u, cfg):
    """Residual of the parametrix formula for a candidate solution u.

    Returns the residual function and its sup norm.
    """
    if u.grid != instance.grid:
        raise GridMismatchError("instance and u live on different grids")
    L = paralinearize(u, cfg.partition, cfg.M)
    data = solve_dirichlet(instance.f) + poisson_part(instance.boundary, u.grid)
    rhs = (apply_parametrix(L, cfg, data) + smoothing_remainder(u)
           + power_RL(L, u, cfg.N))
    rho = u - rhs
    return rho, rho.sup_norm()


# residuals at or below this are treated as converged to roundoff
ROUNDOFF_FLOOR = 1e-12


def fitted_order(levels, errors, floor=ROUNDOFF_FLOOR):
    """Least-squares convergence order of ``errors`` against grid level.

    Levels whose error is already at the roundoff floor are left out.
    Returns inf when fewer than two levels remain above it and the finer
    levels sit at the floor.
    """
    levels = np.asarray(levels, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = errors > floor
    if keep.sum() < 2:
        return math.inf
    return float(-np.polyfit(levels[keep], np.log2(errors[keep]), 1)[0])


def refinement_study(modes, boundary, levels, N, M=DEFAULT_ORDER, cos_modes=()):
    """Sup-residual of the parametrix formula at each level for a manufactured u."""
    rows = []
    for J in levels:
        inst = manufacture(modes, boundary, make_grid(J), cos_modes)
        _, err = parametrix_residual(inst, inst.u_ref, ParametrixConfig(N=N, M=M))
        rows.append((J, err))
    return rows


@dataclass(frozen=True)
class SmoothingReport:
    """Decay exponents of (R L_u)^k u, k = 0..N, and their successive gains.

    ``None`` marks a saturated iterate, whose block profile either drops
    below the noise floor too early or decays faster than any power law,
    and any gain touching it.
    """

    sigmas: tuple
    gains: tuple

    @property
    def saturated(self):
        return tuple(s is None for s in self.sigmas)


def interior_taper(w, width=0.25):
    """Torus function equal to w times a smooth window vanishing at 0 and 1.

    The window ramps over ``width`` at each end and is zero on the
    complementary arc.
    """
    grid = w.grid
    x = domain_nodes(grid)
    window = smooth_step(x / width) * smooth_step((1.0 - x) / width)
    vals = np.zeros(grid.n_points)
    vals[grid.half:] = (window * w.values)[:-1]
    return GridFunction(grid, vals)


def _read_exponent(profile):
    try:
        if decay_curvature(profile) < SATURATION_CURVATURE:
            return None
        return estimate_smoothness(profile)
    except EstimationError:
        return None


def smoothing_profile(u, cfg, p=2.0, readout="interior"):
    """Block-decay exponents of the iterates (R L_u)^k u, k = 0..N.

    ``readout="interior"`` fits the decay of a smoothly tapered copy of each
    iterate; ``"extension"`` fits the decay of its torus extension, which
    also sees the reflection's amplification of rough data on the arc.
    """
    if not np.any(u.values):
        raise ValueError("smoothing profile needs a nonzero u")
    if readout == "interior":
        lift = interior_taper
    elif readout == "extension":
        lift = lambda w: extend(w, cfg.M)
    else:
        raise ValueError(f"unknown readout {readout!r}")
    part = cfg.partition if cfg.partition is not None else default_partition(u.grid)
    L = paralinearize(u, part, cfg.M)
    sigmas = []
    w = u
    for k in range(cfg.N + 1):
        if k:
            w = apply_RL(L, w)
        sigmas.append(_read_exponent(block_norms(part, lift(w), p)))
    gains = tuple(
        None if a is None or b is None else b - a
        for a, b in zip(sigmas, sigmas[1:]))
    return SmoothingReport(tuple(sigmas), gains)


def rough_domain_function(sigma, seed, grid):
    """synthesize_rough restricted to [0, 1] with its boundary values removed."""
    u = restrict(synthesize_rough(sigma, seed, grid))
    return u - poisson_part(trace(u), grid)
