"""Green operator of -u'' = f on [0, 1] with Dirichlet data, and
manufactured problem instances for the semi-linear model -u'' + u u' = f.
"""

from dataclasses import dataclass

import numpy as np
from scipy.fft import dst, idst

from .paraproduct import DEFAULT_ORDER, DomainFunction, domain_nodes, extend, restrict
from .errors import ConfigurationError, GridMismatchError


@dataclass(frozen=True)
class BoundaryData:
    phi0: float
    phi1: float

    def __post_init__(self):
        if not (np.isfinite(self.phi0) and np.isfinite(self.phi1)):
            raise ValueError(f"boundary values must be finite: {self}")


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    f: DomainFunction
    boundary: BoundaryData
    u_ref: DomainFunction = None

    def __post_init__(self):
        if self.u_ref is not None and self.u_ref.grid != self.f.grid:
            raise GridMismatchError("u_ref and f live on different grids")

    @property
    def grid(self):
        return self.f.grid


def trace(u):
    return BoundaryData(float(u.values[0]), float(u.values[-1]))


def solve_dirichlet(f):
    """Zero-boundary solution of -u'' = f via the discrete sine transform.

    The linear interpolant of f's end values is solved in closed form so
    the sine series only sees data vanishing at both ends.
    """
    x = domain_nodes(f.grid)
    f0, f1 = f.values[0], f.values[-1]
    slope = f1 - f0
    u = f0 * x * (1.0 - x) / 2.0 + slope * (x - x ** 3) / 6.0

    rest = f.values[1:-1] - (f0 + slope * x[1:-1])
    if rest.size:
        k = np.arange(1, rest.size + 1)
        coeffs = dst(rest, type=1) / (np.pi * k) ** 2
        u[1:-1] += idst(coeffs, type=1)
    u[0] = u[-1] = 0.0
    return DomainFunction(f.grid, u)


def poisson_part(b, grid):
    """Harmonic (affine) function on [0, 1] with end values b."""
    x = domain_nodes(grid)
    return DomainFunction(grid, b.phi0 * (1.0 - x) + b.phi1 * x)


def apply_A(u, M=DEFAULT_ORDER):
    """-u'' through the spectral second derivative of the torus extension."""
    return restrict(-extend(u, M).derivative(2))


def _parse_modes(modes):
    out = []
    for entry in modes:
        k, amp = entry
        if int(k) != k or k < 0:
            raise ConfigurationError(f"mode number must be a nonnegative integer: {k!r}")
        out.append((int(k), float(amp)))
    return out


def manufacture(modes, boundary, grid, cos_modes=()):
    """Problem instance with a closed-form solution.

    u_ref = sum a_k sin(k pi x) + sum b_k cos(k pi x)
            + phi0 (1 - x) + phi1 x
    and f = -u_ref'' + u_ref u_ref' evaluated analytically at the nodes.
    ``modes`` and ``cos_modes`` are sequences of (k, amplitude).
    """
    sines = _parse_modes(modes)
    cosines = _parse_modes(cos_modes)
    if len(sines) + len(cosines) > 2 ** (grid.level - 3):
        raise ConfigurationError(
            f"{len(sines) + len(cosines)} modes exceed 2**(J-3) = {2 ** (grid.level - 3)}")
    x = domain_nodes(grid)
    u = boundary.phi0 * (1.0 - x) + boundary.phi1 * x
    du = np.full_like(x, boundary.phi1 - boundary.phi0)
    d2u = np.zeros_like(x)
    for k, a in sines:
        w = k * np.pi
        u = u + a * np.sin(w * x)
        du = du + a * w * np.cos(w * x)
        d2u = d2u - a * w * w * np.sin(w * x)
    for k, b in cosines:
        w = k * np.pi
        u = u + b * np.cos(w * x)
        du = du - b * w * np.sin(w * x)
        d2u = d2u - b * w * w * np.cos(w * x)
    f = -d2u + u * du
    u_ref = DomainFunction(grid, u)
    return ProblemInstance(DomainFunction(grid, f), trace(u_ref), u_ref)
