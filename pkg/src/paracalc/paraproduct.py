"""Paraproducts, the reflection extension to the torus, and the full
paralinearization of u * du/dx.

Functions on [0, 1] are ``DomainFunction`` samples on the right half of a
``TorusGrid``: torus indices N/2 .. N-1 followed by index 0 (x = -1 is
identified with x = 1).
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .dyadic import GridFunction, default_partition
from .errors import ConfigurationError, GridMismatchError

DEFAULT_ORDER = 4


@dataclass(frozen=True, eq=False)
class DomainFunction:
    grid: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.half + 1,):
            raise ValueError(
                f"expected {self.grid.half + 1} samples on [0, 1], "
                f"got shape {vals.shape}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid, func):
        return cls(grid, func(domain_nodes(grid)))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.half + 1))

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def _check(self, other):
        if isinstance(other, DomainFunction):
            if other.grid != self.grid:
                raise GridMismatchError(
                    f"grid level {self.grid.level} vs {other.grid.level}")
            return other.values
        return other

    def __add__(self, other):
        return DomainFunction(self.grid, self.values + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return DomainFunction(self.grid, self.values - self._check(other))

    def __mul__(self, other):
        return DomainFunction(self.grid, self.values * self._check(other))

    __rmul__ = __mul__

    def __neg__(self):
        return DomainFunction(self.grid, -self.values)


def domain_nodes(grid):
    return np.linspace(0.0, 1.0, grid.half + 1)


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, all derivatives flat at both ends."""
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 1.0, 1.0, 0.0)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


@lru_cache(maxsize=None)
def hestenes_weights(M):
    """Weights c with sum_i c_i * i**k = (-1)**k for k < M.

    Then sum_i c_i u(i*d) matches u(-d) through derivative order M - 1.
    """
    lam = np.arange(1, M + 1, dtype=float)
    vander = np.vander(lam, M, increasing=True).T
    rhs = (-1.0) ** np.arange(M)
    c = np.linalg.solve(vander, rhs)
    c.flags.writeable = False
    return c


@lru_cache(maxsize=None)
def _extension_plan(grid, M):
    half = grid.half
    k = np.arange(1, half)              # complementary arc, x = -1 + k*h
    dist_left = (half - k) * grid.spacing   # distance to x = 0
    dist_right = k * grid.spacing            # distance to x = -1 (= 1)
    cut_left = 1.0 - smooth_step(M * dist_left)
    cut_right = 1.0 - smooth_step(M * dist_right)
    active_left = np.nonzero(cut_left > 0.0)[0]
    active_right = np.nonzero(cut_right > 0.0)[0]
    lam = np.arange(1, M + 1)
    # sample indices into the [0, 1] array; lam*d <= 1 wherever the cutoff is live
    src_left = np.outer(half - k[active_left], lam)
    src_right = half - np.outer(k[active_right], lam)
    x = np.asarray(grid.x)[k]
    blend = smooth_step(x + 1.0)        # 0 at x=-1, 1/2 at x=-1/2, 1 at x=0
    return dict(k=k, x=x, blend=blend, weights=hestenes_weights(M),
                cut_left=cut_left[active_left], idx_left=active_left, src_left=src_left,
                cut_right=cut_right[active_right], idx_right=active_right,
                src_right=src_right)


def _check_order(M):
    if M not in (2, 3, 4):
        raise ConfigurationError(f"reflection order M={M} not in {{2, 3, 4}}")


def extend(u, M=DEFAULT_ORDER):
    """Periodic extension of ``u`` from [0, 1] to the torus [-1, 1).

    The affine interpolant of the boundary values is continued linearly past
    both ends and the two continuations are blended smoothly around
    x = -1/2.  The remainder, which vanishes at 0 and 1, is continued by an
    order-M Hestenes reflection about each endpoint, damped to zero within
    distance 1/M.  Samples on [0, 1] are reproduced exactly.
    """
    _check_order(M)
    grid = u.grid
    plan = _extension_plan(grid, M)
    half = grid.half
    vals = u.values
    u0, u1 = vals[0], vals[-1]
    slope = u1 - u0
    nodes = domain_nodes(grid)
    rest = vals - (u0 + slope * nodes)

    x = plan["x"]
    from_left = u0 + slope * x
    from_right = u1 + slope * (x + 1.0)
    arc = from_right + plan["blend"] * (from_left - from_right)

    w = plan["weights"]
    arc[plan["idx_left"]] += plan["cut_left"] * (rest[plan["src_left"]] @ w)
    arc[plan["idx_right"]] += plan["cut_right"] * (rest[plan["src_right"]] @ w)

    out = np.empty(grid.n_points)
    out[half:] = vals[:half]
    out[0] = vals[half]
    out[1:half] = arc
    return GridFunction(grid, out)


def restrict(g):
    half = g.grid.half
    return DomainFunction(g.grid, np.append(g.values[half:], g.values[0]))


def paraproduct(kind, g, h, partition=None):
    """pi_1, pi_2 or pi_3 of two grid functions.

    pi_1(g, h) = sum_{j>=2} S_{j-2} g * Phi_j(D) h with S_k the partial sum of
    blocks 0..k; pi_3(g, h) = pi_1(h, g); pi_2 is the remainder of g*h.
    """
    if g.grid != h.grid:
        raise GridMismatchError(
            f"grid level {g.grid.level} vs {h.grid.level}")
    part = partition if partition is not None else default_partition(g.grid)
    if kind == 1:
        return _pi1(g, h, part)
    if kind == 3:
        return _pi1(h, g, part)
    if kind == 2:
        rest = g.values * h.values - _pi1(g, h, part).values - _pi1(h, g, part).values
        return GridFunction(g.grid, rest)
    raise ValueError(f"paraproduct kind must be 1, 2 or 3, got {kind!r}")


def _pi1(g, h, part):
    gb = part.decompose(g)
    hb = part.decompose(h)
    low = np.cumsum(gb, axis=0)
    # block j of h pairs with the partial sum of g up to j - 2
    acc = np.einsum("jk,jk->k", low[:-2], hb[2:])
    return GridFunction(g.grid, acc)


@dataclass(frozen=True, eq=False)
class Paralinearization:
    """L_u for a fixed u: caches the extension of u and its derivative."""

    base: DomainFunction
    extended: GridFunction
    extended_derivative: GridFunction
    partition: object
    order: int = DEFAULT_ORDER

    @property
    def grid(self):
        return self.base.grid


def paralinearize(u, partition=None, M=DEFAULT_ORDER):
    part = partition if partition is not None else default_partition(u.grid)
    if part.grid != u.grid:
        raise GridMismatchError("partition and u live on different grids")
    lu = extend(u, M)
    return Paralinearization(u, lu, lu.derivative(), part, M)


def three_term_sum(L, lv):
    """pi_1(lu, d lv) + pi_2(lu, d lv) + pi_3(lv, d lu) on the torus."""
    dlv = lv.derivative()
    part = L.partition
    return (paraproduct(1, L.extended, dlv, part)
            + paraproduct(2, L.extended, dlv, part)
            + paraproduct(3, lv, L.extended_derivative, part))


def apply_L(L, v):
    if v.grid != L.grid:
        raise GridMismatchError(
            f"L_u on level {L.grid.level}, v on level {v.grid.level}")
    return restrict(-three_term_sum(L, extend(v, L.order)))


def nonlinearity(u, M=DEFAULT_ORDER):
    """Discrete u * du/dx: restriction of the extension times its derivative."""
    lu = extend(u, M)
    return restrict(lu * lu.derivative())
