import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from conftest import domain
from paracalc.dyadic import make_grid
from paracalc.errors import ConfigurationError
from paracalc.green import (BoundaryData, ProblemInstance, apply_A, manufacture, poisson_part,
                            solve_dirichlet, trace)
from paracalc.paraproduct import DomainFunction, domain_nodes


def green_kernel_solution(f, x):
    """u(x) = int_0^1 G(x, y) f(y) dy with G(x, y) = min(x, y) (1 - max(x, y))."""
    left = quad(lambda y: y * (1.0 - x) * f(y), 0.0, x, epsabs=1e-14, epsrel=1e-13)[0]
    right = quad(lambda y: x * (1.0 - y) * f(y), x, 1.0, epsabs=1e-14, epsrel=1e-13)[0]
    return left + right


def observed_order(levels, errors):
    levels, errors = np.asarray(levels, float), np.asarray(errors, float)
    keep = errors > 1e-12
    if keep.sum() < 2:
        return math.inf
    return -np.polyfit(levels[keep], np.log2(errors[keep]), 1)[0]


# ---------------------------------------------------------------- trace / boundary data

def test_trace_examples(grid10):
    assert trace(domain(grid10, lambda x: x)) == BoundaryData(0.0, 1.0)
    t = trace(domain(grid10, lambda x: np.sin(np.pi * x)))
    assert t.phi0 == 0.0 and abs(t.phi1) < 1e-15
    assert trace(domain(grid10, lambda x: np.ones_like(x))) == BoundaryData(1.0, 1.0)


def test_boundary_data_must_be_finite():
    with pytest.raises(ValueError):
        BoundaryData(math.nan, 0.0)
    with pytest.raises(ValueError):
        BoundaryData(0.0, math.inf)


# ---------------------------------------------------------------- solve_dirichlet

def test_solve_constant_load(grid12):
    u = solve_dirichlet(domain(grid12, np.ones_like))
    x = domain_nodes(grid12)
    assert np.max(np.abs(u.values - x * (1 - x) / 2)) <= 1e-8


def test_solve_sine_mode(grid12):
    u = solve_dirichlet(domain(grid12, lambda x: np.sin(np.pi * x)))
    x = domain_nodes(grid12)
    assert np.max(np.abs(u.values - np.sin(np.pi * x) / np.pi ** 2)) <= 1e-12


def test_solve_zero(grid10):
    assert np.all(solve_dirichlet(DomainFunction.zeros(grid10)).values == 0.0)


def test_solve_matches_green_kernel_quadrature(grid10):
    f = lambda y: np.exp(y) * np.cos(3 * y)
    u = solve_dirichlet(domain(grid10, f))
    x = domain_nodes(grid10)
    for i in (1, 100, 257, 400, 511):
        assert u.values[i] == pytest.approx(green_kernel_solution(f, x[i]), abs=1e-10)


def test_solve_has_zero_trace(grid10):
    u = solve_dirichlet(domain(grid10, lambda x: 3 + x ** 2))
    assert trace(u) == BoundaryData(0.0, 0.0)


@given(st.integers(0, 2 ** 32 - 1), st.floats(-5, 5), st.floats(-5, 5))
@settings(max_examples=20, deadline=None)
def test_linearity_of_solvers(seed, a, b):
    grid = make_grid(8)
    rng = np.random.default_rng(seed)
    f1, f2 = (DomainFunction(grid, rng.standard_normal(grid.half + 1)) for _ in range(2))
    lhs = solve_dirichlet(a * f1 + b * f2).values
    rhs = a * solve_dirichlet(f1).values + b * solve_dirichlet(f2).values
    scale = (abs(a) + abs(b) + 1) * max(np.max(np.abs(solve_dirichlet(f).values)) for f in (f1, f2))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale
    b1, b2 = BoundaryData(*rng.standard_normal(2)), BoundaryData(*rng.standard_normal(2))
    combo = BoundaryData(a * b1.phi0 + b * b2.phi0, a * b1.phi1 + b * b2.phi1)
    lhs = poisson_part(combo, grid).values
    rhs = a * poisson_part(b1, grid).values + b * poisson_part(b2, grid).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (abs(a) + abs(b) + 1) * 4


# ---------------------------------------------------------------- poisson_part

def test_poisson_part_examples(grid10):
    x = domain_nodes(grid10)
    assert np.allclose(poisson_part(BoundaryData(1, 0), grid10).values, 1 - x, atol=1e-15)
    assert np.all(poisson_part(BoundaryData(0, 0), grid10).values == 0.0)
    assert np.allclose(poisson_part(BoundaryData(2, 2), grid10).values, 2.0, atol=1e-15)


def test_poisson_part_trace_is_exact(grid10):
    b = BoundaryData(0.37, -1.9)
    assert trace(poisson_part(b, grid10)) == b


# ---------------------------------------------------------------- apply_A

def test_apply_A_sine(grid12):
    x = domain_nodes(grid12)
    got = apply_A(domain(grid12, lambda x: np.sin(np.pi * x)), M=4)
    assert np.max(np.abs(got.values - np.pi ** 2 * np.sin(np.pi * x))) <= 1e-6


def test_apply_A_quadratic_and_linear_interior(grid12):
    x = domain_nodes(grid12)
    inner = (x >= 0.1) & (x <= 0.9)
    quad_ = apply_A(domain(grid12, lambda x: x * (1 - x)))
    assert np.max(np.abs(quad_.values[inner] - 2.0)) <= 1e-4
    lin = apply_A(domain(grid12, lambda x: 0.5 - 3 * x))
    assert np.max(np.abs(lin.values[inner])) <= 1e-6


# ---------------------------------------------------------------- manufacture

def test_manufacture_sine(grid10):
    inst = manufacture([(1, 1.0)], BoundaryData(0, 0), grid10)
    x = domain_nodes(grid10)
    expected = np.pi ** 2 * np.sin(np.pi * x) + np.pi * np.sin(np.pi * x) * np.cos(np.pi * x)
    assert np.allclose(inst.f.values, expected, atol=1e-12)
    assert inst.boundary.phi0 == 0.0 and abs(inst.boundary.phi1) < 1e-15


def test_manufacture_trivial(grid10):
    zero = manufacture([], BoundaryData(0, 0), grid10)
    assert np.all(zero.f.values == 0) and zero.boundary == BoundaryData(0, 0)
    one = manufacture([], BoundaryData(1, 1), grid10)
    assert np.all(one.f.values == 0) and one.boundary == BoundaryData(1, 1)
    assert np.all(one.u_ref.values == 1.0)


def test_manufacture_cos_mode_trace(grid10):
    inst = manufacture([(1, 0.5)], BoundaryData(0.2, -0.1), grid10, cos_modes=[(2, 0.1)])
    assert inst.boundary.phi0 == pytest.approx(0.3)
    assert inst.boundary.phi1 == pytest.approx(0.0, abs=1e-15)
    assert isinstance(inst, ProblemInstance) and inst.grid == grid10


def test_manufacture_mode_limit():
    grid = make_grid(5)
    with pytest.raises(ConfigurationError):
        manufacture([(k, 0.1) for k in range(1, 6)], BoundaryData(0, 0), grid)
    with pytest.raises(ConfigurationError):
        manufacture([(1.5, 0.1)], BoundaryData(0, 0), grid)


# ---------------------------------------------------------------- identities

def test_left_inverse_identity_converges():
    levels = [9, 10, 11, 12]
    errs = []
    for J in levels:
        grid = make_grid(J)
        u = domain(grid, lambda x: x ** 2 * (1 - x) * np.exp(x) + 0.2 * np.sin(3 * np.pi * x))
        errs.append(np.max(np.abs(solve_dirichlet(apply_A(u)).values - u.values)))
    assert observed_order(levels, errs) >= 2.0


def test_full_linear_solve_converges():
    levels = [9, 10, 11, 12]
    errs = []
    for J in levels:
        inst = manufacture([(1, 0.5), (3, -0.2)], BoundaryData(0.4, 0.1), make_grid(J),
                           cos_modes=[(2, 0.1)])
        u = inst.u_ref
        rebuilt = solve_dirichlet(apply_A(u)) + poisson_part(trace(u), u.grid)
        errs.append(np.max(np.abs(rebuilt.values - u.values)))
    assert observed_order(levels, errs) >= 2.0
    assert errs[-1] <= errs[0]
