import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import domain, rel_err
from paracalc.dyadic import make_grid
from paracalc.errors import ConfigurationError, GridMismatchError
from paracalc.green import BoundaryData, ProblemInstance, manufacture
from paracalc.paraproduct import DomainFunction, domain_nodes, paralinearize
from paracalc.parametrix import (ParametrixConfig, SmoothingReport, apply_parametrix, apply_RL,
                                 fitted_order, interior_taper, parametrix_residual, power_RL,
                                 refinement_study, rough_domain_function, smoothing_profile,
                                 smoothing_remainder)


def test_config_bounds():
    ParametrixConfig(N=0)
    ParametrixConfig(N=64)
    with pytest.raises(ConfigurationError):
        ParametrixConfig(N=65)
    with pytest.raises(ConfigurationError):
        ParametrixConfig(N=-1)


def test_remainder_slot_is_zero(grid10):
    assert np.all(smoothing_remainder(DomainFunction.zeros(grid10)).values == 0.0)


# ---------------------------------------------------------------- R L_u

def test_RL_trivial_cases(grid10):
    v = rough_domain_function(1.5, 0, grid10)
    L0 = paralinearize(DomainFunction.zeros(grid10))
    assert np.all(apply_RL(L0, v).values == 0.0)
    L = paralinearize(v)
    assert np.all(apply_RL(L, DomainFunction.zeros(grid10)).values == 0.0)


def test_RL_sine_against_green_kernel_integral(grid12):
    u = domain(grid12, lambda x: np.sin(np.pi * x))
    got = apply_RL(paralinearize(u), u)
    load = lambda y: -np.pi * np.sin(np.pi * y) * np.cos(np.pi * y)
    x = domain_nodes(grid12)
    for i in (0, 205, 1024, 1500, 2048):
        xi = x[i]
        ref = (quad(lambda y: y * (1 - xi) * load(y), 0, xi, epsabs=1e-14)[0]
               + quad(lambda y: xi * (1 - y) * load(y), xi, 1, epsabs=1e-14)[0])
        assert abs(got.values[i] - ref) <= 1e-5


# ---------------------------------------------------------------- P^(N)

def test_parametrix_small_N(grid10):
    u = rough_domain_function(1.5, 1, grid10)
    w = rough_domain_function(1.0, 2, grid10)
    L = paralinearize(u)
    assert np.all(apply_parametrix(L, ParametrixConfig(N=0), w).values == 0.0)
    assert np.array_equal(apply_parametrix(L, ParametrixConfig(N=1), w).values, w.values)
    L0 = paralinearize(DomainFunction.zeros(grid10))
    for N in (1, 3, 6):
        assert np.array_equal(apply_parametrix(L0, ParametrixConfig(N=N), w).values, w.values)


def test_parametrix_is_partial_neumann_sum(grid10):
    u = rough_domain_function(1.5, 4, grid10)
    w = rough_domain_function(1.0, 5, grid10)
    L = paralinearize(u)
    direct = sum((power_RL(L, w, k) for k in range(4)), DomainFunction.zeros(grid10))
    assert rel_err(apply_parametrix(L, ParametrixConfig(N=4), w).values, direct.values) <= 1e-12


def test_telescoping(grid10):
    u = rough_domain_function(1.5, 6, grid10)
    L = paralinearize(u)
    cfg = ParametrixConfig(N=4)
    for seed in range(3):
        v = rough_domain_function(1.0, 10 + seed, grid10)
        lhs = apply_parametrix(L, cfg, v - apply_RL(L, v))
        rhs = v - power_RL(L, v, 4)
        assert rel_err(lhs.values, rhs.values) <= 1e-10


# ---------------------------------------------------------------- residual

def test_residual_of_zero_problem(grid10):
    zero = DomainFunction.zeros(grid10)
    inst = ProblemInstance(zero, BoundaryData(0, 0), zero)
    for N in (0, 1, 3):
        rho, sup = parametrix_residual(inst, zero, ParametrixConfig(N=N))
        assert sup == 0.0 and np.all(rho.values == 0.0)


def test_residual_grid_mismatch(grid10):
    inst = manufacture([(1, 1.0)], BoundaryData(0, 0), grid10)
    with pytest.raises(GridMismatchError):
        parametrix_residual(inst, DomainFunction.zeros(make_grid(8)), ParametrixConfig())


def _check_converges(rows):
    levels = [J for J, _ in rows]
    errs = [e for _, e in rows]
    for a, b in zip(errs, errs[1:]):
        assert b <= a or b <= 1e-12
    assert fitted_order(levels, errs) >= 2.0
    return errs


def test_residual_sine_converges():
    errs = _check_converges(refinement_study([(1, 1.0)], BoundaryData(0, 0), range(9, 13), 3))
    assert errs[-1] <= 1e-4


def test_residual_with_boundary_data_converges():
    _check_converges(refinement_study([(1, 0.3), (2, 0.1)], BoundaryData(0.2, -0.1),
                                      range(9, 13), 3))


def test_residual_with_clean_order():
    rows = refinement_study([(1, 0.5), (3, -0.2), (5, 0.05)], BoundaryData(0.4, 0.1),
                            range(9, 13), 2, cos_modes=[(2, 0.1)])
    order = fitted_order([J for J, _ in rows], [e for _, e in rows])
    assert math.isfinite(order) and order >= 2.0


def test_increasing_N_does_not_increase_residual():
    inst = manufacture([(1, 0.5), (3, -0.2), (5, 0.05)], BoundaryData(0.4, 0.1), make_grid(10),
                       cos_modes=[(2, 0.1)])
    sups = [parametrix_residual(inst, inst.u_ref, ParametrixConfig(N=N))[1] for N in range(1, 6)]
    for a, b in zip(sups, sups[1:]):
        assert b <= a + 1e-10


def test_fitted_order_rules():
    levels = [9, 10, 11, 12]
    assert fitted_order(levels, [2.0 ** (-2 * J) * 1e6 for J in levels]) == pytest.approx(2.0)
    assert fitted_order(levels, [1e-8, 1e-13, 1e-14, 1e-15]) == math.inf
    assert fitted_order(levels, [1e-6, 1e-7, 1e-13, 1e-14]) == pytest.approx(-np.log2(0.1))


# ---------------------------------------------------------------- smoothing

def test_interior_taper_vanishes_off_domain(grid10):
    w = domain(grid10, np.ones_like)
    t = interior_taper(w)
    assert np.all(t.values[:grid10.half] == 0.0)
    assert t.values[grid10.half + grid10.half // 2] == pytest.approx(1.0)


def test_smoothing_gain_rough_input(grid12):
    u = rough_domain_function(1.5, 0, grid12)
    rep = smoothing_profile(u, ParametrixConfig(N=2), 2.0)
    assert isinstance(rep, SmoothingReport) and len(rep.sigmas) == 3
    assert rep.gains[0] >= (2 - 1.0) - 0.3


def test_smoothing_gain_band_rougher_input(grid12):
    rep = smoothing_profile(rough_domain_function(0.75, 1, grid12), ParametrixConfig(N=2))
    for g in rep.gains:
        assert abs(g - 1.0) <= 0.3


def test_smooth_input_saturates(grid12):
    inst = manufacture([(1, 0.5), (2, 0.2)], BoundaryData(0, 0), grid12)
    rep = smoothing_profile(inst.u_ref, ParametrixConfig(N=2))
    assert all(rep.saturated)
    assert rep.gains == (None, None)


def test_smoothing_profile_extension_readout_runs(grid10):
    rep = smoothing_profile(rough_domain_function(1.5, 0, grid10), ParametrixConfig(N=1),
                            readout="extension")
    assert len(rep.sigmas) == 2
    with pytest.raises(ValueError):
        smoothing_profile(rough_domain_function(1.5, 0, grid10), ParametrixConfig(N=1),
                          readout="bogus")
    with pytest.raises(ValueError):
        smoothing_profile(DomainFunction.zeros(grid10), ParametrixConfig(N=1))


def test_rough_domain_function_has_zero_trace(grid10):
    u = rough_domain_function(1.0, 3, grid10)
    assert u.values[0] == 0.0 and abs(u.values[-1]) < 1e-15
