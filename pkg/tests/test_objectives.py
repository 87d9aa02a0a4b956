import numpy as np
import pytest

import onefifth as of
from onefifth.errors import ConstructionError, DimensionMismatchError
from onefifth.objectives import finite_diff_gradient, jump_transform


def test_sphere_values_and_batch_shape():
    core = of.sphere(3)
    assert core(np.array([1.0, 2.0, 2.0])) == 9.0
    batch = core(np.arange(12.0).reshape(4, 3))
    assert batch.shape == (4,)
    assert batch[0] == 0.0 + 1.0 + 4.0


def test_sphere_gradient_and_log():
    core = of.sphere(2)
    x = np.array([3.0, 4.0])
    assert np.allclose(core.gradient(x), [6.0, 8.0])
    assert np.isclose(core.log_evaluate(x), np.log(25.0))


def test_norm_power_variants():
    x = np.array([3.0, -4.0])
    assert np.isclose(of.norm_power(2, 1, 2.0)(x), 49.0)
    assert np.isclose(of.norm_power(2, 2, 3.0)(x), 125.0)
    assert np.isclose(of.norm_power(2, "inf", 2.0)(x), 16.0)
    with pytest.raises(ConstructionError):
        of.norm_power(2, 3, 2.0)
    with pytest.raises(ConstructionError):
        of.norm_power(2, 2, -1.0)


def test_convex_quadratic_validation():
    with pytest.raises(ConstructionError):
        of.convex_quadratic(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ConstructionError):
        of.convex_quadratic(np.diag([1.0, -1.0]))
    core = of.convex_quadratic(np.diag([1.0, 10.0]))
    assert np.isclose(core(np.array([1.0, 1.0])), 5.5)


def test_modulated_validation_and_positivity():
    with pytest.raises(ConstructionError):
        of.modulated(5, beta=1.0)
    core = of.modulated(5, alpha=2.0, beta=0.9)
    rng = np.random.default_rng(0)
    vals = core(rng.standard_normal((1000, 5)))
    assert np.all(vals > 0)


def test_linear_is_flagged_non_positive():
    core = of.linear(4)
    assert not core.positive
    assert core(np.array([-2.0, 5.0, 0.0, 0.0])) == -2.0


def test_objective_transform_and_optimum():
    fn = of.ObjectiveFunction(of.sphere(2), of.SQRT,
                              optimum=np.array([1.0, 0.0]))
    assert np.isclose(fn(np.array([4.0, 4.0])), 5.0)
    assert fn.label == "sphere:g=sqrt"
    with pytest.raises(DimensionMismatchError):
        of.ObjectiveFunction(of.sphere(2), optimum=np.zeros(3))


def test_jump_transform_is_strictly_increasing():
    g = jump_transform(c=1.0)
    u = np.linspace(0.0, 3.0, 200)
    assert np.all(np.diff(g(u)) > 0)


def test_parse_function_key_round_trips():
    fn = of.parse_function_key("normpow:p=1:alpha=3:g=log1p", 4)
    assert fn.core.degree == 3.0
    assert fn.transform.label == "log1p"
    quad = of.parse_function_key("quad:diag:1,10", 4)
    x = np.zeros(4)
    x[2] = 1.0
    assert np.isclose(quad(x), 0.5)  # diagonal entries cycle: 1,10,1,10
    with pytest.raises(ConstructionError):
        of.parse_function_key("rosenbrock", 4)
    with pytest.raises(ConstructionError):
        of.parse_function_key("sphere:g=exp", 4)
    with pytest.raises(ConstructionError):
        of.parse_function_key("quad:1,10", 4)


def test_finite_diff_gradient_matches_analytic():
    core = of.sphere(5)
    rng = np.random.default_rng(3)
    x = rng.standard_normal(5)
    assert np.allclose(finite_diff_gradient(core, x), core.gradient(x),
                       rtol=1e-7, atol=1e-7)


def test_check_homogeneity_flags_inhomogeneous_function():
    bad = of.HomogeneousCore(
        label="bad", degree=2.0, dim=3,
        evaluate=lambda x: (x * x).sum(axis=-1) + 1.0)
    report = of.check_homogeneity(bad, trials=100, rtol=1e-8, seed=0)
    assert not report.passed
    assert report.worst_relative_residual > 1e-3


def test_euler_residual_rejects_origin():
    with pytest.raises(ValueError):
        of.euler_residual(of.sphere(2), np.zeros(2))


def test_sphere_bounds_on_the_sphere_itself():
    bounds = of.estimate_sphere_bounds(of.sphere(6), samples=1000, seed=0)
    assert np.isclose(bounds.m, 1.0)
    assert np.isclose(bounds.M, 1.0)
    with pytest.raises(ConstructionError):
        of.SphereBounds(2.0, 1.0, 10)


def test_builtin_catalog_contents():
    catalog = of.builtin_catalog(4)
    labels = [fn.label for fn in catalog]
    assert "sphere" in labels
    assert any(l.startswith("quad") for l in labels)
    assert all(fn.dim == 4 for fn in catalog)
