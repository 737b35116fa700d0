"""Tests for minimal-branch continuation and pull-in estimation."""

from fractions import Fraction

import numpy as np
import pytest

from mems4.branch import (
    BranchPoint,
    DivergenceReport,
    analytic_pull_in_bounds,
    continue_branch,
    extremal_diagnostics,
    minimal_solution,
    pull_in_voltage,
    quadratic_lower_bound,
    regularity_verdict,
)
from mems4.closed_forms import (
    HOMOGENEOUS,
    BoundaryPair,
    singular_voltage,
    touchdown_shape,
)
from mems4.radial_operator import assemble_bilaplacian, build_grid, sample_power_sum

F = Fraction


@pytest.fixture(scope="module")
def grid3():
    return build_grid(256, 1.5, 3)


@pytest.fixture(scope="module")
def branch3(grid3):
    # ten voltages strictly below the exact lower bound 32/3 for the fold
    return continue_branch(HOMOGENEOUS, grid3, np.linspace(1.0, 10.0, 10))


def test_quadratic_lower_bound_values():
    assert quadratic_lower_bound(5) == F(416, 27)  # the maximum over N
    assert quadratic_lower_bound(2) == F(128, 27)
    assert quadratic_lower_bound(3) == F(32, 3)
    assert max(quadratic_lower_bound(n) for n in range(1, 41)) == F(416, 27)


def test_zero_voltage_is_trivial(grid3):
    pt = minimal_solution(0.0, HOMOGENEOUS, grid3)
    assert isinstance(pt, BranchPoint)
    assert pt.max_value == 0.0
    assert pt.residual == 0.0
    op = assemble_bilaplacian(grid3, HOMOGENEOUS)
    nu1, _ = op.nu1()
    assert pt.mu1 == pytest.approx(nu1, rel=1e-12)


def test_rejects_inadmissible_pair(grid3):
    with pytest.raises(ValueError):
        minimal_solution(1.0, BoundaryPair(1, 0), grid3)
    with pytest.raises(ValueError):
        minimal_solution(-1.0, HOMOGENEOUS, grid3)


def test_single_solve_below_lower_bound(grid3):
    # 0.9 * 32/3: existence is guaranteed, so the solver must converge.
    pt = minimal_solution(0.9 * 32.0 / 3.0, HOMOGENEOUS, grid3, tol=1e-10)
    assert isinstance(pt, BranchPoint)
    assert pt.max_value < 1.0
    assert pt.residual <= 1e-10
    assert np.all(np.diff(pt.field.values) <= 1e-12)  # radially decreasing


def test_monotone_iterates_nondecreasing(grid3):
    history = []
    pt = minimal_solution(5.0, HOMOGENEOUS, grid3, track_iterates=history)
    assert isinstance(pt, BranchPoint)
    assert len(history) >= 2
    for a, b in zip(history, history[1:]):
        assert np.all(b >= a - 1e-13)


def test_branch_pointwise_monotone_in_voltage(branch3):
    assert len(branch3.points) == 10
    assert branch3.stopped_at is None
    for p, q in zip(branch3.points, branch3.points[1:]):
        assert np.all(q.field.values >= p.field.values - 1e-12)


def test_branch_stability_eigenvalues(branch3):
    mus = [p.mu1 for p in branch3.points]
    assert all(m > 0 for m in mus)
    assert all(a > b for a, b in zip(mus, mus[1:]))  # decreasing toward fold


def test_branch_fields_radially_decreasing(branch3):
    for p in branch3.points:
        assert np.all(np.diff(p.field.values) <= 1e-12)


def test_branch_diagnostics(branch3):
    diag = extremal_diagnostics(branch3.points, 3)
    assert diag.stability_inequality_ok
    assert all(m >= 0 for m in diag.stability_inequality_margins)
    assert np.isfinite(diag.max_energy_h2)
    assert np.isfinite(diag.max_energy_cubed)
    assert diag.touchdown_bound_ok is None  # only checked for N >= 9


def test_empty_voltage_grid(grid3):
    run = continue_branch(HOMOGENEOUS, grid3, [])
    assert run.points == []
    assert run.stopped_at is None


def test_diagnostics_single_trivial_point(grid3):
    pt = minimal_solution(0.0, HOMOGENEOUS, grid3)
    diag = extremal_diagnostics([pt], 3)
    assert diag.stability_inequality_ok
    assert diag.stability_inequality_margins == [0.0]
    assert diag.max_energy_h2 == 0.0


def test_envelope_coefficient_matches_float_path():
    # the rational-bisection cube root agrees with the float path used in
    # the diagnostics
    from mems4.closed_forms import envelope_coefficient, singular_voltage

    lam_hi = 1341.59
    c_float = (lam_hi / float(singular_voltage(17))) ** (1.0 / 3.0)
    c_exact = envelope_coefficient(F(134159, 100), 17)
    assert abs(float(c_exact) - c_float) < 1e-9


def test_voltage_grid_must_increase(grid3):
    with pytest.raises(ValueError):
        continue_branch(HOMOGENEOUS, grid3, [2.0, 1.0])


def test_divergence_above_upper_bound(grid3):
    op = assemble_bilaplacian(grid3, HOMOGENEOUS)
    _, upper = analytic_pull_in_bounds(op)
    out = minimal_solution(1.2 * upper, HOMOGENEOUS, grid3, op=op)
    assert isinstance(out, DivergenceReport)
    assert "ceiling" in out.reason or "Newton" in out.reason
    assert out.last_max >= 0


def test_branch_truncates_at_divergence(grid3):
    op = assemble_bilaplacian(grid3, HOMOGENEOUS)
    _, upper = analytic_pull_in_bounds(op)
    run = continue_branch(HOMOGENEOUS, grid3, [1.0, 5.0, 2.0 * upper], op=op)
    assert len(run.points) == 2
    assert run.stopped_at == 2.0 * upper
    assert isinstance(run.divergence, DivergenceReport)


def test_nonhomogeneous_branch_below_touchdown():
    # At data (0, -4/3) the exact touchdown shape solves the equation at
    # the singular voltage, so just below it the minimal solution exists
    # and stays below that shape at every node.
    grid = build_grid(256, 1.5, 9)
    bp = BoundaryPair(F(0), F(-4, 3))
    lb = float(singular_voltage(9))
    pt = minimal_solution(0.99 * lb, bp, grid)
    assert isinstance(pt, BranchPoint)
    ub = sample_power_sum(touchdown_shape(), grid.nodes)
    assert np.max(pt.field.values - ub) <= 1e-9
    assert pt.mu1 > 0


def test_nonhomogeneous_at_exact_fold_is_edge_case():
    # (0, -4/3) at the singular voltage IS the fold for N = 9 (the shape
    # is a singular semi-stable solution there), so the discrete oracle
    # may fall either way; both outcomes must be sane.
    grid = build_grid(256, 1.5, 9)
    bp = BoundaryPair(F(0), F(-4, 3))
    lb = float(singular_voltage(9))
    out = minimal_solution(lb, bp, grid)
    if isinstance(out, BranchPoint):
        ub = sample_power_sum(touchdown_shape(), grid.nodes)
        assert np.max(out.field.values - ub) <= 1e-6
    else:
        assert out.reason


def test_n17_profiles_below_touchdown_shape():
    grid = build_grid(256, 1.5, 17)
    lb = float(singular_voltage(17))
    run = continue_branch(HOMOGENEOUS, grid, np.linspace(20.0, lb * 0.99, 8))
    assert len(run.points) == 8
    ub = sample_power_sum(touchdown_shape(), grid.nodes)
    for pt in run.points:
        assert np.max(pt.field.values - ub) <= 10 * 1e-10
    diag = extremal_diagnostics(run.points, 17)
    assert diag.touchdown_bound_ok


def test_pull_in_bracket_n2():
    grid = build_grid(256, 1.5, 2)
    est = pull_in_voltage(HOMOGENEOUS, grid, rel_width=1e-4)
    assert est.analytic_lower == F(128, 27)
    assert est.lambda_lo <= est.lambda_hi
    assert (est.lambda_hi - est.lambda_lo) <= 1e-4 * est.lambda_lo * 1.001
    assert float(est.analytic_lower) < est.lambda_lo
    assert est.lambda_hi < est.analytic_upper
    assert est.consistent is True
    assert est.near_fold is not None
    assert est.near_fold.mu1 > 0


def test_pull_in_nonhomogeneous_has_no_analytic_bounds():
    grid = build_grid(128, 1.5, 3)
    est = pull_in_voltage(BoundaryPair(F(1, 10), F(-1, 2)), grid, rel_width=1e-3)
    assert est.analytic_lower is None
    assert est.analytic_upper is None
    assert est.consistent is None
    assert est.lambda_lo <= est.lambda_hi


def test_pull_in_mu1_extrapolation():
    grid = build_grid(128, 1.5, 3)
    est = pull_in_voltage(HOMOGENEOUS, grid, rel_width=1e-4, method="mu1-extrapolation")
    ref = pull_in_voltage(HOMOGENEOUS, grid, rel_width=1e-4)
    assert est.method == "mu1-extrapolation"
    # the extrapolated bracket must overlap the bisection one loosely
    assert est.lambda_lo <= ref.lambda_hi * 1.01
    assert est.lambda_hi >= ref.lambda_lo * 0.97


def test_pull_in_rejects_unknown_method(grid3):
    with pytest.raises(ValueError):
        pull_in_voltage(HOMOGENEOUS, grid3, method="arclength")


def test_regularity_verdict_low_dimension(grid3):
    est = pull_in_voltage(HOMOGENEOUS, grid3, rel_width=1e-5)
    assert regularity_verdict(est, est.near_fold, 3) == "regular-consistent"


def test_regularity_verdict_synthetic_cases(grid3):
    est = pull_in_voltage(HOMOGENEOUS, grid3, rel_width=1e-3)
    pt = est.near_fold
    nearly_touching = BranchPoint(
        lam=pt.lam, field=pt.field, max_value=0.9995, mu1=0.1,
        residual=pt.residual, energy_h2=pt.energy_h2, energy_cubed=pt.energy_cubed,
    )
    # below dimension 9 no bracket condition applies
    assert regularity_verdict(est, nearly_touching, 3) == "singular-consistent"
    # for N >= 9 the bracket must sit below H_N/2: est has tiny lambda_hi,
    # so the condition holds for dimension 17
    assert regularity_verdict(est, nearly_touching, 17) == "singular-consistent"
    middling = BranchPoint(
        lam=pt.lam, field=pt.field, max_value=0.985, mu1=0.1,
        residual=pt.residual, energy_h2=pt.energy_h2, energy_cubed=pt.energy_cubed,
    )
    assert regularity_verdict(est, middling, 3) == "inconclusive"
