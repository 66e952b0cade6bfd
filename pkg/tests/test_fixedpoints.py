import math

import numpy as np
import pytest

from lfrg import DeSitter, MuMode, zeta3
from lfrg.errors import ConvergenceError, DomainError
from lfrg.fixedpoints import find_fixed_point, scan_fixed_points, stability_analysis
from lfrg.flows import (SIGN_KERNEL, SIGN_PAPER, DeSitterSystem,
                        MinkowskiVacuumSystem, ThermalHighTSystem)

PI2 = math.pi ** 2

THERMAL_M2_STAR = -0.4
THERMAL_U_STAR = zeta3() / (2 * PI2)
THERMAL_LAM_STAR = (8.0 / 3.0) * PI2 * 0.6 ** 1.5


class OneDimensionalDecay:
    """dg/dt = -g; the exponent convention reference point."""

    def rhs(self, t, y):
        return -y


class TestThermalFixedPoint:
    def test_location(self):
        rep = find_fixed_point(ThermalHighTSystem(), np.array([0.05, -0.3, 10.0]))
        loc = rep.location.to_array()
        assert abs(loc[1] - THERMAL_M2_STAR) <= 1e-10
        assert abs(loc[0] - THERMAL_U_STAR) <= 1e-12
        assert loc[2] == pytest.approx(THERMAL_LAM_STAR, rel=1e-9)
        assert rep.residual_norm <= 1e-12

    def test_eigenvalues(self):
        rep = find_fixed_point(ThermalHighTSystem(), np.array([0.05, -0.3, 10.0]))
        eig = np.sort(rep.eigenvalues.real)
        assert np.allclose(eig, [-2.0, -1.0, 5.0 / 3.0], atol=1e-8)
        assert np.allclose(rep.eigenvalues.imag, 0.0, atol=1e-10)

    def test_jacobian_block_structure(self):
        # 2x2 (m2, lambda) block: trace -1/3, determinant -10/3
        rep = find_fixed_point(ThermalHighTSystem(), np.array([0.05, -0.3, 10.0]))
        block = rep.stability_matrix[1:, 1:]
        assert np.trace(block) == pytest.approx(-1.0 / 3.0, abs=1e-8)
        assert np.linalg.det(block) == pytest.approx(-10.0 / 3.0, abs=1e-7)

    def test_exponents_and_classification(self):
        rep = find_fixed_point(ThermalHighTSystem(), np.array([0.05, -0.3, 10.0]))
        assert np.allclose(np.sort(rep.exponents.real), [-5.0 / 3.0, 1.0, 2.0],
                           atol=1e-8)
        assert rep.classification == "mixed"
        assert rep.n_relevant == 2 and rep.n_irrelevant == 1

    def test_local_quadratic_convergence(self):
        exact = np.array([THERMAL_U_STAR, THERMAL_M2_STAR, THERMAL_LAM_STAR])
        start = exact + 1e-3 * np.array([1.0, -1.0, 1.0])
        rep = find_fixed_point(ThermalHighTSystem(), start, tol=1e-12)
        assert rep.n_iterations <= 10


class TestMinkowskiGaussian:
    def test_newton_reaches_origin(self):
        # the quartic direction is degenerate (beta ~ lambda^2), so pinning
        # the location to 1e-10 needs a residual tolerance of lambda_target^2
        rep = find_fixed_point(MinkowskiVacuumSystem(),
                               np.array([0.01, 0.01, 0.01]), tol=1e-22)
        assert np.max(np.abs(rep.location.to_array())) <= 1e-10

    def test_gaussian_eigenvalues(self):
        rep = find_fixed_point(MinkowskiVacuumSystem(),
                               np.array([0.01, 0.01, 0.01]), tol=1e-22)
        assert np.allclose(np.sort(rep.eigenvalues.real), [-4.0, -2.0, 0.0],
                           atol=1e-8)

    def test_scan_finds_only_the_gaussian(self):
        roots, diag = scan_fixed_points(
            MinkowskiVacuumSystem(),
            {"U0": 0.0, "m2": (-0.5, 2.0, 20), "lambda": (0.0, 50.0, 20)},
            tol=1e-20)
        assert len(roots) == 1
        assert np.max(np.abs(roots[0].location.to_array())) <= 1e-8
        assert diag["n_starts"] == 400


class TestDeSitterFixedPoint:
    BG = DeSitter(1.0, 1.0 / 6.0, MuMode.tied_to_h())

    def test_kernel_mode_root(self):
        sysm = DeSitterSystem(self.BG, SIGN_KERNEL, frozen_k2_over_H2=0.0)
        rep = find_fixed_point(sysm, np.array([0.0, -0.08, -58.0]))
        loc = rep.location.to_array()
        assert loc[1] == pytest.approx(-0.0809984726859661, rel=1e-10)
        assert loc[2] == pytest.approx(-57.9152334729976, rel=1e-10)
        assert rep.residual_norm <= 1e-12

    def test_paper_mode_root(self):
        sysm = DeSitterSystem(self.BG, SIGN_PAPER, frozen_k2_over_H2=0.0)
        rep = find_fixed_point(sysm, np.array([0.0, 0.48, 45.7]))
        loc = rep.location.to_array()
        assert loc[1] == pytest.approx(0.4765542870873992, rel=1e-10)
        assert loc[2] == pytest.approx(45.69422971161351, rel=1e-8)

    def test_inert_u0_direction_reported_marginal(self):
        sysm = DeSitterSystem(self.BG, SIGN_KERNEL, frozen_k2_over_H2=0.0)
        rep = find_fixed_point(sysm, np.array([0.0, -0.08, -58.0]))
        assert rep.n_marginal >= 1


class TestStabilityAnalysis:
    def test_requires_a_fixed_point(self):
        with pytest.raises(DomainError):
            stability_analysis(ThermalHighTSystem(), np.array([0.0, 0.0, 1.0]))

    def test_fd_scale_invariance(self):
        rep = find_fixed_point(ThermalHighTSystem(), np.array([0.05, -0.3, 10.0]))
        a = stability_analysis(ThermalHighTSystem(), rep.location, fd_scale=1.0)
        b = stability_analysis(ThermalHighTSystem(), rep.location, fd_scale=2.0)
        assert np.max(np.abs(np.sort(a.eigenvalues.real)
                             - np.sort(b.eigenvalues.real))) < 1e-6

    def test_exponent_convention(self):
        rep = stability_analysis(OneDimensionalDecay(), np.array([0.0]))
        assert rep.exponents.real[0] == pytest.approx(1.0, abs=1e-9)
        assert rep.classification == "uv-attractive"


class TestScan:
    def test_thermal_grid_around_paper_values(self):
        roots, diag = scan_fixed_points(
            ThermalHighTSystem(),
            {"U0": (0.03, 0.09, 10), "m2": (-0.6, -0.2, 10),
             "lambda": (8.0, 16.0, 10)})
        nontrivial = [r for r in roots
                      if abs(r.location.to_array()[2]) > 1e-3]
        assert len(nontrivial) == 1
        loc = nontrivial[0].location.to_array()
        assert loc[1] == pytest.approx(THERMAL_M2_STAR, abs=1e-9)

    def test_every_root_reevaluates_below_tolerance(self):
        sysm = ThermalHighTSystem()
        roots, _ = scan_fixed_points(
            sysm, {"U0": (0.0, 0.1, 3), "m2": (-0.5, 0.0, 3),
                   "lambda": (5.0, 15.0, 3)})
        for rep in roots:
            fresh = np.max(np.abs(sysm.rhs(0.0, rep.location.to_array())))
            assert fresh <= 1e-12

    def test_empty_grid(self):
        roots, diag = scan_fixed_points(ThermalHighTSystem(),
                                        {"m2": (-0.5, 0.0, 0)})
        assert roots == []
        assert diag["n_starts"] == 0


class TestNonConvergence:
    def test_budget_error_carries_iterate(self):
        with pytest.raises(ConvergenceError) as err:
            find_fixed_point(ThermalHighTSystem(), np.array([0.0, 0.5, 30.0]),
                             max_iter=1)
        assert err.value.last_iterate is not None
        assert err.value.residual > 0

    def test_guess_outside_domain(self):
        with pytest.raises(DomainError):
            find_fixed_point(ThermalHighTSystem(), np.array([0.0, -1.5, 1.0]))
