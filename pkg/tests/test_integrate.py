import math

import numpy as np
import pytest

from lfrg import zeta3
from lfrg.errors import LfrgError
from lfrg.flows import MinkowskiVacuumSystem, ThermalHighTSystem
from lfrg.integrate import FlowProblem, Termination, integrate

PI2 = math.pi ** 2


class ExponentialDecay:
    """dg/dt = -g, exact solution e^-t."""

    def rhs(self, t, y):
        return -y


class RestrictedQuartic:
    """One-dimensional quartic flow on the m2 = 0 invariant line.

    dl/dt = 3 l^2 / 8 pi^2, exact solution l0 / (1 - 3 l0 t / 8 pi^2).
    """

    def rhs(self, t, y):
        return 3.0 * y * y / (8.0 * PI2)

    @staticmethod
    def exact(l0, t):
        return l0 / (1.0 - 3.0 * l0 * t / (8.0 * PI2))


class SquareBlowup:
    """dg/dt = g^2 from g0 = 1: pole at t = 1."""

    def rhs(self, t, y):
        return y * y


def thermal_fp_array():
    return np.array([zeta3() / (2 * PI2), -0.4, (8.0 / 3.0) * PI2 * 0.6 ** 1.5])


class TestBasicAccuracy:
    def test_exponential_decay(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 5.0))
        assert traj.termination.kind == "reached-end"
        assert traj.final_couplings()[0] == pytest.approx(math.exp(-5.0), rel=1e-9)

    def test_restricted_quartic_closed_form(self):
        sys = RestrictedQuartic()
        traj = integrate(FlowProblem(sys, np.array([0.1]), 0.0, 5.0))
        assert traj.final_couplings()[0] == pytest.approx(sys.exact(0.1, 5.0),
                                                          rel=1e-8)
        # compare along the whole trajectory, not only the endpoint
        for t, lam in zip(traj.t, traj.couplings[:, 0]):
            assert lam == pytest.approx(sys.exact(0.1, t), rel=1e-8)

    def test_convergence_order(self):
        # stronger coupling so the error is far above the roundoff floor
        sys = RestrictedQuartic()
        l0, T = 10.0, 2.0
        exact = sys.exact(l0, T)
        hs, errs = [], []
        for tol in (1e-6, 1e-8, 1e-10):
            traj = integrate(FlowProblem(sys, np.array([l0]), 0.0, T,
                                         rel_tol=tol, abs_tol=1e-14))
            hs.append(T / traj.n_accepted)
            errs.append(abs(traj.final_couplings()[0] - exact) / exact)
        order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert order >= 4.5

    def test_error_scales_with_tolerance(self):
        sys = RestrictedQuartic()
        l0, T = 10.0, 2.0
        exact = sys.exact(l0, T)
        errs = []
        for tol in (1e-6, 1e-10):
            traj = integrate(FlowProblem(sys, np.array([l0]), 0.0, T,
                                         rel_tol=tol, abs_tol=1e-14))
            errs.append(abs(traj.final_couplings()[0] - exact) / exact)
        assert errs[1] < 1e-2 * errs[0]

    def test_time_reversal(self):
        sys = MinkowskiVacuumSystem()
        g0 = np.array([0.0, 0.1, 0.5])
        fwd = integrate(FlowProblem(sys, g0, 0.0, 3.0))
        back = integrate(FlowProblem(sys, fwd.final_couplings(), 3.0, 0.0))
        assert np.max(np.abs(back.final_couplings() - g0)) <= 10 * 1e-10

    def test_thermal_fixed_point_stays_put(self):
        # double rounding of the fixed point seeds the relevant direction,
        # which grows like e^(5t/3); budget for that amplification
        fp = thermal_fp_array()
        traj = integrate(FlowProblem(ThermalHighTSystem(), fp, 0.0, 10.0))
        drift = np.abs(traj.couplings - fp).max(axis=1)
        assert drift[traj.t <= 5.0].max() <= 1e-9
        assert drift.max() <= 1e-7


class TestTermination:
    def test_reached_end_properties(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 1.0))
        assert traj.termination.completed
        assert traj.t[0] == 0.0 and traj.t[-1] == 1.0
        assert np.all(np.diff(traj.t) > 0)
        assert traj.k[0] == 1.0
        assert traj.k[-1] == pytest.approx(math.e, rel=1e-15)

    def test_pole_stop(self):
        traj = integrate(FlowProblem(SquareBlowup(), np.array([1.0]), 0.0, 2.0,
                                     rel_tol=1e-8, abs_tol=1e-10))
        assert traj.termination.kind == "pole-stop"
        assert traj.termination.t < 2.0
        assert abs(traj.final_couplings()[0]) > 1e12

    def test_thermal_runaway_hits_mass_boundary(self):
        # the quartic blow-up drags m2 to the -1 boundary before lambda
        # reaches the pole threshold; the flow must stop cleanly either way
        g0 = np.array([0.0, 0.0, 300.0])
        traj = integrate(FlowProblem(ThermalHighTSystem(), g0, 0.0, 5.0,
                                     rel_tol=1e-8, abs_tol=1e-10))
        assert traj.termination.kind == "domain-stop"
        assert np.all(1.0 + traj.couplings[:, 1] > 0.0)

    def test_domain_stop_on_mass_boundary(self):
        # strong negative mass drive: m2 reaches -1 in finite time
        g0 = np.array([0.0, -0.5, 20.0])
        traj = integrate(FlowProblem(ThermalHighTSystem(), g0, 0.0, 5.0,
                                     rel_tol=1e-8, abs_tol=1e-10))
        assert traj.termination.kind == "domain-stop"
        # every emitted sample satisfies the domain constraint
        assert np.all(1.0 + traj.couplings[:, 1] > 0.0)

    def test_step_budget(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 5.0,
                                     max_steps=5))
        assert traj.termination.kind == "step-budget"
        assert traj.n_accepted == 5

    def test_invalid_problems(self):
        with pytest.raises(LfrgError):
            integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 1.0, 1.0))
        with pytest.raises(LfrgError):
            integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 1.0,
                                  rel_tol=-1.0))
        with pytest.raises(LfrgError):
            # initial couplings outside the domain
            integrate(FlowProblem(ThermalHighTSystem(),
                                  np.array([0.0, -2.0, 0.1]), 0.0, 1.0))


class TestCheckpoints:
    def test_exact_landing(self):
        marks = (0.7, 1.3, 2.9)
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 3.0,
                                     checkpoints=marks))
        for c in marks:
            assert c in traj.t

    def test_descending_direction(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, -2.0,
                                     checkpoints=(-0.5, -1.5)))
        assert traj.termination.kind == "reached-end"
        assert -0.5 in traj.t and -1.5 in traj.t
        assert np.all(np.diff(traj.t) < 0)

    def test_out_of_span_checkpoints_ignored(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 1.0,
                                     checkpoints=(5.0, -1.0)))
        assert traj.termination.kind == "reached-end"


class TestTrajectoryShape:
    def test_samples_at_accepted_steps(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 1.0))
        assert traj.t.size == traj.n_accepted + 1
        assert traj.couplings.shape == (traj.t.size, 1)

    def test_k_column(self):
        traj = integrate(FlowProblem(ExponentialDecay(), np.array([1.0]), 0.0, 1.0,
                                     Lambda=2.5))
        assert np.allclose(traj.k, 2.5 * np.exp(traj.t))
