"""Adaptive embedded Runge-Kutta integration of coupling flows.

Flows run in renormalization time t = log(k/Lambda); both directions are
supported (decreasing t is the UV -> IR direction). The stepper is the
Dormand-Prince 5(4) pair with a PI step-size controller. Termination is
event based:

* reached-end: integrated to t_end;
* domain-stop: a stage evaluation kept raising DomainError even after the
  step was bisected down to the floor (the flow hit a domain boundary,
  e.g. vanishing fluctuation mass);
* pole-stop: a coupling exceeded the blow-up threshold (Landau pole);
* step-budget: max_steps accepted steps without reaching t_end.

Samples are recorded at every accepted step; requested checkpoints are hit
exactly by clipping the step, never by interpolation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, LfrgError

__all__ = ["FlowProblem", "FlowTrajectory", "Termination", "integrate"]

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4: the embedded error weights.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200,
               22 / 525, -1 / 40])

BLOWUP_THRESHOLD = 1e12
STEP_FLOOR = 1e-12


@dataclass(frozen=True)
class Termination:
    """Why the integration stopped: kind plus the stopping time and detail."""

    kind: str  # reached-end | domain-stop | pole-stop | step-budget
    t: float
    reason: str = ""

    @property
    def completed(self):
        return self.kind == "reached-end"


@dataclass
class FlowProblem:
    """A beta system with initial data, time span and tolerances.

    system must expose rhs(t, y) -> array and may expose domain_ok(t, y).
    Couplings are given as a plain 3-array or anything with to_array().
    """

    system: object
    g0: object
    t0: float
    t1: float
    Lambda: float = 1.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 10 ** 6
    checkpoints: tuple = ()

    def initial_array(self):
        g0 = self.g0
        arr = g0.to_array() if hasattr(g0, "to_array") else np.asarray(g0, dtype=float)
        return np.array(arr, dtype=float)

    def validate(self):
        if self.t0 == self.t1:
            raise LfrgError("t0 and t1 must differ")
        if not self.Lambda > 0.0:
            raise LfrgError("Lambda must be positive")
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise LfrgError("tolerances must be positive")
        if self.max_steps < 1:
            raise LfrgError("max_steps must be at least 1")


@dataclass
class FlowTrajectory:
    """Sampled solution (t_i, k_i, couplings_i) with its termination."""

    t: np.ndarray
    k: np.ndarray
    couplings: np.ndarray  # shape (n_samples, dim), columns (U0, m2, lambda)
    termination: Termination
    n_accepted: int = 0
    n_rejected: int = 0
    _problem: FlowProblem = field(default=None, repr=False)

    def final_couplings(self):
        return self.couplings[-1]


def _error_norm(err, y_old, y_new, rel_tol, abs_tol):
    scale = abs_tol + rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return math.sqrt(float(np.mean((err / scale) ** 2)))


def integrate(problem: FlowProblem) -> FlowTrajectory:
    """Integrate a FlowProblem; failures are encoded in the termination."""
    problem.validate()
    sys = problem.system
    y = problem.initial_array()
    t = problem.t0
    direction = 1.0 if problem.t1 > problem.t0 else -1.0
    span = abs(problem.t1 - problem.t0)

    # Checkpoints to land on exactly, ordered along the flow direction.
    marks = sorted((c for c in problem.checkpoints
                    if min(problem.t0, problem.t1) < c < max(problem.t0, problem.t1)),
                   reverse=direction < 0)
    marks.append(problem.t1)

    domain_ok = getattr(sys, "domain_ok", None)

    try:
        f = sys.rhs(t, y)
    except DomainError as exc:
        raise LfrgError(f"initial couplings outside the system domain: {exc}") from exc

    ts = [t]
    ys = [y.copy()]
    h = direction * min(1e-3 * span if span > 1e-6 else span, 0.1)
    err_prev = 1.0
    n_acc = 0
    n_rej = 0
    termination = None
    stages = np.empty((7, y.size))

    while termination is None:
        if n_acc >= problem.max_steps:
            termination = Termination("step-budget", t,
                                      f"max_steps={problem.max_steps} exhausted")
            break

        target = marks[0]
        landing = False
        h_full = h
        if direction * (t + h - target) >= 0.0:
            h = target - t
            landing = True

        # Trial step; domain errors bisect h down to the floor.
        try:
            stages[0] = f
            for i in range(1, 7):
                yi = y + h * (stages[:i].T @ _A[i])
                stages[i] = sys.rhs(t + _C[i] * h, yi)
            y_new = y + h * (stages.T @ _B5)
            err_vec = h * (stages.T @ _E)
            stage_fail = None
        except DomainError as exc:
            stage_fail = exc

        if stage_fail is None and domain_ok is not None \
                and not domain_ok(t + h, y_new):
            stage_fail = DomainError(f"accepted state leaves domain near t={t + h:g}")

        if stage_fail is not None:
            if abs(h) <= STEP_FLOOR:
                termination = Termination("domain-stop", t, str(stage_fail))
                break
            h *= 0.5
            n_rej += 1
            continue

        err = _error_norm(err_vec, y, y_new, problem.rel_tol, problem.abs_tol)
        if err <= 1.0:
            t = target if landing else t + h
            y = y_new
            try:
                f = sys.rhs(t, y)  # first stage of the next step
            except DomainError as exc:
                ts.append(t)
                ys.append(y.copy())
                termination = Termination("domain-stop", t, str(exc))
                break
            ts.append(t)
            ys.append(y.copy())
            n_acc += 1

            worst = int(np.argmax(np.abs(y)))
            if abs(y[worst]) > BLOWUP_THRESHOLD:
                label = ("U0", "m2", "lambda")[worst] if y.size == 3 else f"y[{worst}]"
                termination = Termination(
                    "pole-stop", t, f"{label} exceeded {BLOWUP_THRESHOLD:g}")
                break

            if landing:
                marks.pop(0)
                if not marks:
                    termination = Termination("reached-end", t)
                    break

            # PI controller (accept branch); a step clipped for a checkpoint
            # landing resumes from the unclipped size.
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08 if err > 0.0 else 5.0
            h = (h_full if landing else h) * min(5.0, max(0.2, fac))
            err_prev = max(err, 1e-10)
        else:
            n_rej += 1
            h *= min(1.0, max(0.2, 0.9 * err ** -0.2))
            if abs(h) <= STEP_FLOOR:
                termination = Termination(
                    "domain-stop", t, "step size underflow under error control")
                break

    k = problem.Lambda * np.exp(np.asarray(ts))
    return FlowTrajectory(np.asarray(ts), k, np.vstack(ys), termination,
                          n_accepted=n_acc, n_rejected=n_rej, _problem=problem)
