"""Fixed points of dimensionless beta systems and their critical exponents.

Roots are found by a damped Newton iteration with a central finite
difference Jacobian and Armijo backtracking. The stability matrix at a root
is the same FD Jacobian; critical exponents are minus its eigenvalues, so a
relevant (UV-attractive) direction has a positive exponent. For the
one-dimensional reference flow dg/dt = -g the reported exponent is +1.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = ["FixedPointReport", "find_fixed_point", "stability_analysis",
           "scan_fixed_points"]

# Central-difference Jacobian steps: relative 1e-6 with absolute floor 1e-8.
_JAC_REL = 1e-6
_JAC_ABS = 1e-8


@dataclass
class FixedPointReport:
    """A fixed point with its linearization.

    exponents[i] = -eigenvalues[i]; classification counts the directions
    with positive (relevant), negative (irrelevant) and zero (marginal)
    exponent real part and labels the point uv-attractive, ir-attractive
    or mixed accordingly.
    """

    location: object
    residual_norm: float
    stability_matrix: np.ndarray
    eigenvalues: np.ndarray
    exponents: np.ndarray
    classification: str
    n_relevant: int
    n_irrelevant: int
    n_marginal: int
    n_iterations: int = 0


def _rhs_vec(system, t, y):
    return np.asarray(system.rhs(t, y), dtype=float)


def _fd_jacobian(system, y, at_t, scale=1.0):
    n = y.size
    jac = np.empty((n, n))
    for j in range(n):
        h = scale * max(_JAC_REL * abs(y[j]), _JAC_ABS)
        yp = y.copy()
        ym = y.copy()
        yp[j] += h
        ym[j] -= h
        jac[:, j] = (_rhs_vec(system, at_t, yp) - _rhs_vec(system, at_t, ym)) / (2 * h)
    return jac


def find_fixed_point(system, guess, tol=1e-12, max_iter=200, at_t=0.0):
    """Damped Newton search for a zero of the beta system.

    guess may be a CouplingVector or a 3-array in the system's variables.
    Non-autonomous systems are evaluated at frozen time at_t. Converged
    means the max-norm of the rates drops to tol. Raises ConvergenceError
    (carrying the last iterate and residual) when the iteration budget is
    spent, and DomainError if the iterates leave the domain irrecoverably.
    """
    y = guess.to_array() if hasattr(guess, "to_array") else np.array(guess, dtype=float)
    try:
        r = _rhs_vec(system, at_t, y)
    except DomainError as exc:
        raise DomainError(f"initial guess outside the system domain: {exc}") from exc

    res = float(np.max(np.abs(r)))
    for it in range(max_iter):
        if res <= tol:
            return _report(system, y, res, at_t, n_iterations=it)
        jac = _fd_jacobian(system, y, at_t)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            # Flows with an inert component (the de Sitter system carries no
            # U0 beta) have a zero row and column; take the minimum-norm step.
            step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            raise ConvergenceError("Newton step is not finite",
                                   last_iterate=y, residual=res)
        # Armijo backtracking on the residual norm, halving up to 30 times.
        lam = 1.0
        for _ in range(31):
            y_try = y + lam * step
            try:
                r_try = _rhs_vec(system, at_t, y_try)
            except DomainError:
                lam *= 0.5
                continue
            res_try = float(np.max(np.abs(r_try)))
            if res_try < res or res_try <= tol:
                break
            lam *= 0.5
        else:
            raise ConvergenceError(
                "Newton line search stalled (30 halvings without decrease)",
                last_iterate=y, residual=res)
        y, r, res = y_try, r_try, res_try
    if res <= tol:
        return _report(system, y, res, at_t, n_iterations=max_iter)
    raise ConvergenceError(f"Newton did not converge in {max_iter} iterations "
                           f"(residual {res:g})", last_iterate=y, residual=res)


def _classify(exponents):
    tol = 1e-8
    re = exponents.real
    n_rel = int(np.sum(re > tol))
    n_irr = int(np.sum(re < -tol))
    n_marg = exponents.size - n_rel - n_irr
    if n_rel == exponents.size:
        label = "uv-attractive"
    elif n_irr == exponents.size:
        label = "ir-attractive"
    else:
        label = "mixed"
    return label, n_rel, n_irr, n_marg


def _report(system, y, res, at_t, fd_scale=1.0, n_iterations=0):
    jac = _fd_jacobian(system, y, at_t, scale=fd_scale)
    eig = np.linalg.eigvals(jac)
    order = np.lexsort((eig.imag, eig.real))
    eig = eig[order]
    theta = -eig
    label, n_rel, n_irr, n_marg = _classify(theta)
    location = system.coupling_vector(y) if hasattr(system, "coupling_vector") else y
    return FixedPointReport(location, res, jac, eig, theta, label,
                            n_rel, n_irr, n_marg, n_iterations)


def stability_analysis(system, fp, at_t=0.0, fd_scale=1.0):
    """Linearization report at an (already converged) fixed point.

    fp must satisfy max|beta| <= 1e-8; the FD Jacobian uses the Newton
    solver's steps scaled by fd_scale, and eigenvalues come from the dense
    QR algorithm.
    """
    y = fp.to_array() if hasattr(fp, "to_array") else np.array(fp, dtype=float)
    res = float(np.max(np.abs(_rhs_vec(system, at_t, y))))
    if res > 1e-8:
        raise DomainError(f"not a fixed point: residual {res:g} > 1e-8")
    return _report(system, y, res, at_t, fd_scale=fd_scale)


def scan_fixed_points(system, grid, tol=1e-12, max_iter=200, at_t=0.0,
                      dedup_radius=1e-6):
    """Newton from every node of a coupling grid; deduplicated roots.

    grid maps coupling names from ("U0", "m2", "lambda") to either a fixed
    value or a (lo, hi, count) range. Non-convergent starts are dropped and
    counted on the returned diagnostics dict. Roots closer than
    dedup_radius in the max norm are merged; the survivors are sorted by
    residual.
    """
    names = ("U0", "m2", "lambda")
    axes = []
    for name in names:
        spec = grid.get(name, 0.0)
        if np.isscalar(spec):
            axes.append([float(spec)])
        else:
            lo, hi, count = spec
            axes.append(list(np.linspace(lo, hi, int(count))))

    reports = []
    n_failed = 0
    for start in itertools.product(*axes):
        try:
            reports.append(find_fixed_point(system, np.array(start), tol=tol,
                                            max_iter=max_iter, at_t=at_t))
        except (ConvergenceError, DomainError):
            n_failed += 1

    unique = []
    for rep in sorted(reports, key=lambda r: r.residual_norm):
        loc = rep.location.to_array() if hasattr(rep.location, "to_array") \
            else np.asarray(rep.location)
        if all(np.max(np.abs(loc - u)) > dedup_radius for u in
               (u.location.to_array() if hasattr(u.location, "to_array")
                else np.asarray(u.location) for u in unique)):
            unique.append(rep)
    diagnostics = {"n_starts": int(np.prod([len(a) for a in axes])),
                   "n_failed": n_failed, "n_converged": len(reports)}
    return unique, diagnostics
