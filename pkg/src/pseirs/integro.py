"""Integral forms of the exposed and recovered compartments and the
equivalence verifier between them and the differential system.

For a consistently initialized run the solution satisfies

    E(t) = int_{t-omega}^t gamma*S(x)*I(x)/N(x) * exp(-mu*(t-x)) dx
    R(t) = int_{t-tau}^t   p*alpha*I(x) * exp(-mu*(t-x)) dx

at every t >= 0.  verify_integral_equivalence evaluates both integrals by composite
Simpson quadrature at evenly spaced checkpoints and reports the relative
residuals against the trajectory's own E and R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PseirsParams, Trajectory, _require, kappa
from .dde import _eval_raw
from .errors import InconsistentInit, OutOfDomain, TrajectoryTooShort
from .quadrature import adaptive_simpson


@dataclass(frozen=True)
class EquivalenceReport:
    times: np.ndarray
    e_residuals: np.ndarray
    r_residuals: np.ndarray
    max_residual: float
    consistent_init: bool

    def to_dict(self) -> dict:
        return {"checkpoints": int(len(self.times)),
                "max_residual": float(self.max_residual),
                "consistent_init": bool(self.consistent_init)}


def _check_coverage(traj: Trajectory, t: float, lag: float) -> None:
    if t < 0.0 or t > traj.horizon + 1e-9 * traj.step:
        raise OutOfDomain(f"t={t} outside [0, {traj.horizon}]")
    if t - lag < -traj.kappa - 1e-12:
        raise OutOfDomain(f"trajectory does not cover [{t - lag}, {t}]")


def exposed_integral(traj: Trajectory, t: float, params: PseirsParams,
                     normalize_by_population: bool = True) -> float:
    """Windowed incidence integral equal to E(t) on consistent runs.

    ``normalize_by_population=False`` drops the /N(x) factor (the
    unnormalized restatement); it exists solely to demonstrate that the
    unnormalized form does not match the solver's E.
    """
    gamma, mu, omega = params.gamma, params.mu, params.omega
    _check_coverage(traj, t, omega)

    def f(x):
        s, e, i, r = _eval_raw(traj, x)
        if s == 0.0 or i == 0.0 or gamma == 0.0:
            return 0.0
        if normalize_by_population:
            return gamma * (s / (s + e + i + r)) * i * math.exp(-mu * (t - x))
        return gamma * s * i * math.exp(-mu * (t - x))

    return adaptive_simpson(f, t - omega, t)


def recovered_integral(traj: Trajectory, t: float,
                       params: PseirsParams) -> float:
    """Windowed recovery integral equal to R(t) on consistent runs."""
    p, alpha, mu, tau = params.p, params.alpha, params.mu, params.tau
    _check_coverage(traj, t, tau)

    def f(x):
        i = _eval_raw(traj, x)[2]
        return p * alpha * i * math.exp(-mu * (t - x))

    return adaptive_simpson(f, t - tau, t)


def _relative_residual(a: float, b: float) -> float:
    d = abs(a - b)
    if d == 0.0:
        return 0.0
    return d / max(abs(a), abs(b))


def verify_integral_equivalence(traj: Trajectory, params: PseirsParams,
                    n_checkpoints: int = 20,
                    normalize_by_population: bool = True) -> EquivalenceReport:
    """Compare both integral forms against the trajectory's E and R at
    ``n_checkpoints`` evenly spaced times in [kappa, horizon].

    Checkpoints start at kappa, not 0: earlier residuals would mix history
    and computed solution.  Raises InconsistentInit when the run was
    started with overridden initial values.
    """
    _require(n_checkpoints >= 1, "n_checkpoints", n_checkpoints,
             "n_checkpoints >= 1")
    if traj.init_override:
        raise InconsistentInit(
            "trajectory was initialized with overridden E(0)/R(0)")
    kap = kappa(params)
    if traj.horizon <= kap:
        raise TrajectoryTooShort(
            f"horizon {traj.horizon} must exceed kappa {kap}")
    times = np.linspace(kap, traj.horizon, n_checkpoints)
    e_res = np.empty(n_checkpoints)
    r_res = np.empty(n_checkpoints)
    for idx, t in enumerate(times):
        t = float(t)
        state = _eval_raw(traj, t)
        e_res[idx] = _relative_residual(
            exposed_integral(traj, t, params, normalize_by_population), state[1])
        r_res[idx] = _relative_residual(
            recovered_integral(traj, t, params), state[3])
    return EquivalenceReport(times=times, e_residuals=e_res, r_residuals=r_res,
                             max_residual=float(max(e_res.max(), r_res.max())),
                             consistent_init=not traj.init_override)
