"""Closed-form a priori constants and their empirical verification.

The dissipativity gate beta = sigma*(lf+1)*exp(mu*tau) < mu yields an
absorbing ball of radius

    c3 = 2 * (||g||/mu + ||g|| beta / (mu (mu - beta))),

entered before the absorbing time T_D computed from the explicit decay of
the history-dependent terms.  Under the stronger gap mu - sigma - 1 > 0 the
energy machinery produces

    c1 = (||g||^2 / mu + 2 ||f(0)||^2) / (mu - sigma - 1),
    c2 = exp((mu - sigma - 1) tau),
    c4 = c2 ||phi(0)||^2 / 2 + (sigma + lf^2) c3^2 / (mu - sigma - 1) + c1 / 2,
    c5 = sqrt(c4) + ((mu + sigma + lf) c3 + ||f(0)|| + ||g||) (1 + tau),

bounding the time integral of the squared C^1 segment norm and the time
modulus of continuity respectively.  Constants whose sign conditions fail
are reported as infinite with feasibility flags — an infeasible certificate
is data, not an error.

All catalog nonlinearities satisfy f(0) = 0, so the ||f(0)|| terms vanish;
they are kept in the formulas for fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ProblemParameters, check_dissipativity
from .semigroup import Field, gradient_norm
from .solver import HistorySegment, Trajectory, far_field_mass, segment_at, segment_norm

__all__ = [
    "EstimateSet",
    "absorbing_time",
    "compute_estimates",
    "verify_absorption",
    "verify_energy_integral",
    "verify_far_field",
]

#: Relative allowance used when comparing certificates against measured
#: trajectory quantities (discretization slack, distinct from arithmetic
#: tolerances which are 1e-12).
CERTIFICATE_TOLERANCE = 0.05


@dataclass(frozen=True)
class EstimateSet:
    """The closed-form constants for one parameter set.

    Infeasible entries (failed sign conditions) are ``math.inf`` and the
    corresponding flag is False.  ``absorbing_radius`` aliases c3.
    """

    beta: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c4_alt: float
    gradient_bound: float
    absorbing_radius: float
    dissipative: bool
    energy_feasible: bool
    norm_g: float
    norm_phi0: float

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "c4": self.c4,
            "c5": self.c5,
            "c4_alt": self.c4_alt,
            "gradient_bound": self.gradient_bound,
            "absorbing_radius": self.absorbing_radius,
            "dissipative": self.dissipative,
            "energy_feasible": self.energy_feasible,
            "norm_g": self.norm_g,
            "norm_phi0": self.norm_phi0,
        }


def compute_estimates(p: ProblemParameters, norm_g: float, norm_phi0: float = 0.0) -> EstimateSet:
    """Evaluate every closed-form constant for the given data norms.

    Parameters
    ----------
    p : ProblemParameters
    norm_g : float
        L2 norm of the forcing (as realized on the working grid).
    norm_phi0 : float, optional
        Norm of the history endpoint phi(0); enters only c4.

    Returns
    -------
    EstimateSet
        With infeasible entries set to inf rather than raising:
        c3 requires beta < mu, c1/c4/c5 additionally need mu - sigma - 1 > 0,
        c4_alt further needs mu - sigma - 1 > c3.
    """
    report = check_dissipativity(p)
    beta = report.beta
    dissipative = report.holds
    gap = p.mu - p.sigma - 1.0
    energy_feasible = gap > 0
    norm_f0 = 0.0  # every catalog nonlinearity vanishes at 0

    if dissipative:
        c3 = 2.0 * (norm_g / p.mu + norm_g * beta / (p.mu * (p.mu - beta)))
    else:
        c3 = math.inf

    c2 = math.exp(gap * p.tau)
    if energy_feasible:
        c1 = (norm_g * norm_g / p.mu + 2.0 * norm_f0 * norm_f0) / gap
    else:
        c1 = math.inf

    if energy_feasible and dissipative:
        c4 = 0.5 * c2 * norm_phi0 * norm_phi0 + (p.sigma + p.lf * p.lf) * c3 * c3 / gap + 0.5 * c1
        c5 = math.sqrt(c4) + ((p.mu + p.sigma + p.lf) * c3 + norm_f0 + norm_g) * (1.0 + p.tau)
        gradient_bound = c4 + 2.0 * (p.sigma * p.sigma + p.lf * p.lf) * c3 * c3 + 2.0 * norm_g * norm_g
    else:
        c4 = c5 = gradient_bound = math.inf

    if energy_feasible and dissipative and gap > c3:
        c4_alt = 2.0 * c1 * gap / (gap - c3)
    else:
        c4_alt = math.inf

    return EstimateSet(
        beta=beta,
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        c5=c5,
        c4_alt=c4_alt,
        gradient_bound=gradient_bound,
        absorbing_radius=c3,
        dissipative=dissipative,
        energy_feasible=energy_feasible,
        norm_g=norm_g,
        norm_phi0=norm_phi0,
    )


def _entry_gap(p: ProblemParameters, est: EstimateSet, norm_D: float, T: float) -> float:
    """Left side of the absorbing-entry inequality minus its threshold.

    Entry holds once exp(mu (tau - T)) D + exp(mu tau) D exp((beta - mu) T)
    drops below c3 / 2; the left side is strictly decreasing in T whenever
    the configuration is dissipative.
    """
    lhs = (math.exp(p.mu * (p.tau - T)) * norm_D
           + math.exp(p.mu * p.tau) * norm_D * math.exp((est.beta - p.mu) * T))
    return lhs - 0.5 * est.c3


def absorbing_time(p: ProblemParameters, est: EstimateSet, norm_D: float) -> float:
    """Smallest T after which every history with ||phi||_C <= norm_D has
    entered the absorbing ball.

    Computed by monotone bisection on the explicit exponential left side
    of the entry inequality.  norm_D = 0 gives T = 0; a non-dissipative
    configuration (or a degenerate ball c3 = 0 with norm_D > 0) gives inf.
    """
    if norm_D < 0:
        raise ValueError("norm_D must be nonnegative")
    if not est.dissipative:
        return math.inf
    if norm_D == 0.0 or _entry_gap(p, est, norm_D, 0.0) <= 0.0:
        return 0.0
    if est.c3 <= 0.0:
        return math.inf

    hi = max(p.tau, 1.0)
    while _entry_gap(p, est, norm_D, hi) > 0.0:
        hi *= 2.0
        if hi > 1e9:
            return math.inf
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _entry_gap(p, est, norm_D, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def verify_absorption(traj: Trajectory, est: EstimateSet, T: float) -> dict:
    """Measure sup_{t >= T} ||u_t||_C on a trajectory and compare to c3.

    The trajectory must extend at least tau beyond T.  Returns a report
    with the measured maximum, the certified threshold c3 * 1.05, and the
    verdict flag.
    """
    dt = traj.dt
    S = traj.history.steps_per_delay
    n0 = max(0, int(math.ceil(T / dt - 1e-9)))
    if n0 > traj.steps:
        raise ValueError("trajectory horizon is shorter than the requested T")
    worst_t = n0 * dt
    worst = -math.inf
    for n in range(n0, traj.steps + 1):
        value = segment_norm(segment_at(traj, n * dt))
        if value > worst:
            worst, worst_t = value, n * dt
    threshold = est.c3 * (1.0 + CERTIFICATE_TOLERANCE)
    return {
        "max_segment_norm": worst,
        "argmax_time": worst_t,
        "c3": est.c3,
        "threshold": threshold,
        "ok": bool(worst <= threshold),
        "from_time": n0 * dt,
        "samples": traj.steps + 1 - n0,
    }


def _segment_gradient_sup(traj: Trajectory, n: int) -> float:
    """Sup over the segment at step n of the gradient seminorm."""
    seg = segment_at(traj, n * traj.dt)
    return max(gradient_norm(Field(values=row, grid=traj.grid)) for row in seg.samples)


def verify_energy_integral(traj: Trajectory, est: EstimateSet, t_start: float = 0.0) -> dict:
    """Check the windowed energy estimate: the trapezoidal integral over
    [t, t+1] of the squared segment gradient sup stays below c4.

    Scans every window start on the step grid from ``t_start`` for which
    [t, t+1] fits inside the horizon.  Returns the worst window.
    """
    dt = traj.dt
    per_unit = int(round(1.0 / dt))
    if abs(per_unit * dt - 1.0) > 1e-9:
        raise ValueError("dt must divide 1 for unit-window energy integrals")
    if traj.horizon < 1.0 - 1e-12:
        raise ValueError("horizon too short for a unit window")

    sups = np.array([_segment_gradient_sup(traj, n) for n in range(traj.steps + 1)])
    squared = sups * sups
    n_first = max(0, int(math.ceil(t_start / dt - 1e-9)))
    worst = -math.inf
    worst_t = n_first * dt
    for n in range(n_first, traj.steps - per_unit + 1):
        window = squared[n:n + per_unit + 1]
        integral = dt * (np.sum(window) - 0.5 * (window[0] + window[-1]))
        if integral > worst:
            worst, worst_t = float(integral), n * dt
    threshold = est.c4 * (1.0 + CERTIFICATE_TOLERANCE)
    return {
        "max_integral": worst,
        "argmax_window_start": worst_t,
        "c4": est.c4,
        "threshold": threshold,
        "ok": bool(worst <= threshold),
    }


def verify_far_field(traj: Trajectory, eps: float, radii=None, time_stride: int = 1) -> dict:
    """Find empirical far-field thresholds (T_emp, R_emp) for a tolerance.

    Scans a doubling grid of radii K (ascending); for each K finds the
    smallest sampled T such that the segment tail mass beyond K stays
    below eps for every sampled t >= T, and returns the first success.

    Parameters
    ----------
    traj : Trajectory
    eps : float
        Tail-mass tolerance (> 0).
    radii : sequence of float, optional
        Ascending radii to scan; default doubles from L/32 to L/2.
    time_stride : int, optional
        Sample every ``time_stride``-th step when scanning t.

    Returns
    -------
    dict with keys ``status`` ("ok" or "inconclusive"), ``T_emp``,
    ``R_emp``, and ``tail_at_result``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    L = traj.grid.half_length
    if radii is None:
        radii = []
        K = L / 32.0
        while K <= L / 2.0 + 1e-12:
            radii.append(K)
            K *= 2.0
    steps = list(range(0, traj.steps + 1, max(1, time_stride)))
    if steps[-1] != traj.steps:
        steps.append(traj.steps)
    segments = [segment_at(traj, n * traj.dt) for n in steps]

    for K in radii:
        masses = np.array([far_field_mass(seg, K) for seg in segments])
        ok = masses <= eps
        if not ok[-1]:
            continue
        # smallest sampled T with all later samples below eps
        idx = len(ok)
        for i in range(len(ok) - 1, -1, -1):
            if not ok[i]:
                break
            idx = i
        T_emp = steps[idx] * traj.dt
        return {
            "status": "ok",
            "T_emp": T_emp,
            "R_emp": float(K),
            "tail_at_result": float(np.max(masses[idx:])),
            "eps": eps,
        }
    return {"status": "inconclusive", "T_emp": math.inf, "R_emp": math.inf,
            "tail_at_result": math.inf, "eps": eps}
