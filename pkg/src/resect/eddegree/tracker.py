"""Adaptive predictor-corrector tracking of critical systems along data
segments, batched over paths.

A segment from d_from to d_to is traversed along the complex arc

    d(t) = d_from + s(t) (d_to - d_from),   s(t) = gamma t / (1 + (gamma - 1) t)

with a random unit-modulus gamma (s(0) = 0, s(1) = 1), which keeps real
problem instances away from real discriminant crossings.  The predictor is
a 4th-order Runge-Kutta step on the Davidenko equation dx/dt = -J^-1 F_t;
the corrector is Newton at the target time.  Steps adapt: repeated quick
corrections double the step, failures halve it, and each failure mode is
reported separately.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np


class PathStatus(enum.Enum):
    RUNNING = "running"
    SUCCESS = "success"
    STEP_UNDERFLOW = "step_underflow"
    CORRECTOR_DIVERGENCE = "corrector_divergence"
    CHART_DEGENERATION = "chart_degeneration"
    MAX_STEPS = "max_steps"


@dataclass
class TrackSettings:
    h_init: float = 0.05
    h_min: float = 1e-9
    h_max: float = 0.25
    newton_tol: float = 1e-10        # corrector step-size convergence
    corrector_iters: int = 3
    residual_tol: float = 1e-9       # accepted-solution residual (uncleared)
    dedup_tol: float = 1e-6
    chart_eps: float = 1e-10
    max_steps: int = 3000
    grow_after: int = 4


@dataclass
class PathResult:
    x: Optional[np.ndarray]
    status: PathStatus
    steps: int


def _solve_many(J, F):
    """Batched linear solves with per-path fallback; returns (sol, ok)."""
    N = J.shape[0]
    ok = np.ones(N, dtype=bool)
    try:
        sol = np.linalg.solve(J, F[..., None])[..., 0]
    except np.linalg.LinAlgError:
        sol = np.zeros_like(F)
        for i in range(N):
            try:
                sol[i] = np.linalg.solve(J[i], F[i])
            except np.linalg.LinAlgError:
                ok[i] = False
    bad = ~np.isfinite(sol).all(axis=1)
    if bad.any():
        ok[bad] = False
        sol[bad] = 0.0
    return sol, ok


def _mobius(t, gamma):
    denom = 1.0 + (gamma - 1.0) * t
    s = gamma * t / denom
    sdot = gamma / denom**2
    return s, sdot


def track_batch(system, X0, d_from, d_to, gamma, settings: TrackSettings):
    """Track every row of X0 from data d_from to d_to.

    Returns (X_end, status_array, steps_used).  X0 rows must solve the
    system at d_from within the corrector tolerance.
    """
    X = np.array(X0, dtype=np.complex128, copy=True)
    N = X.shape[0]
    delta = np.asarray(d_to, dtype=np.complex128) - np.asarray(d_from, dtype=np.complex128)
    d_from = np.asarray(d_from, dtype=np.complex128)

    t = np.zeros(N)
    h = np.full(N, settings.h_init)
    streak = np.zeros(N, dtype=int)
    status = np.full(N, PathStatus.RUNNING, dtype=object)
    steps = 0

    def data_at(tt):
        s, _ = _mobius(tt, gamma)
        return d_from[None, :] + s[:, None] * delta[None, :]

    def ddot_at(tt):
        _, sdot = _mobius(tt, gamma)
        return sdot[:, None] * delta[None, :]

    def velocity(Xa, ta):
        D = data_at(ta)
        J = system.J(Xa, D)
        Ft = system.Ft(Xa, D, ddot_at(ta))
        v, ok = _solve_many(J, Ft)
        return -v, ok

    while True:
        act = np.nonzero(status == PathStatus.RUNNING)[0]
        if act.size == 0:
            break
        steps += 1
        if steps > settings.max_steps:
            status[act] = PathStatus.MAX_STEPS
            break

        ha = np.minimum(h[act], 1.0 - t[act])
        ta = t[act]
        Xa = X[act]

        # RK4 predictor on the Davidenko equation
        k1, ok1 = velocity(Xa, ta)
        k2, ok2 = velocity(Xa + 0.5 * ha[:, None] * k1, ta + 0.5 * ha)
        k3, ok3 = velocity(Xa + 0.5 * ha[:, None] * k2, ta + 0.5 * ha)
        k4, ok4 = velocity(Xa + ha[:, None] * k3, ta + ha)
        Xp = Xa + (ha[:, None] / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        pred_ok = ok1 & ok2 & ok3 & ok4 & np.isfinite(Xp).all(axis=1)

        # Newton corrector at the target time
        t_new = ta + ha
        D_new = data_at(t_new)
        Xc = np.where(pred_ok[:, None], Xp, Xa)
        conv = np.zeros(act.size, dtype=bool)
        iters_used = np.zeros(act.size, dtype=int)
        alive = pred_ok.copy()
        for it in range(settings.corrector_iters):
            if not alive.any():
                break
            idx = np.nonzero(alive)[0]
            J = system.J(Xc[idx], D_new[idx])
            F = system.F(Xc[idx], D_new[idx])
            step_vec, oks = _solve_many(J, F)
            Xc[idx] = Xc[idx] - step_vec
            norms = np.abs(step_vec).max(axis=1)
            scale = 1.0 + np.abs(Xc[idx]).max(axis=1)
            done = oks & (norms < settings.newton_tol * scale)
            conv[idx[done]] = True
            iters_used[idx] = it + 1
            alive[idx] = oks & ~done
        conv &= np.isfinite(Xc).all(axis=1)

        # chart degeneration check on accepted points
        margins = system.chart_margin(Xc)
        degenerate = conv & (margins < settings.chart_eps)

        accept = conv & ~degenerate
        reject = ~accept & ~degenerate

        ia = act[accept]
        X[ia] = Xc[accept]
        t[ia] = t_new[accept]
        quick = accept & (iters_used <= 2)
        streak[act[quick]] += 1
        streak[act[accept & ~quick]] = 0
        grow = act[accept & (streak[act] >= settings.grow_after)]
        h[grow] = np.minimum(h[grow] * 2.0, settings.h_max)
        streak[grow] = 0

        ir = act[reject]
        h[ir] *= 0.5
        streak[ir] = 0
        under = ir[h[ir] < settings.h_min]
        status[under] = PathStatus.STEP_UNDERFLOW

        status[act[degenerate]] = PathStatus.CHART_DEGENERATION

        arrived = act[accept]
        finished = arrived[t[arrived] >= 1.0 - 1e-14]
        if finished.size:
            D_end = np.broadcast_to(np.asarray(d_to, dtype=np.complex128),
                                    (finished.size, system.map.nd))
            res = system.residuals(X[finished], D_end)
            okr = res < settings.residual_tol
            status[finished[okr]] = PathStatus.SUCCESS
            status[finished[~okr]] = PathStatus.CORRECTOR_DIVERGENCE

    return X, status, steps


def track(system, x_start, d_from, d_to, settings: Optional[TrackSettings] = None,
          gamma: Optional[complex] = None, rng=None) -> PathResult:
    """Track a single solution along the segment d_from -> d_to.

    With d_to == d_from this is a zero-length path and returns x_start
    (verified).  gamma defaults to a random unit-modulus detour constant.
    """
    settings = settings or TrackSettings()
    if gamma is None:
        rng = rng or np.random.default_rng(0)
        theta = rng.uniform(0.2, 2 * np.pi - 0.2)
        gamma = complex(np.cos(theta), np.sin(theta))
    x_start = np.asarray(x_start, dtype=np.complex128).reshape(1, -1)
    d_from = np.asarray(d_from, dtype=np.complex128)
    d_to = np.asarray(d_to, dtype=np.complex128)
    if np.allclose(d_from, d_to, rtol=0, atol=0):
        res = system.residuals(x_start, np.atleast_2d(d_to))[0]
        ok = res < settings.residual_tol
        return PathResult(x_start[0], PathStatus.SUCCESS if ok
                          else PathStatus.CORRECTOR_DIVERGENCE, 0)
    Xe, st, steps = track_batch(system, x_start, d_from, d_to, gamma, settings)
    return PathResult(Xe[0] if st[0] == PathStatus.SUCCESS else None, st[0], steps)
