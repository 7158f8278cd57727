"""Closed-loop simulation by classical fixed-step Runge-Kutta.

Controls are evaluated on a half-step grid shared with the RK4 stages
(no interpolation), and discontinuous disturbances contribute their own
cell's value at every stage of a step, including the right endpoint, so
a piecewise-constant signal aligned with the step grid is integrated at
full fourth order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import DimensionError, DomainError
from .signals import DisturbanceSignal
from .systems import LtiSystem, StabilizationTask

__all__ = ["Trajectory", "simulate_closed_loop", "trajectory_to_csv"]


@dataclass(frozen=True)
class Trajectory:
    """Simulation record on a uniform grid over [0, t_f].

    ``control_energy_running[j]`` is the composite-Simpson value of
    int_0^{t_j} ||u||_2^2 dt, so its last entry is the signal energy.
    """

    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    state_norms: np.ndarray
    control_energy_running: np.ndarray

    @property
    def terminal_residual(self) -> float:
        """||x(t_f)||_2 relative to ||x0||_2."""
        x0n = self.state_norms[0]
        return float(self.state_norms[-1] / x0n) if x0n > 0.0 else 0.0

    @property
    def energy(self) -> float:
        return float(self.control_energy_running[-1])


def _control_half_grid(u, t_f: float, steps: int, p: int) -> np.ndarray:
    if u is None:
        return np.zeros((2 * steps + 1, p))
    if hasattr(u, "sample_half_grid"):
        if abs(u.t_f - t_f) > 1e-12 * max(1.0, t_f):
            raise DomainError(
                f"control defined on [0, {u.t_f:g}] does not match horizon {t_f:g}"
            )
        return np.ascontiguousarray(u.sample_half_grid(steps))
    # plain callable: evaluate pointwise on the half grid
    taus = np.linspace(0.0, t_f, 2 * steps + 1)
    return np.ascontiguousarray([np.asarray(u(t), dtype=np.float64) for t in taus])


def _disturbance_stages(w: DisturbanceSignal, t_f: float, steps: int) -> np.ndarray:
    if w is None or w.kind == "zero":
        dim = 0 if w is None else w.dim
        return np.zeros((steps, 3, dim))
    if t_f > w.horizon * (1.0 + 1e-12):
        raise DomainError(
            f"disturbance defined on [0, {w.horizon:g}] does not cover t_f = {t_f:g}"
        )
    if w.kind == "piecewise_uniform":
        frac = t_f / w.horizon * w.cells
        K = int(round(frac))
        if K >= 1 and abs(frac - K) <= 1e-9 * max(1.0, frac) and steps % K == 0:
            # step grid refines the cell grid: every stage of a step sees
            # the step's own cell value, jumps land exactly on step edges
            cell_of_step = np.repeat(np.arange(K), steps // K)
            vals = w.cell_values[cell_of_step]
            return np.ascontiguousarray(np.repeat(vals[:, None, :], 3, axis=1))
        # unaligned grids: fall back to pointwise sampling; integration
        # order degrades at interior jumps
    h = t_f / steps
    t_left = np.linspace(0.0, t_f, steps + 1)[:-1]
    left = w._values(t_left)
    mid = w._values(t_left + 0.5 * h)
    right = w._values(t_left + h)
    return np.ascontiguousarray(np.stack([left, mid, right], axis=1))


def simulate_closed_loop(sys: LtiSystem, task: StabilizationTask, u,
                         w: DisturbanceSignal | None, steps: int) -> Trajectory:
    """Integrate xdot = A x + B u(t) + w(t) from x0 over [0, t_f].

    Parameters
    ----------
    u : ControlSignal, callable, or None
        None means zero control; a ControlSignal is sampled through its
        half-grid cache, any other callable is evaluated pointwise.
    w : DisturbanceSignal or None
        None means no disturbance.
    steps : int
        Uniform RK4 step count, at least 100.

    Returns
    -------
    Trajectory
        States and controls on the step grid, state norms, and the
        running control energy (composite Simpson per step).
    """
    steps = int(steps)
    if steps < 100:
        raise DomainError(f"steps must be at least 100, got {steps}")
    if w is not None and w.dim != sys.n:
        raise DimensionError(f"disturbance dim {w.dim} does not match n = {sys.n}")
    t_f = task.t_f
    h = t_f / steps

    U_half = _control_half_grid(u, t_f, steps, sys.p)
    if U_half.shape != (2 * steps + 1, sys.p):
        raise DimensionError(
            f"control samples have shape {U_half.shape}, expected "
            f"{(2 * steps + 1, sys.p)}"
        )
    u_stages = np.ascontiguousarray(
        np.stack([U_half[0:-1:2], U_half[1::2], U_half[2::2]], axis=1)
    )
    w_stages = _disturbance_stages(w, t_f, steps)
    if w_stages.shape[2] == 0:
        w_stages = np.zeros((steps, 3, sys.n))

    X = _k.rk4_core(sys.A, sys.B, np.ascontiguousarray(task.x0), h,
                    u_stages, w_stages)

    g = np.sum(U_half * U_half, axis=1)
    seg = (h / 6.0) * (g[0:-1:2] + 4.0 * g[1::2] + g[2::2])
    running = np.concatenate(([0.0], np.cumsum(seg)))

    times = np.linspace(0.0, t_f, steps + 1)
    controls = np.ascontiguousarray(U_half[::2])
    norms = np.sqrt(np.sum(X * X, axis=1))
    for arr in (times, X, controls, norms, running):
        arr.setflags(write=False)
    return Trajectory(times=times, states=X, controls=controls,
                      state_norms=norms, control_energy_running=running)


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV text, header t,x1..xn,u1..up,xnorm,energy; shortest-roundtrip decimals."""
    n = traj.states.shape[1]
    p = traj.controls.shape[1]
    header = ["t"]
    header += [f"x{i + 1}" for i in range(n)]
    header += [f"u{i + 1}" for i in range(p)]
    header += ["xnorm", "energy"]
    lines = [",".join(header)]
    for j in range(traj.times.shape[0]):
        row = [traj.times[j], *traj.states[j], *traj.controls[j],
               traj.state_norms[j], traj.control_energy_running[j]]
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
