"""Optimal control construction.

The nominal minimum-energy control is
    u_N(t) = -B^T e^{A^T(t_f - t)} W_B^{-1} e^{A t_f} x0
and with an a-priori-known disturbance w the stabilizing analogue is
    u_D(t) = -B^T e^{A^T(t_f - t)} W_B^{-1} [e^{A t_f} x0 + R(w, t_f)]
where R(w, t_f) = int_0^tf e^{A(t_f - tau)} w(tau) dtau is the
disturbance response. Both controls share the constant gain vector in
brackets; evaluation only varies the transition factor in front.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels as _k
from .errors import DimensionError, DomainError, NumericalError
from .gramian import GramianBundle
from .linalg import expm
from .settings import DEFAULT_SETTINGS, NumericSettings
from .signals import DisturbanceSignal
from .systems import LtiSystem, StabilizationTask

__all__ = ["ControlSignal", "nominal_control", "disturbed_control",
           "disturbance_response"]

# backward transition recurrences are reseeded with a fresh expm this many
# nodes apart, which keeps accumulated rounding below ~1e-13 relative
_CHECKPOINT = 256


def _transition_chain(M: np.ndarray, total_time: float, n_nodes: int):
    # one-step propagator expm(M*delta) plus periodic fresh reseeds
    N = n_nodes - 1
    delta = total_time / N
    E = expm(M * delta)
    n_cp = N // _CHECKPOINT
    n = M.shape[0]
    seeds = np.empty((n_cp, n, n))
    for c in range(n_cp):
        seeds[c] = expm(M * ((c + 1) * _CHECKPOINT * delta))
    return E, seeds, delta


@dataclass(frozen=True)
class ControlSignal:
    """A synthesized control, defined exactly on [0, t_f].

    ``gain_vector`` is the constant W_B^{-1}[e^{A t_f} x0 + R(w, t_f)]
    the signal encodes; ``kind`` records whether a disturbance response
    was folded in. Calling the signal outside [0, t_f] raises.
    """

    evaluator: Callable[[float], np.ndarray]
    t_f: float
    kind: str
    gain_vector: np.ndarray
    system: LtiSystem

    def __call__(self, t: float) -> np.ndarray:
        t = float(t)
        if not np.isfinite(t) or t < 0.0 or t > self.t_f:
            raise DomainError(
                f"control signal is defined on [0, {self.t_f:g}], got t = {t:g}"
            )
        return self.evaluator(t)

    def sample_half_grid(self, steps: int) -> np.ndarray:
        """Control values on the half-step grid k * t_f / (2*steps).

        Row 2k is the value at step boundary k, row 2k+1 the midpoint
        value the RK4 stages need; shape (2*steps + 1, p). Values match
        pointwise evaluation up to the recurrence reseeding tolerance.
        """
        if steps < 1:
            raise DomainError("steps must be at least 1")
        n_nodes = 2 * steps + 1
        E, seeds, _ = _transition_chain(self.system.A.T, self.t_f, n_nodes)
        Y = _k.propagate_gain_grid(E, seeds, _CHECKPOINT,
                                   np.ascontiguousarray(self.gain_vector), n_nodes)
        return -(Y @ self.system.B)


def _check_bundle(sys: LtiSystem, task: StabilizationTask, bundle: GramianBundle):
    if bundle.W_B.shape != (sys.n, sys.n):
        raise DimensionError(
            f"bundle dimension {bundle.W_B.shape} does not match system n = {sys.n}"
        )
    if task.x0.shape != (sys.n,):
        raise DimensionError(
            f"x0 dimension {task.x0.shape[0]} does not match system n = {sys.n}"
        )
    if abs(bundle.t_f - task.t_f) > 1e-12 * max(1.0, task.t_f):
        raise DimensionError(
            f"bundle horizon {bundle.t_f:g} does not match task horizon {task.t_f:g}"
        )


def _make_signal(sys: LtiSystem, t_f: float, gain: np.ndarray, kind: str) -> ControlSignal:
    At = sys.A.T
    B_T = sys.B.T

    def evaluate(t: float) -> np.ndarray:
        Phi = expm(At * (t_f - t))
        return -(B_T @ (Phi @ gain))

    gain = np.ascontiguousarray(gain)
    gain.setflags(write=False)
    return ControlSignal(evaluator=evaluate, t_f=t_f, kind=kind,
                         gain_vector=gain, system=sys)


def nominal_control(sys: LtiSystem, task: StabilizationTask,
                    bundle: GramianBundle) -> ControlSignal:
    """Minimum-energy control stabilizing the disturbance-free system at t_f."""
    _check_bundle(sys, task, bundle)
    rhs = bundle.state_transition @ task.x0
    gain = bundle.spec.apply(rhs)
    return _make_signal(sys, task.t_f, gain, "nominal")


def disturbed_control(sys: LtiSystem, task: StabilizationTask,
                      bundle: GramianBundle, w: DisturbanceSignal,
                      settings: NumericSettings = DEFAULT_SETTINGS) -> ControlSignal:
    """Minimum-energy stabilizing control when w is known a priori.

    Reduces exactly to the nominal control when the response of w is
    identically zero (the zero signal takes a shortcut that returns an
    exact zero response, so the gain vectors match bit for bit).
    """
    _check_bundle(sys, task, bundle)
    if w.dim != sys.n:
        raise DimensionError(f"disturbance dim {w.dim} does not match n = {sys.n}")
    R = disturbance_response(sys, w, task.t_f, settings)
    rhs = bundle.state_transition @ task.x0 + R
    gain = bundle.spec.apply(rhs)
    return _make_signal(sys, task.t_f, gain, "disturbed")


def disturbance_response(sys: LtiSystem, w: DisturbanceSignal, t_f,
                         settings: NumericSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """R(w, t_f) = int_0^tf e^{A(tf - tau)} w(tau) dtau.

    Composite Simpson with panels aligned to the signal's cell grid, so a
    piecewise-constant signal is integrated against a smooth kernel on
    every panel. The panel count per cell doubles until the result moves
    by less than ``settings.response_rel_tol`` relative.

    Raises DomainError if the signal is not defined on all of [0, t_f],
    or (for piecewise signals) if t_f does not land on a cell boundary.
    """
    t_f = float(t_f)
    if t_f <= 0.0 or not np.isfinite(t_f):
        raise DomainError(f"t_f must be positive and finite, got {t_f}")
    if w.dim != sys.n:
        raise DimensionError(f"disturbance dim {w.dim} does not match n = {sys.n}")
    if t_f > w.horizon * (1.0 + 1e-12):
        raise DomainError(
            f"disturbance defined on [0, {w.horizon:g}] does not cover t_f = {t_f:g}"
        )
    if w.kind == "zero":
        return np.zeros(sys.n)

    if w.kind == "piecewise_uniform":
        frac = t_f / w.horizon * w.cells
        K = max(int(round(frac)), 1)
        if abs(frac - K) > 1e-9 * max(1.0, frac):
            raise DomainError(
                "piecewise disturbance cells do not align with t_f; build the "
                "signal with horizon equal to (a multiple of) the cell grid"
            )
        cell_vals = w.cell_values[:K]
    else:
        K = 1
        cell_vals = None

    A = sys.A
    n = sys.n
    prev = None
    diff = np.inf
    m = 2
    for _ in range(settings.response_max_doublings + 1):
        R = _simpson_response(A, n, w, t_f, K, m, cell_vals)
        if prev is not None:
            diff = float(np.sqrt(np.sum((R - prev) ** 2)))
            scale = max(float(np.sqrt(np.sum(R * R))),
                        float(np.sqrt(np.sum(prev * prev))))
            if diff <= settings.response_rel_tol * scale + 1e-300:
                return R
        prev = R
        m *= 2
    raise NumericalError(
        f"disturbance response quadrature did not settle within "
        f"{settings.response_max_doublings} panel doublings",
        estimate=prev,
        error_bound=diff,
        iterations=settings.response_max_doublings,
    )


def _simpson_response(A, n, w, t_f, K, m, cell_vals):
    # K cells, m (even) panels per cell, shared boundary nodes; quadrature
    # weights are folded into the node values so the kernel only has to
    # propagate the transition factor and accumulate
    N = K * m
    delta = t_f / N
    local_w = np.full(m + 1, 2.0)
    local_w[1::2] = 4.0
    local_w[0] = local_w[m] = 1.0

    if cell_vals is not None:
        vals = np.broadcast_to(cell_vals[:, None, :], (K, m + 1, n))
    else:
        taus = (np.arange(K)[:, None] * m + np.arange(m + 1)[None, :]) * delta
        vals = w._values(taus.ravel()).reshape(K, m + 1, n)

    contrib = local_w[None, :, None] * vals
    V = np.zeros((N + 1, n))
    idx = (np.arange(K)[:, None] * m + np.arange(m + 1)[None, :]).ravel()
    np.add.at(V, idx, contrib.reshape(-1, n))

    E, seeds, _ = _transition_chain(A, t_f, N + 1)
    acc = _k.weighted_transition_sum(E, seeds, _CHECKPOINT, V)
    return (delta / 3.0) * acc
