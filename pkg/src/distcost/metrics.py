"""Cost-of-disturbance metric bounds and the hardness measure.

Over initial states of radius R the extra energy a worst-case disturbance
can extort is bounded by the additive metric
    r_A_bound = c + gamma * R * sqrt(n),
and the energy ratio nominal/disturbed is bounded from below by the
multiplicative metric
    r_M_bound = l R^2 / (l R^2 + gamma R sqrt(n) + c),
where gamma = 2 q_bar ||diag(lambda) U^T e^{A t_f}||_1 (induced 1-norm),
c = q_bar^2 sum(lambda), and l is the smallest eigenvalue of
e^{A^T t_f} W_B^{-1} e^{A t_f}. Hardness is the ratio R / t_f: far
initial states and short deadlines make stabilization expensive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IllConditionedError
from .gramian import GramianBundle
from .linalg import norm, sym_eig
from .settings import DEFAULT_SETTINGS, NumericSettings
from .systems import LtiSystem

__all__ = ["MetricReport", "additive_metric_bound", "multiplicative_metric_bound",
           "hardness", "metric_report"]


@dataclass(frozen=True)
class MetricReport:
    """Both metric bounds at one (R, t_f) point, plus their ingredients."""

    R: float
    t_f: float
    r_A_bound: float
    r_M_bound: float
    hardness: float
    gamma: float
    c_term: float
    l_min: float


def _bound_ingredients(bundle: GramianBundle, w_bar: float):
    if not np.isfinite(w_bar) or w_bar < 0.0:
        raise DomainError(f"w_bar must be nonnegative and finite, got {w_bar!r}")
    lam = bundle.spec.lambdas
    U = bundle.spec.U
    q_bar = w_bar * norm(U, "one") * bundle.v_bar_unit
    weighted = (lam[:, None] * U.T) @ bundle.state_transition
    gamma = 2.0 * q_bar * norm(weighted, "one")
    c_term = q_bar * q_bar * float(np.sum(lam))
    return gamma, c_term


def _l_min(bundle: GramianBundle, settings: NumericSettings) -> float:
    M = bundle.state_transition.T @ bundle.W_B_inv @ bundle.state_transition
    spec = sym_eig(0.5 * (M + M.T), settings)
    l = float(spec.lambdas[-1])
    if l <= 0.0:
        raise IllConditionedError(
            f"energy quadratic form lost positive definiteness at t_f = "
            f"{bundle.t_f:g} (min eigenvalue {l:.3e})",
            estimate=spec.lambdas,
        )
    return l


def additive_metric_bound(sys: LtiSystem, bundle: GramianBundle, w_bar: float,
                          R: float) -> float:
    """Upper bound on the worst extra disturbed energy over ||x0||_2 <= R."""
    R = float(R)
    if R < 0.0 or not np.isfinite(R):
        raise DomainError(f"radius R must be nonnegative and finite, got {R}")
    if bundle.W_B.shape != (sys.n, sys.n):
        raise DomainError("bundle does not match system dimensions")
    gamma, c_term = _bound_ingredients(bundle, float(w_bar))
    return c_term + gamma * R * np.sqrt(sys.n)


def multiplicative_metric_bound(sys: LtiSystem, bundle: GramianBundle, w_bar: float,
                                R: float,
                                settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    """Lower bound on the nominal/disturbed energy ratio over ||x0||_2 >= R.

    Always in (0, 1]; equal to 1 when w_bar = 0 and nondecreasing in R.
    """
    R = float(R)
    if R <= 0.0 or not np.isfinite(R):
        raise DomainError(f"radius R must be positive and finite, got {R}")
    if bundle.W_B.shape != (sys.n, sys.n):
        raise DomainError("bundle does not match system dimensions")
    gamma, c_term = _bound_ingredients(bundle, float(w_bar))
    l = _l_min(bundle, settings)
    lr2 = l * R * R
    return lr2 / (lr2 + gamma * R * np.sqrt(sys.n) + c_term)


def hardness(R: float, t_f: float) -> float:
    """Hardness H = R / t_f of stabilizing from radius R within t_f."""
    R = float(R)
    t_f = float(t_f)
    if R < 0.0 or not np.isfinite(R):
        raise DomainError(f"radius R must be nonnegative and finite, got {R}")
    if t_f <= 0.0 or not np.isfinite(t_f):
        raise DomainError(f"t_f must be positive and finite, got {t_f}")
    return R / t_f


def metric_report(sys: LtiSystem, bundle: GramianBundle, w_bar: float, R: float,
                  settings: NumericSettings = DEFAULT_SETTINGS) -> MetricReport:
    """Evaluate both bounds and hardness at one (R, t_f) grid point."""
    R = float(R)
    if R <= 0.0 or not np.isfinite(R):
        raise DomainError(f"radius R must be positive and finite, got {R}")
    gamma, c_term = _bound_ingredients(bundle, float(w_bar))
    l = _l_min(bundle, settings)
    rootn = np.sqrt(sys.n)
    lr2 = l * R * R
    return MetricReport(
        R=R,
        t_f=bundle.t_f,
        r_A_bound=c_term + gamma * R * rootn,
        r_M_bound=lr2 / (lr2 + gamma * R * rootn + c_term),
        hardness=R / bundle.t_f,
        gamma=float(gamma),
        c_term=float(c_term),
        l_min=l,
    )
