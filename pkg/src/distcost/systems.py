"""Core problem data: the LTI plant and the stabilization task."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, ValidationError
from .linalg import as_matrix, as_vector
from .settings import DEFAULT_SETTINGS


def controllability_rank(A: np.ndarray, B: np.ndarray, rel_tol: float) -> int:
    """Rank of [B, AB, ..., A^(n-1)B] by singular values above rel_tol * sigma_max."""
    n = A.shape[0]
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    C = np.hstack(blocks)
    sv = np.linalg.svd(C, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


@dataclass(frozen=True)
class LtiSystem:
    """A controllable pair (A, B) for dynamics xdot = A x + B u (+ w).

    Controllability is checked at construction; an uncontrollable pair is
    rejected with the deficient rank in the message.
    """

    A: np.ndarray
    B: np.ndarray
    name: str = "lti"

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        if A.shape[0] != A.shape[1]:
            raise DimensionError(f"A must be square, got shape {A.shape}")
        if B.shape[0] != A.shape[0]:
            raise DimensionError(
                f"B row count {B.shape[0]} does not match state dimension {A.shape[0]}"
            )
        rank = controllability_rank(A, B, DEFAULT_SETTINGS.controllability_tol)
        if rank < A.shape[0]:
            raise ValidationError(
                f"(A, B) is not controllable: controllability matrix rank {rank} "
                f"< {A.shape[0]}"
            )
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.B.shape[1]


@dataclass(frozen=True)
class StabilizationTask:
    """Drive x(0) = x0 to the origin at time t_f, disturbances bounded by w_bar.

    ``w_bar`` bounds the pointwise infinity norm of admissible disturbance
    signals; zero means the nominal, disturbance-free problem.
    """

    x0: np.ndarray
    t_f: float
    w_bar: float = 0.0

    def __post_init__(self):
        x0 = as_vector(self.x0, "x0")
        if not np.any(x0 != 0.0):
            raise ValidationError("x0 must be nonzero")
        t_f = float(self.t_f)
        if not np.isfinite(t_f) or t_f <= 0.0:
            raise DomainError(f"t_f must be positive and finite, got {t_f}")
        w_bar = float(self.w_bar)
        if not np.isfinite(w_bar) or w_bar < 0.0:
            raise DomainError(f"w_bar must be nonnegative and finite, got {w_bar}")
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "t_f", t_f)
        object.__setattr__(self, "w_bar", w_bar)
