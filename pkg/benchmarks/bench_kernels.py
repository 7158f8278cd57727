"""Timing comparison: selected kernels vs the pure-numpy reference path.

Run as a script. With numba available (and DISTCOST_DISABLE_NUMBA unset)
the selected column is the jitted build; the reference column is always
the raw Python/numpy implementation of the same source.
"""

import time

import numpy as np

from distcost import _kernels
from distcost.models import admire
from distcost.signals import make_disturbance


_SELECTED = {"expm": "expm_core", "jacobi": "jacobi_core", "rk4": "rk4_core",
             "propagate_gain_grid": "propagate_gain_grid",
             "weighted_transition_sum": "weighted_transition_sum",
             "splitmix_fill": "splitmix_fill"}


def _time(fn, args, repeat: int, copy_first: bool) -> float:
    # jacobi diagonalizes its argument in place, so it needs a fresh copy
    # per call or every run after the first converges immediately
    best = np.inf
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            if copy_first:
                fn(args[0].copy(), *args[1:])
            else:
                fn(*args)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def _workloads():
    sys_ = admire()
    n = sys_.n
    rng = np.random.default_rng(1)

    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = sys_.A
    M[:n, n:] = sys_.B @ sys_.B.T
    M[n:, n:] = -sys_.A.T
    M *= 5.0
    yield "expm 6x6", "expm", (M,), 200

    S = rng.standard_normal((12, 12))
    S = 0.5 * (S + S.T)
    yield "jacobi 12x12", "jacobi", (S, 1e-12, 100), 100

    steps = 5000
    h = 5.0 / steps
    w = make_disturbance("sinusoid", 1.0, n)
    taus = np.linspace(0.0, 5.0, 2 * steps + 1)
    W_half = w._values(taus)
    w_st = np.stack([W_half[0:-1:2], W_half[1::2], W_half[2::2]], axis=1)
    u_st = np.zeros((steps, 3, sys_.p))
    x0 = np.array([5.0, -1.0, 3.0])
    yield "rk4 5000 steps", "rk4", (sys_.A, sys_.B, x0, h, u_st, w_st), 20

    n_nodes = 2 * steps + 1
    delta = 5.0 / (n_nodes - 1)
    At = np.ascontiguousarray(-sys_.A.T)
    E = _kernels.expm_core(At * delta)
    n_cp = (n_nodes - 1) // 256
    seeds = np.stack([_kernels.expm_core(At * ((c + 1) * 256 * delta))
                      for c in range(n_cp)])
    g = rng.standard_normal(n)
    yield "gain grid 10001 nodes", "propagate_gain_grid", (E, seeds, 256, g, n_nodes), 20

    Ef = _kernels.expm_core(sys_.A * delta)
    seeds_f = np.stack([_kernels.expm_core(sys_.A * ((c + 1) * 256 * delta))
                        for c in range(n_cp)])
    V = rng.standard_normal((n_nodes, n))
    yield "transition sum 10001 nodes", "weighted_transition_sum", (Ef, seeds_f, 256, V), 20

    yield "splitmix 1e6 draws", "splitmix_fill", (np.uint64(7), np.uint64(0), 1_000_000), 5


def main() -> None:
    _kernels.warm_up()
    mode = "numba" if _kernels.USING_NUMBA else "numpy (fallback)"
    print(f"selected kernel build: {mode}")
    print(f"{'workload':<28} {'selected':>12} {'reference':>12} {'speedup':>9}")
    with np.errstate(over="ignore"):
        for label, name, args, repeat in _workloads():
            copy_first = name == "jacobi"
            sel = _time(getattr(_kernels, _SELECTED[name]), args, repeat, copy_first)
            ref = _time(_kernels.PY_IMPLS[name], args, repeat, copy_first)
            print(f"{label:<28} {sel * 1e3:>10.3f}ms {ref * 1e3:>10.3f}ms {ref / sel:>8.1f}x")


if __name__ == "__main__":
    main()
