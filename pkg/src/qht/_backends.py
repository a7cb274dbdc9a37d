"""Problem preparation and backend selection for the RK4 integrator.

The compiled extension is preferred when importable; setting
QHT_PURE_PYTHON=1 in the environment forces the numpy fallback.  Both
backends consume the same prepared problem and must agree to roundoff.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from .linalg import dagger

PURE_PYTHON_ENV = "QHT_PURE_PYTHON"
_TRIPLET_FLOOR = 1e-14  # relative; drops matmul roundoff, keeps real entries


@dataclass
class Rk4Problem:
    """Dense and triplet forms of the drift + jump generator."""

    dim: int
    w: np.ndarray        # -iH - G/2
    w_dag: np.ndarray
    b_stack: np.ndarray  # (channels, dim, dim), sqrt(rate) folded in
    b_conj: np.ndarray
    w_rows: np.ndarray
    w_cols: np.ndarray
    w_vals: np.ndarray
    j_ptr: np.ndarray
    j_rows: np.ndarray
    j_cols: np.ndarray
    j_vals: np.ndarray


def _triplets(a: np.ndarray):
    floor = _TRIPLET_FLOOR * np.max(np.abs(a)) if a.size else 0.0
    rows, cols = np.nonzero(np.abs(a) > floor)
    return (
        rows.astype(np.int32),
        cols.astype(np.int32),
        np.ascontiguousarray(a[rows, cols], dtype=complex),
    )


def prepare(h: np.ndarray, jumps) -> Rk4Problem:
    """Fold rates into the operators and extract both problem forms."""
    dim = h.shape[0]
    damping = np.zeros_like(h)
    b_list = []
    for jump in jumps:
        b = np.sqrt(jump.rate) * jump.operator
        b_list.append(b)
        damping += dagger(b) @ b
    w = -1j * h - 0.5 * damping

    w_rows, w_cols, w_vals = _triplets(w)
    j_ptr = [0]
    j_rows, j_cols, j_vals = [], [], []
    for b in b_list:
        r, c, v = _triplets(b)
        j_rows.append(r)
        j_cols.append(c)
        j_vals.append(v)
        j_ptr.append(j_ptr[-1] + r.size)

    concat = lambda parts, dtype: (
        np.concatenate(parts) if parts else np.empty(0, dtype=dtype)
    )
    return Rk4Problem(
        dim=dim,
        w=w,
        w_dag=dagger(w).copy(),
        b_stack=np.array(b_list) if b_list else np.empty((0, dim, dim), dtype=complex),
        b_conj=np.conj(b_list) if b_list else np.empty((0, dim, dim), dtype=complex),
        w_rows=w_rows,
        w_cols=w_cols,
        w_vals=w_vals,
        j_ptr=np.asarray(j_ptr, dtype=np.int64),
        j_rows=concat(j_rows, np.int32).astype(np.int32),
        j_cols=concat(j_cols, np.int32).astype(np.int32),
        j_vals=concat(j_vals, complex),
    )


def _select():
    if os.environ.get(PURE_PYTHON_ENV):
        return "python", None
    try:
        from . import _kernel
    except ImportError:
        return "python", None
    return "compiled", _kernel


BACKEND, _compiled = _select()


def advance_python(problem: Rk4Problem, rho: np.ndarray, dt: float, n_steps: int):
    return _kernel_py.rk4_advance(problem, rho, dt, n_steps)


def advance_compiled(problem: Rk4Problem, rho: np.ndarray, dt: float, n_steps: int):
    if _compiled is None:
        raise RuntimeError("compiled kernel unavailable")
    return _compiled.rk4_advance_triplets(
        rho,
        problem.w_rows, problem.w_cols, problem.w_vals,
        problem.j_ptr, problem.j_rows, problem.j_cols, problem.j_vals,
        dt, n_steps,
    )


def rk4_advance(problem: Rk4Problem, rho: np.ndarray, dt: float, n_steps: int):
    """Advance `rho` in place with the selected backend."""
    if BACKEND == "compiled":
        return advance_compiled(problem, rho, dt, n_steps)
    return advance_python(problem, rho, dt, n_steps)
