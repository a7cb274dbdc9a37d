"""Pure-numpy RK4 stepping kernel (fallback for the compiled extension).

Works on the dense form of the prepared problem: with W = -iH - G/2 and
B_k = sqrt(rate_k) * A_k the generator is

    rhs(rho) = W rho + rho W^dagger + sum_k B_k rho B_k^dagger

which costs two dense matmuls plus one batched einsum per evaluation.
"""

import numpy as np


def _rhs(problem, rho):
    out = problem.w @ rho + rho @ problem.w_dag
    if problem.b_stack.shape[0]:
        tmp = problem.b_stack @ rho
        out += np.einsum("kac,kbc->ab", tmp, problem.b_conj)
    return out


def rk4_advance(problem, rho: np.ndarray, dt: float, n_steps: int) -> np.ndarray:
    """Advance `rho` in place by n_steps of classical fixed-step RK4."""
    half = 0.5 * dt
    sixth = dt / 6.0
    for _ in range(n_steps):
        k1 = _rhs(problem, rho)
        k2 = _rhs(problem, rho + half * k1)
        k3 = _rhs(problem, rho + half * k2)
        k4 = _rhs(problem, rho + dt * k3)
        rho += sixth * (k1 + 2.0 * (k2 + k3) + k4)
    return rho
