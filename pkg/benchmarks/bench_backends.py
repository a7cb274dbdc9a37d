"""Benchmark the RK4 kernels: compiled extension vs numpy fallback.

Both backends advance the same prepared problem; this script times them on
the bundled three- and four-qubit networks and reports steps/second plus
the max elementwise deviation between their final states.

Usage: python3 benchmarks/bench_backends.py [--steps N] [--dt DT]
"""

import argparse
import time

import numpy as np

from qht import _backends
from qht.config import load_config
from qht.lindblad import decompose
from qht.model import initial_state


def time_backend(advance, problem, rho0, dt, n_steps):
    rho = np.ascontiguousarray(rho0.copy())
    t0 = time.perf_counter()
    advance(problem, rho, dt, n_steps)
    return time.perf_counter() - t0, rho


def bench(name, dt, n_steps):
    spec = load_config(name).system
    dec = decompose(spec)
    problem = _backends.prepare(dec.hamiltonian, dec.jumps)
    rho0 = initial_state(spec).matrix

    py_time, py_rho = time_backend(_backends.advance_python, problem, rho0, dt, n_steps)
    line = (
        f"{name:10s} dim={spec.dim:2d} channels={problem.b_stack.shape[0]:3d}  "
        f"python {n_steps / py_time:9.0f} steps/s"
    )
    if _backends.BACKEND == "compiled":
        c_time, c_rho = time_backend(
            _backends.advance_compiled, problem, rho0, dt, n_steps
        )
        dev = float(np.max(np.abs(py_rho - c_rho)))
        line += (
            f"  compiled {n_steps / c_time:9.0f} steps/s"
            f"  speedup {py_time / c_time:5.1f}x  agreement {dev:.2e}"
        )
    else:
        line += "  (compiled kernel not built; numpy fallback only)"
    print(line)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=2000, help="RK4 steps per timing")
    parser.add_argument("--dt", type=float, default=0.01)
    args = parser.parse_args()

    print(f"active backend: {_backends.BACKEND}")
    for name in ("fig2_p1", "fig7_t35"):
        bench(name, args.dt, args.steps)


if __name__ == "__main__":
    main()
