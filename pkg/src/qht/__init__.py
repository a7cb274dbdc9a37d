"""Simulator for self-contained quantum heat transformers.

Small qubit networks, each qubit holding its own thermal reservoir,
exchange energy through a single resonant interaction and redistribute
thermal gradients between two junctions, stepping them down or up without
external work.  The package builds the secular master equation for such
networks, evolves it by two independent routes, solves for steady states,
and scores the transformer behavior.
"""

from .baths import BathSpec, born_markov_margin, bose_einstein, decay_rate, rate_table, spectral_density
from .config import RunConfig, bundled_names, load_config, parse_config
from .dynamics import (
    DensityMatrix,
    Trajectory,
    integrate_rk4,
    propagate_expm,
    propagate_expm_dense,
    steady_state,
    steady_temperatures,
)
from .lindblad import BohrDecomposition, decompose, dissipator, liouvillian, rhs
from .metrics import (
    MetricsReport,
    Mode,
    TransientWindow,
    capacity,
    gradients,
    local_temperature,
    rate_ordering,
    sweep,
    transient_window,
)
from .model import (
    BiasReport,
    InteractionKind,
    QubitSpec,
    SystemSpec,
    ValidationReport,
    bias_check,
    build_hamiltonian,
    gibbs_population,
    initial_state,
    validate,
)

__version__ = "0.1.0"
