"""Quantum Fisher information of random symmetric states.

Two-mode states are numpy arrays over the Dicke basis |n, N-n>, n = 0..N:
a 1-D array is a pure state, a 2-D array a density matrix.
"""

import json

from ._core import (
    ArgumentError,
    CapacityError,
    DomainError,
    Error,
    NumericalDomainError,
    __version__,
    angular_momentum,
    beam_splitter,
    collective_sym,
    compact_average_qfi,
    experiment_names,
    fi_avg_bounds,
    fidelity,
    full_dim,
    haar_state,
    haar_unitary,
    lambda_of_spectrum,
    loss_avg_bounds,
    lu_upper_bound,
    mz_fi,
    mz_probabilities,
    partial_trace,
    qfi,
    random_circuit_state,
    sym_dim,
    sym_power_lift,
)
from . import _core


def experiment_defaults(name):
    """Default parameters of a named experiment."""
    return json.loads(_core.experiment_defaults(name))


def run_experiment(name, workers=0, **params):
    """Runs a named experiment; returns columns, rows, checks and the CSV text."""
    return _core.run_experiment(name, json.dumps(params), workers)
