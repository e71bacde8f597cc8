"""Finite-volume Anderson model with disorder on a sublattice.

Thin wrapper over the compiled core; see the README for the experiment kinds.
"""

import json as _json

from ._sporadic import (  # noqa: F401
    CapacityError,
    DisorderModel,
    DomainError,
    Error,
    InsufficientSampleError,
    LatticeSpec,
    NumericError,
    ValidationError,
    __version__,
    count_in_interval,
    derive_seed,
    eigenvalues,
    free_resolvent_bound,
    hamiltonian_dense,
    inverse_moment,
    ks_exponential,
    potential,
    resolvent_column,
    wegner_ratio,
)
from ._sporadic import _run_experiment, _run_summary


def run_experiment(config_text, out_dir, threads=1):
    """Run one experiment from config text, write its files, and return the manifest."""
    return _json.loads(_run_experiment(config_text, str(out_dir), threads, True))


def summarize(config_text, threads=1):
    """Run one experiment in memory and return its summary."""
    return _json.loads(_run_summary(config_text, threads))
