"""Backflow diagnostics for constrained spin-chain quenches.

Exact evolution of kinetically constrained chains (no two adjacent
up-spins) from the alternating product state, with subsystem trace-distance
and TVD backflow degrees, fidelity and entropy revivals, and pair
negativity, for the bare constrained-flip model and its z-dressed and
double-flip deformations.
"""

__version__ = "0.1.0"

from .basis import BlockadeBasis, build_basis, neel_config, neel_state
from .evolve import (
    EvolutionConfig,
    KrylovConvergenceError,
    Trajectory,
    evolve_snapshots,
    run_quench,
    step,
)
from .hamiltonian import (
    ModelSpec,
    SparseHamiltonian,
    build_model,
    build_pxp,
    build_pxpxp,
    build_pxpz,
)
from .metrics import (
    degree,
    degree_curve,
    distance_series,
    fidelity,
    find_maxima_period,
    find_minima_period,
    negativity,
    negativity_series,
    slope_alpha,
    trace_distance,
    tvd,
    tvd_degree,
    tvd_degree_curve,
    tvd_series,
    von_neumann_entropy,
)
from .quench import (
    DELTA_GRID,
    SERIES_DELTAS,
    ModelComparison,
    RunManifest,
    RunResult,
    SnapshotStore,
    compare_models,
    default_negativity_ks,
    default_subsystems,
    manifest_from_dict,
    run_experiment,
    simulate,
    sweep,
)
from .rdm import (
    SubsystemSpec,
    adjacent,
    block_with_probe,
    eigenvalues_desc,
    half_chain_probs,
    odd_separated,
    partial_trace,
    partial_trace_series,
)

__all__ = [
    "BlockadeBasis",
    "DELTA_GRID",
    "EvolutionConfig",
    "SERIES_DELTAS",
    "KrylovConvergenceError",
    "ModelComparison",
    "ModelSpec",
    "RunManifest",
    "RunResult",
    "SnapshotStore",
    "SparseHamiltonian",
    "SubsystemSpec",
    "Trajectory",
    "adjacent",
    "block_with_probe",
    "build_basis",
    "build_model",
    "build_pxp",
    "build_pxpxp",
    "build_pxpz",
    "compare_models",
    "default_negativity_ks",
    "default_subsystems",
    "degree",
    "degree_curve",
    "distance_series",
    "eigenvalues_desc",
    "evolve_snapshots",
    "fidelity",
    "find_maxima_period",
    "find_minima_period",
    "half_chain_probs",
    "manifest_from_dict",
    "neel_config",
    "neel_state",
    "negativity",
    "negativity_series",
    "odd_separated",
    "partial_trace",
    "partial_trace_series",
    "run_experiment",
    "run_quench",
    "simulate",
    "slope_alpha",
    "step",
    "sweep",
    "trace_distance",
    "tvd",
    "tvd_degree",
    "tvd_degree_curve",
    "tvd_series",
    "von_neumann_entropy",
]
