"""Reduced density matrices of small subsystems, and half-chain Schmidt spectra.

A subsystem of m sites is reduced onto the full 2^m qubit space (blockade
kills some amplitudes but the operator lives on the tensor product).  The
reduction never materializes the environment: basis states are scattered
into a (subsystem config) x (environment pattern) matrix M and the density
matrix is M M^dagger.  The scatter indices depend only on the chain length
and the chosen sites, so they are planned once and cached.

Subsystem qubits are ordered by ascending site number, leftmost site first,
matching the global convention that site 1 is the most significant bit.  A
density matrix index a therefore reads as the subsystem bit pattern of a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BlockadeBasis, _enumerate_valid

MAX_SUBSYSTEM_SITES = 6


@dataclass(frozen=True)
class SubsystemSpec:
    """A labeled choice of sites to keep when tracing out the rest."""

    n_sites: int
    sites: tuple
    label: str
    pattern: str = "custom"

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        if not 1 <= len(sites) <= MAX_SUBSYSTEM_SITES:
            raise ValueError(
                f"subsystem must keep 1..{MAX_SUBSYSTEM_SITES} sites, got {len(sites)}"
            )
        if any(b <= a for a, b in zip(sites, sites[1:])):
            raise ValueError("subsystem sites must be strictly increasing")
        if sites[0] < 1 or sites[-1] > self.n_sites:
            raise ValueError(f"subsystem sites {sites} leave the chain 1..{self.n_sites}")

    @property
    def dim(self) -> int:
        return 1 << len(self.sites)


def odd_separated(n_sites: int, ell: int) -> SubsystemSpec:
    """ell central sites at mutual distance 2: N/2, N/2+2, ..."""
    start = n_sites // 2
    sites = tuple(start + 2 * j for j in range(ell))
    return SubsystemSpec(n_sites=n_sites, sites=sites, label=f"l{ell}", pattern="odd-separated")


def adjacent(n_sites: int, ell: int) -> SubsystemSpec:
    """ell consecutive central sites starting at N/2."""
    start = n_sites // 2
    sites = tuple(start + j for j in range(ell))
    return SubsystemSpec(n_sites=n_sites, sites=sites, label=f"l{ell}adj", pattern="adjacent")


def block_with_probe(n_sites: int, k: int) -> SubsystemSpec:
    """A k-site block at N/2 plus the next site as a probe (the last qubit)."""
    start = n_sites // 2
    sites = tuple(start + j for j in range(k + 1))
    return SubsystemSpec(n_sites=n_sites, sites=sites, label=f"k{k}", pattern="adjacent")


_plan_cache: dict = {}


def _extraction_plan(basis: BlockadeBasis, sites: tuple):
    """Scatter indices mapping basis amplitudes into the (sub, env) matrix."""
    key = (basis.n_sites, sites)
    plan = _plan_cache.get(key)
    if plan is None:
        n = basis.n_sites
        m = len(sites)
        sub = np.zeros(basis.dim, dtype=np.int64)
        env_mask = (1 << n) - 1
        for pos, site in enumerate(sites):
            shift = n - site
            sub |= ((basis.states >> shift) & 1) << (m - 1 - pos)
            env_mask &= ~(1 << shift)
        env = basis.states & env_mask
        _, env_slot = np.unique(env, return_inverse=True)
        plan = (sub, env_slot.astype(np.int64), int(env_slot.max()) + 1)
        _plan_cache[key] = plan
    return plan


def partial_trace(basis: BlockadeBasis, psi: np.ndarray, spec: SubsystemSpec) -> np.ndarray:
    """Reduced density matrix of ``spec.sites``, shape (2^m, 2^m)."""
    sub, env_slot, n_env = _extraction_plan(basis, spec.sites)
    M = np.zeros((spec.dim, n_env), dtype=np.complex128)
    M[sub, env_slot] = psi
    return M @ M.conj().T


def partial_trace_series(basis: BlockadeBasis, psis: np.ndarray, spec: SubsystemSpec) -> np.ndarray:
    """Reduced density matrices for a (T, dim) stack of states, shape (T, 2^m, 2^m)."""
    sub, env_slot, n_env = _extraction_plan(basis, spec.sites)
    T = psis.shape[0]
    rhos = np.empty((T, spec.dim, spec.dim), dtype=np.complex128)
    M = np.zeros((spec.dim, n_env), dtype=np.complex128)
    for t in range(T):
        M[sub, env_slot] = psis[t]
        np.matmul(M, M.conj().T, out=rhos[t])
    return rhos


def eigenvalues_desc(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Spectrum of a density matrix, cleaned and sorted descending.

    Eigenvalues in [-tol, 0) are clamped to zero (Hermitian roundoff);
    anything more negative means the input was not a state and raises.
    The clamped spectrum is renormalized to unit sum.
    """
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -tol:
        raise ValueError(f"matrix has eigenvalue {evals[0]:.3e} < -{tol:.0e}; not a state")
    evals = np.maximum(evals, 0.0)
    return np.sort(evals / evals.sum())[::-1]


def half_chain_probs(basis: BlockadeBasis, psi: np.ndarray, cut: int | None = None) -> np.ndarray:
    """Squared Schmidt coefficients across the bond after site ``cut``.

    Defaults to the middle bond.  Works through the compact bipartite
    amplitude matrix indexed by the blockaded bases of the two halves,
    so no 2^(N/2) objects ever appear.
    """
    n = basis.n_sites
    if cut is None:
        cut = n // 2
    if not 1 <= cut <= n - 1:
        raise ValueError(f"cut must fall between sites, got {cut}")
    left_states = _enumerate_valid(cut)
    right_states = _enumerate_valid(n - cut)
    # Both halves of a blockade-valid string are themselves valid, so the
    # searchsorted positions are exact matches by construction.
    left_idx = np.searchsorted(left_states, basis.states >> (n - cut))
    right_idx = np.searchsorted(right_states, basis.states & ((1 << (n - cut)) - 1))
    M = np.zeros((len(left_states), len(right_states)), dtype=np.complex128)
    M[left_idx, right_idx] = psi
    s = np.linalg.svd(M, compute_uv=False)
    return s * s
