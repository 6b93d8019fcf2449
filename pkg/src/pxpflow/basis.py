"""Rydberg-blockaded Hilbert space: enumeration and indexing.

A chain of N spins with the blockade constraint (no two adjacent up-spins)
spans a subspace of dimension F(N+2), the Fibonacci numbers with
F(1) = F(2) = 1.  Configurations are stored as integers whose binary
expansion, read most-significant bit first, is the spin pattern: site 1 is
the leftmost bit, bit 1 means spin-up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

N_MIN = 2
N_MAX = 28  # F(30) = 832040 states; dense vector + Krylov workspace stays in desk memory


def site_bit(config: int, site: int, n_sites: int) -> int:
    """Bit of ``site`` (1-based, site 1 leftmost) in an integer configuration."""
    return (config >> (n_sites - site)) & 1


def config_string(config: int, n_sites: int) -> str:
    """Render a configuration as its N-character bit pattern."""
    return format(config, f"0{n_sites}b")


def is_blockade_valid(config: int) -> bool:
    """True when no two adjacent bits are both 1."""
    return (config & (config >> 1)) == 0


def _enumerate_valid(n_sites: int) -> np.ndarray:
    # Valid strings of length n are 0+valid(n-1) or 10+valid(n-2); both blocks
    # are internally ascending and the second block dominates the first, so
    # concatenation keeps ascending integer order without a sort.
    prev2 = np.array([0], dtype=np.int64)        # length 0
    prev1 = np.array([0, 1], dtype=np.int64)     # length 1
    if n_sites == 1:
        return prev1
    for n in range(2, n_sites + 1):
        cur = np.concatenate([prev1, (1 << (n - 1)) + prev2])
        prev2, prev1 = prev1, cur
    return prev1


@dataclass(frozen=True)
class BlockadeBasis:
    """Ordered basis of all blockade-valid configurations of an open chain."""

    n_sites: int
    states: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index_of(self, configs) -> np.ndarray:
        """Ordinals of configurations (scalar or array); raises on invalid input."""
        configs = np.asarray(configs, dtype=np.int64)
        pos = np.searchsorted(self.states, configs)
        bad = (pos >= self.dim) | (self.states[np.minimum(pos, self.dim - 1)] != configs)
        if np.any(bad):
            culprit = int(np.atleast_1d(configs)[np.atleast_1d(bad).nonzero()[0][0]])
            raise KeyError(
                f"configuration {config_string(culprit, self.n_sites)} is not in the "
                f"blockaded basis (N={self.n_sites})"
            )
        return pos

    def __hash__(self):
        return hash((self.n_sites, self.dim))


def build_basis(n_sites: int) -> BlockadeBasis:
    """Enumerate the blockaded basis for an open chain of ``n_sites`` spins.

    States are sorted by ascending integer value of the bit pattern, so
    ordinals are reproducible across runs and machines.
    """
    if not (N_MIN <= n_sites <= N_MAX):
        raise ValueError(
            f"chain length must satisfy {N_MIN} <= N <= {N_MAX}, got {n_sites}"
        )
    states = _enumerate_valid(n_sites)
    states.setflags(write=False)
    return BlockadeBasis(n_sites=n_sites, states=states)


def neel_config(n_sites: int) -> int:
    """Integer for the alternating pattern 0101... (site 1 down, site 2 up)."""
    value = 0
    for site in range(2, n_sites + 1, 2):
        value |= 1 << (n_sites - site)
    return value


def neel_state(basis: BlockadeBasis) -> np.ndarray:
    """Unit statevector concentrated on the alternating 0101... configuration."""
    config = neel_config(basis.n_sites)
    assert is_blockade_valid(config)
    psi = np.zeros(basis.dim, dtype=np.complex128)
    psi[basis.index_of(config)] = 1.0
    return psi
