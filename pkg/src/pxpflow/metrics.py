"""Scalar diagnostics: trace distance, backflow degrees, TVD, fidelity,
entropy, negativity, and extremum/period detection.

Distance series are taken between time-shifted snapshots of one trajectory,
T_d(rho_{t+delta}, rho_t), so a shift delta must be an integer number of
snapshot intervals.  Degrees accumulate the positive part of the slope,

    alpha(t) = (T_d(t+tau) - T_d(t)) / tau,   D = sum of alpha > 0,

carrying the 1/tau factor, so values scale with the grid; comparisons
across models must use identical grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rdm import eigenvalues_desc


def _as_lag(delta: float, spacing: float, n_snapshots: int) -> int:
    lag = int(round(delta / spacing))
    if abs(lag * spacing - delta) > 1e-9:
        raise ValueError(f"delta={delta} is not a multiple of the snapshot spacing {spacing}")
    if lag < 0:
        raise ValueError("delta must be nonnegative")
    if lag >= n_snapshots:
        raise ValueError(f"delta={delta} reaches past the end of the trajectory")
    return lag


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the sum of absolute eigenvalues of rho - sigma."""
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    return 0.5 * float(np.abs(np.linalg.eigvalsh(rho - sigma)).sum())


def distance_series(rhos: np.ndarray, delta: float, spacing: float) -> np.ndarray:
    """T_d between snapshots ``delta`` apart, over all valid start times.

    ``rhos`` is a (T, d, d) stack on a uniform grid with the given spacing;
    the result has length T - delta/spacing.
    """
    lag = _as_lag(delta, spacing, len(rhos))
    if lag == 0:
        return np.zeros(len(rhos))
    evals = np.linalg.eigvalsh(rhos[lag:] - rhos[:-lag])
    return 0.5 * np.abs(evals).sum(axis=1)


def slope_alpha(series: np.ndarray, spacing: float) -> np.ndarray:
    """Forward-difference slope of a series on a uniform grid."""
    series = np.asarray(series)
    if len(series) < 2:
        raise ValueError("need at least two points to take a slope")
    return np.diff(series) / spacing


def degree(series: np.ndarray, spacing: float) -> float:
    """Cumulative positive slope: the backflow degree of one series."""
    alpha = slope_alpha(series, spacing)
    return float(alpha[alpha > 0].sum())


def degree_curve(rhos: np.ndarray, deltas, spacing: float) -> np.ndarray:
    """Backflow degree of the trace-distance series at each shift in ``deltas``."""
    return np.array([degree(distance_series(rhos, d, spacing), spacing) for d in deltas])


def spectra_series(rhos: np.ndarray) -> np.ndarray:
    """Descending clamped spectrum of every snapshot, shape (T, d)."""
    evals = np.linalg.eigvalsh(rhos)
    if evals.min() < -1e-10:
        raise ValueError(f"snapshot eigenvalue {evals.min():.3e} < -1e-10; not a state")
    evals = np.maximum(evals, 0.0)
    evals /= evals.sum(axis=1, keepdims=True)
    return evals[:, ::-1]


def tvd(p: np.ndarray, q: np.ndarray) -> float:
    """Half l1 distance between two descending probability vectors."""
    p = np.asarray(p)
    q = np.asarray(q)
    if p.shape != q.shape:
        raise ValueError("probability vectors differ in length")
    for vec in (p, q):
        if abs(vec.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {vec.sum()!r}, not 1")
    return 0.5 * float(np.abs(p - q).sum())


def tvd_series(probs: np.ndarray, delta: float, spacing: float) -> np.ndarray:
    """V_d between descending spectra ``delta`` apart; probs is (T, d)."""
    lag = _as_lag(delta, spacing, len(probs))
    if lag == 0:
        return np.zeros(len(probs))
    return 0.5 * np.abs(probs[lag:] - probs[:-lag]).sum(axis=1)


def tvd_degree(probs: np.ndarray, delta: float, spacing: float) -> float:
    """Backflow degree of the spectral TVD series at one shift."""
    return degree(tvd_series(probs, delta, spacing), spacing)


def tvd_degree_curve(probs: np.ndarray, deltas, spacing: float) -> np.ndarray:
    return np.array([tvd_degree(probs, d, spacing) for d in deltas])


def fidelity(psi_t: np.ndarray, psi_0: np.ndarray) -> float:
    """Return probability |<psi_0|psi_t>|^2."""
    return float(abs(np.vdot(psi_0, psi_t)) ** 2)


def entropy_from_probs(probs: np.ndarray) -> float:
    """Shannon entropy in nats with the 0 log 0 = 0 convention."""
    p = np.asarray(probs)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum()) + 0.0


def von_neumann_entropy(rho: np.ndarray) -> float:
    return entropy_from_probs(eigenvalues_desc(rho))


def negativity(rho_ab: np.ndarray, dims: tuple) -> float:
    """Entanglement negativity from the partial transpose on the second factor.

    ``dims = (dim_a, dim_b)`` factorizes the joint space; the probe (the
    transposed subsystem) is the trailing factor b.
    """
    da, db = dims
    if da * db != rho_ab.shape[0]:
        raise ValueError(f"dims {dims} do not factor dimension {rho_ab.shape[0]}")
    pt = rho_ab.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)
    p = np.linalg.eigvalsh(pt)
    return 0.5 * float((np.abs(p) - p).sum())


def negativity_series(rhos: np.ndarray, dims: tuple) -> np.ndarray:
    """Negativity of every snapshot in a (T, d, d) stack."""
    da, db = dims
    if da * db != rhos.shape[1]:
        raise ValueError(f"dims {dims} do not factor dimension {rhos.shape[1]}")
    T = rhos.shape[0]
    pt = rhos.reshape(T, da, db, da, db).transpose(0, 1, 4, 3, 2).reshape(T, da * db, da * db)
    p = np.linalg.eigvalsh(pt)
    return 0.5 * (np.abs(p) - p).sum(axis=1)


def local_minima_indices(values: np.ndarray) -> np.ndarray:
    """Interior strict local minima of a series."""
    v = np.asarray(values)
    idx = np.nonzero((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:]))[0] + 1
    return idx


def local_maxima_indices(values: np.ndarray) -> np.ndarray:
    return local_minima_indices(-np.asarray(values))


@dataclass(frozen=True)
class PeriodEstimate:
    period: float
    uncertainty: float
    extremum_times: np.ndarray


def find_minima_period(values, times, quantile: float = 0.10) -> PeriodEstimate:
    """Mean spacing of the deep minima of a series.

    Deep means a strict interior local minimum whose value lies below the
    given quantile of the whole series.  Candidates that sit inside one
    contiguous below-threshold excursion count as a single minimum (the
    deepest), so ripples at the bottom of a dip are not double counted.
    The uncertainty is the standard deviation of the successive spacings.
    """
    v = np.asarray(values)
    t = np.asarray(times)
    threshold = np.quantile(v, quantile)
    idx = local_minima_indices(v)
    idx = idx[v[idx] <= threshold]
    merged = []
    for i in idx:
        if merged and v[merged[-1] : i + 1].max() <= threshold:
            if v[i] < v[merged[-1]]:
                merged[-1] = i
        else:
            merged.append(i)
    idx = np.array(merged, dtype=np.int64)
    if len(idx) < 2:
        raise ValueError(f"found {len(idx)} deep minima; need at least 2 to measure a period")
    gaps = np.diff(t[idx])
    return PeriodEstimate(
        period=float(gaps.mean()),
        uncertainty=float(gaps.std()),
        extremum_times=t[idx],
    )


def find_maxima_period(values, times, quantile: float = 0.10) -> PeriodEstimate:
    """Mean spacing of the highest maxima (top ``quantile`` of the series)."""
    return find_minima_period(-np.asarray(values), times, quantile)
