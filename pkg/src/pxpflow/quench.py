"""Experiment orchestration: quench runs, snapshot stores, and file output.

A run is described by a RunManifest (model, time grid, subsystem catalog,
shift grids).  simulate() evolves the Neel state, extracting per-snapshot
reduced density matrices, fidelity, half-chain entropy and negativity on
the fly, then derives distance/TVD backflow degrees on the shift grid.
run_experiment() persists everything as CSV plus a manifest.json carrying
a checksum of the data files; identical manifests reproduce identical
bytes (the wall-clock entry in manifest.json is the only exception).
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .basis import build_basis, neel_state
from .evolve import EvolutionConfig, evolve_snapshots
from .hamiltonian import ModelSpec, build_model
from .metrics import (
    degree_curve,
    distance_series,
    entropy_from_probs,
    fidelity,
    find_maxima_period,
    find_minima_period,
    negativity,
    spectra_series,
    tvd_degree_curve,
    tvd_series,
)
from .rdm import (
    SubsystemSpec,
    adjacent,
    block_with_probe,
    half_chain_probs,
    odd_separated,
    partial_trace,
)

DELTA_GRID = tuple(round(0.05 * k, 2) for k in range(1, 121))
SERIES_DELTAS = (1.0, 2.0, 3.0)


def default_subsystems(n_sites: int) -> tuple:
    """Distance-tracking catalog: odd-separated l=1..4 plus the adjacent pair.

    Entries that would stick out of a short chain are dropped.
    """
    subs = [
        odd_separated(n_sites, ell)
        for ell in (1, 2, 3, 4)
        if n_sites // 2 + 2 * (ell - 1) <= n_sites
    ]
    if n_sites // 2 + 1 <= n_sites:
        subs.append(adjacent(n_sites, 2))
    return tuple(subs)


def default_negativity_ks(n_sites: int) -> tuple:
    """Block sizes k=1..5 whose probe site still fits on the chain."""
    return tuple(k for k in (1, 2, 3, 4, 5) if n_sites // 2 + k <= n_sites)


@dataclass(frozen=True)
class RunManifest:
    """Complete, reproducible description of one quench experiment."""

    model: ModelSpec
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    subsystems: tuple = ()
    negativity_ks: tuple | None = None
    delta_grid: tuple = DELTA_GRID
    series_deltas: tuple = SERIES_DELTAS
    track_ee: bool = True

    def __post_init__(self):
        if not self.subsystems:
            object.__setattr__(self, "subsystems", default_subsystems(self.model.n_sites))
        if self.negativity_ks is None:
            object.__setattr__(self, "negativity_ks", default_negativity_ks(self.model.n_sites))

    @property
    def spacing(self) -> float:
        return self.evolution.tau * self.evolution.snapshot_every

    def validate(self) -> None:
        """Raise with every offending field named, or return silently."""
        problems = []
        n = self.model.n_sites
        for sub in self.subsystems:
            if sub.n_sites != n:
                problems.append(f"subsystem {sub.label} built for N={sub.n_sites}, run has N={n}")
        for k in self.negativity_ks:
            if not 1 <= k <= 5:
                problems.append(f"negativity_ks entry {k} outside 1..5")
            elif n // 2 + k > n:
                problems.append(f"negativity block k={k} leaves the chain at N={n}")
        horizon = self.evolution.t_max
        for name, grid in (("delta_grid", self.delta_grid), ("series_deltas", self.series_deltas)):
            for d in grid:
                lag = round(d / self.spacing)
                if abs(lag * self.spacing - d) > 1e-9:
                    problems.append(f"{name} entry {d} is not a multiple of the snapshot spacing")
                elif horizon > 0 and d > horizon - self.spacing + 1e-9:
                    problems.append(f"{name} entry {d} reaches past t_max={horizon}")
        if sorted(set(self.delta_grid)) != list(self.delta_grid):
            problems.append("delta_grid must be strictly increasing")
        if problems:
            raise ValueError("invalid manifest: " + "; ".join(problems))

    def to_dict(self) -> dict:
        return {
            "model": {
                "family": self.model.family,
                "n_sites": self.model.n_sites,
                "lam": self.model.lam,
                "r": self.model.r,
                "g": self.model.g,
            },
            "evolution": {
                "tau": self.evolution.tau,
                "t_max": self.evolution.t_max,
                "snapshot_every": self.evolution.snapshot_every,
            },
            "subsystems": [
                {"sites": list(s.sites), "label": s.label, "pattern": s.pattern}
                for s in self.subsystems
            ],
            "negativity_ks": list(self.negativity_ks),
            "delta_grid": list(self.delta_grid),
            "series_deltas": list(self.series_deltas),
            "track_ee": self.track_ee,
        }


def manifest_from_dict(data: dict) -> RunManifest:
    """Rebuild a manifest from its JSON form; output-side keys are ignored."""
    model = ModelSpec(**data["model"])
    evolution = EvolutionConfig(**data.get("evolution", {}))
    subs = tuple(
        SubsystemSpec(
            n_sites=model.n_sites,
            sites=tuple(s["sites"]),
            label=s["label"],
            pattern=s.get("pattern", "custom"),
        )
        for s in data.get("subsystems", [])
    )
    neg_ks = data.get("negativity_ks")
    return RunManifest(
        model=model,
        evolution=evolution,
        subsystems=subs,
        negativity_ks=None if neg_ks is None else tuple(neg_ks),
        delta_grid=tuple(data.get("delta_grid", DELTA_GRID)),
        series_deltas=tuple(data.get("series_deltas", SERIES_DELTAS)),
        track_ee=bool(data.get("track_ee", True)),
    )


class SnapshotStore:
    """Preallocated per-run series; append-only while evolving, frozen after."""

    def __init__(self, basis, manifest: RunManifest):
        self.times = manifest.evolution.snapshot_times
        T = len(self.times)
        self._basis = basis
        self._cut = basis.n_sites // 2
        self.subsystems = tuple(manifest.subsystems)
        self.negativity_subsystems = tuple(
            block_with_probe(basis.n_sites, k) for k in manifest.negativity_ks
        )
        self.rdms = {
            s.label: np.empty((T, s.dim, s.dim), dtype=np.complex128) for s in self.subsystems
        }
        self.fidelity = np.empty(T)
        self.ee_half = np.empty(T) if manifest.track_ee else None
        self.negativity = {s.label: np.empty(T) for s in self.negativity_subsystems}
        self._psi0 = None
        self._cursor = 0
        self._frozen = False

    def record(self, psi: np.ndarray) -> None:
        if self._frozen:
            raise RuntimeError("snapshot store is read-only after finalize()")
        i = self._cursor
        if i >= len(self.times):
            raise RuntimeError("snapshot store is full")
        if self._psi0 is None:
            self._psi0 = psi.copy()
        self.fidelity[i] = fidelity(psi, self._psi0)
        if self.ee_half is not None:
            self.ee_half[i] = entropy_from_probs(half_chain_probs(self._basis, psi, self._cut))
        for sub in self.subsystems:
            self.rdms[sub.label][i] = partial_trace(self._basis, psi, sub)
        for sub in self.negativity_subsystems:
            rho = partial_trace(self._basis, psi, sub)
            self.negativity[sub.label][i] = negativity(rho, (sub.dim // 2, 2))
        self._cursor += 1

    def finalize(self) -> None:
        if self._cursor != len(self.times):
            raise RuntimeError(f"recorded {self._cursor} of {len(self.times)} snapshots")
        for arr in self._iter_arrays():
            arr.setflags(write=False)
        self._frozen = True

    def _iter_arrays(self):
        yield self.fidelity
        if self.ee_half is not None:
            yield self.ee_half
        yield from self.rdms.values()
        yield from self.negativity.values()


@dataclass
class RunResult:
    """In-memory products of one run: the store plus derived degree curves."""

    manifest: RunManifest
    store: SnapshotStore
    spectra: dict
    degree: dict
    degree1: dict

    @property
    def times(self) -> np.ndarray:
        return self.store.times

    @property
    def delta_grid(self) -> np.ndarray:
        return np.array(self.manifest.delta_grid)


def simulate(manifest: RunManifest) -> RunResult:
    """Run the quench described by ``manifest`` and derive all series."""
    manifest.validate()
    basis = build_basis(manifest.model.n_sites)
    H = build_model(basis, manifest.model)
    store = SnapshotStore(basis, manifest)
    for _, psi in evolve_snapshots(H, neel_state(basis), manifest.evolution):
        store.record(psi)
    store.finalize()
    spacing = manifest.spacing
    spectra, deg, deg1 = {}, {}, {}
    many = len(store.times) > 1
    for sub in store.subsystems:
        spectra[sub.label] = spectra_series(store.rdms[sub.label])
        if many:
            deg[sub.label] = degree_curve(store.rdms[sub.label], manifest.delta_grid, spacing)
            deg1[sub.label] = tvd_degree_curve(spectra[sub.label], manifest.delta_grid, spacing)
        else:
            deg[sub.label] = np.zeros(0)
            deg1[sub.label] = np.zeros(0)
    return RunResult(manifest=manifest, store=store, spectra=spectra, degree=deg, degree1=deg1)


def _write_csv(path, header, columns) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{x:.12g}" for x in row) + "\n")


def _delta_tag(delta: float) -> str:
    return f"{delta:g}"


def run_experiment(manifest: RunManifest, out_dir) -> str:
    """Execute a run and persist it under ``out_dir``; returns the directory."""
    started = time.perf_counter()
    result = simulate(manifest)
    store = result.store
    os.makedirs(out_dir, exist_ok=True)
    spacing = manifest.spacing
    times = store.times
    T = len(times)
    _write_csv(os.path.join(out_dir, "fidelity.csv"), ("t", "fidelity"), (times, store.fidelity))
    if store.ee_half is not None:
        _write_csv(os.path.join(out_dir, "ee_half.csv"), ("t", "ee"), (times, store.ee_half))
    for sub in store.subsystems:
        label = sub.label
        for d in manifest.series_deltas:
            lag = int(round(d / spacing))
            if T - lag < 1:
                continue
            tag = _delta_tag(d)
            td = distance_series(store.rdms[label], d, spacing)
            _write_csv(
                os.path.join(out_dir, f"td_{label}_{tag}.csv"), ("t", "td"), (times[: T - lag], td)
            )
            vd = tvd_series(result.spectra[label], d, spacing)
            _write_csv(
                os.path.join(out_dir, f"tvd_{label}_{tag}.csv"),
                ("t", "tvd"),
                (times[: T - lag], vd),
            )
        if len(result.degree[label]):
            _write_csv(
                os.path.join(out_dir, f"degree_{label}.csv"),
                ("delta", "degree"),
                (manifest.delta_grid, result.degree[label]),
            )
            _write_csv(
                os.path.join(out_dir, f"degree1_{label}.csv"),
                ("delta", "degree1"),
                (manifest.delta_grid, result.degree1[label]),
            )
    for sub in store.negativity_subsystems:
        _write_csv(
            os.path.join(out_dir, f"negativity_{sub.label}.csv"),
            ("t", "negativity"),
            (times, store.negativity[sub.label]),
        )
    digest = hashlib.sha256()
    for name in sorted(f for f in os.listdir(out_dir) if f.endswith(".csv")):
        digest.update(name.encode())
        with open(os.path.join(out_dir, name), "rb") as fh:
            digest.update(fh.read())
    payload = result.manifest.to_dict()
    payload["version"] = __version__
    payload["wall_clock_s"] = round(time.perf_counter() - started, 3)
    payload["checksum"] = f"sha256:{digest.hexdigest()}"
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return str(out_dir)


@dataclass
class ModelComparison:
    """Side-by-side degree curves and revival periods for several runs."""

    model_labels: list
    delta_grid: np.ndarray
    degree: dict
    degree1: dict
    periods: dict

    def to_text(self) -> str:
        lines = []
        width = max(12, max(len(m) for m in self.model_labels) + 2)
        for name, table in (("degree", self.degree), ("degree1", self.degree1)):
            for sub_label, columns in table.items():
                lines.append(f"[{name} {sub_label}]")
                header = "delta".rjust(8) + "".join(m.rjust(width) for m in self.model_labels)
                lines.append(header)
                for i, d in enumerate(self.delta_grid):
                    row = f"{d:8.2f}" + "".join(
                        f"{columns[m][i]:{width}.6g}" for m in self.model_labels
                    )
                    lines.append(row)
                lines.append("")
        lines.append("[periods]")
        lines.append("series".rjust(16) + "".join(m.rjust(width) for m in self.model_labels))
        series_names = sorted({k for per in self.periods.values() for k in per})
        for name in series_names:
            row = name.rjust(16)
            for m in self.model_labels:
                p = self.periods[m].get(name)
                row += ("n/a".rjust(width)) if p is None else f"{p:{width}.4g}"
            lines.append(row)
        lines.append("")
        return "\n".join(lines)


def compare_models(manifests, results=None) -> ModelComparison:
    """Run (or reuse) several manifests sharing grids and tabulate them.

    Precomputed RunResults may be passed in the same order to skip
    re-simulation.
    """
    if len(manifests) < 2:
        raise ValueError("need at least two manifests to compare")
    first = manifests[0]
    for m in manifests[1:]:
        same = (
            m.model.n_sites == first.model.n_sites
            and m.evolution == first.evolution
            and m.delta_grid == first.delta_grid
            and m.series_deltas == first.series_deltas
            and tuple(s.label for s in m.subsystems) == tuple(s.label for s in first.subsystems)
        )
        if not same:
            raise ValueError("manifests disagree on N, time grid, shift grid, or subsystems")
    if results is None:
        results = [simulate(m) for m in manifests]
    labels = []
    for m in manifests:
        label = m.model.label
        while label in labels:
            label += "'"
        labels.append(label)
    degree_table: dict = {}
    degree1_table: dict = {}
    periods: dict = {}
    spacing = first.spacing
    probe_delta = first.series_deltas[0] if first.series_deltas else None
    for label, res in zip(labels, results):
        periods[label] = {}
        try:
            periods[label]["fidelity"] = find_maxima_period(
                res.store.fidelity, res.times
            ).period
        except ValueError:
            periods[label]["fidelity"] = None
        for sub in res.store.subsystems:
            degree_table.setdefault(sub.label, {})[label] = res.degree[sub.label]
            degree1_table.setdefault(sub.label, {})[label] = res.degree1[sub.label]
            if probe_delta is None:
                continue
            td = distance_series(res.store.rdms[sub.label], probe_delta, spacing)
            try:
                periods[label][f"td_{sub.label}"] = find_minima_period(
                    td, res.times[: len(td)]
                ).period
            except ValueError:
                periods[label][f"td_{sub.label}"] = None
    return ModelComparison(
        model_labels=labels,
        delta_grid=np.array(first.delta_grid),
        degree=degree_table,
        degree1=degree1_table,
        periods=periods,
    )


def _sweep_worker(job):
    manifest, out_dir = job
    return run_experiment(manifest, out_dir)


def sweep(manifests, labels, out_root, max_workers=None) -> list:
    """Run several manifests in parallel worker processes.

    Each run writes to ``out_root/<label>``; returns the directories in
    input order.
    """
    if len(labels) != len(manifests) or len(set(labels)) != len(labels):
        raise ValueError("labels must be unique and match manifests one-to-one")
    os.makedirs(out_root, exist_ok=True)
    jobs = [(m, os.path.join(out_root, label)) for m, label in zip(manifests, labels)]
    if max_workers is None:
        max_workers = min(len(jobs), os.cpu_count() or 1)
    if max_workers <= 1:
        return [_sweep_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_sweep_worker, jobs))
