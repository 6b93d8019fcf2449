"""End-to-end pipeline tests: manifests, stores, CSV output, CLI."""

import json
import os

import numpy as np
import pytest

from pxpflow import (
    DELTA_GRID,
    EvolutionConfig,
    ModelSpec,
    RunManifest,
    SubsystemSpec,
    adjacent,
    build_basis,
    compare_models,
    default_negativity_ks,
    default_subsystems,
    distance_series,
    manifest_from_dict,
    neel_state,
    odd_separated,
    run_experiment,
    simulate,
    sweep,
    tvd_series,
)
from pxpflow.cli import main as cli_main
from pxpflow.metrics import degree, tvd

from oracle_dense import (
    dense_entropy,
    dense_negativity,
    dense_partial_trace,
    dense_pxp,
    embed,
    evolve_dense,
    project_to_basis,
)


def small_manifest(n=8, t_max=2.0, tau=0.01, every=20, **kw):
    # spacing 0.2; shift grid kept tiny so tests stay fast
    return RunManifest(
        model=ModelSpec(family="pxp", n_sites=n),
        evolution=EvolutionConfig(tau=tau, t_max=t_max, snapshot_every=every),
        delta_grid=(0.2, 0.4, 0.6),
        series_deltas=(0.2,),
        **kw,
    )


# ---------------------------------------------------------------- manifests


def test_default_manifest_validates():
    RunManifest(model=ModelSpec(family="pxp", n_sites=20)).validate()


def test_adaptive_defaults_fit_short_chains():
    man = RunManifest(model=ModelSpec(family="pxp", n_sites=8))
    for sub in man.subsystems:
        assert max(sub.sites) <= 8
    assert all(8 // 2 + k <= 8 for k in man.negativity_ks)
    man.validate()


def test_validate_enumerates_every_problem():
    man = RunManifest(
        model=ModelSpec(family="pxp", n_sites=8),
        subsystems=(odd_separated(10, 2),),
        negativity_ks=(1, 7),
        delta_grid=(0.015, 40.0),
    )
    with pytest.raises(ValueError) as err:
        man.validate()
    msg = str(err.value)
    assert "built for N=10" in msg
    assert "outside 1..5" in msg
    assert "not a multiple" in msg
    assert "t_max" in msg


def test_manifest_dict_roundtrip():
    man = RunManifest(
        model=ModelSpec(family="pxpz", n_sites=10, lam=0.07, r=2),
        evolution=EvolutionConfig(tau=0.02, t_max=1.0, snapshot_every=5),
        delta_grid=(0.1, 0.2),
        series_deltas=(0.1,),
        track_ee=False,
    )
    again = manifest_from_dict(man.to_dict())
    assert again == man


def test_manifest_from_dict_ignores_output_keys():
    payload = small_manifest().to_dict()
    payload["version"] = "9.9.9"
    payload["wall_clock_s"] = 1.0
    payload["checksum"] = "sha256:junk"
    assert manifest_from_dict(payload) == small_manifest()


# ---------------------------------------------------------------- simulate


def test_store_is_frozen_after_simulate():
    res = simulate(small_manifest())
    with pytest.raises((ValueError, RuntimeError)):
        res.store.fidelity[0] = 0.5
    with pytest.raises(RuntimeError):
        res.store.record(neel_state(build_basis(8)))


def test_simulate_series_shapes():
    man = small_manifest()
    res = simulate(man)
    T = len(man.evolution.snapshot_times)
    assert res.store.fidelity.shape == (T,)
    assert res.store.ee_half.shape == (T,)
    for sub in man.subsystems:
        assert res.store.rdms[sub.label].shape == (T, sub.dim, sub.dim)
        assert res.degree[sub.label].shape == (len(man.delta_grid),)
        assert res.degree1[sub.label].shape == (len(man.delta_grid),)
    assert res.store.fidelity[0] == pytest.approx(1.0)


def test_pipeline_matches_dense_oracle_n8():
    """Krylov + blockaded partial trace + metrics vs dense zero-padded oracle."""
    n = 8
    man = small_manifest(n=n, t_max=2.0, tau=0.01, every=20)
    res = simulate(man)
    basis = build_basis(n)
    H_full = project_to_basis(dense_pxp(n), basis.states)
    psi0 = neel_state(basis)
    times = res.times
    spacing = man.spacing

    dense_states = [evolve_dense(H_full, psi0, t) for t in times]
    # fidelity and half-chain entropy
    for i, phi in enumerate(dense_states):
        assert abs(res.store.fidelity[i] - abs(np.vdot(psi0, phi)) ** 2) < 1e-9
        full = embed(phi, basis.states, n)
        rho_half = dense_partial_trace(full, n, tuple(range(1, n // 2 + 1)))
        assert abs(res.store.ee_half[i] - dense_entropy(rho_half)) < 1e-9

    for sub in man.subsystems:
        ref = np.array(
            [dense_partial_trace(embed(phi, basis.states, n), n, sub.sites) for phi in dense_states]
        )
        got = res.store.rdms[sub.label]
        assert np.max(np.abs(got - ref)) < 1e-9
        # distance series and degree off the dense RDMs
        lag = int(round(0.2 / spacing))
        td = distance_series(got, 0.2, spacing)
        td_ref = np.array(
            [
                0.5 * np.sum(np.abs(np.linalg.eigvalsh(ref[i + lag] - ref[i])))
                for i in range(len(ref) - lag)
            ]
        )
        assert np.max(np.abs(td - td_ref)) < 1e-9
        got_deg = degree(td, spacing)
        assert abs(got_deg - degree(td_ref, spacing)) < 1e-9
        vd = tvd_series(res.spectra[sub.label], 0.2, spacing)
        vd_ref = np.array(
            [
                tvd(
                    np.sort(np.linalg.eigvalsh(ref[i + lag]))[::-1],
                    np.sort(np.linalg.eigvalsh(ref[i]))[::-1],
                )
                for i in range(len(ref) - lag)
            ]
        )
        assert np.max(np.abs(vd - vd_ref)) < 1e-9

    for sub in res.store.negativity_subsystems:
        ref = [
            dense_negativity(
                dense_partial_trace(embed(phi, basis.states, n), n, sub.sites),
                sub.dim // 2,
                2,
            )
            for phi in dense_states
        ]
        assert np.max(np.abs(res.store.negativity[sub.label] - np.array(ref))) < 1e-9


# ---------------------------------------------------------------- output


def expected_files(man):
    T = len(man.evolution.snapshot_times)
    names = {"fidelity.csv": T, "manifest.json": None}
    if man.track_ee:
        names["ee_half.csv"] = T
    many = T > 1
    for sub in man.subsystems:
        for d in man.series_deltas:
            lag = int(round(d / man.spacing))
            if T - lag >= 1:
                names[f"td_{sub.label}_{d:g}.csv"] = T - lag
                names[f"tvd_{sub.label}_{d:g}.csv"] = T - lag
        if many:
            names[f"degree_{sub.label}.csv"] = len(man.delta_grid)
            names[f"degree1_{sub.label}.csv"] = len(man.delta_grid)
    for k in man.negativity_ks:
        names[f"negativity_k{k}.csv"] = T
    return names


def test_run_experiment_files_and_row_counts(tmp_path):
    man = small_manifest(n=6)
    out = run_experiment(man, tmp_path / "run")
    expect = expected_files(man)
    assert sorted(os.listdir(out)) == sorted(expect)
    for name, rows in expect.items():
        if rows is None:
            continue
        with open(os.path.join(out, name)) as fh:
            lines = fh.read().splitlines()
        assert len(lines) == rows + 1, name
        assert not lines[0][0].isdigit()  # header row
        first = lines[1].split(",")[0]
        float(first)  # column 1 is t or delta


def test_zero_horizon_run(tmp_path):
    man = RunManifest(
        model=ModelSpec(family="pxp", n_sites=6),
        evolution=EvolutionConfig(tau=0.01, t_max=0.0),
        delta_grid=(0.01,),
        series_deltas=(0.01,),
    )
    out = run_experiment(man, tmp_path / "zero")
    files = sorted(os.listdir(out))
    assert not any(f.startswith(("td_", "tvd_", "degree")) for f in files)
    fid = open(os.path.join(out, "fidelity.csv")).read().splitlines()
    assert len(fid) == 2 and fid[1] == "0,1"
    ee = open(os.path.join(out, "ee_half.csv")).read().splitlines()
    assert len(ee) == 2
    assert float(ee[1].split(",")[1]) == pytest.approx(0.0, abs=1e-12)


def test_identical_manifests_identical_bytes(tmp_path):
    man = small_manifest(n=6)
    out1 = run_experiment(man, tmp_path / "a")
    out2 = run_experiment(man, tmp_path / "b")
    for name in sorted(os.listdir(out1)):
        if name == "manifest.json":
            continue
        b1 = open(os.path.join(out1, name), "rb").read()
        b2 = open(os.path.join(out2, name), "rb").read()
        assert b1 == b2, name
    m1 = json.load(open(os.path.join(out1, "manifest.json")))
    m2 = json.load(open(os.path.join(out2, "manifest.json")))
    assert m1["checksum"] == m2["checksum"]
    m1.pop("wall_clock_s"), m2.pop("wall_clock_s")
    assert m1 == m2


def test_manifest_json_rebuilds_same_run(tmp_path):
    man = small_manifest(n=6)
    out = run_experiment(man, tmp_path / "run")
    payload = json.load(open(os.path.join(out, "manifest.json")))
    assert manifest_from_dict(payload) == man


# ------------------------------------------------------------- comparison


def test_compare_model_with_itself():
    man = small_manifest(n=6)
    res = simulate(man)
    cmp = compare_models([man, man], results=[res, res])
    assert cmp.model_labels == ["pxp", "pxp'"]
    for sub_label, columns in cmp.degree.items():
        assert np.array_equal(columns["pxp"], columns["pxp'"])
    text = cmp.to_text()
    assert "[degree l1]" in text and "[periods]" in text


def test_compare_rejects_mismatched_grids():
    man1 = small_manifest(n=6)
    man2 = RunManifest(
        model=ModelSpec(family="pxp", n_sites=6),
        evolution=EvolutionConfig(tau=0.01, t_max=2.0, snapshot_every=20),
        delta_grid=(0.2, 0.4),
        series_deltas=(0.2,),
    )
    with pytest.raises(ValueError):
        compare_models([man1, man2])
    with pytest.raises(ValueError):
        compare_models([man1])


def test_compare_two_models_tabulates_both():
    men = [
        small_manifest(n=6),
        RunManifest(
            model=ModelSpec(family="pxpxp", n_sites=6, g=0.2),
            evolution=EvolutionConfig(tau=0.01, t_max=2.0, snapshot_every=20),
            delta_grid=(0.2, 0.4, 0.6),
            series_deltas=(0.2,),
        ),
    ]
    cmp = compare_models(men)
    assert cmp.model_labels == ["pxp", "pxpxp_g0.2"]
    for columns in cmp.degree.values():
        assert set(columns) == {"pxp", "pxpxp_g0.2"}
        assert all(len(v) == 3 for v in columns.values())


# ------------------------------------------------------------------ sweep


def test_sweep_sequential(tmp_path):
    men = [small_manifest(n=6), small_manifest(n=8)]
    dirs = sweep(men, ["n6", "n8"], tmp_path / "sw", max_workers=1)
    assert [os.path.basename(d) for d in dirs] == ["n6", "n8"]
    for d in dirs:
        assert os.path.exists(os.path.join(d, "manifest.json"))


def test_sweep_rejects_duplicate_labels(tmp_path):
    men = [small_manifest(n=6), small_manifest(n=8)]
    with pytest.raises(ValueError):
        sweep(men, ["same", "same"], tmp_path / "sw")


# -------------------------------------------------------------------- CLI


def run_cli(*argv):
    return cli_main(list(argv))


def test_cli_run_roundtrip(tmp_path):
    out = tmp_path / "cli_run"
    code = run_cli(
        "run", "--n-sites", "6", "--t-max", "2", "--snapshot-every", "20",
        "--deltas", "0.2:0.6:0.2", "--series-deltas", "0.2",
        "--out", str(out),
    )
    assert code == 0
    assert os.path.exists(out / "fidelity.csv")
    payload = json.load(open(out / "manifest.json"))
    assert payload["model"]["family"] == "pxp"
    assert payload["delta_grid"] == [0.2, 0.4, 0.6]


def test_cli_config_overrides_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    json.dump({"model": {"family": "pxpxp", "n_sites": 6, "g": 0.1}}, open(cfg, "w"))
    out = tmp_path / "over"
    code = run_cli(
        "run", "--n-sites", "6", "--t-max", "2", "--snapshot-every", "20",
        "--deltas", "0.2:0.6:0.2", "--series-deltas", "0.2",
        "--config", str(cfg), "--out", str(out),
    )
    assert code == 0
    payload = json.load(open(out / "manifest.json"))
    assert payload["model"] == {"family": "pxpxp", "n_sites": 6, "lam": 0.0, "r": 0, "g": 0.1}


def test_cli_compare(tmp_path, capsys):
    cfgs = []
    for family, extra in (("pxp", {}), ("pxpxp", {"g": 0.2})):
        man = RunManifest(
            model=ModelSpec(family=family, n_sites=6, **extra),
            evolution=EvolutionConfig(tau=0.01, t_max=2.0, snapshot_every=20),
            delta_grid=(0.2, 0.4),
            series_deltas=(0.2,),
        )
        path = tmp_path / f"{family}.json"
        json.dump(man.to_dict(), open(path, "w"))
        cfgs += ["--config", str(path)]
    assert run_cli("compare", *cfgs) == 0
    out = capsys.readouterr().out
    assert "[periods]" in out and "pxpxp_g0.2" in out


def test_cli_sweep(tmp_path):
    out = tmp_path / "sweep"
    code = run_cli(
        "sweep", "--model", "pxpxp", "--n-sites", "6", "--t-max", "1",
        "--snapshot-every", "10", "--deltas", "0.1:0.2:0.1", "--series-deltas", "0.1",
        "--sweep", "g=0.1,0.2", "--workers", "1", "--out", str(out),
    )
    assert code == 0
    assert sorted(os.listdir(out)) == ["g_0.1", "g_0.2"]


def test_cli_usage_errors_exit_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli("run", "--model", "nosuch", "--out", str(tmp_path / "x"))
    assert exc.value.code == 1
    capsys.readouterr()
    # invalid manifest (delta off the snapshot grid) -> also 1, no exception
    assert run_cli(
        "run", "--n-sites", "6", "--t-max", "1", "--deltas", "0.015:0.015:0.01",
        "--out", str(tmp_path / "y"),
    ) == 1


def test_cli_numerical_failure_exits_2(tmp_path, capsys):
    # one Krylov step spanning tau=5 on a 987-dim chain cannot converge
    # within the dimension cap, which is the reserved exit code 2
    code = run_cli(
        "run", "--n-sites", "14", "--tau", "5", "--t-max", "20",
        "--deltas", "5:15:5", "--series-deltas", "5",
        "--out", str(tmp_path / "z"),
    )
    assert code == 2
    assert "numerical failure" in capsys.readouterr().err


def test_default_catalogs():
    subs = default_subsystems(20)
    assert [s.label for s in subs] == ["l1", "l2", "l3", "l4", "l2adj"]
    assert default_negativity_ks(20) == (1, 2, 3, 4, 5)
    assert default_negativity_ks(8) == (1, 2, 3, 4)
    short = default_subsystems(8)
    assert all(max(s.sites) <= 8 for s in short)
