"""Sweep runner, topology study, config files, and the CLI."""

import csv

import pytest

from hubfleet.cli import main as cli_main
from hubfleet.experiments import (
    SweepSpec,
    apply_axis_value,
    load_sweep_spec,
    run_sweep,
    run_topology_study,
)
from hubfleet.metrics import CSV_COLUMNS, TIMING_COLUMNS, read_csv
from hubfleet.world import ConfigError, ScenarioConfig


def tiny_base(**kw):
    base = dict(horizon=40, seed=100)
    base.update(kw)
    return ScenarioConfig(**base)


SCENARIO_INI = """
[scenario]
n_depots = 5
n_agents = 15
horizon = 40
seed = 100

[sweep]
axis = p_new
values = 0.5, 1.0
trials = 2
policies = edd, random
output = {out}
"""


class TestSweep:
    def test_row_count_and_order(self, tmp_path):
        out = tmp_path / "rows.csv"
        spec = SweepSpec(
            base=tiny_base(),
            axis="p_new",
            values=(0.5, 1.0),
            trials=3,
            policies=("edd", "random"),
            output_path=str(out),
        )
        records = run_sweep(spec)
        assert len(records) == 2 * 2 * 3
        rows = read_csv(out)
        assert len(rows) == 12
        assert [r["policy"] for r in rows[:6]] == ["edd"] * 3 + ["random"] * 3
        assert [float(r["p_new"]) for r in rows] == [0.5] * 6 + [1.0] * 6
        # Paired seeds across policies and axis values.
        assert [int(r["seed"]) for r in rows] == [100, 101, 102] * 4

    def test_single_cell_single_row(self, tmp_path):
        out = tmp_path / "one.csv"
        spec = SweepSpec(
            base=tiny_base(),
            axis="window_w",
            values=(30.0,),
            trials=1,
            policies=("edd",),
            output_path=str(out),
        )
        assert len(run_sweep(spec)) == 1

    def test_rerun_is_byte_identical_except_timing(self, tmp_path):
        def strip_timing(path):
            rows = read_csv(path)
            keep = [c for c in CSV_COLUMNS if c not in TIMING_COLUMNS]
            return [[r[c] for c in keep] for r in rows]

        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (out_a, out_b):
            run_sweep(
                SweepSpec(
                    base=tiny_base(),
                    axis="p_new",
                    values=(0.5, 1.0),
                    trials=2,
                    policies=("ibr", "edd"),
                    output_path=str(out),
                )
            )
        assert strip_timing(out_a) == strip_timing(out_b)

    def test_parallel_matches_serial(self, tmp_path):
        spec_kw = dict(
            base=tiny_base(), axis="p_new", values=(0.5,), trials=4, policies=("ibr",)
        )
        a = run_sweep(SweepSpec(output_path=str(tmp_path / "s.csv"), **spec_kw))
        b = run_sweep(
            SweepSpec(output_path=str(tmp_path / "p.csv"), **spec_kw), workers=2
        )
        assert [r.determinism_key() for r in a] == [r.determinism_key() for r in b]

    def test_axis_application(self):
        base = tiny_base()
        assert apply_axis_value(base, "fleet", "6/60").n_depots == 6
        assert apply_axis_value(base, "fleet", "6/60").n_agents == 60
        assert apply_axis_value(base, "conflict_level", "high").conflict_level == "high"
        assert apply_axis_value(base, "topology", "ring").topology == "ring"
        with pytest.raises(ConfigError):
            apply_axis_value(base, "moon_phase", 1)

    def test_invalid_spec_rejected(self):
        with pytest.raises(ConfigError):
            SweepSpec(base=tiny_base(), axis="p_new", values=(), trials=1).validate()
        with pytest.raises(ConfigError):
            SweepSpec(base=tiny_base(), axis="p_new", values=(0.5,), trials=0).validate()


class TestTopologyStudy:
    def test_gamma_column_walks_one_to_five(self, tmp_path):
        out = tmp_path / "topo.csv"
        records = run_topology_study(
            tiny_base(),
            trials=2,
            output_path=str(out),
            policies=("edd",),
            include_undirected=False,
        )
        gammas = sorted({r.gamma for r in records})
        assert gammas == [1, 2, 3, 4, 5]
        rows = read_csv(out)
        assert len(rows) == 5 * 2

    def test_undirected_set_included(self, tmp_path):
        records = run_topology_study(
            tiny_base(),
            trials=1,
            output_path=str(tmp_path / "t.csv"),
            policies=("edd",),
        )
        topologies = {r.topology for r in records}
        assert {"complete", "empty", "star:0", "ring"} <= topologies
        by_topo = {r.topology: r.gamma for r in records}
        assert by_topo["star:0"] == 5
        assert by_topo["ring"] == 5

    def test_paired_seeds_across_topologies(self, tmp_path):
        records = run_topology_study(
            tiny_base(), trials=3, output_path=str(tmp_path / "t.csv"),
            policies=("edd",), include_undirected=False,
        )
        seeds_by_topo = {}
        for r in records:
            seeds_by_topo.setdefault(r.topology, []).append(r.seed)
        seed_sets = {tuple(sorted(v)) for v in seeds_by_topo.values()}
        assert len(seed_sets) == 1
        digests = {r.cfg_digest for r in records}
        assert len(digests) == 1


class TestConfigFiles:
    def test_load_sweep_spec(self, tmp_path):
        out = tmp_path / "res.csv"
        path = tmp_path / "spec.ini"
        path.write_text(SCENARIO_INI.format(out=out))
        spec = load_sweep_spec(path)
        assert spec.axis == "p_new"
        assert spec.values == (0.5, 1.0)
        assert spec.trials == 2
        assert spec.policies == ("edd", "random")
        assert spec.base.seed == 100

    def test_missing_sections_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nn_depots = 5\n")
        with pytest.raises(ConfigError):
            load_sweep_spec(path)


class TestShippedConfigs:
    def test_all_experiment_configs_validate(self, capsys):
        import pathlib

        exp_dir = pathlib.Path(__file__).resolve().parent.parent / "experiments"
        configs = sorted(exp_dir.glob("*.ini"))
        assert len(configs) == 5
        for path in configs:
            assert cli_main(["validate-config", str(path)]) == 0, path.name
            assert "ok:" in capsys.readouterr().out


class TestCli:
    def test_gamma_verb(self, capsys):
        assert cli_main(["gamma", "complete", "--hubs", "5"]) == 0
        assert capsys.readouterr().out.strip() == "1"
        assert cli_main(["gamma", "edge-removal:0>1", "--hubs", "5"]) == 0
        assert capsys.readouterr().out.strip() == "2"
        assert cli_main(["gamma", "edges:0>1;1>0", "--hubs", "3", "--groups"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "2"

    def test_gamma_bad_spec_fails(self, capsys):
        assert cli_main(["gamma", "hypercube", "--hubs", "4"]) == 2
        assert "error" in capsys.readouterr().err

    def test_validate_config(self, tmp_path, capsys):
        out = tmp_path / "res.csv"
        path = tmp_path / "spec.ini"
        path.write_text(SCENARIO_INI.format(out=out))
        assert cli_main(["validate-config", str(path)]) == 0
        assert "ok:" in capsys.readouterr().out

    def test_validate_config_rejects_garbage(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nn_agents = 16\nn_depots = 5\n")
        assert cli_main(["validate-config", str(path)]) == 2

    def test_run_sweep_cli_with_overrides(self, tmp_path, capsys):
        out = tmp_path / "res.csv"
        path = tmp_path / "spec.ini"
        path.write_text(SCENARIO_INI.format(out=out))
        override = tmp_path / "other.csv"
        code = cli_main(
            [
                "run-sweep", str(path),
                "--trials", "1",
                "--out", str(override),
                "--policies", "edd",
            ]
        )
        assert code == 0
        rows = read_csv(override)
        assert len(rows) == 2  # 2 axis values x 1 policy x 1 trial

    def test_run_topology_cli(self, tmp_path):
        scen = tmp_path / "scen.ini"
        out = tmp_path / "topo.csv"
        scen.write_text(
            "[scenario]\nhorizon = 40\nseed = 5\n"
            "[topology-study]\ntrials = 1\npolicies = edd\n"
            f"output = {out}\ninclude_undirected = false\n"
        )
        assert cli_main(["run-topology", str(scen)]) == 0
        rows = read_csv(out)
        assert len(rows) == 5
        assert sorted(int(r["gamma"]) for r in rows) == [1, 2, 3, 4, 5]

    def test_unwritable_output_fails(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("a regular file, not a directory")
        path = tmp_path / "spec.ini"
        path.write_text(SCENARIO_INI.format(out=blocker / "res.csv"))
        assert cli_main(["run-sweep", str(path), "--trials", "1"]) == 2
        assert "error" in capsys.readouterr().err

    def test_output_directory_created(self, tmp_path):
        out = tmp_path / "fresh" / "dir" / "res.csv"
        spec = SweepSpec(
            base=tiny_base(), axis="p_new", values=(0.5,), trials=1,
            policies=("edd",), output_path=str(out),
        )
        run_sweep(spec)
        assert out.exists()
