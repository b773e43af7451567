import json

import pytest

from camchain import cli
from camchain import pipeline as pl
from camchain.formats import load_json


def run_cli(*argv):
    return cli.main(list(argv))


class TestHelpAndUsage:
    def test_help_lists_subcommands_and_exit_codes(self, capsys):
        with pytest.raises(SystemExit) as ei:
            run_cli("--help")
        assert ei.value.code == 0
        out = capsys.readouterr().out
        for word in ("simulate", "stitch", "evaluate", "run", "bench", "exit codes"):
            assert word in out

    def test_missing_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as ei:
            run_cli()
        assert ei.value.code == 2

    def test_unknown_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as ei:
            run_cli("run", "--seed", "1", "--out-dir", "x", "--telepathy")
        assert ei.value.code == 2

    def test_bad_strategy_is_usage_error(self):
        with pytest.raises(SystemExit) as ei:
            run_cli("run", "--seed", "1", "--out-dir", "x", "--strategy", "psychic")
        assert ei.value.code == 2


class TestFullChain:
    def test_simulate_stitch_evaluate(self, tmp_path, fixtures_dir, capsys):
        d = str(tmp_path / "work")
        assert run_cli(
            "simulate",
            "--scenario", str(fixtures_dir / "scenario_freeflow.json"),
            "--duration", "30",
            "--seed", "5",
            "--out-dir", d,
        ) == 0
        assert run_cli("stitch", "--in-dir", d) == 0
        assert run_cli("evaluate", "--in-dir", d) == 0
        out = capsys.readouterr().out
        assert "hosr=" in out and "idf1=" in out and "id_switches=" in out
        report = load_json(tmp_path / "work" / pl.REPORT)
        assert report["hosr"]["value"] == 1.0

    def test_run_matches_staged_chain(self, tmp_path, fixtures_dir):
        staged = tmp_path / "staged"
        oneshot = tmp_path / "oneshot"
        scenario = str(fixtures_dir / "scenario_freeflow.json")
        for args in (
            ("simulate", "--scenario", scenario, "--duration", "30", "--seed", "5",
             "--out-dir", str(staged)),
            ("stitch", "--in-dir", str(staged)),
            ("evaluate", "--in-dir", str(staged)),
            ("run", "--scenario", scenario, "--duration", "30", "--seed", "5",
             "--out-dir", str(oneshot)),
        ):
            assert run_cli(*args) == 0
        for name in (pl.TRAJECTORIES, pl.EVENTS, pl.REPORT):
            assert (staged / name).read_bytes() == (oneshot / name).read_bytes()

    def test_matcher_flags_reach_the_engine(self, tmp_path, fixtures_dir, capsys):
        d = str(tmp_path / "fifo")
        code = run_cli(
            "run",
            "--scenario", str(fixtures_dir / "scenario_overtaking.json"),
            "--duration", "60",
            "--strategy", "strict-fifo",
            "--seed", "3",
            "--out-dir", d,
        )
        assert code == 0
        topo = load_json(tmp_path / "fifo" / pl.TOPOLOGY)
        assert topo["matcher"]["strategy"] == "strict-fifo"

    def test_bench_prints_throughput_and_writes_report(self, tmp_path, fixtures_dir, capsys):
        d = tmp_path / "bench"
        code = run_cli(
            "bench",
            "--scenario", str(fixtures_dir / "scenario_freeflow.json"),
            "--duration", "20",
            "--seed", "5",
            "--out-dir", str(d),
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "snapshots in" in out and "realtime" in out
        rep = load_json(d / pl.BENCH_REPORT)
        assert rep["throughput"]["snapshots"] == 200


class TestExitCodes:
    def simulate_small(self, tmp_path, fixtures_dir):
        d = str(tmp_path / "data")
        assert run_cli(
            "simulate",
            "--scenario", str(fixtures_dir / "scenario_freeflow.json"),
            "--duration", "10",
            "--seed", "2",
            "--out-dir", d,
        ) == 0
        return tmp_path / "data"

    def test_bad_json_syntax_is_3(self, tmp_path, fixtures_dir, capsys):
        d = self.simulate_small(tmp_path, fixtures_dir)
        (d / pl.TOPOLOGY).write_text("{not json\n")
        assert run_cli("stitch", "--in-dir", str(d)) == 3
        assert "error:" in capsys.readouterr().err

    def test_semantic_config_errors_are_4(self, tmp_path, fixtures_dir, capsys):
        bad = tmp_path / "scenario.json"
        bad.write_text(json.dumps({"durationn_s": 10}))
        assert run_cli(
            "run", "--scenario", str(bad), "--seed", "1",
            "--out-dir", str(tmp_path / "o1"),
        ) == 4
        assert run_cli(
            "run", "--dropout", "1.5", "--seed", "1",
            "--out-dir", str(tmp_path / "o2"),
        ) == 4
        # buffer timeout below the match window is contradictory
        assert run_cli(
            "run", "--ttl", "2", "--seed", "1",
            "--out-dir", str(tmp_path / "o3"),
        ) == 4
        err = capsys.readouterr().err
        assert err.count("error:") == 3

    def test_geometry_errors_are_4(self, tmp_path, fixtures_dir):
        d = self.simulate_small(tmp_path, fixtures_dir)
        topo = load_json(d / pl.TOPOLOGY)
        for cam in topo["cameras"]:
            cam["fov"] = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]  # collinear
        (d / pl.TOPOLOGY).write_text(json.dumps(topo))
        assert run_cli("stitch", "--in-dir", str(d)) == 4

    def test_malformed_data_is_5(self, tmp_path, fixtures_dir):
        d = self.simulate_small(tmp_path, fixtures_dir)
        lines = (d / pl.OBSERVATIONS).read_text().splitlines()
        assert len(lines) > 3
        lines[1], lines[2] = lines[2], lines[1]
        (d / pl.OBSERVATIONS).write_text("\n".join(lines) + "\n")
        assert run_cli("stitch", "--in-dir", str(d)) == 5

    def test_missing_inputs_are_6(self, tmp_path, fixtures_dir):
        assert run_cli("stitch", "--in-dir", str(tmp_path / "void")) == 6
        assert run_cli(
            "run", "--scenario", str(tmp_path / "ghost.json"),
            "--seed", "1", "--out-dir", str(tmp_path / "o"),
        ) == 6
        d = self.simulate_small(tmp_path, fixtures_dir)
        (d / pl.OBSERVATIONS).unlink()
        assert run_cli("stitch", "--in-dir", str(d)) == 6
