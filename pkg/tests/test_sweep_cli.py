import csv
import io
import json
import subprocess
import sys

import pytest

from ris_outage import ConfigError, PRESETS, parse_config, run_sweep
from ris_outage.sweep import (
    CSV_COLUMNS,
    SweepRow,
    build_sweep_spec,
    emit_csv,
    parse_config_file,
    parse_methods,
    rows_to_csv_text,
)
from ris_outage.cli import main


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestParseConfig:
    def test_minimal_config_gets_defaults(self, tmp_path):
        path = _write(tmp_path, "min.conf", "K = 2\nN = 3\n")
        spec = parse_config(path)
        assert spec.base.K == 2 and spec.base.N == 3
        assert spec.base.R == 1.0
        assert spec.base.I_r == 2 and spec.base.I_d == 2
        assert spec.base.sigma2_rd == 1.0
        assert spec.mc_plan.n_trials == 1_000_000
        assert spec.mc_plan.seed == 42
        assert spec.snr_range == (0.0, 40.0, 5.0)

    def test_comments_and_spacing(self, tmp_path):
        path = _write(tmp_path, "c.conf", "# scenario\nK = 2  # relays\n\nN=1\nstop_dB = 30\n")
        spec = parse_config(path)
        assert spec.base.N == 1
        assert spec.snr_range[1] == 30.0

    def test_zero_step_rejected_with_field_name(self, tmp_path):
        path = _write(tmp_path, "bad.conf", "K = 2\nN = 2\nstep_dB = 0\n")
        with pytest.raises(ConfigError, match="step_dB"):
            parse_config(path)

    def test_unknown_key_reports_line(self, tmp_path):
        path = _write(tmp_path, "bad.conf", "K = 2\nwat = 3\n")
        with pytest.raises(ConfigError, match=r"bad\.conf:2.*wat"):
            parse_config_file(path)

    def test_type_error_reports_context(self, tmp_path):
        path = _write(tmp_path, "bad.conf", "K = two\n")
        with pytest.raises(ConfigError, match="two"):
            parse_config_file(path)

    def test_preset_fig2_expands_reflector_family(self):
        spec = parse_config(None, {"preset": "fig2"})
        assert [ov.get("N") for ov in spec.vary] == [1, 2, 4, 6]
        assert spec.base.K == 3

    def test_every_preset_buildable(self):
        for name in PRESETS:
            spec = parse_config(None, {"preset": name})
            assert spec.preset == name
            assert spec.variants()

    def test_flags_override_file(self, tmp_path):
        path = _write(tmp_path, "c.conf", "K = 2\nN = 2\nseed = 1\n")
        spec = parse_config(path, {"seed": 77, "n_trials": 5000})
        assert spec.mc_plan.seed == 77
        assert spec.mc_plan.n_trials == 5000
        assert spec.mc_plan.chunk_size == 5000  # clipped to the trial count

    def test_vary_parsing(self, tmp_path):
        path = _write(
            tmp_path, "v.conf",
            "K = 2\nN = 2\nvary = rhoI_r_dB=30, rhoI_d_dB=15; rhoI_r_dB=15, rhoI_d_dB=30\n",
        )
        spec = parse_config(path)
        assert spec.vary == (
            {"rhoI_r_dB": 30.0, "rhoI_d_dB": 15.0},
            {"rhoI_r_dB": 15.0, "rhoI_d_dB": 30.0},
        )

    def test_method_aliases(self):
        assert parse_methods("a,s,m") == ("analytic", "asymptotic", "monte_carlo")
        assert parse_methods("mc") == ("monte_carlo",)
        with pytest.raises(ConfigError):
            parse_methods("x")

    def test_timing_key(self, tmp_path):
        path = _write(tmp_path, "t.conf", "K = 1\nN = 1\nstop_dB = 5\ntiming = true\n")
        spec = parse_config(path)
        assert spec.timing is True
        rows = run_sweep(spec)
        assert all(r.wall_time_ms is not None for r in rows)
        off = parse_config(_write(tmp_path, "t2.conf", "K = 1\nN = 1\ntiming = false\n"))
        assert off.timing is False
        with pytest.raises(ConfigError, match="boolean"):
            parse_config(_write(tmp_path, "t3.conf", "K = 1\nN = 1\ntiming = maybe\n"))

    def test_missing_counts_rejected(self):
        with pytest.raises(ConfigError, match="N and K"):
            build_sweep_spec({"R": 1.0})


class TestRunSweep:
    def test_rows_sorted_and_ok(self, monkeypatch):
        monkeypatch.setenv("RIS_OUTAGE_THREADS", "1")
        spec = parse_config(None, {
            "preset": "fig1", "methods": "a", "start_dB": 0.0, "stop_dB": 20.0, "step_dB": 10.0,
        })
        rows = run_sweep(spec)
        assert len(rows) == 3 * 3  # three K variants, three SNR points
        assert all(r.status == "ok" for r in rows)
        ks = [r.K for r in rows]
        assert ks == sorted(ks)  # variant-major ordering
        for i in range(0, 9, 3):
            rhos = [rows[i + j].rho_dB for j in range(3)]
            assert rhos == sorted(rhos)

    def test_relay_count_ordering_across_variants(self):
        spec = parse_config(None, {"preset": "fig1", "methods": "a"})
        rows = run_sweep(spec)
        by_k = {}
        for row in rows:
            by_k.setdefault(row.K, {})[row.rho_dB] = row.p
        for rho in by_k[1]:
            assert by_k[3][rho] <= by_k[2][rho] <= by_k[1][rho]

    def test_numeric_failure_recorded_not_raised(self):
        spec = parse_config(None, {
            "N": 1, "K": 1, "rhoI_d_dB": -3000.0, "methods": "a",
            "start_dB": 0.0, "stop_dB": 10.0, "step_dB": 5.0,
        })
        rows = run_sweep(spec)
        assert len(rows) == 3
        assert all(r.status.startswith("error:") for r in rows)
        assert all(r.p is None for r in rows)

    def test_thread_env_validation(self, monkeypatch):
        monkeypatch.setenv("RIS_OUTAGE_THREADS", "bogus")
        spec = parse_config(None, {"N": 1, "K": 1, "methods": "a",
                                   "start_dB": 0.0, "stop_dB": 5.0, "step_dB": 5.0})
        with pytest.raises(ConfigError):
            run_sweep(spec)

    def test_parallel_equals_serial(self, monkeypatch):
        overrides = {"N": 2, "K": 2, "methods": "a,s,m", "n_trials": 20_000,
                     "start_dB": 0.0, "stop_dB": 20.0, "step_dB": 10.0}
        monkeypatch.setenv("RIS_OUTAGE_THREADS", "1")
        serial = rows_to_csv_text(run_sweep(parse_config(None, dict(overrides))))
        monkeypatch.setenv("RIS_OUTAGE_THREADS", "4")
        parallel = rows_to_csv_text(run_sweep(parse_config(None, dict(overrides))))
        assert serial == parallel


class TestEmitCsv:
    def test_empty_rows_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], str(path))
        assert path.read_text(encoding="utf-8") == ",".join(CSV_COLUMNS) + "\n"

    def test_single_row_round_trips(self, tmp_path):
        row = SweepRow(N=2, K=3, I_r=2, I_d=2, R=1.0, rhoI_r_dB=10.0, rhoI_d_dB=10.0,
                       rho_dB=20.0, method="analytic", p=0.12345678901234566,
                       ci95=None, status="ok", wall_time_ms=None)
        path = tmp_path / "one.csv"
        emit_csv([row], str(path))
        text = path.read_text(encoding="utf-8")
        assert len(text.splitlines()) == 2
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert parsed[0]["method"] == "analytic"
        assert float(parsed[0]["p"]) == row.p  # shortest round-trip repr
        assert parsed[0]["ci95"] == "" and parsed[0]["wall_time_ms"] == ""

    def test_unwritable_path_reports_context(self):
        with pytest.raises(OSError, match="no/such"):
            emit_csv([], "/no/such/dir/out.csv")

    def test_repeated_sweep_is_byte_identical(self):
        spec = parse_config(None, {"preset": "fig1", "methods": "a,m", "n_trials": 10_000,
                                   "start_dB": 0.0, "stop_dB": 15.0, "step_dB": 5.0})
        assert rows_to_csv_text(run_sweep(spec)) == rows_to_csv_text(run_sweep(spec))


class TestCli:
    def test_eval_json(self, capsys):
        rc = main(["eval", "--set", "N=2", "--set", "K=2", "--set", "rho_dB=20",
                   "--methods", "a,s"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["config"]["N"] == 2
        methods = {r["method"]: r["p"] for r in payload["results"]}
        assert 0.0 < methods["analytic"] < 1.0

    def test_sweep_writes_csv_and_summary(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        rc = main(["sweep", "--preset", "fig1", "--methods", "a", "--out", str(out),
                   "--set", "stop_dB=20"])
        assert rc == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["preset"] == "fig1"
        assert summary["reconstructed_parameters"] is True
        assert summary["failed_cells"] == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith(",".join(CSV_COLUMNS))

    def test_sweep_stdout_when_no_out(self, capsys):
        rc = main(["sweep", "--set", "N=1", "--set", "K=1", "--methods", "a",
                   "--set", "stop_dB=10", "--set", "step_dB=5"])
        assert rc == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 3

    def test_sweep_nonzero_exit_on_cell_failure(self, tmp_path, capsys):
        out = tmp_path / "f.csv"
        rc = main(["sweep", "--set", "N=1", "--set", "K=1", "--set", "rhoI_d_dB=-3000",
                   "--methods", "a", "--out", str(out)])
        assert rc == 1
        assert json.loads(capsys.readouterr().out)["failed_cells"] > 0

    def test_fit_recovers_diversity_order(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep", "--set", "N=2", "--set", "K=2", "--methods", "a",
                   "--set", "start_dB=40", "--set", "stop_dB=60", "--out", str(out)])
        assert rc == 0
        capsys.readouterr()
        rc = main(["fit", "--in", str(out), "--window", "45", "60"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert len(report["fits"]) == 1
        assert abs(report["fits"][0]["G_d"] - 2.0) < 0.15

    def test_validate_agrees(self, capsys):
        rc = main(["validate", "--set", "N=1", "--set", "K=2", "--trials", "200000",
                   "--set", "start_dB=10", "--set", "stop_dB=20", "--set", "step_dB=5"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["all_ok"] is True and report["points"] == 3

    def test_config_error_exit_code(self, capsys):
        rc = main(["sweep", "--set", "N=2"])  # K missing
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_module_entry_point_byte_identical_csv(self, tmp_path):
        # full process-level determinism, covering MC substreams end to end
        args = ["sweep", "--preset", "fig1", "--methods", "a,m", "--trials", "20000",
                "--seed", "7", "--set", "stop_dB=20"]
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            proc = subprocess.run(
                [sys.executable, "-m", "ris_outage", *args, "--out", str(out)],
                capture_output=True, text=True, timeout=600,
            )
            assert proc.returncode == 0, proc.stderr
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
