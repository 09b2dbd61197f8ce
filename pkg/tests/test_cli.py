"""Command line interface: subcommands, units at the boundary, exit codes."""

import json
import math

import pytest

from vinebuckle import cli, mechanics

DATA = """pressure_kpa,tension_n
0.0,3.4
2.0,9.2
10.0,31.9
"""


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPredict:
    def test_invert_case(self, capsys):
        code, out, err = run(capsys, "predict", "--pressure-kpa", "2", "--length-cm", "100")
        assert code == 0 and err == ""
        assert "invert" in out

    def test_json_is_a_single_document(self, capsys):
        code, out, _ = run(
            capsys, "predict", "--pressure-kpa", "2", "--length-cm", "100", "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "invert"
        assert doc["model"] == "straight"
        assert doc["limit_n"] == pytest.approx(11.349003461093131, rel=1e-12)

    def test_unit_round_trip(self, capsys):
        _, out, _ = run(
            capsys,
            "predict",
            "--pressure-kpa", "3.7",
            "--length-cm", "123.4",
            "--kappa-per-m", "0.31",
            "--json",
        )
        echo = json.loads(out)["input"]
        assert echo["pressure_kpa"] == pytest.approx(3.7, rel=1e-12)
        assert echo["length_cm"] == pytest.approx(123.4, rel=1e-12)
        assert echo["kappa_per_m"] == 0.31

    def test_device_flag_uses_infinite_limit_inside_envelope(self, capsys):
        _, out, _ = run(
            capsys,
            "predict", "--pressure-kpa", "1.4", "--length-cm", "300", "--device", "--json",
        )
        doc = json.loads(out)
        assert doc["verdict"] == "invert"
        assert doc["required_n"] == 0.0
        assert doc["limit_n"] is None  # infinite limit maps to null

    def test_curved_buckle_case(self, capsys):
        _, out, _ = run(
            capsys,
            "predict", "--pressure-kpa", "2", "--length-cm", "50",
            "--kappa-per-m", str(1 / 2.25), "--json",
        )
        doc = json.loads(out)
        assert doc["verdict"] == "buckle"
        assert doc["mode"] == "transverse_buckle"

    def test_validation_error_exits_2(self, capsys):
        code, _, err = run(capsys, "predict", "--pressure-kpa", "-2", "--length-cm", "10")
        assert code == 2
        assert err.startswith("error:")

    def test_usage_error_exits_1(self, capsys):
        code, _, err = run(capsys, "predict", "--length-cm", "10")
        assert code == 1
        assert err.startswith("error:")

    def test_unknown_subcommand_exits_1(self, capsys):
        code, _, err = run(capsys, "prediction")
        assert code == 1
        assert err.startswith("error:")


class TestTransition:
    def test_straight_value(self, capsys):
        _, out, _ = run(capsys, "transition", "--pressure-kpa", "2", "--json")
        doc = json.loads(out)
        assert doc["critical_length_cm"] == pytest.approx(239.46188550377653, rel=1e-9)

    def test_below_minimum_pressure(self, capsys):
        code, out, _ = run(capsys, "transition", "--pressure-kpa", "1", "--json")
        assert code == 0
        assert json.loads(out)["critical_length_cm"] is None


class TestDeviceInfo:
    def test_headline_numbers(self, capsys):
        _, out, _ = run(capsys, "device", "info", "--json")
        doc = json.loads(out)
        assert doc["max_device_force_n"] == pytest.approx(41.0, rel=0.01)
        assert doc["max_zero_tension_kpa"] == pytest.approx(6.2, rel=0.10)
        assert doc["tip_speed_cm_s"] == pytest.approx(2.1, rel=0.05)

    def test_human_output_lists_the_same_keys(self, capsys):
        _, out, _ = run(capsys, "device", "info")
        for key in ("max_device_force_n", "max_zero_tension_kpa", "tip_speed_cm_s"):
            assert key in out


class TestSweep:
    def test_writes_deterministic_files(self, capsys, tmp_path):
        args = (
            "sweep", "--p", "0:10:6", "--l", "0:300:6",
            "--out-csv", str(tmp_path / "grid.csv"),
            "--out-svg", str(tmp_path / "grid.svg"),
            "--out-transition-csv", str(tmp_path / "transition.csv"),
        )
        code, _, _ = run(capsys, *args)
        assert code == 0
        first = (tmp_path / "grid.csv").read_bytes()
        svg_first = (tmp_path / "grid.svg").read_bytes()
        code, _, _ = run(capsys, *args)
        assert code == 0
        assert (tmp_path / "grid.csv").read_bytes() == first
        assert (tmp_path / "grid.svg").read_bytes() == svg_first
        header = first.decode().split("\n", 1)[0]
        assert header == (
            "pressure_kpa,length_cm,verdict,mode,required_n,limit_n,margin_n,model,extrapolated"
        )
        transition = (tmp_path / "transition.csv").read_text()
        assert transition.startswith("pressure_kpa,critical_length_cm")

    def test_oracle_check_passes_on_healthy_build(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--p", "0:10:5", "--l", "0:300:5",
            "--kappa-per-m", "0.44", "--oracle-check", "--json",
        )
        assert code == 0
        assert json.loads(out)["oracle_check"] == "ok"

    def test_injected_transition_bug_trips_oracle_check(self, capsys, monkeypatch):
        # corrupt the closed-form dispatch; the direct-comparison oracle disagrees
        monkeypatch.setattr(
            mechanics, "_straight_transition_for", lambda body, p, t: 0.05
        )
        code, _, err = run(
            capsys, "sweep", "--p", "1.5:10:5", "--l", "5:300:5",
            "--kappa-per-m", "0.44", "--oracle-check",
        )
        assert code == 3
        assert err.startswith("error:")

    def test_malformed_range_exits_1(self, capsys):
        code, _, err = run(capsys, "sweep", "--p", "0:10", "--l", "0:300:5")
        assert code == 1
        assert "MIN:MAX:STEPS" in err

    def test_bad_range_values_exit_2(self, capsys):
        code, _, _ = run(capsys, "sweep", "--p", "10:0:5", "--l", "0:300:5")
        assert code == 2


class TestFit:
    def test_inversion_fit_from_csv(self, capsys, tmp_path):
        path = tmp_path / "tension.csv"
        path.write_text(DATA)
        code, out, _ = run(capsys, "fit", "inversion", "--csv", str(path), "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["samples"] == 3
        assert doc["f_i_n"] == pytest.approx(3.5, abs=0.25)

    def test_inversion_fit_on_bench_fixture(self, capsys, data_dir):
        code, out, _ = run(
            capsys, "fit", "inversion", "--csv", str(data_dir / "tension_sweep.csv"), "--json"
        )
        assert code == 0
        assert json.loads(out)["f_i_n"] == pytest.approx(3.5, abs=0.1)

    def test_aperture_fit_on_bench_fixture(self, capsys, data_dir):
        code, out, _ = run(
            capsys,
            "fit", "aperture", "--csv", str(data_dir / "aperture_force.csv"),
            "--shape", "circle", "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["c1_ncm2"] == pytest.approx(6.1, rel=0.10)
        assert doc["c2_n"] == pytest.approx(3.3, rel=0.10)

    def test_empty_csv_exits_2(self, capsys, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        code, _, err = run(capsys, "fit", "inversion", "--csv", str(path))
        assert code == 2
        assert "empty" in err

    def test_malformed_row_exits_2_and_names_row(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("pressure_kpa,tension_n\n1.0,2.0\nnope,3.0\n")
        code, _, err = run(capsys, "fit", "inversion", "--csv", str(path))
        assert code == 2
        assert "row 2" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, err = run(capsys, "fit", "inversion", "--csv", str(tmp_path / "nope.csv"))
        assert code == 2


class TestSimulate:
    def scenario_path(self, tmp_path, doc):
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_retraction_episode(self, capsys, tmp_path):
        path = self.scenario_path(
            tmp_path, {"initial_length_cm": 100, "pressure_kpa": 2.0}
        )
        out_csv = tmp_path / "episode.csv"
        code, out, _ = run(
            capsys, "simulate", "--scenario", path, "--out-csv", str(out_csv), "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["terminal"] == "fully_retracted"
        assert doc["steps"] == 100
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0] == "step,tip_cm,pressure_kpa,required_n,device_n,verdict,time_s"
        assert len(lines) == 101

    def test_device_episode_with_schedule(self, capsys, tmp_path):
        path = self.scenario_path(
            tmp_path,
            {
                "initial_length_cm": 150,
                "pressure_schedule": [[0, 1.0], [150, 2.0]],
                "device": True,
                "motor_rpm": 16.5,
                "step_cm": 5.0,
            },
        )
        code, out, _ = run(capsys, "simulate", "--scenario", path, "--json")
        assert code == 0
        assert json.loads(out)["terminal"] == "fully_retracted"

    def test_growth_episode(self, capsys, tmp_path):
        path = self.scenario_path(
            tmp_path,
            {"mode": "grow", "initial_length_cm": 0, "target_length_cm": 300,
             "pressure_kpa": 2.0},
        )
        code, out, _ = run(capsys, "simulate", "--scenario", path, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["terminal"] == "buckled"
        assert doc["terminal_length_cm"] == pytest.approx(240.0, abs=1.1)

    def test_unknown_key_exits_2(self, capsys, tmp_path):
        path = self.scenario_path(tmp_path, {"initial_length_cm": 10, "psi": 3})
        code, _, err = run(capsys, "simulate", "--scenario", path)
        assert code == 2
        assert "unknown scenario keys" in err


class TestConfig:
    def test_overrides_flow_through(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"body": {"radius_cm": 2.0, "f_i_n": 1.0}}))
        _, out, _ = run(
            capsys,
            "predict", "--pressure-kpa", "2", "--length-cm", "100",
            "--config", str(config), "--json",
        )
        doc = json.loads(out)
        area = math.pi * 0.02**2
        assert doc["required_n"] == pytest.approx(0.5 * 2e3 * area + 1.0, rel=1e-12)

    def test_unknown_key_exits_2(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"body": {"radius_m": 0.02}}))
        code, _, err = run(
            capsys, "predict", "--pressure-kpa", "2", "--length-cm", "100",
            "--config", str(config),
        )
        assert code == 2
        assert "unknown keys" in err

    def test_nonpositive_value_exits_2(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"device": {"torque_ncm": -1.0}}))
        code, _, _ = run(capsys, "device", "info", "--config", str(config))
        assert code == 2

    def test_device_config_changes_info(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"device": {"torque_ncm": 12.25}}))
        _, out, _ = run(capsys, "device", "info", "--config", str(config), "--json")
        assert json.loads(out)["max_device_force_n"] == pytest.approx(
            20.416666666666664, rel=1e-12
        )
