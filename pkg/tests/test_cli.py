import json
from importlib import resources

import pytest

from tangle4 import cli, load_state, save_state, random_pure

DATA = resources.files("tangle4") / "data"


def data_path(name: str) -> str:
    return str(DATA / name)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def payload_without_clock(out: str) -> dict:
    payload = json.loads(out)
    payload["manifest"].pop("wall_clock_s")
    return payload


class TestMeasure:
    def test_tau4_on_shipped_ghz4(self, capsys):
        code, out, _ = run_cli(capsys, "measure", "tau4",
                               "--state", data_path("ghz4.json"), "--traced", "3")
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["result"]["tau4"] - 1.0) < 1e-3
        assert payload["manifest"]["seed"] == 7

    def test_ntangle_on_shipped_bellbell(self, capsys):
        code, out, _ = run_cli(capsys, "measure", "n-tangle",
                               "--state", data_path("bellbell.json"))
        assert code == 0
        assert abs(json.loads(out)["result"]["value"] - 1.0) < 1e-12

    def test_mu3_on_four_qubit_file_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "measure", "mu3",
                               "--state", data_path("ghz4.json"))
        assert code == 2
        assert "three-qubit" in err

    def test_mu3_on_ghz3(self, capsys):
        code, out, _ = run_cli(capsys, "measure", "mu3",
                               "--state", data_path("ghz3.json"))
        assert code == 0
        assert abs(json.loads(out)["result"]["value"] - 1.0) < 1e-12

    def test_concurrence_on_bell(self, capsys):
        code, out, _ = run_cli(capsys, "measure", "concurrence",
                               "--state", data_path("bell.json"))
        assert code == 0
        assert abs(json.loads(out)["result"]["value"] - 1.0) < 1e-12

    def test_tau3_mixed_needs_traced_for_4q(self, capsys):
        code, _, err = run_cli(capsys, "measure", "tau3-mixed",
                               "--state", data_path("w4.json"))
        assert code == 2

    def test_tau3_mixed_with_traced(self, capsys):
        code, out, _ = run_cli(capsys, "measure", "tau3-mixed",
                               "--state", data_path("ghz4.json"), "--traced", "3",
                               "--restarts", "4", "--max-iterations", "300")
        assert code == 0
        assert json.loads(out)["result"]["value"] < 1e-6

    def test_entanglement_vector(self, capsys):
        code, out, _ = run_cli(capsys, "measure", "entanglement-vector",
                               "--state", data_path("w4.json"),
                               "--restarts", "2", "--max-iterations", "150")
        assert code == 0
        comps = json.loads(out)["result"]["components"]
        assert len(comps) == 4
        assert all(v <= 2e-3 for v in comps)

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "measure", "mu3", "--state", "/nope.json")
        assert code == 2

    def test_out_file_written(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _, _ = run_cli(capsys, "measure", "n-tangle",
                             "--state", data_path("ghz4.json"),
                             "--out", str(out_path))
        assert code == 0
        on_disk = json.loads(out_path.read_text())
        assert abs(on_disk["result"]["value"] - 1.0) < 1e-12

    def test_deterministic_payload(self, capsys):
        argv = ("measure", "tau4", "--state", data_path("w4.json"),
                "--traced", "0", "--restarts", "2", "--max-iterations", "150")
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert payload_without_clock(out1) == payload_without_clock(out2)


class TestFamilies:
    def test_single_zero_point(self, capsys):
        code, out, _ = run_cli(capsys, "families", "Gabcd",
                               "--a", "1", "--b", "1", "--c", "1", "--d", "1",
                               "--restarts", "4", "--max-iterations", "300")
        assert code == 0
        payload = json.loads(out)
        assert payload["rows"][0]["tau4"] <= 2e-3
        assert payload["disagreements"] == 0

    def test_all_zero_parameters_is_an_error(self, capsys):
        code, _, err = run_cli(capsys, "families", "Gabcd",
                               "--a", "0", "--b", "0", "--c", "0", "--d", "0")
        assert code == 2
        assert "zero norm" in err

    def test_zero_norm_grid_point_noted_not_fatal(self, capsys):
        # a grid that touches the degenerate corner keeps going with a note
        code, out, _ = run_cli(capsys, "families", "Gabcd",
                               "--grid-a", "0:1:2",
                               "--restarts", "2", "--max-iterations", "150")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 2
        assert rows[0]["tau4"] is None and "zero-norm" in rows[0]["note"]
        assert rows[1]["tau4"] is not None

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "families", "L03_03", "--paper-points",
                               "--format", "csv",
                               "--restarts", "2", "--max-iterations", "150")
        assert code == 0
        assert out.splitlines()[0].startswith("family,a,b,c,d")

    def test_paper_points_for_one_family(self, capsys):
        code, out, _ = run_cli(capsys, "families", "Lab3", "--paper-points",
                               "--restarts", "4", "--max-iterations", "300")
        assert code == 0
        payload = json.loads(out)
        assert len(payload["rows"]) == 3
        assert payload["disagreements"] == 0

    def test_disagreement_exit_code(self, capsys):
        # an impossible zero tolerance forces the agreement flag off
        code, out, _ = run_cli(capsys, "families", "Labc2",
                               "--a", "1", "--b", "0.5", "--c", "1",
                               "--zero-tol", "1e-15",
                               "--restarts", "2", "--max-iterations", "150")
        assert code == 1

    def test_grid_flag(self, capsys):
        code, out, _ = run_cli(capsys, "families", "La2b2",
                               "--grid-a", "0.5:1:2", "--b", "0.25",
                               "--restarts", "2", "--max-iterations", "150")
        assert code == 0
        assert len(json.loads(out)["rows"]) == 2

    def test_family_or_paper_points_required(self, capsys):
        code, _, err = run_cli(capsys, "families")
        assert code == 2


class TestVerify:
    def test_eq14_pass(self, capsys):
        code, out, err = run_cli(capsys, "verify", "eq14", "--trials", "25")
        assert code == 0
        payload = json.loads(out)
        assert payload["report"]["passed"] is True
        assert payload["report"]["worst"] <= 1e-8
        assert "PASS" in err

    def test_covariance_pass(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "covariance", "--trials", "25")
        assert code == 0

    def test_failure_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "verify", "eq14", "--trials", "10",
                               "--tol", "1e-300")
        assert code == 1
        assert "FAIL" in err

    def test_unknown_suite_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "warp-drive"])
        assert exc.value.code == 2


class TestStateFileContract:
    def test_shipped_states_load_and_are_normalized(self):
        for name in ("ghz4", "w4", "bellbell", "ghz3", "bell",
                     "family_Gabcd", "family_Labc2", "family_La2b2",
                     "family_Lab3", "family_La4", "family_La2_03plus1",
                     "family_L05plus3bar", "family_L07plus1bar",
                     "family_L03_03"):
            state = load_state(data_path(f"{name}.json"))
            assert abs(state.norm() - 1.0) < 1e-10

    def test_roundtrip_via_cli_input(self, capsys, tmp_path):
        state = random_pure((2, 2, 2, 2), 5)
        path = tmp_path / "st.json"
        save_state(path, state)
        code, out, _ = run_cli(capsys, "measure", "n-tangle", "--state", str(path))
        assert code == 0
