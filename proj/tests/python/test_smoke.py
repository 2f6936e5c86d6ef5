import os
import subprocess
from pathlib import Path

import pytest

import ringhop

SCENARIOS = Path(os.environ.get("RINGHOP_SCENARIO_DIR", Path(__file__).parents[2] / "scenarios"))


def test_catalog_and_range():
    assert ringhop.transceivers() == ["CC1100", "CC1200", "Si4644", "SX1272"]
    assert ringhop.max_range("SX1272") == pytest.approx(4410, rel=0.01)
    assert ringhop.path_loss(1.0, 900e6) == pytest.approx(23.3)
    assert len(ringhop.catalog()[1]["power_levels"]) == 16


def test_hop_combinations():
    assert ringhop.hop_combination_count(7) == 5040
    assert ringhop.hop_combinations(3)[2] == [1, 1, 3]
    with pytest.raises(ringhop.GuardError):
        ringhop.hop_combinations(11)


def test_payloads():
    n_p, n_dp = ringhop.payloads([1, 1, 1, 4, 1, 3, 1], 3)
    assert n_p == [985, 328, 109, 4, 1, 4, 1]
    assert n_dp == [247, 82, 28, 1, 1, 1, 1]


def test_run_shipped_scenario():
    scenario = ringhop.load_scenario(SCENARIOS / "scenario_1_1.json")
    assert scenario["R"] == 7
    bundle = ringhop.run(scenario)
    by_model = {r["model"]: r for r in bundle["results"]}
    assert by_model["optimal-hop"]["delta"] == [1, 1, 1, 4, 1, 3, 1]
    assert by_model["single-hop"]["bottleneck_ring"] == 7
    assert bundle["ratios"]["rho_SH"] > 1


def test_run_csv_threads_identical():
    scenario = {"id": "t", "R": 5, "c": 3, "transceiver": "SX1272"}
    assert ringhop.run_csv(scenario, threads=1) == ringhop.run_csv(scenario, threads=4)


def test_errors():
    with pytest.raises(ringhop.ValidationError):
        ringhop.run({"R": 3, "c": 2, "transceiver": "nope"})
    with pytest.raises(ringhop.InfeasibleError):
        ringhop.run({"R": 2, "c": 2, "D": 1e6, "transceiver": "CC1200"})
    with pytest.raises(ringhop.RinghopError):
        ringhop.load_scenario("/nonexistent.json")


def test_sweep_single_point():
    rows = ringhop.sweep({"variable": "R", "from": 1, "to": 1, "template": {"c": 3},
                          "transceivers": ["SX1272"]})
    assert len(rows) == 1
    assert rows[0]["rho_SH"] == 1 and rows[0]["rho_NRH"] == 1


@pytest.mark.skipif("RINGHOP_CLI" not in os.environ, reason="CLI path not provided")
@pytest.mark.parametrize(
    "args, code",
    [
        (["optimize", "/nonexistent.json"], 4),
        (["optimize", "{bad}"], 2),
        (["optimize", "{invalid}"], 3),
        (["optimize", "{infeasible}"], 5),
        (["table8"], 0),
    ],
)
def test_cli_exit_codes(tmp_path, args, code):
    files = {
        "{bad}": "{\"R\": 3,",
        "{invalid}": "{\"R\": 3, \"c\": 2, \"transceiver\": \"CC1200\", \"packet\": {\"packet_bytes\": 10}}",
        "{infeasible}": "{\"R\": 3, \"c\": 2, \"D\": 1e6, \"transceiver\": \"CC1200\"}",
    }
    resolved = []
    for a in args:
        if a in files:
            path = tmp_path / "s.json"
            path.write_text(files[a])
            a = str(path)
        resolved.append(a)
    proc = subprocess.run([os.environ["RINGHOP_CLI"], *resolved], capture_output=True, text=True)
    assert proc.returncode == code, proc.stderr
