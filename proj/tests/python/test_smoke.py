import csv
import io

import pytest

import dsqos

SHORT = {"run.duration_s": "3", "run.warmup_s": "0.5", "run.replications": "1"}


def test_presets_listed_and_parse_back():
    names = dsqos.preset_names()
    assert names == ["fig4_4", "fig4_7", "fig4_9", "table5_3"]
    for name in names:
        text = dsqos.preset_config(name)
        assert dsqos.normalize_config(text) == text


def test_plan_buffers_matches_hand_computation():
    plan = dsqos.plan_buffers(384e3, 1038, 0.1, 3, 64e3, 1402, 0.15, 3, 26, 1)
    assert (plan["AF"], plan["EF"], plan["BE"], plan["NC"]) == (14, 3, 8, 1)


def test_infeasible_plan_raises():
    with pytest.raises(dsqos.InfeasiblePlanError):
        dsqos.plan_buffers(384e3, 1038, 0.1, 30, 64e3, 1402, 0.15, 3, 26, 1)


def test_weights_sum_to_100():
    w = dsqos.static_weights(384e3, 3, 64e3, 3, 756e3, 2.1e6)
    assert sum(w.values()) == pytest.approx(100)
    a = dsqos.adaptive_weights({"AF": 5, "EF": 2, "BE": 4})
    assert sum(a.values()) == pytest.approx(100)
    assert a["AF"] > a["BE"]


def test_unknown_key_is_config_error():
    with pytest.raises(dsqos.ConfigError, match="no.such"):
        dsqos.run("table5_3", {"no.such": "1"})


def test_run_rows_and_csv_agree():
    rows = dsqos.run("table5_3", SHORT)
    assert {r["cls"] for r in rows} == {"AF", "EF", "BE"}
    parsed = list(csv.DictReader(io.StringIO(dsqos.run_csv("table5_3", SHORT))))
    assert len(parsed) == len(rows)
    assert [int(p["offered_pkts"]) for p in parsed] == [r["offered_pkts"] for r in rows]


def test_simulate_conserves_packets():
    s = dsqos.simulate("fig4_4", 3, SHORT)
    assert s["conservation_violations"] == 0
    for c in s["classes"]:
        assert c["offered"] == c["delivered"] + c["dropped"] + c["residual"]
    assert s["plan"]["AF"] == 14


def test_sweeps_shape():
    rows = dsqos.sweep_load("fig4_4", [0, 500e3], SHORT)
    assert len(rows) == 6
    rows = dsqos.sweep_k("fig4_9", [0.5, 1.0], {**SHORT, "sweep.normalized_loads": "0.5"}, jobs=2)
    assert [r["k_factor"] for r in rows] == [0.5] * 3 + [1.0] * 3
