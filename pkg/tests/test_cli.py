import json

import pytest

from bratteli import cli
from bratteli import diagram as dg
from bratteli import generators as gen
from bratteli import soe


def run_json(capsys, argv):
    code = cli.run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def odo2(tmp_path):
    path = tmp_path / "odo2.json"
    dg.save_diagram(gen.odometer(2, 6), str(path))
    return str(path)


def test_validate_ok(capsys, odo2):
    code, res = run_json(capsys, ["validate", "--diagram", odo2])
    assert code == 0
    assert res["status"] == "ok"
    assert res["payload"]["valid"] is True
    assert res["diagnostics"] == []


def test_vershik_binary_increment(capsys, odo2):
    code, res = run_json(capsys, ["vershik", "--diagram", odo2,
                                  "--path", "1,1,0"])
    assert code == 0
    assert res["payload"]["successor"] == "0,0,1"


def test_rank_and_unrank(capsys, odo2):
    code, res = run_json(capsys, ["rank", "--diagram", odo2,
                                  "--path", "1,1,0"])
    assert res["payload"]["rank"] == 3
    code, res = run_json(capsys, ["rank", "--diagram", odo2, "--rank", "3",
                                  "--level", "3", "--vertex", "0"])
    assert res["payload"]["path"] == "1,1,0"


def test_orbit_shift(capsys, odo2):
    code, res = run_json(capsys, ["orbit-shift", "--diagram", odo2,
                                  "--from", "0,0,0", "--to", "1,1,0"])
    assert res["payload"]["shift"] == 3


def test_extremal_and_depth_cap(capsys, odo2, monkeypatch):
    monkeypatch.setenv("BRATTELI_MAX_DEPTH", "4")
    code, res = run_json(capsys, ["extremal", "--diagram", odo2,
                                  "--depth", "9"])
    assert code == 0
    assert res["payload"]["depth"] == 4
    assert any("capped" in d for d in res["diagnostics"])


def test_perfect(capsys, odo2):
    code, res = run_json(capsys, ["perfect", "--diagram", odo2,
                                  "--depth", "4"])
    assert res["payload"]["verdict"] == "pass"


def test_k0_and_k1(capsys, odo2):
    code, res = run_json(capsys, ["k0", odo2])
    assert res["payload"]["unit"] == [2]
    code, res = run_json(capsys, ["k1", odo2, "--depth", "4"])
    assert res["payload"] == {"rank": 1, "certified": True}


def test_oracle(capsys, tmp_path):
    system, _ = gen.finite_cycle_system([2, 3])
    spath = tmp_path / "sys.json"
    spath.write_text(json.dumps({"n": 5, "perm": list(system.permutation),
                                 "fiber": list(system.fiber_of)}))
    code, res = run_json(capsys, ["oracle", str(spath)])
    assert res["payload"]["k0_rank"] == 2
    assert res["payload"]["unit_image"] == [2, 3]


def test_generate_round_trip(capsys, tmp_path):
    code, res = run_json(capsys, ["generate", "odometer", "--base", "3",
                                  "--levels", "4"])
    assert code == 0
    d = dg.diagram_from_json(res["payload"])
    assert d == gen.odometer(3, 4)


def test_generate_cycles(capsys):
    code, res = run_json(capsys, ["generate", "cycles", "2,3"])
    assert set(res["payload"]) == {"system", "diagram"}


def test_export_dot(capsys, odo2):
    code, res = run_json(capsys, ["export-dot", "--diagram", odo2])
    assert res["payload"]["dot"].startswith("digraph")


def test_soe_check_and_search(capsys, tmp_path):
    b1, _ = dg.telescope(gen.odometer(2, 9), [1, 3, 5, 7, 9])
    b2 = gen.odometer(4, 4)
    p1 = tmp_path / "b1.json"
    p2 = tmp_path / "b2.json"
    dg.save_diagram(b1, str(p1))
    dg.save_diagram(b2, str(p2))
    wpath = tmp_path / "w.json"
    w = soe.stationary_intertwining([[2]], [[2]], 4, 4)
    wpath.write_text(json.dumps(soe.intertwining_to_json(w)))
    code, res = run_json(capsys, ["soe", "check", "--b1", str(p1),
                                  "--b2", str(p2),
                                  "--intertwining", str(wpath),
                                  "--depth", "4"])
    assert code == 0
    assert res["payload"]["interleaved_ok"]
    assert res["payload"]["continuity_ok"]
    code, res = run_json(capsys, ["soe", "search", "--b1", str(p1),
                                  "--b2", str(p2), "--bound", "4"])
    assert res["payload"]["found"] is True
    assert res["payload"]["P"] == [[2]]


def test_domain_error_exit_code_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"num_levels": 1}')
    code, res = run_json(capsys, ["validate", "--diagram", str(bad)])
    assert code == 1
    assert res["status"] == "error"
    bad.write_text('{not json')
    code, res = run_json(capsys, ["validate", "--diagram", str(bad)])
    assert code == 1
    assert "line" in res["payload"]["message"]


def test_usage_error_exit_code_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.run(["vershik"])    # missing required arguments
    assert exc.value.code == 2


def test_text_format(capsys, odo2):
    code = cli.run(["--format", "text", "k1", odo2, "--depth", "4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "status: ok" in out
    assert "rank: 1" in out
