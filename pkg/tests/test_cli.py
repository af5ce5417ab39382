import csv
import io
import json

import pytest

from faultring import cli
from faultring.reliability import EngineMismatch

ROW1 = '{"mesh":[3,2,2],"faults":[{"type":"rect","origin":[1,1,0],"extents":[1,1,1]}]}'
EMPTY = '{"mesh":[4,4]}'
WALL = '{"mesh":[5,5],"faults":[{"type":"arbitrary","nodes":[[2,0],[2,1],[2,2],[2,3],[2,4]]}]}'
BAD_BOUNDS = '{"mesh":[7,8,11],"faults":[{"type":"rect","origin":[0,0,0],"extents":[9,1,1]}]}'
SMALL = '{"mesh":[5,5],"faults":[{"type":"rect","origin":[1,1],"extents":[1,2]}],"mc":{"samples":3000,"seed":4}}'


def _write(tmp_path, text, name="scenario.json"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_analyze_covered_mesh_renders_one(tmp_path, capsys):
    code = cli.main(["analyze", "-s", _write(tmp_path, ROW1)])
    out = capsys.readouterr().out
    assert code == 0
    assert "1.000" in out
    assert "chain" in out


def test_analyze_no_faults_renders_zero(tmp_path, capsys):
    code = cli.main(["analyze", "-s", _write(tmp_path, EMPTY)])
    out = capsys.readouterr().out
    assert code == 0
    assert "0.000" in out


def test_analyze_json_fields(tmp_path, capsys):
    code = cli.main(["analyze", "-s", _write(tmp_path, SMALL), "--format", "json"])
    row = json.loads(capsys.readouterr().out)
    assert code == 0
    assert row["mesh"] == "5x5"
    assert row["classification"] == "ring"
    assert row["origin"] == "(1,1)"
    assert row["fault_shape"] == "1x2"
    assert row["obstacle"] == "blocked"
    assert row["pair_convention"] == "unordered-distinct"
    assert row["engine"] in ("det", "dp")
    assert "/" in row["p_miss_exact"]


def test_renderings_carry_identical_rationals(tmp_path, capsys):
    path = _write(tmp_path, SMALL)
    assert cli.main(["analyze", "-s", path, "--format", "json"]) == 0
    from_json = json.loads(capsys.readouterr().out)
    assert cli.main(["analyze", "-s", path, "--format", "csv"]) == 0
    reader = csv.DictReader(io.StringIO(capsys.readouterr().out))
    csv_row = next(reader)
    for key in ("p_hit", "p_miss", "p_hit_exact", "p_miss_exact"):
        assert csv_row[key] == str(from_json[key])


def test_analyze_engine_flag_overrides_scenario(tmp_path, capsys):
    path = _write(tmp_path, SMALL)
    assert cli.main(["analyze", "-s", path, "--engine", "dp", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["engine"] == "dp"


def test_analyze_obstacle_flag_changes_probability(tmp_path, capsys):
    path = _write(tmp_path, SMALL)
    assert cli.main(["analyze", "-s", path, "--format", "json"]) == 0
    strict = json.loads(capsys.readouterr().out)
    assert cli.main(["analyze", "-s", path, "--obstacle", "faults", "--format", "json"]) == 0
    loose = json.loads(capsys.readouterr().out)
    assert loose["obstacle"] == "faults"
    assert float(loose["p_hit"]) < float(strict["p_hit"])


def test_analyze_validation_failure_exits_3(tmp_path, capsys):
    code = cli.main(["analyze", "-s", _write(tmp_path, WALL)])
    err = capsys.readouterr().err
    assert code == 3
    assert "disconnected" in err


def test_analyze_bounds_error_exits_2(tmp_path, capsys):
    code = cli.main(["analyze", "-s", _write(tmp_path, BAD_BOUNDS)])
    err = capsys.readouterr().err
    assert code == 2
    assert "faults[0]" in err
    assert "dimension 0" in err


def test_analyze_missing_file_exits_2(capsys):
    code = cli.main(["analyze", "-s", "/no/such/file.json"])
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_analyze_cross_check_failure_exits_4(tmp_path, capsys, monkeypatch):
    def explode(*args, **kwargs):
        raise EngineMismatch(((0, 0), (1, 1)), 3, 4)

    monkeypatch.setattr(cli, "compute_reliability", explode)
    code = cli.main(["analyze", "-s", _write(tmp_path, SMALL)])
    err = capsys.readouterr().err
    assert code == 4
    assert "cross-check" in err


def test_simulate_output_is_reproducible(tmp_path, capsys):
    path = _write(tmp_path, SMALL)
    assert cli.main(["simulate", "-s", path]) == 0
    first = capsys.readouterr().out
    assert cli.main(["simulate", "-s", path]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert "p_hat" in first


def test_simulate_output_identical_across_workers(tmp_path, capsys):
    path = _write(tmp_path, SMALL)
    assert cli.main(["simulate", "-s", path, "--workers", "1"]) == 0
    serial = capsys.readouterr().out
    assert cli.main(["simulate", "-s", path, "--workers", "4"]) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_simulate_seed_changes_output(tmp_path, capsys):
    path = _write(tmp_path, SMALL)
    assert cli.main(["simulate", "-s", path, "--seed", "4"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["simulate", "-s", path, "--seed", "5"]) == 0
    second = capsys.readouterr().out
    assert first != second


def test_simulate_zero_samples_is_usage_error(tmp_path):
    path = _write(tmp_path, SMALL)
    with pytest.raises(SystemExit) as err:
        cli.main(["simulate", "-s", path, "--samples", "0"])
    assert err.value.code == 2


def test_validate_pass_with_info(tmp_path, capsys):
    code = cli.main(["validate", "-s", _write(tmp_path, ROW1)])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out
    assert "blocked-covers-mesh" in out


def test_validate_fail_on_disconnection(tmp_path, capsys):
    code = cli.main(["validate", "-s", _write(tmp_path, WALL)])
    out = capsys.readouterr().out
    assert code == 3
    assert "FAIL" in out
    assert "disconnected" in out


def test_validate_json_shape(tmp_path, capsys):
    code = cli.main(["validate", "-s", _write(tmp_path, WALL), "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 3
    assert payload["ok"] is False
    assert payload["violations"][0]["code"] == "disconnected"


def test_table2_budget_gates_heavy_rows(capsys):
    code = cli.main(["table2", "--budget", "40000", "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    rows = {r["row"]: r for r in payload["rows"]}
    assert len(rows) == 11
    computed = {k for k, r in rows.items() if r["status"] == "OK"}
    assert computed == {1, 4, 7}
    for k in computed:
        assert abs(float(rows[k]["computed"]) - float(rows[k]["published"])) <= 0.005
    skipped = rows[2]
    assert skipped["status"] == "SKIPPED"
    assert "exceeds budget" in skipped["note"]
    assert any("convention" in note for note in payload["notes"])


def test_table2_skips_as_error_exits_5(capsys):
    code = cli.main(["table2", "--budget", "40000", "--skips-as-error"])
    capsys.readouterr()
    assert code == 5


def test_table2_csv_has_header(capsys):
    code = cli.main(["table2", "--budget", "40000", "--format", "csv"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    assert lines[0].startswith("row,mesh,published_label")
    assert len(lines) == 12


def test_table2_rejects_bad_budget():
    with pytest.raises(SystemExit) as err:
        cli.main(["table2", "--budget", "bogus"])
    assert err.value.code == 2
