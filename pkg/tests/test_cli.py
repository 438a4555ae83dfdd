import json
import random
from pathlib import Path

import jsonschema
import pytest

from gg_factory import mutate, random_valid_graph
from covercalc.cli import main
from covercalc.delliptic import normalized_series
from covercalc.graphs import StableGraph

REPO = Path(__file__).resolve().parent.parent
SCHEMAS = REPO / "schemas"


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def check_schema(name: str, payload: dict) -> None:
    with open(SCHEMAS / f"{name}.schema.json") as fh:
        schema = json.load(fh)
    jsonschema.validate(payload, schema)


def test_integrate(capsys):
    code, out = run_cli(capsys, ["integrate", "--genus", "0", "--exponents", "1,0,0,0"])
    assert code == 0
    payload = json.loads(out)
    check_schema("integrate", payload)
    assert payload["value"] == "1"


def test_integrate_rejects_bad_dimension(capsys):
    code, out = run_cli(capsys, ["integrate", "--genus", "0", "--exponents", "2,0,0"])
    assert code == 2
    check_schema("error", json.loads(out))


def test_intersect_boundary(tmp_path, capsys):
    sep = StableGraph((1, 1), (0, 1), (1, 0), ())
    a = tmp_path / "a.json"
    a.write_text(json.dumps(sep.to_json()))
    code, out = run_cli(capsys, ["intersect-boundary", "--a", str(a), "--b", str(a)])
    assert code == 0
    payload = json.loads(out)
    check_schema("intersect-boundary", payload)
    assert payload["ambient"] == {"genus": 2, "legs": 0}
    assert payload["term_count"] > 0


def test_validate_ggraph_ok_and_invalid(tmp_path, capsys):
    rng = random.Random(4)
    gg = random_valid_graph(rng)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(gg.to_json()))
    code, out = run_cli(capsys, ["validate-ggraph", str(good)])
    assert code == 0
    payload = json.loads(out)
    check_schema("validate-ggraph", payload)
    assert payload["ok"] is True

    bad_gg, label = mutate("balancing", rng)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(bad_gg.to_json()))
    code, out = run_cli(capsys, ["validate-ggraph", str(bad)])
    assert code == 2
    payload = json.loads(out)
    check_schema("validate-ggraph", payload)
    assert payload["ok"] is False
    assert any(v["label"] == label for v in payload["violations"])


def test_hurwitz_count_lemma_configuration(capsys):
    code, out = run_cli(
        capsys,
        ["hurwitz-count", "--degree", "3", "--types", "[[3],[2,1],[2,1]]"],
    )
    assert code == 0
    payload = json.loads(out)
    check_schema("hurwitz-count", payload)
    assert payload["count"] == "1"


def test_intersect_ggraph(tmp_path, capsys):
    from gg_factory import _z2_gp

    gp = _z2_gp(1)
    path = tmp_path / "gp.json"
    path.write_text(json.dumps(gp.to_json()))
    code, out = run_cli(capsys, ["intersect-ggraph", "--a", str(path), "--b", str(path)])
    assert code == 0
    payload = json.loads(out)
    check_schema("intersect-ggraph", payload)
    assert payload["term_count"] == len(payload["terms"]) > 0


def test_pullback(tmp_path, capsys):
    from covercalc.groups import cyclic_group

    z4 = cyclic_group(4)
    payload_in = {
        "kind": "corestriction",
        "cls": "psi",
        "group": z4.to_json(),
        "normal": [[3, 4, 1, 2]],
        "h": [2, 3, 4, 1],
    }
    path = tmp_path / "pullback.json"
    path.write_text(json.dumps(payload_in))
    code, out = run_cli(capsys, ["pullback", str(path)])
    assert code == 0
    payload = json.loads(out)
    check_schema("pullback", payload)
    assert payload["terms"][0]["coefficient"] == "1/2"


def test_delliptic_json_and_determinism(capsys):
    code, out1 = run_cli(capsys, ["delliptic", "--dmax", "4", "--ledger"])
    assert code == 0
    payload = json.loads(out1)
    check_schema("delliptic", payload)
    assert payload["values"]["2"]["delta00"] == "12"
    assert payload["values"]["3"]["delta00"] == "32"
    assert payload["values"]["4"]["delta00"] == "336"
    assert payload["values"]["2"]["delta01"] == "2"
    assert payload["values"]["4"]["delta01"] == "136"
    code, out2 = run_cli(capsys, ["delliptic", "--dmax", "4", "--ledger"])
    assert out1 == out2  # byte-identical across runs


def test_delliptic_human_table(capsys):
    code, out = run_cli(capsys, ["delliptic", "--dmax", "3", "--human"])
    assert code == 0
    assert "delta00" in out and "12" in out and "32" in out


def test_qmod_check_roundtrip(tmp_path, capsys):
    series = normalized_series("delta01", 40)
    path = tmp_path / "series.json"
    path.write_text(json.dumps(series.to_json()))
    code, out = run_cli(
        capsys,
        ["qmod-check", "--weight", "4", "--fit", "20", "--holdout", "18",
         "--input", str(path)],
    )
    assert code == 0
    payload = json.loads(out)
    check_schema("qmod-check", payload)
    assert payload["is_member"] is True


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run_cli(capsys, ["intersect-boundary", "--a", str(bad), "--b", str(bad)])
    assert code == 2
    check_schema("error", json.loads(out))
