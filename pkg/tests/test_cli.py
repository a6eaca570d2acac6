import json

import pytest

from isogreen.cli import load_schemas, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def cache_path(cache):
    return cache.path


def test_count_sp4(capsys, cache_path):
    code, out = _run(capsys, "count", "multiplicity", "--group", "Sp4", "--cache", cache_path)
    assert code == 0 and out.strip() == "2*q^2+12*q+48"


def test_text_and_json_agree(capsys, cache_path):
    _, text = _run(capsys, "count", "multiplicity", "--group", "SO5", "--cache", cache_path)
    _, raw = _run(capsys, "count", "multiplicity", "--group", "SO5", "--cache", cache_path, "--json")
    payload = json.loads(raw)
    assert payload["multiplicity"] == text.strip()
    assert payload["leading_law"] is True


def test_decompose_json(capsys, cache_path):
    code, raw = _run(capsys, "count", "multiplicity", "--group", "Sp4", "--decompose", "--json",
                     "--cache", cache_path)
    payload = json.loads(raw)
    assert code == 0 and payload["matches_type_sum"]
    parts = {t["isolated"]: t for t in payload["perIsolated"]}
    assert parts["A1xA1"]["contribution"] == "8"
    assert parts["C2"]["contribution"] == "2*q^2+12*q+40"


def test_unknown_preset_is_usage_error(capsys):
    code, _ = _run(capsys, "count", "multiplicity", "--group", "E9")
    assert code == 2


def test_bad_punctures_is_usage_error(capsys):
    code, _ = _run(capsys, "count", "multiplicity", "--group", "SL2", "--punctures", "2")
    assert code == 2


def test_argparse_error_is_usage_error(capsys):
    assert main(["count"]) == 2
    capsys.readouterr()


def test_check_generic_exit_codes(capsys):
    assert _run(capsys, "check-generic", "--group", "SL2", "--tuple", "1/2,-1/2;1,-1;2,-2")[0] == 0
    assert _run(capsys, "check-generic", "--group", "SL2", "--tuple", "1/2,-1/2;1,-1;3/2,-3/2")[0] == 1
    assert _run(capsys, "check-generic", "--group", "GL2", "--tuple", "1,0;0,0;0,0")[0] == 1
    assert _run(capsys, "check-generic", "--group", "GL2", "--tuple", "1,0;0,0;0,0", "--no-central-check")[0] == 0
    assert _run(capsys, "check-generic", "--group", "SO5", "--tuple", "3,6;9,18;-8*r6,-4*r6")[0] == 0
    assert _run(capsys, "check-generic", "--group", "SL2", "--tuple", "1,2,3")[0] == 2


def test_search_seed_reproducible(capsys):
    _, a = _run(capsys, "check-generic", "--group", "Sp4", "--search", "--seed", "7", "--json")
    _, b = _run(capsys, "check-generic", "--group", "Sp4", "--search", "--seed", "7", "--json")
    assert a == b and json.loads(a)["generic"]


def test_verify_so5_appendix(capsys):
    assert _run(capsys, "verify-so5-appendix")[0] == 0


def test_analogue57_without_theta_is_budget_exit(capsys):
    assert _run(capsys, "oracle", "analogue57", "--group", "SL2")[0] == 3


def test_oracle_green_json(capsys):
    code, raw = _run(capsys, "oracle", "green", "--group", "SL2", "--q", "3", "--json")
    assert code == 0
    json.loads(raw)


def test_subsystems_isolated(capsys):
    code, raw = _run(capsys, "subsystems", "--group", "Sp4", "--kind", "isolated", "--json")
    types = sorted(x["type"] for x in json.loads(raw)["subsystems"])
    assert code == 0 and "C2" in types and "A1xA1" in types


SCHEMA_CASES = [
    ("subsystems", ["subsystems", "--group", "Sp4"]),
    ("mobius", ["mobius", "--group", "C2", "--kind", "levi"]),
    ("check-generic", ["check-generic", "--group", "SL2", "--tuple", "1,-1;2,-2;4,-4"]),
    ("check-generic", ["check-generic", "--group", "SL2", "--tuple", "1,-1;2,-2;3,-3"]),
    ("check-generic", ["check-generic", "--group", "SO5", "--search", "--seed", "3"]),
    ("liedata-fit", ["liedata", "fit", "--group", "Sp4"]),
    ("count-multiplicity", ["count", "multiplicity", "--group", "Sp4"]),
    ("count-charvar", ["count", "charvar", "--group", "Sp4"]),
    ("count-decompose", ["count", "multiplicity", "--group", "Sp4", "--decompose"]),
    ("oracle-scan-theorem", ["oracle", "scan-theorem", "--group", "SL2", "--q", "3", "--s-field", "9"]),
    ("oracle-green", ["oracle", "green", "--group", "Sp4", "--q", "3"]),
    ("oracle-multiplicity", ["oracle", "multiplicity", "--group", "SL2", "--q", "11", "--theta", "2,3,7"]),
    ("oracle-analogue57", ["oracle", "analogue57", "--group", "GL2", "--q", "3"]),
    ("oracle-indecomposable", ["oracle", "indecomposable", "--group", "SL2", "--q", "3", "--flags", "0,1,2"]),
    ("oracle-indecomposable", ["oracle", "indecomposable", "--group", "SO5", "--q", "5", "--so5-appendix"]),
    ("verify-so5-appendix", ["verify-so5-appendix"]),
]


@pytest.mark.parametrize("key,argv", SCHEMA_CASES)
def test_json_output_validates(key, argv, capsys, cache_path):
    jsonschema = pytest.importorskip("jsonschema")
    main(argv + ["--json", "--cache", cache_path])
    payload = json.loads(capsys.readouterr().out)
    jsonschema.validate(payload, load_schemas()[key])


def test_liedata_fit_sample_options(capsys, tmp_path):
    path = str(tmp_path / "c.json")
    code, raw = _run(capsys, "liedata", "fit", "--group", "SL2", "--q", "3,5,7", "--holdout", "11",
                     "--cache", path, "--json")
    greens = {(r["levi"], r["class"]): r["green"] for r in json.loads(raw)["classes"]}
    assert code == 0 and greens[("A1", "1")] == "q+1"
    assert _run(capsys, "liedata", "fit", "--group", "Sp4", "--q", "3,5", "--cache", path)[0] == 2


def test_schema_rejects_malformed_payload():
    jsonschema = pytest.importorskip("jsonschema")
    schema = load_schemas()["count-multiplicity"]
    good = {"group": "Sp4", "genus": 0, "punctures": 3, "multiplicity": "2*q^2+12*q+48",
            "leading_law": True, "nonnegative": True}
    jsonschema.validate(good, schema)
    for bad in (dict(good, extra=1), dict(good, multiplicity="two"), {k: v for k, v in good.items() if k != "genus"}):
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, schema)
