import json

import pytest

from flows.cli.main import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def invoke_json(capsys, *argv):
    code, out = invoke(capsys, *argv)
    return code, json.loads(out)


def test_class_index(capsys):
    code, record = invoke_json(capsys, "class-index", "--payload", '{"v1": "1/4", "v2": "3/4"}')
    assert code == 0
    assert record == {
        "schema_version": "1",
        "command": "class-index",
        "index": 4,
        "period": 4,
        "oracle_index": 4,
    }


def test_class_index_skips_oracle_beyond_budget(capsys):
    code, record = invoke_json(capsys, "class-index", "--payload", '{"v1": "1/4", "v2": "3/4"}', "--max-index", "2")
    assert code == 0
    assert "oracle_index" not in record


def test_class_not_in_brauer_group(capsys):
    code, record = invoke_json(capsys, "class-index", "--payload", '{"v1": "1/3"}')
    assert code == 2
    assert record["error"] == "not-in-brauer-group"
    assert record["schema_version"] == "1"


def test_malformed_json(capsys):
    code, record = invoke_json(capsys, "sb-bound", "--payload", "{ind: 30")
    assert (code, record["error"]) == (2, "invalid-payload")


def test_missing_payload_file(capsys, tmp_path):
    code, record = invoke_json(capsys, "sb-bound", "--payload-file", str(tmp_path / "none.json"))
    assert (code, record["error"]) == (2, "invalid-payload")


def test_unknown_payload_key(capsys):
    code, record = invoke_json(capsys, "sb-index", "--payload", '{"ind": 12, "flags": [4], "bogus": 1}')
    assert (code, record["error"]) == (2, "invalid-payload")


def test_sb_bound_square_free(capsys, fixture_path):
    code, record = invoke_json(capsys, "sb-bound", "--payload-file", str(fixture_path("sb_square_free.json")))
    assert code == 0
    assert (record["exponent"], record["vanishes"]) == (1, True)
    assert [rule["id"] for rule in record["rules"]] == ["index-gcd", "square-free"]


def test_sb_bound_with_hypothesis_flag(capsys):
    payload = '{"ind": 12, "flags": [4, 6]}'
    _, plain = invoke_json(capsys, "sb-bound", "--payload", payload)
    _, assumed = invoke_json(capsys, "sb-bound", "--payload", payload, "--hypothesis", "char-coprime")
    assert plain["exponent"] == 2
    assert assumed["exponent"] == 1
    assert assumed["conditional_assumptions"] == ["char-coprime"]


def test_sb_bound_field_kind(capsys):
    code, record = invoke_json(capsys, "sb-bound", "--payload", '{"ind": 16, "flags": [4], "field_kind": "global"}')
    assert (code, record["exponent"]) == (0, 1)


def test_sb_bound_default_field_kind_from_config(capsys, tmp_path):
    config = tmp_path / "sbflag.env"
    config.write_text("SBFLAG_DEFAULT_FIELD_KIND=local\n")
    code, record = invoke_json(capsys, "sb-bound", "--payload", '{"ind": 16, "flags": [4]}', "--config", str(config))
    assert code == 0
    assert "arithmetic-field" in [rule["id"] for rule in record["rules"]]


def test_sb_index(capsys):
    code, record = invoke_json(capsys, "sb-index", "--payload", '{"ind": 12, "flags": [4, 6]}')
    assert code == 0
    assert (record["generic_index"], record["variety_index"]) == (2, 6)
    assert record["normal_form"]["d"] == 2
    assert [item["prime"] for item in record["normal_form"]["components"]] == [2]


def test_sb_generic_index_with_algebra(capsys):
    payload = json.dumps({"algebra": {"kind": "global", "brauer_data": {"v1": "1/12", "v2": "11/12"}}, "flags": [3, 9]})
    code, record = invoke_json(capsys, "sb-generic-index", "--payload", payload)
    assert (code, record["generic_index"]) == (0, 3)


def test_sb_rational_point(capsys, fixture_path):
    code, record = invoke_json(capsys, "sb-rational-point", "--payload-file", str(fixture_path("sb_rational_point.json")))
    assert (code, record["has_rational_point"]) == (0, True)
    code, record = invoke_json(capsys, "sb-rational-point", "--payload", '{"ind": 12, "flags": [4, 6]}')
    assert (code, record["error"]) == (2, "invalid-payload")
    code, record = invoke_json(capsys, "sb-rational-point", "--payload", '{"ind": 12, "flags": [4, 6], "ind_over_L": 5}')
    assert (code, record["error"]) == (2, "invalid-index")


def test_class_decompose(capsys, fixture_path):
    code, record = invoke_json(capsys, "class-decompose", "--payload-file", str(fixture_path("class_index_12.json")))
    assert code == 0
    assert [(item["prime"], item["index"]) for item in record["components"]] == [(2, 4), (3, 3)]
    assert record["components"][0]["class"]["invariants"] == {"v1": "3/4", "v2": "1/4"}


def test_class_restrict(capsys, fixture_path):
    code, record = invoke_json(capsys, "class-restrict", "--payload-file", str(fixture_path("restrict_degree_2.json")))
    assert code == 0
    assert record["class"]["invariants"] == {"v1": "1/2", "v2.0": "3/4", "v2.1": "3/4"}
    assert (record["index"], record["original_index"]) == (4, 4)


def test_local_ext_count(capsys, fixture_path):
    code, record = invoke_json(capsys, "local-ext-count", "--payload-file", str(fixture_path("local_count_case3.json")))
    assert code == 0
    assert (record["bound"], record["case"]) == ("AtLeast(4)", 3)
    assert record["catalog"][0] == "unramified@3"
    assert len(set(record["catalog"])) == 4


def test_construct_ext(capsys, fixture_path):
    code, record = invoke_json(capsys, "construct-ext", "--payload-file", str(fixture_path("lemma_p2_m2.json")))
    assert code == 0
    assert record["extension"]["local_labels"] == {"v1": ["generic(2)@2"], "v2": ["generic(2)@2"]}
    assert record["index_over_composita"] == [1, 1]


def test_construct_ext_coincident(capsys, load_fixture):
    payload = load_fixture("lemma_p2_m2.json")
    payload["L1"] = payload["L0"]
    code, record = invoke_json(capsys, "construct-ext", "--payload", json.dumps(payload))
    assert (code, record["error"]) == (3, "lemma-preconditions-failed")


def test_construct_power_ext(capsys, fixture_path):
    code, record = invoke_json(capsys, "construct-power-ext", "--payload-file", str(fixture_path("power_p2_m3.json")))
    assert code == 0
    assert record["extension"]["degree"] == 4
    assert record["index"] == 2


def test_chain_then_verify(capsys, fixture_path, tmp_path):
    code, out = invoke(capsys, "chain", "--payload-file", str(fixture_path("chain_p2_m2_k1.json")))
    assert code == 0
    record = json.loads(out)
    assert record["nodes"] == ["L0", "K1", "L1"]

    saved = tmp_path / "chain.json"
    saved.write_text(out)
    code, verdict = invoke_json(capsys, "verify-chain", "--payload-file", str(saved))
    assert code == 0
    assert verdict["valid"] is True
    assert verdict["certificates"] == 2


def test_verify_tampered_chain(capsys, fixture_path):
    _, out = invoke(capsys, "chain", "--payload-file", str(fixture_path("chain_p2_m2_k1.json")))
    record = json.loads(out)
    for field in record["fields"]:
        if field["id"] == "K1":
            field["declared_index"] = 4
    code, verdict = invoke_json(capsys, "verify-chain", "--payload", json.dumps(record))
    assert code == 4
    assert verdict["valid"] is False
    assert verdict["problems"]


def test_chain_endpoint_outside_class(capsys, load_fixture):
    payload = load_fixture("chain_p2_m2_k1.json")
    payload["nodes"][1]["extension"] = {"degree": 2}
    code, record = invoke_json(capsys, "chain", "--payload", json.dumps(payload))
    assert (code, record["error"]) == (2, "not-in-AY")


def test_output_is_deterministic(capsys, fixture_path):
    outputs = {invoke(capsys, "chain", "--payload-file", str(fixture_path("chain_p2_m2_k1.json")))[1] for _ in range(2)}
    assert len(outputs) == 1


def test_human_output(capsys):
    code, out = invoke(capsys, "class-index", "--payload", '{"v1": "1/4", "v2": "3/4"}', "--human")
    assert code == 0
    assert out.startswith("{\n")
    assert json.loads(out)["index"] == 4


def test_oracle_suite_degenerate(capsys):
    code, record = invoke_json(capsys, "oracle-suite", "--max-index", "1")
    assert code == 0
    assert record["status"] == "pass"
    assert len(record["suites"]) == 8


def test_oracle_suite_human_table(capsys):
    code, out = invoke(capsys, "oracle-suite", "--max-index", "1", "--human")
    assert code == 0
    assert "index-theorem" in out and "primeira_falha" in out


def test_invalid_config(capsys, tmp_path):
    code, record = invoke_json(capsys, "class-index", "--payload", "{}", "--config", str(tmp_path / "none.env"))
    assert (code, record["error"]) == (2, "invalid-config")


def test_unknown_command(capsys):
    code, record = invoke_json(capsys, "bogus")
    assert (code, record["error"]) == (2, "invalid-arguments")
    assert "command" not in record


def test_non_integer_budget_flag(capsys):
    code, record = invoke_json(capsys, "class-index", "--payload", "{}", "--max-index", "many")
    assert (code, record["error"]) == (2, "invalid-arguments")
    assert record["schema_version"] == "1"


def test_conflicting_payload_sources(capsys, fixture_path):
    code, record = invoke_json(
        capsys, "sb-bound", "--payload", "{}", "--payload-file", str(fixture_path("sb_square_free.json"))
    )
    assert (code, record["error"]) == (2, "invalid-arguments")


def test_help_still_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--help"])
    assert exc.value.code == 0
    assert "sbflag" in capsys.readouterr().out
