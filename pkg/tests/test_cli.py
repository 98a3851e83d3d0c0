import json

import pytest

from crystmono.cli import (
    _EXIT,
    _worst,
    diagram_from_payload,
    diagram_report,
    build_parser,
    main,
    show_diagram_payload,
)
from crystmono.monodromy import CheckResult, diagram


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_small_diagram_passes(capsys):
    code, out, _ = run(["verify", "diagram", "P8divZ6"], capsys)
    assert code == 0
    assert "verdict: pass" in out
    assert "ring_lattice" in out


def test_verify_conjugate_character(capsys):
    code, out, _ = run(["verify", "diagram", "P8_Z3", "--chi", "conj"], capsys)
    assert code == 0
    assert "chi=conj" in out and "extra_relation" in out


def test_verify_group_reports_the_linear_order(capsys):
    code, out, _ = run(["verify", "group", "K25", "--max-words", "12"], capsys)
    assert code == 0
    assert "linear order 648" in out
    assert "[pass] D4_3" in out  # the diagram mapped to this model rides along


def test_verify_group_with_two_linked_diagrams(capsys):
    code, out, _ = run(["verify", "group", "K3_6"], capsys)
    assert code == 0
    assert out.index("[pass] K3_6") < out.index("[pass] P8Z6_dblprime") < out.index("[pass] P8Z6_prime")


def test_table_and_proj_targets(capsys):
    code, out, _ = run(["verify", "table1"], capsys)
    assert code == 0 and out.count("[pass]") == 15
    code, out, _ = run(["verify", "pproj"], capsys)
    assert code == 0 and out.count("[pass]") == 7
    assert "[pass] Pproj-1" in out


def test_unknown_names_are_usage_errors(capsys):
    assert run(["verify", "bogus"], capsys)[0] == 2
    assert run(["verify", "diagram", "bogus"], capsys)[0] == 2
    assert run(["verify", "group", "bogus"], capsys)[0] == 2
    assert run(["show", "diagram", "bogus"], capsys)[0] == 2
    assert run(["show", "group", "bogus"], capsys)[0] == 2
    assert run(["show", "bogus", "K25"], capsys)[0] == 2
    assert run(["verify", "diagram"], capsys)[0] == 2
    assert run(["verify", "table1", "extra"], capsys)[0] == 2


def test_json_document_shape(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, _, _ = run(["verify", "diagram", "P8divZ4", "--json", str(path)], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["schema"] == "1"
    assert doc["target"] == "diagram P8divZ4"
    assert doc["verdict"] == "pass"
    (report,) = doc["reports"]
    assert report["case"] == "P8divZ4" and report["group"] == "K3_4"
    assert report["timing"] is None
    for check in report["checks"]:
        assert set(check) == {"claim_id", "claim", "verdict", "witness"}


def test_reports_are_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["verify", "diagram", "P8divZ6", "--json", str(a)], capsys)
    run(["verify", "diagram", "P8divZ6", "--json", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_show_then_verify_round_trips(capsys):
    code, out, _ = run(["show", "diagram", "P8divZ4"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "1" and payload["classical_order"] == 4
    rebuilt = diagram_from_payload(payload)
    args = build_parser().parse_args(["verify", "diagram", "P8divZ4"])
    assert diagram_report(rebuilt, args) == diagram_report(diagram("P8divZ4"), args)


def test_round_trip_preserves_the_conjugate_binding(capsys):
    code, out, _ = run(["show", "diagram", "C3_24", "--chi", "conj"], capsys)
    assert code == 0
    rebuilt = diagram_from_payload(json.loads(out))
    d = diagram("C3_24", "conj")
    assert rebuilt.chi == d.chi
    assert [c.eigenvalue for c in rebuilt.cycles] == [c.eigenvalue for c in d.cycles]


def test_show_group_echoes_the_stored_spellings(capsys):
    code, out, _ = run(["show", "group", "K3_6"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["generators"][0]["eigenvalue"] == "-conj(w)"
    assert payload["lattice_basis"] == ["1", "w"]
    assert payload["order"] == 6


def test_show_group_without_ring_rule_has_no_basis(capsys):
    code, out, _ = run(["show", "group", "G312"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["lattice_basis"] is None
    assert payload["lattice_rule"]["kind"] == "order2_root_orbit"


def test_seed_free_is_reserved_but_bare_only(capsys):
    assert run(["verify", "diagram", "P8divZ6", "--seed-free"], capsys)[0] == 0
    with pytest.raises(SystemExit) as exc:
        main(["verify", "diagram", "P8divZ6", "--seed-free=1"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_word_bound_one_is_inconclusive(capsys):
    code, out, _ = run(["verify", "diagram", "P8divZ6", "--max-words", "1"], capsys)
    assert code == 3
    assert "verdict: inconclusive" in out


def test_timings_fill_the_timing_field(tmp_path, capsys):
    path = tmp_path / "t.json"
    run(["verify", "diagram", "P8divZ6", "--timings", "--json", str(path)], capsys)
    doc = json.loads(path.read_text())
    assert isinstance(doc["reports"][0]["timing"], float)


def test_exit_code_mapping():
    assert _worst(["pass", "pass"]) == "pass"
    assert _worst(["pass", "inconclusive", "pass"]) == "inconclusive"
    assert _worst(["inconclusive", "fail"]) == "fail"
    assert (_EXIT["pass"], _EXIT["fail"], _EXIT["inconclusive"]) == (0, 1, 3)


def test_failing_check_exits_one(monkeypatch, capsys):
    import crystmono.cli as cli

    def broken(d):
        return (CheckResult("gram_form", "stub", "fail", "forced for the exit-code path"),)

    monkeypatch.setattr(cli, "verify_diagram", broken)
    code, out, _ = run(["verify", "diagram", "P8divZ6"], capsys)
    assert code == 1
    assert "verdict: fail" in out
