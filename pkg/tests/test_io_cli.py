import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semichar.cli import (
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_OK,
    cli_main,
    construction_for,
)
from semichar.config import CapExceeded, Limits
from semichar.families import make_abelian, make_cyclic
from semichar.io import (
    GroupFileError,
    export_group_file,
    export_group_text,
    parse_group_file,
    parse_group_text,
    run_report,
)

from conftest import family


def test_parse_c2_table():
    G = parse_group_text('{"version": 1, "order": 2, "mul": [0, 1, 1, 0]}')
    assert G.order == 2 and G.kind == "abstract"


def test_parse_rows_and_labels():
    G = parse_group_text('{"mul": [[0, 1], [1, 0]], "labels": ["e", "t"]}')
    assert G.table.label(1) == "t"


def test_parse_perm_generators():
    G = parse_group_text('{"version": 1, "perm": ["(1 2)", "(1 2 3)"]}')
    assert G.order == 6 and G.kind == "perm"
    assert not G.table.is_abelian


def test_parse_matrix_generators():
    # diag(t, 1) and a shear over GF(4) generate the affine group of order 12
    text = json.dumps({"version": 1, "matrix": {"p": 2, "e": 2, "generators": [
        [[[0, 1], 0], [0, 1]],
        [[1, 1], [0, 1]],
    ]}})
    G = parse_group_text(text)
    assert G.kind == "matrix" and G.field.q == 4 and G.order == 12
    sl = {"version": 1, "matrix": {"p": 3, "generators": [[[0, 2], [1, 0]], [[1, 1], [0, 1]]]}}
    assert parse_group_text(json.dumps(sl)).order == 24


def test_reject_missing_inverse():
    with pytest.raises(GroupFileError, match="not a group"):
        parse_group_text('{"version": 1, "order": 2, "mul": [0, 1, 1, 1]}')


@pytest.mark.parametrize("text,where", [
    ('{"version": 1, "mul": [0, 1, 1, 0', "1:"),
    ('{\n  "version": 2,\n  "mul": [0]\n}', ":2:"),
    ('{"version": 1}', "1:1"),
    ('{"version": 1, "perm": ["(1 2"]}', "1:"),
    ('{"version": 1, "mul": [0, 1, 1]}', "1:"),
    ('{"version": 1, "matrix": {"p": 4, "generators": []}}', "1:"),
    ('[1, 2]', "1:1"),
])
def test_malformed_files_report_location(text, where):
    with pytest.raises(GroupFileError) as err:
        parse_group_text(text, path="g.json")
    assert str(err.value).startswith("g.json:") and where in str(err.value)


def test_version_defaults_to_current():
    assert parse_group_text('{"mul": [0]}').order == 1


def test_export_roundtrip(tmp_path):
    G = make_cyclic(3)
    path = tmp_path / "c3.json"
    export_group_file(G, path)
    H = parse_group_file(path)
    assert (H.table.mul == G.table.mul).all()
    assert [H.table.label(i) for i in range(3)] == [G.table.label(i) for i in range(3)]
    assert export_group_text(H) == path.read_text()


@pytest.mark.parametrize("spec", ["s3", "q8", "gl2-2", "heis3", "d4*c2"])
def test_export_is_byte_stable(spec):
    text = export_group_text(family(spec))
    again = export_group_text(parse_group_text(text))
    assert text == again


@given(st.lists(st.integers(1, 5), min_size=1, max_size=3))
def test_export_parse_identity_on_tables(factors):
    G = make_abelian(factors)
    H = parse_group_text(export_group_text(G))
    assert (H.table.mul == G.table.mul).all()


def test_export_refuses_large():
    with pytest.raises(CapExceeded, match="generator"):
        export_group_text(family("s4"), Limits(export_max=10))


def test_run_report_q8():
    rep = run_report(family("q8"))
    assert rep.order == 8 and rep.semichar_order == 16 and rep.invariant_factors == [2, 2, 4]
    assert rep.holds and "verdict" in rep.render()
    js = rep.to_json()
    assert js["semichar_order"] == "16" and js["valuations"] == {"2": [4, 3]}


# command line


def run(argv, capsys):
    code = cli_main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_q8(capsys):
    code, out, _ = run(["compute", "--family", "q8", "--json", "--no-time"], capsys)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["order"] == 8 and payload["semichar_order"] == "16"
    assert payload["invariant_factors"] == [2, 2, 4] and payload["holds"]


def test_compute_text_is_deterministic(capsys):
    a = run(["compute", "--family", "a4", "--no-time"], capsys)[1]
    b = run(["compute", "--family", "a4", "--no-time"], capsys)[1]
    assert a == b and "324" in a and "time" not in a


def test_compute_s7_is_infeasible(capsys):
    code, _, err = run(["compute", "--family", "s7"], capsys)
    assert code == EXIT_INFEASIBLE
    assert "torsion" in err or "locali" in err


def test_unknown_family_is_input_error(capsys):
    code, _, err = run(["compute", "--family", "zz3"], capsys)
    assert code == EXIT_INPUT and "unknown family" in err


def test_bad_arguments(capsys):
    assert run(["nosuch"], capsys)[0] == EXIT_INPUT
    assert run(["torsion", "--family", "s3", "--prime", "4"], capsys)[0] == EXIT_INPUT


def test_compute_from_file(tmp_path, capsys):
    path = tmp_path / "s3.json"
    path.write_text('{"version": 1, "perm": ["(1 2)", "(1 2 3)"]}')
    code, out, _ = run(["compute", "--file", str(path), "--json", "--no-time"], capsys)
    assert code == EXIT_OK and json.loads(out)["semichar_order"] == "24"
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "mul": [0, 1, 1, 1]}')
    assert run(["compute", "--file", str(bad)], capsys)[0] == EXIT_INPUT
    assert run(["compute", "--file", str(tmp_path / "missing.json")], capsys)[0] == EXIT_INPUT


def test_batch_small(capsys):
    code, out, _ = run(["batch", "--corpus", "builtin", "--max-order", "24", "--json", "--no-time"], capsys)
    assert code == EXIT_OK
    lines = [json.loads(x) for x in out.strip().splitlines()]
    summary = lines[-1]["summary"]
    assert summary["violation"] == 0 and summary["skipped"] == 0 and summary["holds"] == summary["groups"]
    assert all(r["status"] == "holds" for r in lines[:-1])


def test_batch_skips_are_distinct(capsys):
    argv = ["batch", "--max-order", "64", "--snf-cap", "40", "--json", "--no-time"]
    code, out, _ = run(argv, capsys)
    summary = json.loads(out.strip().splitlines()[-1])["summary"]
    assert summary["skipped"] > 0 and code == EXIT_OK
    assert run(argv + ["--strict"], capsys)[0] == EXIT_INFEASIBLE


def test_construct_commands(capsys):
    code, out, _ = run(["construct", "--family", "s4", "--prime", "2", "--json"], capsys)
    assert code == EXIT_OK
    code, out, _ = run(["construct", "--family", "heis3", "--prime", "3"], capsys)
    assert code == EXIT_OK
    assert run(["construct", "--family", "d4", "--prime", "2"], capsys)[0] == EXIT_INFEASIBLE


def test_construction_dispatch():
    assert construction_for("s5", 5).independence_rank == 6
    assert construction_for("a4", 2).independence_rank == 2
    assert construction_for("a5", 3).all_verified
    assert construction_for("gl2-4", 3).claimed_lower_bound == 10
    assert construction_for("u3-3", 3).independence_rank == 3
    assert construction_for("dic3", 3).independence_rank == 1


def test_torsion_and_localize(capsys):
    code, out, _ = run(["torsion", "--family", "s6", "--prime", "2", "--json"], capsys)
    assert code == EXIT_OK and json.loads(out)["l_torsion_rank"] == 46
    code, out, _ = run(["localize", "--family", "a4", "--prime", "3", "--json"], capsys)
    payload = json.loads(out)
    assert code == EXIT_OK and payload["local_order"] == "81" and payload["decomposition_ok"]


def test_facts(capsys):
    code, out, _ = run(["facts", "--gl2", "3", "--json"], capsys)
    payload = json.loads(out)
    assert code == EXIT_OK and payload["consistent"]
    assert payload["monomial_count"]["2"] == 8


def test_export_command(tmp_path, capsys):
    out = tmp_path / "q8.json"
    assert run(["export", "--family", "q8", "--out", str(out)], capsys)[0] == EXIT_OK
    assert parse_group_file(out).order == 8
    assert run(["export", "--family", "s7", "--out", str(out)], capsys)[0] == EXIT_INFEASIBLE


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "semichar", "torsion", "--family", "s3", "--prime", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "= 1" in res.stdout
