import json
import os
import subprocess
import sys

import jsonschema
import pytest

from omloq.cli import main
from omloq.oml import catalog, format_lattice

SCHEMA_PATH = os.path.join(
    os.path.dirname(__file__), "..", "src", "omloq", "schemas", "report.schema.json"
)


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_PATH) as fh:
        return json.load(fh)


@pytest.fixture()
def lattice_file(tmp_path):
    def write(name, k=0):
        path = tmp_path / f"{name}{k or ''}.lat"
        path.write_text(format_lattice(catalog(name, k)))
        return str(path)

    return write


def run_json(argv, schema):
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv + ["--json"] if "--json" not in argv else argv)
    doc = json.loads(buf.getvalue())
    jsonschema.validate(doc, schema)
    assert doc["exit_code"] == code
    return code, doc


def test_check_exit_codes(lattice_file, schema, tmp_path):
    code, doc = run_json(["check", lattice_file("mo", 2)], schema)
    assert code == 0 and doc["verdict"] == "pass"

    code, doc = run_json(["check", lattice_file("o6")], schema)
    assert code == 1
    failing = [c for c in doc["checks"] if c["status"] == "fail"]
    assert [c["name"] for c in failing] == ["orthomodular"]
    assert failing[0]["witness"]

    bad = tmp_path / "bad.lat"
    bad.write_text("elements 0 1\nleq 0 nope\n")
    code, doc = run_json(["check", str(bad)], schema)
    assert code == 2 and doc["verdict"] == "input-error"

    code, doc = run_json(["check", str(tmp_path / "missing.lat")], schema)
    assert code == 2


def test_sasaki_command(lattice_file, capsys):
    mo2 = lattice_file("mo", 2)
    assert main(["sasaki", mo2, "a", "b"]) == 0
    out = capsys.readouterr().out
    assert "pi=a hook=a'" in out
    assert main(["sasaki", mo2, "zz", "b"]) == 2


def test_sasaki_json(lattice_file, schema):
    b2 = lattice_file("boolean", 2)
    code, doc = run_json(["sasaki", b2, "p", "q"], schema)
    assert code == 0
    assert doc["data"]["pi"] == "0" and doc["data"]["hook"] == "q"


def test_linmaps_command(lattice_file, schema):
    code, doc = run_json(["linmaps", lattice_file("boolean", 2)], schema)
    assert code == 0
    assert doc["data"]["carrier_size"] == 16


def test_linmaps_cap_exit(lattice_file, schema):
    code, doc = run_json(["linmaps", lattice_file("mo", 2), "--lin-cap", "10"], schema)
    assert code == 3 and doc["verdict"] == "cap-exceeded"


def test_tmonoid_command(lattice_file, schema, tmp_path):
    csv_path = str(tmp_path / "cayley.csv")
    code, doc = run_json(
        ["tmonoid", lattice_file("mo", 2), "--cayley-csv", csv_path], schema
    )
    assert code == 0
    assert doc["data"]["size"] == 18
    with open(csv_path) as fh:
        assert fh.readline().strip() == "row,col,product"

    code, doc = run_json(["tmonoid", lattice_file("mo", 2), "--monoid-cap", "5"], schema)
    assert code == 3


def test_toda_command(lattice_file, schema):
    code, doc = run_json(["toda", lattice_file("chain2")], schema)
    assert code == 0
    code, doc = run_json(["toda", lattice_file("o6")], schema)
    assert code == 1


def test_equiv_command(lattice_file, schema, tmp_path):
    mo2 = lattice_file("mo", 2)
    swap = tmp_path / "swap.iso"
    swap.write_text(
        "iso 0 0\niso a b\niso b a\niso a' b'\niso b' a'\niso 1 1\n"
    )
    code, doc = run_json(["equiv", mo2, str(swap)], schema)
    assert code == 0
    names = [c["name"] for c in doc["checks"]]
    assert "mu_naturality[swap]" in names
    assert "lambda_naturality[swap]" in names
    assert "three_way_isomorphism" in names

    # morphism touching an element that does not exist: input error
    broken = tmp_path / "broken.iso"
    broken.write_text("iso 0 0\niso a zz\n")
    code, doc = run_json(["equiv", mo2, str(broken)], schema)
    assert code == 2

    # not perp-preserving: rejected as input
    notiso = tmp_path / "notiso.iso"
    notiso.write_text("iso 0 0\niso a b\niso b a\niso a' a'\niso b' b'\niso 1 1\n")
    code, doc = run_json(["equiv", mo2, str(notiso)], schema)
    assert code == 2


def test_witness_command(schema, capsys):
    assert main(["witness"]) == 0
    capsys.readouterr()
    code, doc = run_json(["witness"], schema)
    assert code == 0
    assert doc["data"]["pi_u_x"] == [[1, 0, 0]]
    assert doc["data"]["pi_v_x"] == [[1, 1, 0]]
    assert doc["data"]["monotone_violation"] is True

    code, doc = run_json(["witness", "--x", "1,0,0"], schema)
    assert code == 1 and doc["data"]["monotone_violation"] is False

    code, doc = run_json(["witness", "--x", "0,1"], schema)
    assert code == 2


def test_env_seed_override(lattice_file, schema, monkeypatch):
    monkeypatch.setenv("OMLOQ_SEED", "12345")
    code, doc = run_json(["toda", lattice_file("chain2"), "--seed", "777"], schema)
    assert code == 0 and doc["seed"] == 12345
    monkeypatch.setenv("OMLOQ_SEED", "not-a-number")
    assert main(["toda", lattice_file("chain2")]) == 2


def test_json_reports_are_byte_identical(tmp_path):
    lat = tmp_path / "mo2.lat"
    lat.write_text(format_lattice(catalog("mo", 2)))
    cmd = [sys.executable, "-m", "omloq.cli", "--json", "toda", str(lat)]
    env = {k: v for k, v in os.environ.items() if k != "OMLOQ_SEED"}
    first = subprocess.run(cmd, capture_output=True, text=True, env=env)
    second = subprocess.run(cmd, capture_output=True, text=True, env=env)
    assert first.returncode == 0
    assert first.stdout == second.stdout
