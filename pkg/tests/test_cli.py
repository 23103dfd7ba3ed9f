import io
import json
from pathlib import Path

import jsonschema
import pytest

from motivzeta.cli import output_schema, run

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
FIXTURE = ROOT / "tests" / "fixtures" / "x3_minus_y3_resolution.json"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([a.replace("{fixture}", str(FIXTURE.relative_to(ROOT))) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _at_root(monkeypatch):
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("MOTIVZETA_ORDER", raising=False)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_outputs(name):
    code, out, _ = call(CASES[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize("name", sorted(n for n in CASES if n.endswith(".json")))
def test_json_outputs_follow_the_schema(name):
    jsonschema.validate(json.loads((GOLDEN / name).read_text()), output_schema())


def test_schema_rejects_unknown_fields():
    doc = json.loads((GOLDEN / "verify_ts.json").read_text())
    doc["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, output_schema())


def test_rational_form_of_cubes():
    code, out, _ = call(["zeta", "brieskorn", "x^3 - y^3", "--rational"])
    assert code == 0
    assert out.strip() == (
        "L*unit*L^-2*T^3/(unit - L^-2*T^3) + (L - 1)*unit*L^-2*T^3/(unit - L^-2*T^3)*L^-1*T/(unit - L^-1*T)"
    )


def test_chi_positive_form():
    # the T^4 coefficient (L - 1) L^-3 unit realizes to -2 under pos, so the second term carries a minus
    code, out, _ = call(["realize", "--chi", "--pos", "zeta", "brieskorn", "x^3 - y^3"])
    assert code == 0
    assert out.strip() == "T^3/(1 - T^3) - 2*T^3/(1 - T^3)*T/(1 + T)"


def test_recover_self_test():
    assert call(["recover", "--dim", "2", "--self-test", "x^3 - y^3"])[1] == "exponents: 3,3\n"


def test_recover_from_a_written_dump(tmp_path):
    dump = tmp_path / "dump.json"
    code, out, _ = call(["recover", "--dim", "2", "--self-test", "x^2 - y^5", "--write-dump", str(dump)])
    assert code == 0 and out == "exponents: 2,5\n"
    code, out, _ = call(["recover", "--dim", "2", "--dump", str(dump)])
    assert code == 0 and out == "exponents: 2,5\n"


def test_default_order_from_environment(monkeypatch):
    monkeypatch.setenv("MOTIVZETA_ORDER", "7")
    code, out, _ = call(["zeta", "modified", "x^3 - y^3", "--series", "--json"])
    doc = json.loads(out)
    assert code == 0 and doc["order"] == 7 and len(doc["series"]) == 7
    code, out, _ = call(["zeta", "modified", "x^3 - y^3", "--series", "--json", "--order", "4"])
    assert json.loads(out)["order"] == 4


def test_default_order_is_30():
    doc = json.loads(call(["zeta", "brieskorn", "x^2", "--series", "--json"])[1])
    assert doc["order"] == 30


@pytest.mark.parametrize(
    "argv",
    [
        ["zeta", "brieskorn", "x^3 - "],
        ["zeta", "sideways", "x^3"],
        ["zeta", "brieskorn", "x^3", "--order", "-1"],
        ["realize", "--chi", "milnor", "newton", "x^3"],
        ["realize", "--chi", "--pos", "--neg", "zeta", "brieskorn", "x^3"],
        ["recover", "--dim", "3", "--self-test", "x^3 - y^3"],
        ["zeta", "resolution", "does/not/exist.json"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = call(argv)
    assert code == 2
    assert out == ""


def test_parse_error_reports_position():
    code, _, err = call(["zeta", "brieskorn", "x^3 - "])
    assert code == 2 and "column 7" in err


def test_bad_resolution_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"divisors": [{"id": "E", "N": 3, "nu": 1}], "strata": [{"I": ["F"], "class": "unit"}]}')
    assert call(["zeta", "resolution", str(path)])[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["zeta", "newton", "(x - y)^2"],
        ["zeta", "brieskorn", "x^2 + x*y"],
        ["zeta", "newton", "x^2 + 1"],
        ["realize", "--beta", "zeta", "brieskorn", "x^2 + y^2 - z^2", "--series", "--order", "4"],
    ],
)
def test_domain_errors_exit_1(argv):
    code, out, err = call(argv)
    assert code == 1 and err.startswith("error:")


def test_assume_nondegenerate_skips_the_check():
    code, _, _ = call(["zeta", "newton", "x*y + y*z + x*z + x^3"])
    assert code == 1
    code, out, _ = call(["zeta", "newton", "x*y + y*z + x*z + x^3", "--assume-nondegenerate"])
    assert code == 0 and out.strip()


def test_routes_agree_in_text_output():
    texts = {route: call(["zeta", route, "x^3 - y^3", "--series", "--order", "15"])[1] for route in ("brieskorn", "newton")}
    resolution = call(["zeta", "resolution", "{fixture}", "--series", "--order", "15"])[1]
    assert texts["brieskorn"] == texts["newton"] == resolution


def test_milnor_routes():
    for argv in (["milnor", "brieskorn", "x^3 - y^3"], ["milnor", "newton", "x^3 - y^3"], ["milnor", "resolution", "{fixture}"]):
        assert call(argv)[1] == "unit\n"
