import jsonschema
import pytest

import qfree


def test_scalars():
    assert qfree.qint(2) == qfree.scalar_str("(u^8 + 1)/u^4")
    assert qfree.scalar_specialize("(u^4 - 1)/(u - 1)", "2") == "15"


def test_relations_and_screening():
    r = qfree.check_drinfeld("R6", "0,0", 1, 1)
    assert r["status"] == "pass" and r["checks"] > 0
    assert qfree.check_screening(1, 2)["status"] == "pass"
    assert qfree.clifford_check(2)["status"] == "pass"
    assert qfree.check_xplus_builders(1, 1)["status"] == "pass"


def test_characters_and_weights():
    assert qfree.kernel_dimension("0,0", 0) == 1
    kc = qfree.kernel_character(1, 2, 2)
    assert kc["status"] == "pass"
    assert kc["details"]["series"]["terms"]
    assert all(qfree.hw_verify(i)["status"] == "pass" for i in range(1, 5))


def test_series_and_ope():
    assert qfree.check_star_identity(4)["status"] == "pass"
    assert qfree.check_S(2, 4)["status"] == "pass"
    assert qfree.check_jacobi_triple(1, 4)["status"] == "pass"
    assert qfree.check_ope_formula(4, 4)["status"] == "pass"


def test_vertex_operators():
    assert len(qfree.intertwining_conditions()) == 12
    assert qfree.check_intertwining("I", "2->1", "A", 0, 1)["status"] == "pass"
    assert qfree.normalization_check("II", "4->3")["status"] == "pass"
    assert qfree.check_screening_anticommute("I", "1->2", 0)["status"] == "pass"
    tp = qfree.two_point(2)
    assert tp["status"] == "pass"
    assert set(tp["details"]["components"]) == {"++", "+-", "-+", "--"}
    coeffs = qfree.two_point_product(1)
    assert coeffs[0] == "1"
    assert coeffs[1] == qfree.scalar_str("(u^4 + u^16 - u^12 - u^24)/(1 - u^16)")


def test_apply_current():
    assert qfree.apply_current("Yb+@1", 0, "|0,0>") == "|0,1>"


def test_errors():
    with pytest.raises(ValueError):
        qfree.check_drinfeld("R9", "0,0", 1, 1)
    with pytest.raises(ValueError):
        qfree.normalization_check("I", "1->3")


def test_reports_match_schema():
    schema = qfree.report_schema()
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator({**schema, "$ref": "#/$defs/report"})
    validator.validate(qfree.check_drinfeld("R1", "0,0", 0, 1))
