import json
from pathlib import Path

import pytest

import iwtower

CORPUS = Path(__file__).resolve().parents[2] / "data" / "corpus"


def test_trefoil_inspect():
    r = iwtower.inspect(CORPUS / "trefoil.json")
    assert r["alexander"] == "t^2 - t + 1"
    assert r["schema"] == iwtower.schema_version


def test_inline_link():
    r = iwtower.link_report({"pd_code": [[4, 1, 3, 2], [2, 3, 1, 4]]}, p=3)
    assert r["components"] == 2
    assert r["tln_lambda"]["lambda"] == 1


def test_tower_matches_oracle():
    r = iwtower.tower(CORPUS / "whitehead_p2.json")
    assert r["invariants"]["lambda"] == 3
    assert r["paths_agree"]


def test_tower_overrides():
    r = iwtower.tower(CORPUS / "hopf_p3.json", oracle=False, p=5, levels=2)
    assert r["p"] == 5
    assert len(r["ladder"]) == 3


def test_kida_example():
    r = iwtower.kida(CORPUS / "example74.json")
    assert r["passed"]
    assert r["identity"] == "2 = 0 + 2"
    assert r["hbar_defect"]["solved"] == "-1"


def test_kida_inert_step():
    with pytest.raises(iwtower.DomainError, match="non-inert"):
        iwtower.kida(CORPUS / "inert_chain.json")


def test_tate():
    assert iwtower.tate(CORPUS / "augmentation_z3.json", 1)["group"]["text"] == "Z/3"
    r = iwtower.tate_report({"m": 2, "ambient_rank": 1, "sigma": [[1]]}, 0)
    assert r["group"]["text"] == "Z/2"


def test_hensel():
    residue, digits = iwtower.hensel_root([1, 0, 1], 2, 5, 4)
    assert residue == 182
    assert digits == [2, 1, 2, 1]


def test_weierstrass_big_coefficients():
    w = iwtower.weierstrass([3**40, 3, 1], 3, 60, 4)
    assert (w["mu"], w["lambda"]) == (0, 2)
    assert w["distinguished"][2] == 1


def test_errors():
    with pytest.raises(iwtower.InputError, match="cannot open"):
        iwtower.inspect(CORPUS / "missing.json")
    with pytest.raises(iwtower.InputError):
        iwtower.tate(CORPUS / "bad_action.json")
    assert issubclass(iwtower.InputError, iwtower.Error)


def test_reports_are_stable():
    a = iwtower.tower(CORPUS / "borromean_p3.json")
    b = iwtower.tower(CORPUS / "borromean_p3.json")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
