"""Smoke test for the conwon_py extension module.

Run after `pip install -e crates/py --no-build-isolation`:

    python3 crates/py/python/smoke_test.py
"""

import json
from pathlib import Path

import conwon_py as cw

DATA = Path(__file__).resolve().parents[2] / "cli" / "tests" / "data" / "proofs"


def check_formulas():
    f = cw.Formula("[p] [q] r")
    assert f.modal_depth == 2 and not f.is_flat and f.is_closed
    assert f.dialect == "conwon" and f.atoms == ["p", "q", "r"]
    g = f.sigma()
    assert g.is_flat
    assert cw.Formula(str(g)) == g
    assert cw.falsify(cw.Formula(f"({f}) <-> ({g})"), 2, 3) is None

    v = cw.Formula("p |> q")
    assert v.dialect == "v"
    assert v.translate("conwon") == cw.Formula("[p] q")

    try:
        cw.Formula("p & & q")
    except ValueError as e:
        assert "column" in str(e), e
    else:
        raise AssertionError("parse error expected")


def check_models():
    model = cw.Model.from_json(json.dumps({"worlds": ["a", "b"], "valuation": {"p": ["a"], "q": ["a", "b"]}}))
    ctx = cw.Context.from_json(json.dumps({"kind": "sequence", "sequence": [["b"]]}), model)
    assert model.extension(cw.Formula("p")) == ["a"]
    assert cw.eval(model, ctx, "a", cw.Formula("[~p] q"))
    assert cw.truth_set(model, ctx, cw.Formula("p")) == ["a"]
    assert "expected {b}" in cw.trace(model, ctx, "a", cw.Formula("[true] ~p"))
    assert cw.Model.from_json(model.to_json()).worlds == ["a", "b"]

    model, ctx, world, formulas = cw.example("tiger")
    assert cw.eval(model, ctx, world, formulas[0])


def check_search():
    cm = cw.falsify(cw.Formula("[p] q -> [p & ~q] q"))
    assert cm is not None
    model = cw.Model.from_json(json.dumps(cm["model"]))
    ctx = cw.Context.from_json(json.dumps(cm["context"]), model)
    assert not cw.eval(model, ctx, cm["world"], cw.Formula("[p] q -> [p & ~q] q"))

    report = cw.compare_v(cw.Formula("[p] q & ~[p] ~q"), 2, 3)
    assert report["agree"] and report["transports_ok"]


def check_proofs():
    good = cw.check_proof((DATA / "valid" / "p_or_q.json").read_text())
    assert good["accepted"] and good["conclusion"] == "[p] (p | q)", good
    bad = cw.check_proof((DATA / "invalid" / "not_tautology.json").read_text())
    assert not bad["accepted"]
    assert bad["diagnostics"][0]["problem"]["kind"] == "not_tautology"


if __name__ == "__main__":
    check_formulas()
    check_models()
    check_search()
    check_proofs()
    print("smoke test ok:", ", ".join(cw.examples()))
