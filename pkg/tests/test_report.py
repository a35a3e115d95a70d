import json

from qe2.report import DISCREPANCY, FAIL, PASS, CheckReport


def test_exit_codes():
    rep = CheckReport("s")
    rep.add("a")
    assert rep.exit_code() == 0 and rep.clean and rep.passed
    rep.add("b", status=DISCREPANCY)
    assert rep.exit_code() == 2 and not rep.clean and rep.passed
    rep.add("c", status=FAIL)
    assert rep.exit_code() == 1 and not rep.passed
    assert rep.worst == FAIL
    assert rep.counts == {PASS: 1, FAIL: 1, DISCREPANCY: 1}


def test_json_body_sorted_and_stable():
    rep = CheckReport("s")
    rep.add("zeta", anchor="X")
    rep.add("alpha", anchor="Y", status=DISCREPANCY, lhs="l", rhs="r", witness="w")
    j1 = rep.to_json("0.1.0", {"p": "digest"})
    j2 = rep.to_json("0.1.0", {"p": "digest"})
    assert j1 == j2
    body = json.loads(j1)
    ids = [r["id"] for r in body["records"]]
    assert ids == sorted(ids)
    assert body["records"][0]["paper_anchor"] == "Y"
    assert "timestamp" not in j1


def test_text_table():
    rep = CheckReport("s")
    rep.add("ok-check")
    rep.add("bad-check", status=FAIL, lhs="1", rhs="0", witness="boom")
    txt = rep.to_text()
    assert "ok-check" in txt and "bad-check" in txt
    assert "boom" in txt
    assert "totals: 1 pass, 0 discrepancy, 1 fail" in txt
