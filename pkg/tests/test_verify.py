import pytest

from quadgroup.groups import Subgroup, center, cyclic, dihedral, elementary, symmetric
from quadgroup.verify import DEFAULT_ZOO, ZOO, battery_json, prop29_check, run_battery, thm210_check


def test_zoo_order():
    assert list(DEFAULT_ZOO) == ["C2", "C4", "C2xC2", "C6", "Q8", "D4", "S3", "D8", "Heis3"]
    assert [len(ZOO[n]()) if callable(ZOO[n]) else len(ZOO[n]) for n in DEFAULT_ZOO] == [2, 4, 4, 6, 8, 8, 6, 16, 27]


@pytest.mark.parametrize("G", [cyclic(2), elementary(2, 2), dihedral(4), symmetric(3)], ids=lambda G: G.name)
def test_passi_comparison_and_exact_sequences(G):
    for B in (Subgroup.trivial(G), center(G)):
        assert prop29_check(G, B).ok
        assert thm210_check(G, B).ok


def test_sequence_bookkeeping_c2xc2():
    G = elementary(2, 2)
    rep = thm210_check(G, Subgroup.trivial(G))
    assert rep["Ker c_2 sequence: order bookkeeping"].status == "PASS"


def test_battery_counts_and_determinism():
    a = run_battery(("C2", "C4"), 10**7)
    b = run_battery(("C2", "C4"), 10**7)
    assert battery_json(a, ("C2", "C4")) == battery_json(b, ("C2", "C4"))
    p, f, sk = a.counts()
    assert f == 0 and p > 0
    assert a.instances == 7   # (2 + 1) for C2, (3 + 1) for C4


def test_battery_skips_over_budget():
    res = run_battery(("Heis3",), 10**7, nilpotency_degree=3)
    doc = battery_json(res, ("Heis3",))
    assert doc["summary"]["skipped"] >= 1
    assert doc["summary"]["fail"] == 0


def test_battery_records_literal_inverse_identity_failure():
    res = run_battery(("S3",), 10**7)
    fails = [(tag, c.name) for tag, r in res.reports for c in r.checks if c.status == "FAIL"]
    assert fails and all(name.startswith("inverse map d_-f") for _, name in fails)
