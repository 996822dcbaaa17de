import json
import os
from fractions import Fraction

import pytest

import hbsg


def test_sumsets_and_energy():
    assert hbsg.sumset([0, 1, 3], [0, 1, 3]) == [0, 1, 2, 3, 4, 6]
    assert hbsg.difference_set([0, 2, 5], [1, 2]) == [-2, -1, 0, 1, 3, 4]
    assert len(hbsg.iterated_sumset([0, 1, 3], 3)) == 9
    assert hbsg.additive_energy([0, 1, 2], [0, 1, 2]) == 19
    assert hbsg.doubling_constant(list(range(10))) == Fraction(19, 10)


def test_groups():
    z5 = {"kind": "cyclic", "modulus": 5}
    assert hbsg.sumset([1, 2], [3, 4], group=z5) == [0, 1, 4]
    f22 = {"kind": "vector", "p": 2, "d": 2}
    assert hbsg.sumset([[0, 1], [1, 0]], [[0, 1], [1, 0]], group=f22) == [[0, 0], [1, 1]]
    with pytest.raises(OverflowError):
        hbsg.sumset([5, 6], [5], group={"kind": "integer", "lo": 0, "hi": 10})


def test_verifiers():
    report = hbsg.plunnecke_check([0, 1, 3], 3)
    assert report["rows"][2]["size"] == 9
    assert hbsg.ruzsa_triangle_check([0, 1], [0, 1], [0, 1])["pass"]


def test_sigma_and_selection():
    assert hbsg.sigma([0, 1], 3, deleted=[[1, 1, 1]]) == [0, 1, 2]
    assert hbsg.sigma([0, 1, 2, 3], 2, strings=[[0, 1], [2, 3]]) == [1, 5]
    cert = hbsg.select_popular_intersector(4, [[0, 1], [0, 1, 2], [0, 1, 2, 3]], Fraction(1, 2))
    assert cert["chosen"] == 2 and cert["measured"] == 9 and cert["pass"]


def test_bsg_and_best_subset():
    r = hbsg.bsg_extract(list(range(8)))
    assert r["source"] == "full-set" and r["energy"] == 344
    best, size = hbsg.best_subset_growth(list(range(8)), 2, 4)
    assert size == 7 and best == [0, 1, 2, 3]


def test_demo_instance_runs_and_audits():
    root = os.environ.get("HBSG_SOURCE_DIR", os.path.join(os.path.dirname(__file__), "..", ".."))
    with open(os.path.join(root, "configs", "demo.json")) as f:
        spec = json.load(f)["instances"][0]
    report = hbsg.run_instance(spec, oracle=True)
    assert report["summary"]["status"] != "diagnostic-halt"
    assert report["oracle"]["audit"]["ok"]
    again = hbsg.run_instance(spec)
    assert again["result"]["ledger"] == report["result"]["ledger"]
    explicit = hbsg.generate_instance(spec)
    assert explicit["ambient"]["elements"] == list(range(16))


def test_infeasible_instance_rejected():
    spec = {"ambient": {"kind": "ap", "n": 16}, "k": 4,
            "strings": {"kind": "random-deletion", "fraction": "1/2"}}
    with pytest.raises(ValueError):
        hbsg.generate_instance(spec)
