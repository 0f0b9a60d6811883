import json
import math

import numpy as np
import pytest

import qcrb

GOLDEN = [math.pi / 2, 0.0]


def test_bounds_at_golden_point():
    b = qcrb.bounds("r-fixed:0.5", GOLDEN, np.eye(2))
    assert b["C"] == pytest.approx(16, abs=1e-9)
    assert b["C_A"] == pytest.approx(12, abs=1e-9)
    assert b["C_R"] == pytest.approx(12, abs=1e-9)
    assert b["ordering_ok"]
    assert np.allclose(b["J"], 0.25 * np.eye(2))


def test_sld_and_fisher():
    rho, derivs = qcrb.family_at("r-fixed:0.5", GOLDEN)
    lt = qcrb.solve_sld(rho, derivs[0])
    assert np.allclose(lt, 0.5 * np.diag([-1, 1]), atol=1e-12)
    assert np.allclose(qcrb.sld_fisher("full", [0.5, 1.0, 0.3]), qcrb.sld_fisher("full", [0.5, 1.0, 0.3]).T)
    rho2, _ = qcrb.family_at("full", [0.5, 1.0, 0.3], copies=2)
    assert rho2.shape == (4, 4)


def test_rld_bounds():
    j = qcrb.rld_fisher("r-fixed:0.5", GOLDEN)
    assert qcrb.rld_bound_closed(j, np.eye(2)) == pytest.approx(12)
    assert qcrb.rld_bound_oracle(j, np.eye(2)) == pytest.approx(12, abs=1e-6)
    assert qcrb.rld_fisher("r-fixed:1", GOLDEN) is None
    assert qcrb.qubit_attainable_C(np.eye(2), np.diag([4.0, 1.0])) == pytest.approx(9)


def test_frontier_and_search():
    value, y, z, v = qcrb.frontier_min("asymptotic", 0.5, np.eye(2))
    assert value == pytest.approx(12)
    r = qcrb.optimize("r-fixed:0.5", GOLDEN, np.eye(2), restarts=4, iters=50, seed=3)
    assert r["best_value"] >= 16 - 1e-6
    assert sum(np.asarray(m) for m in r["povm"]) == pytest.approx(np.eye(2), abs=1e-9)


def test_errors_and_cli():
    with pytest.raises(qcrb.QcrbError):
        qcrb.bounds("r-fixed:0.5", [9.0, 0.0], np.eye(2))
    code, out, _ = qcrb.run_cli(["bounds", "--family", "r-fixed:0.5", "--theta", "1.5707963,0"])
    assert code == 0
    assert json.loads(out)["result"]["C"]["value"] == pytest.approx(16, rel=1e-6)
    code, _, err = qcrb.run_cli(["sweep", "--family", "r-fixed:0.5", "--param", "r0", "--range", "0:1:0"])
    assert code == 1
