import math

import pytest

import heatlab

POWER3 = {"kind": "Power", "params": {"p": 3}}
SMALL_GRID = {"R": 1, "h": 0.25, "r_min": 1e-3, "grading": 2}


def test_kappa():
    k = heatlab.kappa()
    assert abs(math.log(k) + 2 - k) < 1e-12
    assert k == pytest.approx(3.14619322062058, abs=1e-12)


def test_tail_and_inverse():
    assert heatlab.eval_F(POWER3, 2.0) == pytest.approx(0.125, rel=1e-10)
    assert heatlab.F_inverse(POWER3, 0.125) == pytest.approx(2.0, rel=1e-10)


def test_exponent_profile():
    prof = heatlab.exponent_profile(POWER3)
    assert prof["q"] == pytest.approx(1.5, abs=1e-8)
    assert prof["converged"]


def test_classification():
    assert heatlab.classify_qr(1, 1.5, 2.0)["verdict"] == "ExistenceSubcritical1"
    assert heatlab.classify_qr(2, 1.05, 0.1)["verdict"] == "Nonexistence"
    out = heatlab.classify_f_beta(2, 1.5, 0.0)
    assert out["verdict"] == "DoublyCritical"
    assert out["sub_verdict"] == "Existence"


def test_ul_norm_of_power_singularity():
    datum = {"kind": "PowerSingularity", "params": {"c": 1, "a": 0.2, "cutoff": 1}}
    assert heatlab.ul_norm(datum, 1)["value"] == pytest.approx(2.5, rel=1e-8)


def test_heat_flow_preserves_constants():
    out = heatlab.heat_flow({"kind": "Constant", "params": {"c": 2}}, 2, 0.1, grid={"R": 2, "h": 0.1})
    assert len(out["r"]) == len(out["u"])
    assert max(abs(v - 2.0) for v in out["u"]) < 1e-12


def test_simulate_ode():
    out = heatlab.simulate({"kind": "Power", "params": {"p": 2}}, {"kind": "Constant", "params": {"c": 1}}, N=1,
                           T=0.5, steps=200, grading=6, tol=1e-12, grid=SMALL_GRID)
    assert out["verdict"] == "Converged"
    assert out["monotone"]
    assert out["u_final"][0] == pytest.approx(2.0, rel=1e-4)


def test_blowup_functional():
    out = heatlab.blowup_functional(beta=1.0, N=1, rho=0.1, H0=0.5)
    assert out["blew_up"]
    assert out["blowup_time"] == pytest.approx(out["blowup_time_exact"], rel=1e-6)
    sides = heatlab.contradiction_sides(1.0, 0.1, 1, 1e-4)
    assert sides["ratio"] == pytest.approx(3 ** -0.5, rel=1e-12)


def test_errors():
    with pytest.raises(heatlab.SpecError, match="nonlinearity.params.p"):
        heatlab.eval_F({"kind": "Power", "params": {}}, 1.0)
    with pytest.raises(ValueError):
        heatlab.classify_f_beta(1, 1.0, -20.0)
    with pytest.raises(heatlab.NumericalError):
        heatlab.eval_F({"kind": "Power", "params": {"p": 1}}, 2.0)
