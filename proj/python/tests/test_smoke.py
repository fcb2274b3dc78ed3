import math

import pytest

import schwarziso as si


def test_reference_constants():
    d = si.derive()
    assert d["alpha"] == pytest.approx(5.0)
    assert d["beta"] == pytest.approx(3.4)
    assert d["C0"] == pytest.approx(51 ** 0.25, rel=1e-14)
    assert d["regime_ok"]


def test_params_object_and_dict_agree():
    a = si.derive(si.ModelParams(M=2.0, m=0.02))
    b = si.derive({"M": 2.0, "m": 0.02})
    assert a == b


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        si.ModelParams(m=-1.0)
    with pytest.raises(si.InvalidInput):
        si.derive({"mass": 1.0})
    with pytest.raises(si.RegimeError):
        si.cm_equilibria({"M": 1, "m": 1, "A": 1, "A1": 1, "B": 5, "B1": 0.1})


def test_relative_equilibria_above_c0():
    eqs = si.relative_equilibria(3.0)
    assert [e["kind"] for e in eqs] == ["stable", "unstable"]
    assert eqs[0]["R"] == pytest.approx(2.89545, rel=1e-5)


def test_collision_manifold():
    eqs = si.cm_equilibria()
    assert len(eqs) == 6
    q = eqs[0]
    assert q["name"] == "Q"
    assert q["state"]["v"] == pytest.approx(math.sqrt(2 * si.derive()["W0"]))
    cc = si.connection_condition()
    assert cc["cond_up_holds"] and cc["agree"]
    assert si.trace_manifold("Eminus", "w_pos")["outcome"] == "B_plus_0"


def test_planar_and_sink():
    r, v = si.planar_curve(2.1723, 0.0, 1.0, 2.0, 2)
    assert v[0] == pytest.approx(2.1809, rel=1e-4)
    assert [e["type"] for e in si.planar_equilibria(3.0)] == ["saddle", "center"]
    assert si.sink_predicate(2.1723, 0.5, -0.1)
    assert not si.sink_predicate(2.1723, 0.5, -0.1, bound="sharp")


def test_homothetic_infall():
    W0, V0 = si.derive()["W0"], si.derive()["V0"]
    r = 1.0
    v = -math.sqrt(-2 * r ** 3 + 2 * V0 * r * r + 2 * W0)
    f = si.classify_fate(0.0, -1.0, r, v)
    assert f["fate"] == "triple_collision_Qstar"
    assert f["winding"] == 0.0


def test_integrate_reduced_chart():
    t, ys, status = si.integrate("reduced", [2.6, 0.05, 0.0, 0.02], 10.0, C=3.0)
    assert status == "completed"
    assert t[-1] == pytest.approx(10.0)
    assert len(ys[-1]) == 4


def test_criterion_one():
    r = si.run_criterion(1)
    assert r["passed"], r["details"]
