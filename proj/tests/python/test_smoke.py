import math

import pytest

import capflow


def test_cap_quantities_match_frozen_values():
    q = capflow.cap_quantities(1, math.pi / 3, 1.0)
    assert q.volume == pytest.approx(0.61418484930, rel=1e-10)
    assert q.I_theta == pytest.approx(2.45673939721, rel=1e-10)
    assert capflow.radius_from_constraint(1, math.pi / 3, q.volume) == pytest.approx(1.0)


def test_discrete_cap_is_stationary():
    g = capflow.discrete_cap(capflow.SphericalCap(r=1.0, theta=math.pi / 3), capflow.DimensionMode.Planar, 101)
    assert len(g) == 101
    H = capflow.evaluate_fields(g).H
    assert max(H) - min(H) < 1e-10


def test_short_run_and_suite():
    cfg = capflow.FlowConfig()
    cfg.N = 81
    cfg.perturbations = [capflow.PerturbationMode(2, 0.05)]
    cfg.t_max = 0.02
    r = capflow.run(cfg)
    assert r.verdict == capflow.Verdict.TimedOut
    cols = r.series
    assert len(cols["t"]) == len(r.snapshots) >= 2
    assert all(b > a for a, b in zip(cols["t"], cols["t"][1:]))
    assert abs(cols["volume"][-1] / cols["volume"][0] - 1) < 1e-10
    checks = capflow.assert_suite(r, cfg)
    assert checks["run_converged"][0] is False
    assert checks["conservation"][0] is True


def test_errors_surface_as_python_exceptions():
    with pytest.raises(capflow.Error, match="ValidationError"):
        capflow.parse_config("theta=2.0")
    with pytest.raises(capflow.Error):
        capflow.cap_quantities(1, 1.0, 0.0)
