"""Smoke tests for the python bindings."""

import math

import pytest

import ipsim


def test_registries():
    models = ipsim.list_models()
    for name in [
        "exclusion",
        "lattice_bd",
        "lattice_bd_relaxed",
        "monolayer_bd_rolling_1d",
        "multilayer_bd_stick",
        "rsa",
        "voter_I",
        "voter_II",
        "zero_range",
    ]:
        assert name in models
    assert models == sorted(models)
    functionals = ipsim.list_functionals()
    for name in ["phi1", "phi2", "phi3", "phi4", "phi5", "height_moment", "one"]:
        assert name in functionals


def test_geometry():
    N = ipsim.NeighborhoodTemplate.box(2, 1)
    A = ipsim.Window.box(2, 2)  # 5x5 box
    inner = ipsim.interior(A, N)
    assert len(inner) == 9  # 3x3 box
    ring = ipsim.exterior_boundary(ipsim.Window.box(2, 1), N)
    assert len(ring) == 16
    two = ipsim.two_neighborhood([0, 0], N)
    assert len(two) == 25
    report = ipsim.check_window_sequence([2, 4, 8], N)
    assert report["all_interior_consistent"]
    assert report["ratio_decreasing"]


def test_model_validation():
    with pytest.raises(ipsim.IpsError):
        ipsim.build_model("no_such_model")
    with pytest.raises(ipsim.IpsError):
        ipsim.build_model("lattice_bd", {"lambda": -1.0})
    model = ipsim.build_model("lattice_bd", {"lambda": 2.0})
    assert model.c_max == 2.0
    assert model.dim == 1


def test_lln_counts_are_exact_for_one():
    model = ipsim.build_model("lattice_bd")
    report = ipsim.run_lln(model, "one", radii=[2, 4], tau=1.0, replicates=20, seed=3)
    for row in report["rows"]:
        assert row["mean"] == 1.0
        assert row["std_err"] == 0.0
    assert report["stabilized"]


def test_determinism():
    model = ipsim.build_model("lattice_bd")
    kwargs = dict(
        functional="height_moment",
        functional_params={"k": 1},
        radii=[4],
        tau=1.0,
        replicates=50,
        seed=11,
    )
    a = ipsim.run_lln(model, **kwargs)
    b = ipsim.run_lln(model, **kwargs, workers=4)
    assert a["rows"] == b["rows"]


def test_rsa_points_respect_the_hard_core():
    model = ipsim.build_model("rsa", {"lambda": 3.0})
    points = ipsim.simulate_points(model, radius=20, tau=5.0, seed=9)
    xs = sorted(p["pos"][0] for p in points)
    assert len(xs) > 10
    for a, b in zip(xs, xs[1:]):
        assert b - a >= 1.0


def test_flip_oracle_matches_the_closed_form():
    model = ipsim.build_model("spin_flip", {"rate": 1.0})
    report = ipsim.oracle_compare(
        model, "height_moment", {"k": 1}, radius=0, tau=0.5, cap=1, replicates=20000, seed=5
    )
    assert math.isclose(report["exact"], (1.0 - math.exp(-1.0)) / 2.0, rel_tol=1e-9)
    assert report["pass"]


def test_coupling_has_no_violations():
    model = ipsim.build_model("lattice_bd")
    report = ipsim.coupling_check(model, inner_radius=6, outer_radius=12, tau=1.0,
                                  replicates=60, seed=1)
    assert report["violations"] == 0
    assert report["hypothesis_met"] > 0


def test_config_validation_reports_lines():
    issues = ipsim.validate_config("[model]\nname = lattice_bd\nlambda = oops\n")
    assert any("lambda" in issue["message"] for issue in issues)
