"""Potential catalog: construction, the log-side profile, and the two
weighted integrals every bound is made of.

Frozen values marked as oracle regressions were computed from closed forms
where one exists (wells, gaussian, annulus) and from independent
high-precision quadrature runs otherwise.
"""
import json
import math

import numpy as np
import pytest

from radcount import (
    NonIntegrableError,
    PotentialSpecError,
    bundled_spec_names,
    catalog_kinds,
    integral_J,
    integral_logweight,
    load_bundled,
    load_spec,
    make_catalog_potential,
    save_spec,
    to_log,
)
from radcount.potentials import T_CAP, TRIPLE_EXP

# oracle regressions for the two instances without elementary closed forms
J_COUNTEREXAMPLE = 0.04890051066524585
J_BUMP = 2.4138006448758698
W1_DAMPED_STRONG = 0.805956877991289


def test_kind_list_stable():
    assert set(catalog_kinds()) == {
        "square-well", "annulus-well", "gaussian", "power-log-tail",
        "bump", "tabulated", "scaled-product"}


def test_square_well_profile_and_support():
    P = make_catalog_potential("square-well", {"height": 2.0, "radius": 3.0})
    assert P.profile(1.0) == 2.0
    assert P.profile(3.5) == 0.0
    assert P.support == (0.0, 3.0)
    assert not P.singular_at_zero


def test_param_validation():
    with pytest.raises(PotentialSpecError):
        make_catalog_potential("square-well", {"height": -1.0})
    with pytest.raises(PotentialSpecError):
        make_catalog_potential("annulus-well",
                               {"r_inner": 2.0, "r_outer": 1.0})
    with pytest.raises(PotentialSpecError):
        make_catalog_potential("no-such-kind")
    with pytest.raises(PotentialSpecError):
        make_catalog_potential("gaussian", {"width": 0.0})


def test_log_substitution_identity(catalog):
    """G(t) = e^{2t} F(e^t) pointwise, on every kind, at random points."""
    rng = np.random.default_rng(7)
    for name, P in catalog.items():
        G = to_log(P, strict=False)
        lo, hi = G.domain_hint
        t = rng.uniform(max(lo, -30.0), min(hi, 60.0), size=64)
        f_side = np.exp(2.0 * t) * P.profile(np.exp(t))
        g_side = G.eval(t)
        assert np.allclose(f_side, g_side, rtol=1e-12, atol=1e-300), name


def test_integral_J_closed_forms():
    sq = make_catalog_potential("square-well", {"height": 2.0, "radius": 3.0})
    assert abs(integral_J(sq)[0] - 9.0) < 1e-10
    an = make_catalog_potential(
        "annulus-well", {"height": 1.0, "r_inner": 1.0, "r_outer": 2.0})
    assert abs(integral_J(an)[0] - 1.5) < 1e-10
    ga = make_catalog_potential("gaussian", {"height": 3.0, "width": 2.0})
    assert abs(integral_J(ga)[0] - 6.0) < 1e-8   # h w^2 / 2


def test_integral_J_oracle_regressions(catalog):
    assert abs(integral_J(catalog["counterexample"])[0]
               - J_COUNTEREXAMPLE) < 1e-9
    assert abs(integral_J(catalog["bump"])[0] - J_BUMP) < 1e-6


def test_logweight_square_well():
    # int_0^1 r |ln r| dr = 1/4
    P = make_catalog_potential("square-well")
    val, _ = integral_logweight(P, 1.0)
    assert abs(val - 0.25) < 1e-10
    # shifting R moves the weight: at R = e the weight is |ln r - 1|
    val_e, _ = integral_logweight(P, math.e)
    exact = 0.75   # int_0^1 r (1 - ln r) dr
    assert abs(val_e - exact) < 1e-10


def test_logweight_divergences(catalog):
    assert math.isinf(integral_logweight(catalog["counterexample"])[0])
    assert math.isinf(integral_logweight(catalog["counterexample-damped"])[0])
    w, err = integral_logweight(catalog["counterexample-damped-strong"])
    assert math.isfinite(w)
    assert abs(w - W1_DAMPED_STRONG) <= max(err, 1e-2)


def test_to_log_strict_raises_on_divergent_J():
    P = make_catalog_potential("power-log-tail",
                               {"sigma": 1.0, "tau": 0.0})
    with pytest.raises(NonIntegrableError):
        to_log(P)
    G = to_log(P, strict=False)
    assert math.isinf(G.j_value)


def test_to_log_window_covers_mass(catalog):
    for name, P in catalog.items():
        G = to_log(P, strict=False)
        lo, hi = G.domain_hint
        assert lo <= hi
        if not P.is_zero:
            assert G.g_max > 0.0
            assert lo <= G.g_argmax <= hi


def test_counterexample_truncation_flag(catalog):
    G = to_log(catalog["counterexample"], strict=False)
    assert G.truncated
    assert G.domain_hint[1] <= T_CAP + 50.0
    # the tail is genuinely cut: J restricted to the window is short
    assert G.j_value == pytest.approx(J_COUNTEREXAMPLE, abs=1e-9)


def test_tabulated_interpolation():
    P = make_catalog_potential("tabulated", {
        "n": 3, "r0": 0.0, "f0": 1.0, "r1": 1.0, "f1": 1.0,
        "r2": 2.0, "f2": 0.0})
    assert P.profile(0.5) == 1.0
    assert abs(P.profile(1.5) - 0.5) < 1e-12
    assert P.profile(2.5) == 0.0
    # J = int r F dr = int_0^1 r + int_1^2 r(2 - r) = 1/2 + 2/3
    assert abs(integral_J(P)[0] - (0.5 + 2.0 / 3.0)) < 1e-9


def test_scaled_product_matches_base_below_onset(catalog):
    damped = catalog["counterexample-damped"]
    base = catalog["counterexample"]
    r = np.array([2000.0, 1e4, 1e5])
    assert np.all(r < TRIPLE_EXP)
    assert np.allclose(damped.profile(r), base.profile(r), rtol=1e-12)
    # beyond the onset the damping factor is (ln ln ln r)^(-theta) < 1
    r_far = TRIPLE_EXP * 50.0
    assert damped.profile(r_far) < base.profile(r_far)


def test_spec_round_trip(tmp_path):
    P = make_catalog_potential("gaussian", {"height": 2.5, "width": 0.7},
                               description="round trip")
    path = tmp_path / "g.json"
    save_spec(P, str(path))
    Q = load_spec(str(path))
    assert Q.kind == P.kind and Q.params == P.params
    assert Q.description == "round trip"
    # the file is plain JSON with the three documented keys
    doc = json.loads(path.read_text())
    assert set(doc) == {"kind", "params", "description"}


def test_spec_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "square-well", "params": {"height": "x"}}')
    with pytest.raises(PotentialSpecError):
        load_spec(str(path))


def test_bundled_specs_all_load():
    names = bundled_spec_names()
    assert "square-well" in names and "counterexample" in names
    for n in names:
        P = load_bundled(n)
        assert P.kind in catalog_kinds()
    assert load_bundled("zero").is_zero


def test_zero_potential_trivials(catalog):
    P = catalog["zero"]
    assert integral_J(P) == (0.0, 0.0)
    assert integral_logweight(P, 2.0) == (0.0, 0.0)
    G = to_log(P, strict=False)
    assert G.g_max == 0.0 and G.j_value == 0.0
