"""Rate-region evaluation: schemes, bound formulas, containers, searches.

Core claims:
    - AuxScheme validates its factor labels; scheme JSON round-trips and
      malformed documents raise SchemeFormatError naming the problem
    - mbc_joint / ln_joint compose the factored law in declared label order
    - eq5_bounds matches hand-derived values on the flip channel and accepts
      overlapping substitution groups
    - RateRegion2 / RateRegion3 clamp, enumerate vertices, and answer
      containment queries
    - the union searches are deterministic and their hulls contain every
      generator's fixed-scheme region
    - capacity entry points enforce receiver determinism and honor
      extra_starts; the two full-det three-receiver variants share one path
"""

import json
import math

import numpy as np
import pytest
from pytest import approx

from bcsi.prob import Alphabet, CondKernel, LabelError, entropy, random_kernel
from bcsi.regions import (
    AuxScheme,
    DeterminismError,
    RateRegion2,
    RateRegion3,
    SchemeFormatError,
    SearchConfig,
    eq22_bounds,
    eq5_bounds,
    ln_capacity,
    ln_inner_fixed,
    ln_inner_region,
    ln_joint,
    load_scheme,
    mbc_capacity,
    mbc_inner_fixed,
    mbc_inner_region,
    mbc_joint,
    random_scheme,
    scheme_to_dict,
)

from helpers import det_ln, flip_channel, flip_scheme, rand_ln, rand_mbc


def _hb(p: float) -> float:
    return -(p * math.log(p) + (1 - p) * math.log(1 - p))


def test_scheme_label_validation():
    ch = rand_mbc(0)
    sch = random_scheme(np.random.default_rng(0), ch, (2, 2))
    with pytest.raises(LabelError, match="pV_given_US"):
        AuxScheme(sch.pU_given_S, sch.pU_given_S, sch.pX_given_VS)


def test_scheme_json_round_trip():
    ch = rand_mbc(1)
    sch = random_scheme(np.random.default_rng(1), ch, (3, 2))
    doc = scheme_to_dict(sch)
    back = load_scheme(json.dumps(doc), ch)
    assert back.pU_given_S.probs == approx(sch.pU_given_S.probs, abs=1e-15)
    assert back.pV_given_US.probs == approx(sch.pV_given_US.probs, abs=1e-15)
    assert back.pX_given_VS.probs == approx(sch.pX_given_VS.probs, abs=1e-15)


def test_scheme_json_errors():
    ch = rand_mbc(1)
    doc = scheme_to_dict(random_scheme(np.random.default_rng(1), ch, (2, 2)))
    short = dict(doc)
    del short["pV_given_US"]
    with pytest.raises(SchemeFormatError, match="pV_given_US"):
        load_scheme(short, ch)
    bad = dict(doc)
    bad["pU_given_S"] = [[0.5, 0.5]]  # one state row missing
    with pytest.raises(SchemeFormatError, match="pU_given_S"):
        load_scheme(bad, ch)
    rows = np.asarray(doc["pX_given_VS"], dtype=float)
    rows[0, 0, :] = [0.9, 0.6]
    bad = dict(doc)
    bad["pX_given_VS"] = rows.tolist()
    with pytest.raises(SchemeFormatError):
        load_scheme(bad, ch)


def test_joint_label_order():
    ch = rand_mbc(2)
    sch = random_scheme(np.random.default_rng(2), ch, (2, 2))
    assert mbc_joint(ch, sch).labels == ("S", "U", "V", "X", "Y1", "Y3", "Y2")
    ln = rand_ln(2)
    schl = random_scheme(np.random.default_rng(2), ln, (2, 2))
    assert ln_joint(ln, schl).labels == ("S", "U", "V", "X", "Y1", "Y2", "Y3")


def test_eq5_flip_channel_hand_values():
    lam, rho = 0.64, 0.002
    j = mbc_joint(flip_channel(rho), flip_scheme(lam))
    common, private, total = eq5_bounds(j)
    assert common == approx(lam * math.log(2), abs=1e-12)
    assert private == approx((1 - lam) * (math.log(2) - _hb(rho)) - lam * _hb(rho), abs=1e-12)
    # identity degrading leaves no cloud advantage at receiver 1
    assert total == approx(common + private, abs=1e-12)


def test_eq5_substitution_groups():
    # pinning U := (Y2,S) and V := (Y3,S) with state-augmented receivers
    # turns the bounds into conditional output entropies
    ch = rand_mbc(3)
    sch = random_scheme(np.random.default_rng(3), ch, (2, 2))
    j = mbc_joint(ch, sch)
    common, private, total = eq5_bounds(
        j,
        u=("Y2", "S"),
        v=("Y3", "S"),
        y1=("Y1", "S"),
        y2=("Y2", "S"),
        y3=("Y3", "S"),
    )
    h = lambda g: entropy(j, g)
    assert common == approx(
        min(h(("Y2", "S")) - h(("S",)), h(("Y3", "S")) - h(("S",))), abs=1e-12
    )
    want_total = (
        h(("Y3", "S")) - h(("S",))
        + h(("X", "Y3", "S")) + h(("Y1", "Y3", "S"))
        - h(("X", "Y1", "Y3", "S")) - h(("Y3", "S"))
    )
    assert total == approx(want_total, abs=1e-12)
    want_private = (
        h(("X", "Y2", "S")) + h(("Y1", "Y2", "S")) - h(("X", "Y1", "Y2", "S")) - h(("Y2", "S"))
    )
    assert private == approx(want_private, abs=1e-12)


def test_eq22_matches_directly_computed_terms():
    ln = rand_ln(4)
    sch = random_scheme(np.random.default_rng(4), ln, (2, 2))
    j = ln_joint(ln, sch)
    c1, c2, c3 = eq22_bounds(j)
    h = lambda g: entropy(j, g)
    assert c3 == approx(
        (h(("U",)) + h(("Y3",)) - h(("U", "Y3"))) - (h(("U",)) + h(("S",)) - h(("U", "S"))),
        abs=1e-12,
    )
    assert c1 == approx(
        h(("X", "V")) + h(("Y1", "V")) - h(("X", "Y1", "V")) - h(("V",))
        - (h(("X", "V")) + h(("S", "V")) - h(("X", "S", "V")) - h(("V",))),
        abs=1e-12,
    )
    assert c2 <= math.log(2) + 1e-12


def test_rate_region_2():
    r = RateRegion2.from_caps(1.0, 0.5, 1.2)
    assert r.contains((0.9, 0.29))
    assert not r.contains((0.9, 0.4))  # violates the sum row
    assert not r.contains((-0.1, 0.1))
    assert r.area == approx(1.0 * 0.5 - 0.3 * 0.3 / 2)
    collapsed = RateRegion2.from_caps(-0.2, 0.4, 0.3)
    assert collapsed.halfspaces[0] == (1, 0, 0.0)
    assert (0.0, 0.0) in collapsed.vertices


def test_rate_region_3():
    r = RateRegion3.from_caps(1.0, -0.5, 2.0)
    assert r.bounds == (1.0, 0.0, 2.0)
    assert len(r.vertices) == 4  # collapsed axis drops half the corners
    assert r.volume == 0.0
    assert r.contains((0.5, 0.0, 1.9))
    assert not r.contains((0.5, 0.1, 1.9))


def test_search_config_validation():
    with pytest.raises(ValueError, match="restarts"):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError, match="cardinalities"):
        SearchConfig(aux_cards=(0, 2))
    with pytest.raises(ValueError, match="hill-climb"):
        SearchConfig(step_size=0.0)


def test_inner_region_deterministic_and_covers_generators():
    ch = rand_mbc(5)
    cfg = SearchConfig(aux_cards=(2, 2), restarts=4, hillclimb_steps=12, seed=7)
    hull = mbc_inner_region(ch, cfg)
    again = mbc_inner_region(ch, cfg)
    assert hull.vertices == again.vertices
    for sch in hull.schemes:
        if sch is None:
            continue
        for v in mbc_inner_fixed(ch, sch).vertices:
            assert hull.contains(v, tol=1e-9)


def test_ln_inner_region_boxes():
    ln = rand_ln(6)
    cfg = SearchConfig(aux_cards=(2, 2), restarts=3, hillclimb_steps=8, seed=1)
    hull = ln_inner_region(ln, cfg)
    assert hull.boxes
    for box in hull.boxes:
        for v in box.vertices:
            assert hull.contains(v, tol=1e-9)
    sch = random_scheme(np.random.default_rng(3), ln, (2, 2))
    fixed = ln_inner_fixed(ln, sch)
    assert fixed.bounds == tuple(max(0.0, b) for b in eq22_bounds(ln_joint(ln, sch)))


def test_capacity_requires_determinism():
    with pytest.raises(DeterminismError):
        mbc_capacity(rand_mbc(7), "full-det", SearchConfig(restarts=1))
    with pytest.raises(ValueError, match="unknown variant"):
        mbc_capacity(flip_channel(), "three-det", SearchConfig(restarts=1))


def test_mbc_capacity_full_det_honors_extra_starts():
    ch = flip_channel(rho=0.3)  # all receivers deterministic by construction
    x, s = ch.main.given
    start = random_kernel(np.random.default_rng(8), (s,), (x,))
    cfg = SearchConfig(restarts=2, hillclimb_steps=0)
    hull = mbc_capacity(ch, "full-det", cfg, extra_starts=[(start,)])
    bare = mbc_capacity(ch, "full-det", cfg)
    assert hull.area >= bare.area - 1e-12
    # the seeded point's own region must be inside the reported hull
    from bcsi.prob import compose_joint

    j = compose_joint([start, ch.main, ch.degrading], ch.state)
    h = lambda g: entropy(j, g)
    common = min(h(("Y2", "S")), h(("Y3", "S"))) - h(("S",))
    assert hull.contains((max(common, 0.0), 0.0), tol=1e-9)


def test_ln_capacity_full_det_variants_coincide():
    ch = det_ln()
    cfg = SearchConfig(restarts=3, hillclimb_steps=5, seed=2)
    a = ln_capacity(ch, "full-det", cfg)
    b = ln_capacity(ch, "full-det-partial", cfg)
    assert a.vertices == b.vertices
    assert ln_capacity(ch, "FULL_DET", cfg).vertices == a.vertices  # name canon
