import csv
import random
from fractions import Fraction as F

import pytest

from diogap.diocore import DiophParams, brute_force_member
from diogap.exactnum import Exponent, QuadIrr, compare, make_quad
from diogap.gapscan import (
    build_cover,
    certify_isolated,
    find_touching_points,
    measure_bounds,
    tail_series_bound,
    touching_survey,
)

PHI = make_quad(1, 1, 2, 5)
SILVER = make_quad(1, 1, 1, 2)


def silver_params():
    return DiophParams(SILVER.inverse(), Exponent.log_ratio(SILVER, 2))


# ---------------------------------------------------------------------------
# cover construction

def test_cover_single_q():
    p = DiophParams(F(1, 10), Exponent.rational(2))
    cov = build_cover(p, 1)
    comps = list(cov.intervals)
    assert [(c.left, c.right) for c in comps] == \
        [(F(-1, 10), F(1, 10)), (F(9, 10), F(11, 10))]
    assert comps[0].sources == ((0, 1),)
    assert find_touching_points(cov) == []


def test_cover_q1_interval_length():
    # q = 1 intervals alone cover length 2*gamma of [0, 1] (up to grid dust)
    p = DiophParams(F(2, 5), Exponent.rational(3))
    cov = build_cover(p, 1)
    lo, hi = cov.covered_length_bounds()
    assert hi >= 2 * F(2, 5) >= lo
    assert 2 * F(2, 5) - lo <= F(1, 2**100)


def test_cover_overfull_gamma():
    p = DiophParams(F(3, 5), Exponent.rational(2))
    cov = build_cover(p, 1)
    assert len(cov) == 1  # chain of q=1 intervals merges across the band
    lo, _ = cov.covered_length_bounds()
    assert lo == 1


def test_cover_gamma_half_touches_at_half_integers():
    p = DiophParams(F(1, 2), Exponent.rational(2))
    cov = build_cover(p, 1)
    comps = list(cov.intervals)
    assert [(c.left, c.right) for c in comps] == \
        [(F(-1, 2), F(1, 2)), (F(1, 2), F(3, 2))]
    t = find_touching_points(cov)
    assert len(t) == 1 and t[0].xi == F(1, 2) and t[0].confirmed
    lo, _ = cov.covered_length_bounds()
    assert lo == 1  # measure-full on [0, 1] even though 1/2 is uncovered


def test_cover_theorem_one_touching():
    p = silver_params()
    cov = build_cover(p, 2)
    comps = list(cov.intervals)
    assert len(comps) == 3
    touches = find_touching_points(cov)
    assert all(t.confirmed for t in touches)
    locs = {(t.xi, t.left_source, t.right_source) for t in touches}
    assert (make_quad(-1, 1, 1, 2), (0, 1), (1, 2)) in locs  # sqrt(2)-1
    # the mirror point 2-sqrt(2) also touches, by the reflection symmetry
    assert (make_quad(2, -1, 1, 2), (1, 2), (1, 1)) in locs
    assert len(touches) == 2


def test_cover_determinism_and_engine_agreement():
    p = DiophParams(F(1, 10), Exponent.rational(2))
    a = build_cover(p, 40)
    b = build_cover(p, 40)
    assert len(a) == len(b)
    pa = [(c.left, c.right, c.sources) for c in a.intervals]
    pb = [(c.left, c.right, c.sources) for c in b.intervals]
    assert pa == pb
    # the integer engine agrees with the generic symbolic engine
    from diogap.gapscan import _build_general

    g = _build_general(p, 40, 128)
    pg = [(c.left, c.right, c.sources) for c in g.intervals]
    assert pa == pg
    assert a.covered_length_bounds()[0] == g.covered_length_bounds()[0]


def test_cover_union_invariant_against_oracle():
    # inside any merged interval: excluded by some q <= Q;
    # outside the cover: no q <= Q excludes
    rng = random.Random(41)
    p = DiophParams(F(1, 8), Exponent.rational(2))
    Q = 30
    cov = build_cover(p, Q)
    comps = list(cov.intervals)
    for _ in range(40):
        c = rng.choice(comps)
        lo, hi = c.left, c.right
        x = lo + (hi - lo) * F(rng.randint(1, 63), 64)
        if cov.point_status(x) != "excluded":
            continue  # landed on a source boundary inside the component
        rep = brute_force_member(x, p, Q=Q)
        assert not rep.consistent
    for _ in range(40):
        x = F(rng.randint(0, 2**20), 2**20)
        if cov.point_status(x) == "outside":
            rep = brute_force_member(x, p, Q=Q, stop_at_first=False)
            assert rep.consistent


def test_point_status_boundaries():
    p = DiophParams(F(1, 10), Exponent.rational(2))
    cov = build_cover(p, 1)
    assert cov.point_status(F(0)) == "excluded"
    assert cov.point_status(F(1, 2)) == "outside"
    assert cov.point_status(F(1, 10)) == "boundary"  # an endpoint


def test_cover_full_params_is_empty():
    p = DiophParams(F(0), Exponent.rational(2))
    cov = build_cover(p, 100)
    assert len(cov) == 0
    mb = measure_bounds(cov)
    assert (mb.lower, mb.upper) == (F(1), F(1))


# ---------------------------------------------------------------------------
# measure bounds

def test_measure_empty_set():
    for g in (F(1, 2), F(3, 5)):
        p = DiophParams(g, Exponent.rational(2))
        mb = measure_bounds(build_cover(p, 1))
        assert (mb.lower, mb.upper) == (F(0), F(0))


def test_measure_bracket_small():
    p = DiophParams(F(1, 10), Exponent.rational(2))
    mb = measure_bounds(build_cover(p, 100))
    assert F(0) < mb.lower <= mb.upper < F(1)
    assert mb.upper - mb.lower <= mb.tail_bound
    # independent closed form: 2*gamma*(Q**(1-tau)/(tau-1) + Q**-tau/tau)
    assert mb.tail_bound == 2 * F(1, 10) * (F(1, 100) + F(1, 2 * 100**2))


def test_measure_monotone_in_q():
    p = DiophParams(F(1, 10), Exponent.rational(2))
    m1 = measure_bounds(build_cover(p, 60))
    m2 = measure_bounds(build_cover(p, 120))
    assert m2.upper <= m1.upper
    assert m2.lower >= m1.lower


def test_measure_divergent_tail_flag():
    p = DiophParams(F(1, 10), Exponent.rational(1))
    mb = measure_bounds(build_cover(p, 50))
    assert mb.divergent_tail and mb.lower == 0
    assert tail_series_bound(p, 50) is None


def test_tail_series_bound_log_ratio():
    p = silver_params()
    tb = tail_series_bound(p, 100)
    # tau ~ 1.2716: integral bound ~ 2*gamma*(Q^(1-tau)/(tau-1) + ...)
    assert F(0) < tb < F(1)
    tight = tail_series_bound(p, 100, shift=F(1, 2))
    assert tight < tb


def test_measure_bracket_general_engine():
    p = silver_params()
    mb = measure_bounds(build_cover(p, 40))
    assert F(0) <= mb.lower <= mb.upper <= F(1)
    assert mb.upper - mb.lower <= mb.tail_bound + (mb.covered_upper - mb.covered_lower)


# ---------------------------------------------------------------------------
# touching and certification

def test_touching_requires_exact_equality():
    rng = random.Random(43)
    p = DiophParams(F(1, 7), Exponent.rational(2))
    cov = build_cover(p, 60)
    touches = find_touching_points(cov)
    for t in touches:
        assert t.confirmed
        # re-check endpoint equality directly from the sources
        from diogap.diocore import excluded_interval

        left_iv = excluded_interval(*t.left_source, p)
        right_iv = excluded_interval(*t.right_source, p)
        assert compare(left_iv.endpoints()[1], t.xi) == 0
        assert compare(right_iv.endpoints()[0], t.xi) == 0


def test_certify_isolated_theorem_one():
    p = silver_params()
    res = certify_isolated(SILVER, p, (2, 1), (5, 2))
    assert res.ok and not res.failures
    cert = res.certificate
    assert cert.left_radius == SILVER.inverse()
    assert cert.right_radius == make_quad(3, -2, 2, 2)  # 3/2 - sqrt(2)


def test_certificate_soundness_punctured_neighbourhood():
    from diogap.diocore import excluded_interval

    p = silver_params()
    cert = certify_isolated(SILVER, p, (2, 1), (5, 2)).certificate
    h = cert.puncture_radius()
    left_iv = excluded_interval(2, 1, p)
    right_iv = excluded_interval(5, 2, p)
    rng = random.Random(47)
    for _ in range(50):
        t = F(rng.randint(1, 2**20 - 1), 2**20)
        for x in (SILVER - h * t, SILVER + h * t):
            assert left_iv.contains(x) or right_iv.contains(x)


def test_certify_rejects_non_member():
    p = silver_params()
    res = certify_isolated(PHI, p, (2, 1), (5, 2))
    assert not res.ok
    assert any("membership" in f for f in res.failures)
    assert any("boundary identity" in f for f in res.failures)


def test_certify_rejects_perturbed_gamma():
    alpha, gamma, tau = SILVER, SILVER.inverse(), Exponent.log_ratio(SILVER, 2)
    perturbed = DiophParams(gamma + F(1, 10**6), tau)
    res = certify_isolated(alpha, perturbed, (2, 1), (5, 2))
    assert not res.ok
    assert any("boundary identity" in f for f in res.failures)


def test_certify_incomplete_on_unknown_membership():
    p = DiophParams(F(3, 10), Exponent.rational(1))
    res = certify_isolated(PHI, p, (1, 1), (2, 1))
    assert not res.ok
    assert res.incomplete  # tau = 1 membership is only semi-decidable


def test_csv_export(tmp_path):
    p = DiophParams(F(1, 10), Exponent.rational(2))
    cov = build_cover(p, 5)
    path = tmp_path / "cover.csv"
    cov.to_csv(str(path))
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(cov)
    assert rows[0]["endpoints"] == "exact"
    assert "/" in rows[0]["sources"] or rows[0]["sources"]


def test_touching_survey_records():
    params = [DiophParams(F(k, 16), Exponent.rational(4)) for k in range(1, 4)]
    recs = touching_survey(params, 50)
    assert len(recs) == 3
    for r in recs:
        assert r["Q"] == 50
        assert r["components"] > 0
        assert r["isolation_certificates"] <= r["touching_confirmed"]
