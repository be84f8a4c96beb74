import random
from fractions import Fraction as F

import pytest

from diogap.contfrac import expand
from diogap.diocore import (
    DiophParams,
    brute_force_member,
    check_tail_certificate,
    dyadic_str,
    excluded_interval,
    is_member,
    lemma_lhs,
    translate,
)
from diogap.exactnum import (
    Enclosure,
    Exponent,
    QuadIrr,
    compare,
    make_quad,
    value_enclosure,
)

PHI = make_quad(1, 1, 2, 5)
SILVER = make_quad(1, 1, 1, 2)
SQUAREFREE = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 23, 29, 31]


def silver_params():
    gamma = SILVER.inverse()
    tau = Exponent.log_ratio(SILVER, 2)
    return DiophParams(gamma, tau)


def random_quad(rng):
    while True:
        v = make_quad(rng.randint(-15, 15), rng.choice([-1, 1]) * rng.randint(1, 6),
                      rng.randint(1, 10), rng.choice(SQUAREFREE))
        if isinstance(v, QuadIrr):
            return v


# ---------------------------------------------------------------------------
# parameters

def test_params_validation():
    with pytest.raises(ValueError):
        DiophParams(F(1, 4), Exponent.rational(F(1, 2)))  # tau < 1
    with pytest.raises(ValueError):
        DiophParams(F(-1, 4), Exponent.rational(2))
    assert DiophParams(F(1, 2), Exponent.rational(2)).classification == "empty"
    assert DiophParams(F(3, 5), Exponent.rational(2)).classification == "empty"
    assert DiophParams(F(0), Exponent.rational(2)).classification == "full"
    assert DiophParams(F(1, 4), Exponent.rational(1)).classification == "standard"
    # gamma may itself be a quadratic irrational
    p = silver_params()
    assert p.classification == "standard"
    assert compare(p.inv_gamma(), SILVER) == 0


# ---------------------------------------------------------------------------
# the criterion values

def test_lemma_lhs_equality_case_k0():
    p = silver_params()
    e = lemma_lhs(SILVER, 0, p)
    # n + 1/alpha = alpha = 1/gamma, exactly
    assert e.value is not None
    assert compare(e.value, SILVER) == 0
    assert compare(e.value, p.inv_gamma()) == 0


def test_lemma_lhs_golden_tau_one():
    # q2/q1 + 1/a'_3 = 2 + 1/phi = (3+sqrt(5))/2
    p = DiophParams(F(3, 10), Exponent.rational(1))
    e = lemma_lhs(PHI, 1, p)
    assert e.value == make_quad(3, 1, 2, 5)


def test_lemma_lhs_rejects_rationals():
    with pytest.raises(TypeError):
        lemma_lhs(F(5, 2), 0, silver_params())


def test_lemma_lhs_enclosure_path_brackets_exact():
    # for k >= 2 the powers of q_k do not reduce; enclosure must bracket
    p = silver_params()
    e = lemma_lhs(SILVER, 3, p)
    assert e.value is None
    assert e.lower < e.upper
    # strictly below 1/gamma = alpha from k = 2 on
    assert e.cmp_value(SILVER) == -1
    r = e.refine()
    assert r.width() <= e.width() / 2


def test_tail_certificate_equality_cases_all_n():
    for n in range(2, 11):
        alpha = make_quad(n, 1, 2, n * n + 4)
        p = DiophParams(alpha.inverse(), Exponent.log_ratio(alpha, n))
        for k in (0, 1):
            e = lemma_lhs(alpha, k, p)
            assert e.value is not None, (n, k)
            assert compare(e.value, p.inv_gamma()) == 0, (n, k)


# ---------------------------------------------------------------------------
# membership decisions

def test_member_theorem_one_point():
    p = silver_params()
    v = is_member(SILVER, p)
    assert v.kind == "member"
    assert v.certificate is not None
    assert check_tail_certificate(SILVER, p, v.certificate)


def test_not_member_golden_two_fifths():
    p = DiophParams(F(2, 5), Exponent.rational(1))
    v = is_member(PHI, p)
    assert v.kind == "not-member"
    assert v.witness_k == 1
    assert v.witness_pq == (2, 1)
    # the witness criterion value lies strictly above 1/gamma = 5/2
    assert v.lhs.cmp_value(F(5, 2)) == 1


def test_unknown_golden_tau_one():
    p = DiophParams(F(3, 10), Exponent.rational(1))
    v = is_member(PHI, p)
    assert v.kind == "unknown"
    assert v.checked_up_to == 200
    assert "tau = 1" in v.reason


def test_rational_inputs_never_members():
    p = DiophParams(F(1, 4), Exponent.rational(2))
    v = is_member(F(5, 2), p)
    assert v.kind == "not-member"
    assert v.witness_pq == (5, 2)


def test_empty_params_reject_everything():
    p = DiophParams(F(1, 2), Exponent.rational(2))
    v = is_member(SILVER, p)
    assert v.kind == "not-member"
    assert v.witness_pq == (2, 1)  # nearest integer at q = 1


def test_full_params_accept_everything():
    p = DiophParams(F(0), Exponent.rational(2))
    assert is_member(SILVER, p).kind == "member"
    assert is_member(F(1, 3), p).kind == "member"
    assert brute_force_member(F(1, 3), p, Q=50).consistent


# ---------------------------------------------------------------------------
# the oracle

def test_oracle_rational_excluded_at_own_denominator():
    p = DiophParams(F(1, 4), Exponent.rational(2))
    rep = brute_force_member(F(5, 7), p, Q=10)
    assert not rep.consistent
    assert (5, 7) in rep.exclusions  # distance zero at q = 7


def test_oracle_golden_two_fifths():
    p = DiophParams(F(2, 5), Exponent.rational(1))
    rep = brute_force_member(PHI, p, Q=10)
    # first violated q is 1: |phi - 2| = 0.381... < 2/5; this is the
    # convergent p_1/q_1 = 2/1 named by the criterion witness k = 1
    assert rep.exclusions == [(2, 1)]
    v = is_member(PHI, p)
    assert v.witness_pq == (2, 1)


def test_oracle_consistent_for_member():
    p = silver_params()
    rep = brute_force_member(SILVER, p, Q=500)
    assert rep.consistent
    assert rep.undecided == []


def test_oracle_boundary_ties_are_exact():
    # at q = 1 and q = 2 the theorem-1 point sits exactly on the boundary;
    # non-strict >= must hold, so neither q may be reported as a violation
    p = silver_params()
    rep = brute_force_member(SILVER, p, Q=2, stop_at_first=False)
    assert rep.consistent and rep.undecided == []


def test_oracle_enclosure_input():
    p = DiophParams(F(1, 4), Exponent.rational(2))
    lo, hi = value_enclosure(SILVER, 80)
    rep = brute_force_member(Enclosure(lo, hi, 80), p, Q=100)
    assert rep.consistent
    # a wide enclosure around a rational cannot decide its own denominator
    wide = Enclosure(F(1, 2) - F(1, 4), F(1, 2) + F(1, 4), 2)
    rep2 = brute_force_member(wide, p, Q=4)
    assert rep2.undecided  # too wide to decide some q


def test_oracle_half_integer_tie_checks_both():
    # 1/2 at q = 1 is exactly half-way between 0 and 1; with gamma = 1/2 the
    # bound is met with equality on both sides, so no q = 1 violation
    p = DiophParams(F(1, 2), Exponent.rational(1))
    rep = brute_force_member(F(1, 2), p, Q=1, stop_at_first=False)
    assert rep.consistent


def test_oracle_fast_path_matches_reference():
    # same scan, re-derived independently: raise |q*xi - p| >= gamma/q**(u/v)
    # to the v-th power and compare exactly in the field
    rng = random.Random(5)
    for _ in range(10):
        xi = random_quad(rng)
        gamma = F(rng.randint(1, 24), 50)
        trat = F(rng.randint(4, 12), 4)
        p = DiophParams(gamma, Exponent.rational(trat))
        fast = brute_force_member(xi, p, Q=60, stop_at_first=False)
        u, v = trat.numerator, trat.denominator
        ref = []
        for q in range(1, 61):
            s = xi * q
            pp = (s + F(1, 2)).floor()
            t = s - pp
            if compare(t, F(0)) < 0:
                t = -t
            if compare(t ** v * q**u, gamma**v) < 0:
                ref.append((pp, q))
        assert fast.exclusions == ref


# ---------------------------------------------------------------------------
# lemma <-> definition consistency (small version; the acceptance suite
# runs the full 200-case program)

def test_lemma_definition_equivalence_sample():
    rng = random.Random(23)
    for _ in range(25):
        xi = random_quad(rng)
        gamma = F(rng.randint(1, 40), rng.randint(82, 120))
        tau = Exponent.rational(F(rng.randint(5, 12), 4))
        p = DiophParams(gamma, tau)
        v = is_member(xi, p)
        if v.kind == "not-member":
            q_next = expand(xi).convergent(v.witness_k + 1)[1]
            rep = brute_force_member(xi, p, Q=max(q_next, 1))
            assert not rep.consistent
        elif v.kind == "member":
            rep = brute_force_member(xi, p, Q=2000)
            assert rep.consistent
            assert check_tail_certificate(xi, p, v.certificate)


def test_translation_invariance():
    p = DiophParams(F(2, 5), Exponent.rational(1))
    p2 = silver_params()
    for k in range(-3, 4):
        assert is_member(translate(PHI, k), p).kind == is_member(PHI, p).kind
        assert is_member(translate(SILVER, k), p2).kind == \
            is_member(SILVER, p2).kind


def test_emptiness_via_q_one():
    rng = random.Random(31)
    p = DiophParams(F(1, 2), Exponent.rational(2))
    for _ in range(20):
        xi = random_quad(rng)
        rep = brute_force_member(xi, p, Q=1)
        assert rep.exclusions and rep.exclusions[0][1] == 1


# ---------------------------------------------------------------------------
# excluded intervals

def test_excluded_interval_basic():
    p = DiophParams(F(2, 5), Exponent.rational(2))
    iv = excluded_interval(0, 1, p)
    assert iv.endpoints() == (F(-2, 5), F(2, 5))
    assert iv.contains(F(1, 5)) is True
    assert iv.contains(F(2, 5)) is False  # open interval
    with pytest.raises(ValueError):
        excluded_interval(1, 0, p)


def test_excluded_interval_theorem_one_boundaries():
    p = silver_params()
    left = excluded_interval(2, 1, p)
    assert compare(left.endpoints()[1], SILVER) == 0  # right endpoint alpha
    right = excluded_interval(5, 2, p)
    # radius gamma/2**(tau+1) = 3/2 - sqrt(2), left endpoint exactly alpha
    assert right.exact_radius() == make_quad(3, -2, 2, 2)
    assert compare(right.endpoints()[0], SILVER) == 0
    assert right.contains(SILVER) is False


def test_excluded_interval_inexact_radius():
    p = silver_params()
    iv = excluded_interval(1, 3, p)  # q = 3 is not a power of 2
    assert not iv.radius_is_exact
    assert iv.contains(F(1, 3)) is True     # the center is always inside
    assert iv.contains(F(9, 10)) is False   # far away


# ---------------------------------------------------------------------------
# serialization

def test_verdict_records():
    p = DiophParams(F(2, 5), Exponent.rational(1))
    v = is_member(PHI, p)
    rec = v.to_record()
    assert rec.startswith("kind=not-member")
    assert "witness_k=1" in rec and "witness_p/q=2/1" in rec
    j = v.to_json()
    assert j["kind"] == "not-member" and j["witness_p"] == 2

    v2 = is_member(SILVER, silver_params())
    j2 = v2.to_json()
    assert j2["tail_certificate"]["A"] == 2
    assert "tail_K=" in v2.to_record()


def test_dyadic_str():
    assert dyadic_str(F(3, 8)) == "3/2^3"
    assert dyadic_str(F(5, 12)) == "5/12"
    assert dyadic_str(F(7)) == "7"
