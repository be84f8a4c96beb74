"""Membership decisions for badly-approximable parameter sets.

For parameters (gamma, tau) the set consists of the reals xi with
|xi*q - p| >= gamma/q**tau for every integer p and positive integer q.
Membership of a quadratic irrational is decided through its convergents:
xi belongs to the set iff

    q_{k+1}/q_k**tau + 1/(a'_{k+2} * q_k**(tau-1))  <=  1/gamma   for all k >= 0,

which this module turns into a finite, certified computation: the first
finitely many k are checked exactly or by enclosure refinement, and for
tau > 1 a tail certificate (A+2)/q_K**(tau-1) <= 1/gamma covers all k >= K.
The definition itself, scanned over q, doubles as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .contfrac import CFExpansion, expand
from .exactnum import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    CrossFieldError,
    Enclosure,
    Exponent,
    QuadIrr,
    Value,
    compare,
    interval_add,
    interval_div,
    interval_inv,
    interval_mul,
    power_enclosure,
    value_abs,
    value_enclosure,
    value_floor,
    value_inverse,
    value_sign,
    value_str,
)

EMPTY, FULL, STANDARD = "empty", "full", "standard"

MEMBER, NOT_MEMBER, UNKNOWN = "member", "not-member", "unknown"

DEFAULT_ORACLE_Q = 10_000


def dyadic_str(x: Fraction) -> str:
    """Dyadic rationals as "m/2^k"; other rationals fall back to "p/q"."""
    d = x.denominator
    if d & (d - 1) == 0 and d > 1:
        return f"{x.numerator}/2^{d.bit_length() - 1}"
    return str(x)


class DiophParams:
    """Validated parameter pair (gamma, tau).

    tau < 1 is rejected outright (the set would be empty for every irrational
    by pigeonhole denominators).  gamma >= 1/2 and gamma == 0 are legal but
    degenerate; they are kept as classified states rather than errors, since
    computations on them are still meaningful (empty set / all reals).
    """

    __slots__ = ("gamma", "tau", "classification")

    def __init__(self, gamma: Union[Value, int], tau: Exponent):
        if isinstance(gamma, int):
            gamma = Fraction(gamma)
        if not isinstance(tau, Exponent):
            raise TypeError("tau must be an Exponent")
        if tau.compare_rational(1) < 0:
            raise ValueError("tau < 1 is rejected: the set would be empty")
        sg = value_sign(gamma)
        if sg < 0:
            raise ValueError("gamma must be >= 0")
        self.gamma = gamma
        self.tau = tau
        if sg == 0:
            self.classification = FULL
        elif compare(gamma, Fraction(1, 2)) >= 0:
            self.classification = EMPTY
        else:
            self.classification = STANDARD

    @property
    def is_empty(self) -> bool:
        return self.classification == EMPTY

    @property
    def is_full(self) -> bool:
        return self.classification == FULL

    def inv_gamma(self) -> Value:
        if self.is_full:
            raise ZeroDivisionError("gamma = 0 has no reciprocal")
        return value_inverse(self.gamma)

    def gamma_bounds(self, precision: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
        return value_enclosure(self.gamma, precision)

    def __repr__(self):
        from .exactnum import exponent_str

        return f"DiophParams(gamma={value_str(self.gamma)}, {exponent_str(self.tau)})"

    def __eq__(self, other):
        if not isinstance(other, DiophParams):
            return NotImplemented
        return self.gamma == other.gamma and self.tau == other.tau


@dataclass(frozen=True)
class TailCertificate:
    """Finite data implying the convergent criterion for every k >= K.

    A bounds all partial quotients a_k (k >= 1); since q_k is nondecreasing,
    (A+2)/q_k**(tau-1) <= (A+2)/q_K**(tau-1) <= 1/gamma for k >= K, and the
    left side dominates the criterion's left side.  Only valid for tau > 1.
    """

    K: int
    A: int
    q_K: int
    power_lower: str   # certified lower bound on q_K**(tau-1)
    threshold_upper: str  # certified upper bound on gamma*(A+2)

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "A": self.A,
            "q_K": self.q_K,
            "power_lower": self.power_lower,
            "threshold_upper": self.threshold_upper,
        }


@dataclass
class MembershipVerdict:
    """Outcome of a membership decision.

    kind is one of "member" (tail certificate plus all earlier k verified),
    "not-member" (explicit witness index whose criterion value provably
    exceeds 1/gamma), or "unknown" (a value, not an error: the checked range
    passed but no tail argument exists, e.g. tau = 1)."""

    kind: str
    certificate: Optional[TailCertificate] = None
    witness_k: Optional[int] = None
    witness_pq: Optional[tuple[int, int]] = None
    lhs: Optional[Enclosure] = None
    checked_up_to: Optional[int] = None
    reason: Optional[str] = None

    @property
    def is_member(self) -> bool:
        return self.kind == MEMBER

    def to_record(self) -> str:
        """Canonical one-line text record for machine diffing."""
        parts = [f"kind={self.kind}"]
        if self.witness_k is not None:
            parts.append(f"witness_k={self.witness_k}")
        if self.witness_pq is not None:
            parts.append(f"witness_p/q={self.witness_pq[0]}/{self.witness_pq[1]}")
        if self.lhs is not None:
            if self.lhs.value is not None:
                parts.append(f"lhs={value_str(self.lhs.value)}")
            else:
                parts.append(f"lhs_lower={dyadic_str(self.lhs.lower)}")
                parts.append(f"lhs_upper={dyadic_str(self.lhs.upper)}")
        if self.certificate is not None:
            c = self.certificate
            parts.append(f"tail_K={c.K}")
            parts.append(f"tail_A={c.A}")
            parts.append(f"tail_q_K={c.q_K}")
        if self.checked_up_to is not None:
            parts.append(f"checked_up_to={self.checked_up_to}")
        if self.reason:
            parts.append(f"reason={self.reason}")
        return "; ".join(parts)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.witness_k is not None:
            out["witness_k"] = self.witness_k
        if self.witness_pq is not None:
            out["witness_p"], out["witness_q"] = self.witness_pq
        if self.lhs is not None:
            if self.lhs.value is not None:
                out["lhs_exact"] = value_str(self.lhs.value)
            else:
                out["lhs_lower"] = dyadic_str(self.lhs.lower)
                out["lhs_upper"] = dyadic_str(self.lhs.upper)
        if self.certificate is not None:
            out["tail_certificate"] = self.certificate.to_json()
        if self.checked_up_to is not None:
            out["checked_up_to"] = self.checked_up_to
        if self.reason:
            out["reason"] = self.reason
        return out


# ---------------------------------------------------------------------------
# the convergent criterion

def lemma_lhs(xi: QuadIrr, k: int, params: DiophParams,
              precision: int = DEFAULT_PRECISION,
              cf: Optional[CFExpansion] = None) -> Enclosure:
    """Criterion value q_{k+1}/q_k**tau + 1/(a'_{k+2} q_k**(tau-1)) at index k.

    Returns the exact symbolic value whenever every power of q_k reduces
    exactly and stays inside one quadratic field (that covers all the equality
    cases this package certifies), otherwise a directed-rounding enclosure.
    """
    if not isinstance(xi, QuadIrr):
        raise TypeError("criterion values are defined for quadratic irrationals only")
    if k < 0:
        raise ValueError("k must be >= 0")
    if cf is None:
        cf = expand(xi)
    q_k = cf.convergent(k)[1]
    q_k1 = cf.convergent(k + 1)[1]
    a2 = cf.complete_quotient(k + 2)

    x_exact = params.tau.pow_exact(q_k)  # q_k**tau
    if x_exact is not None:
        try:
            y_exact = x_exact / q_k  # q_k**(tau-1)
            lhs = q_k1 / x_exact + value_inverse(a2 * y_exact)
            lo, hi = value_enclosure(lhs, precision)
            return Enclosure(lo, hi, precision, value=lhs,
                             source=lambda p: lemma_lhs(xi, k, params, p, cf))
        except CrossFieldError:
            pass

    pw = power_enclosure(q_k, params.tau, precision)
    x_iv = (pw.lower, pw.upper)
    y_iv = (pw.lower / q_k, pw.upper / q_k)
    term1 = interval_div((Fraction(q_k1), Fraction(q_k1)), x_iv)
    term2 = interval_inv(interval_mul(value_enclosure(a2, precision), y_iv))
    lo, hi = interval_add(term1, term2)
    return Enclosure(lo, hi, precision,
                     source=lambda p: lemma_lhs(xi, k, params, p, cf))


def _decide_le(make_enclosure, bound: Value, precision: int,
               max_precision: int) -> tuple[Optional[bool], Enclosure]:
    """Certified decision of (value <= bound); ties count as <=.

    None means undecided at max_precision (the enclosure still straddles)."""
    e = make_enclosure(precision)
    while True:
        c = e.cmp_value(bound)
        if c is not None:
            return c <= 0, e
        if e.precision >= max_precision or e.flagged:
            return None, e
        e = e.refine(max_precision)


def _tail_reached(cf: CFExpansion, k: int, params: DiophParams, A: int,
                  precision: int, max_precision: int) -> Optional[Fraction]:
    """Certified lower bound on q_k**(tau-1) when it reaches gamma*(A+2),
    else None.  Comparison is done with margin: exact when the power reduces,
    otherwise by enclosure with one refinement round."""
    q_k = cf.convergent(k)[1]
    threshold = params.gamma * (A + 2)
    x_exact = params.tau.pow_exact(q_k)
    if x_exact is not None:
        val = x_exact / q_k
        if compare(val, threshold) >= 0:
            return value_enclosure(val, precision)[0]
        return None
    pw = power_enclosure(q_k, params.tau, precision)
    lo = pw.lower / q_k
    if compare(lo, threshold) >= 0:
        return lo
    pw = pw.refine(min(4 * precision, max_precision))
    lo = pw.lower / q_k
    if compare(lo, threshold) >= 0:
        return lo
    return None


def is_member(xi: Value, params: DiophParams,
              max_precision: int = MAX_PRECISION,
              precision: int = DEFAULT_PRECISION,
              tau_one_cap: int = 200) -> MembershipVerdict:
    """Certified membership verdict for an exact value.

    tau > 1: terminating decision (member with tail certificate, or witness).
    tau = 1: semi-decidable; a passing scan up to `tau_one_cap` indices is
    reported as "unknown" with the checked range, never as membership.
    """
    if isinstance(xi, int):
        xi = Fraction(xi)
    if params.is_full:
        return MembershipVerdict(MEMBER, reason="gamma = 0: every real satisfies the bound")
    if isinstance(xi, Fraction):
        return MembershipVerdict(
            NOT_MEMBER, witness_k=-1, witness_pq=(xi.numerator, xi.denominator),
            lhs=None, reason="rational: distance 0 at its own denominator")
    if params.is_empty:
        p = value_floor(xi + Fraction(1, 2))
        return MembershipVerdict(
            NOT_MEMBER, witness_k=-1, witness_pq=(p, 1),
            reason="gamma >= 1/2: the nearest integer already violates the bound at q = 1")

    cf = expand(xi)
    inv_gamma = params.inv_gamma()
    A = cf.max_partial_quotient()

    if params.tau.is_one():
        for k in range(tau_one_cap + 1):
            ok, e = _decide_le(lambda p, _k=k: lemma_lhs(xi, _k, params, p, cf),
                               inv_gamma, precision, max_precision)
            if ok is False:
                return MembershipVerdict(NOT_MEMBER, witness_k=k,
                                         witness_pq=cf.convergent(k), lhs=e)
            if ok is None:
                return MembershipVerdict(UNKNOWN, checked_up_to=k - 1,
                                         reason=f"undecided at k={k} (precision ceiling)")
        return MembershipVerdict(
            UNKNOWN, checked_up_to=tau_one_cap,
            reason="tau = 1: no finite tail bound exists in this design")

    for k in range(100_000):
        lower = _tail_reached(cf, k, params, A, precision, max_precision)
        if lower is not None:
            thr_hi = value_enclosure(params.gamma * (A + 2), precision)[1]
            cert = TailCertificate(K=k, A=A, q_K=cf.convergent(k)[1],
                                   power_lower=dyadic_str(lower),
                                   threshold_upper=dyadic_str(thr_hi))
            return MembershipVerdict(MEMBER, certificate=cert, checked_up_to=k - 1)
        ok, e = _decide_le(lambda p, _k=k: lemma_lhs(xi, _k, params, p, cf),
                           inv_gamma, precision, max_precision)
        if ok is False:
            return MembershipVerdict(NOT_MEMBER, witness_k=k,
                                     witness_pq=cf.convergent(k), lhs=e)
        if ok is None:
            return MembershipVerdict(UNKNOWN, checked_up_to=k - 1,
                                     reason=f"undecided at k={k} (precision ceiling)")
    return MembershipVerdict(UNKNOWN, checked_up_to=100_000,
                             reason="tail threshold unreached (unexpected)")


def check_tail_certificate(xi: QuadIrr, params: DiophParams, cert: TailCertificate,
                           extra: int = 10, max_precision: int = MAX_PRECISION) -> bool:
    """Soundness probe: the criterion holds directly at k = K .. K+extra."""
    cf = expand(xi)
    inv_gamma = params.inv_gamma()
    for k in range(cert.K, cert.K + extra + 1):
        ok, _ = _decide_le(lambda p, _k=k: lemma_lhs(xi, _k, params, p, cf),
                           inv_gamma, DEFAULT_PRECISION, max_precision)
        if ok is not True:
            return False
    return True


# ---------------------------------------------------------------------------
# the definition as an oracle

@dataclass
class OracleReport:
    """Result of scanning the definition |xi*q - p| >= gamma/q**tau for q <= Q.

    Each exclusion is an exactly verified violation at the nearest integer p.
    `undecided` lists q where an enclosure input was too wide to decide.
    `complete` is False when the scan stopped at the first exclusion."""

    Q: int
    exclusions: list[tuple[int, int]] = field(default_factory=list)
    undecided: list[int] = field(default_factory=list)
    complete: bool = True

    @property
    def consistent(self) -> bool:
        return not self.exclusions

    def to_json(self) -> dict:
        return {
            "Q": self.Q,
            "consistent_up_to_Q": self.consistent,
            "exclusions": [{"p": p, "q": q} for p, q in self.exclusions],
            "undecided_q": list(self.undecided),
            "complete_scan": self.complete,
        }


def _sign_int_radical(X: int, Y: int, d: int) -> int:
    """Sign of X + Y*sqrt(d) for integers, d squarefree > 1."""
    if Y == 0:
        return (X > 0) - (X < 0)
    if Y > 0:
        if X >= 0:
            return 1
        return 1 if Y * Y * d > X * X else -1
    return -_sign_int_radical(-X, -Y, d)


def _oracle_fast(xi: QuadIrr, gamma: Fraction, tau: Fraction, Q: int,
                 stop_at_first: bool) -> OracleReport:
    # pure integer arithmetic: |q*xi - p| >= gamma/q**(u/v) is raised to the
    # v-th power, leaving a single-radical integer sign decision per q
    a, b, c, d = xi.a, xi.b, xi.c, xi.d
    u, v = tau.numerator, tau.denominator
    g1v = gamma.numerator ** v
    g2v = gamma.denominator ** v
    rhs_const = g1v * c ** v
    report = OracleReport(Q=Q)
    for q in range(1, Q + 1):
        B2 = 2 * q * b
        s = math.isqrt(B2 * B2 * d)
        if B2 < 0:
            s = -s - 1
        p = (2 * q * a + c + s) // (2 * c)
        X = q * a - p * c
        Y = q * b
        if _sign_int_radical(X, Y, d) < 0:
            X, Y = -X, -Y
        # (X + Y*sqrt(d))**v = E + F*sqrt(d)
        E, F = 1, 0
        for _ in range(v):
            E, F = E * X + F * Y * d, E * Y + F * X
        scale = (q ** u) * g2v
        if _sign_int_radical(scale * E - rhs_const, scale * F, d) < 0:
            report.exclusions.append((p, q))
            if stop_at_first:
                report.complete = False
                return report
    return report


def _radius_scaled(params: DiophParams, q: int,
                   precision: int) -> Union[Value, tuple[Fraction, Fraction]]:
    """gamma/q**tau, exact when the power reduces, else interval bounds."""
    x = params.tau.pow_exact(q)
    if x is not None:
        try:
            return params.gamma / x
        except CrossFieldError:
            pass
    pw = power_enclosure(q, params.tau, precision)
    return interval_div(params.gamma_bounds(precision), (pw.lower, pw.upper))


def brute_force_member(xi: Union[Value, Enclosure], params: DiophParams,
                       Q: int = DEFAULT_ORACLE_Q, stop_at_first: bool = True,
                       precision: int = DEFAULT_PRECISION,
                       max_precision: int = MAX_PRECISION) -> OracleReport:
    """Independent oracle: test the defining inequality for every q <= Q.

    Only p = round(q*xi) is checked per q (any other p is strictly worse);
    exact half-integer ties check both neighbours.  For a quadratic
    irrational with rational parameters this is a pure integer scan.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if isinstance(xi, int):
        xi = Fraction(xi)
    if params.is_full:
        return OracleReport(Q=Q)  # |q*xi - p| >= 0 always holds

    if isinstance(xi, QuadIrr) and isinstance(params.gamma, Fraction) \
            and params.tau.rat is not None:
        return _oracle_fast(xi, params.gamma, params.tau.rat, Q, stop_at_first)

    report = OracleReport(Q=Q)

    def record(p: int, q: int) -> bool:
        report.exclusions.append((p, q))
        if stop_at_first:
            report.complete = False
            return True
        return False

    for q in range(1, Q + 1):
        if isinstance(xi, Enclosure):
            lo, hi = q * xi.lower, q * xi.upper
            p = math.floor((lo + hi) / 2 + Fraction(1, 2))
            t_lo, t_hi = lo - p, hi - p
            if t_lo <= 0 <= t_hi:
                tb = (Fraction(0), max(-t_lo, t_hi))
            else:
                tb = (min(abs(t_lo), abs(t_hi)), max(abs(t_lo), abs(t_hi)))
            rb = _radius_scaled(params, q, precision)
            if not isinstance(rb, tuple):
                rb = value_enclosure(rb, precision)
            if tb[0] >= rb[1]:
                continue
            if tb[1] < rb[0]:
                if record(p, q):
                    return report
                continue
            report.undecided.append(q)
            continue

        s = xi * q
        candidates = [value_floor(s + Fraction(1, 2))]
        if isinstance(s, Fraction) and (s - candidates[0]) == Fraction(1, 2):
            candidates.append(candidates[0] + 1)  # exact half-integer tie
        decided = False
        for p in candidates:
            t = value_abs(s - p)
            if value_sign(t) == 0:
                if record(p, q):
                    return report
                decided = True
                break
            r = _radius_scaled(params, q, precision)
            if not isinstance(r, tuple):
                cmpres = compare(t, r)
                if cmpres < 0:
                    if record(p, q):
                        return report
                decided = True
                break
            work = precision
            while True:
                tb = value_enclosure(t, work)
                if tb[0] > r[1]:
                    decided = True
                    break
                if tb[1] < r[0]:
                    if record(p, q):
                        return report
                    decided = True
                    break
                if work >= max_precision:
                    break
                work = min(2 * work, max_precision)
                pw = power_enclosure(q, params.tau, work)
                r = interval_div(params.gamma_bounds(work), (pw.lower, pw.upper))
            if decided:
                break
        if not decided:
            report.undecided.append(q)
    return report


# ---------------------------------------------------------------------------
# excluded intervals and translation

@dataclass
class ExcludedInterval:
    """Open interval around p/q of radius gamma/q**(tau+1); its interior
    contains no member of the parameter set."""

    p: int
    q: int
    center: Fraction
    radius: Union[Value, Enclosure]

    @property
    def radius_is_exact(self) -> bool:
        return not isinstance(self.radius, Enclosure) or self.radius.value is not None

    def exact_radius(self) -> Optional[Value]:
        if isinstance(self.radius, Enclosure):
            return self.radius.value
        return self.radius

    def endpoints(self) -> tuple[Optional[Value], Optional[Value]]:
        r = self.exact_radius()
        if r is None:
            return None, None
        return self.center - r, self.center + r

    def contains(self, x: Value) -> Optional[bool]:
        """Strict interior test; None when an inexact radius cannot decide."""
        t = value_abs(x - self.center)
        r = self.exact_radius()
        if r is not None:
            return compare(t, r) < 0
        lo, hi = self.radius.lower, self.radius.upper
        tb = value_enclosure(t, max(self.radius.precision, DEFAULT_PRECISION))
        if tb[1] < lo:
            return True
        if tb[0] >= hi:
            return False
        return None


def excluded_interval(p: int, q: int, params: DiophParams,
                      precision: int = DEFAULT_PRECISION) -> ExcludedInterval:
    """The open excluded interval I(p, q) = (p/q - r, p/q + r), r = gamma/q**(tau+1)."""
    if q <= 0:
        raise ValueError("invalid input: q must be >= 1")
    x = params.tau.pow_exact(q)
    radius: Union[Value, Enclosure]
    if x is not None:
        try:
            radius = params.gamma / (x * q)
        except CrossFieldError:
            x = None
    if x is None:
        pw = power_enclosure(q, params.tau, precision)
        lo, hi = interval_div(params.gamma_bounds(precision),
                              (pw.lower * q, pw.upper * q))
        radius = Enclosure(lo, hi, precision)
    return ExcludedInterval(p=p, q=q, center=Fraction(p, q), radius=radius)


def translate(xi: Value, k: int) -> Value:
    """xi + k: membership is invariant under integer translations."""
    if isinstance(xi, int):
        xi = Fraction(xi)
    return xi + k
