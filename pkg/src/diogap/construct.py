"""Generators for the built-in certified families.

`theorem1(n)` builds the metallic-family isolated point for n >= 2: the
purely periodic number alpha = [n; n, n, ...] = (n + sqrt(n^2+4))/2 with
gamma = 1/alpha and tau = log(alpha)/log(n), so that n**tau = alpha exactly.
The generator re-derives the supporting inequality chain and then hands
certification to the gap-scan checker; it never certifies itself.

`theorem2_transform` maps a member alpha of the (gamma, tau) set to the
equivalent representative alpha' = (m*alpha + 1)/((2m+1)*alpha + 2) with
m = floor(3 * 2**tau / gamma).  Suitable parameters making alpha' isolated
are known to exist but are not computable from anything in this package, so
an exploratory grid search is provided whose empty result proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .contfrac import expand, tail_agreement, tails_eventually_agree
from .diocore import (
    MEMBER,
    NOT_MEMBER,
    UNKNOWN,
    DiophParams,
    MembershipVerdict,
    excluded_interval,
    is_member,
)
from .exactnum import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    CrossFieldError,
    Exponent,
    QuadIrr,
    Value,
    compare,
    exponent_str,
    make_quad,
    mobius,
    power_enclosure,
    value_enclosure,
    value_floor,
    value_str,
)
from .gapscan import (
    IsolationCertificate,
    build_cover,
    certify_isolated,
    find_touching_points,
)


class HypothesisViolation(ValueError):
    """An input violates a stated hypothesis of a built-in construction."""


class IndeterminateFloor(ArithmeticError):
    """floor() of an irrational expression sits at an integer boundary that
    neither enclosure refinement nor symbolic reduction could resolve."""


@dataclass
class Theorem1Instance:
    """Certified isolated point of the n-th metallic family member."""

    n: int
    alpha: QuadIrr
    gamma: QuadIrr
    tau: Exponent
    left: tuple[int, int]   # (p0, q0) = (n, 1)
    right: tuple[int, int]  # (p1, q1) = (n^2+1, n)
    certificate: IsolationCertificate

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": value_str(self.alpha),
            "gamma": value_str(self.gamma),
            "tau": exponent_str(self.tau),
            "certificate": self.certificate.to_json(),
        }


def theorem1_params(n: int) -> tuple[QuadIrr, QuadIrr, Exponent]:
    """(alpha, gamma, tau) for the family member at n >= 2."""
    if n < 2:
        raise HypothesisViolation(f"n must be >= 2, got {n}")
    alpha = make_quad(n, 1, 2, n * n + 4)
    assert isinstance(alpha, QuadIrr)  # n^2+4 is never a perfect square for n >= 1
    gamma = alpha.inverse()
    tau = Exponent.log_ratio(alpha, n)
    return alpha, gamma, tau


def theorem1(n: int, max_precision: int = MAX_PRECISION) -> Theorem1Instance:
    """Build and certify the isolated point for n >= 2.

    Construction checks (all exact): alpha = n + 1/alpha; n**tau = alpha;
    the expansion is [n; (n)] with convergents p0 = n, q0 = 1, p1 = n^2+1,
    q1 = n and q_{k+1} = p_k; gamma < 1/2; the two boundary identities
    |alpha - p0/q0| = gamma and p1/q1 - alpha = gamma/q1**(tau+1); and the
    inequality chain p_k/q_k <= p1/q1, q_k >= q1 over the finitely checked
    range.  Certification itself is performed by gapscan.certify_isolated.
    """
    alpha, gamma, tau = theorem1_params(n)
    params = DiophParams(gamma, tau)
    if params.classification != "standard":
        raise HypothesisViolation("gamma = 1/alpha must lie in (0, 1/2)")

    # fixed-point and power-reduction identities
    if compare(alpha, n + alpha.inverse()) != 0:
        raise AssertionError("alpha = n + 1/alpha failed")
    pw = power_enclosure(n, tau)
    if pw.value is None or compare(pw.value, alpha) != 0:
        raise AssertionError("n**tau = alpha failed")

    cf = expand(alpha)
    if cf.a0 != n or cf.preperiod != () or cf.period != (n,):
        raise AssertionError("expansion of alpha is not [n; (n)]")
    p0, q0 = cf.convergent(0)
    p1, q1 = cf.convergent(1)
    if (p0, q0) != (n, 1) or (p1, q1) != (n * n + 1, n):
        raise AssertionError("convergent prefix (n, 1), (n^2+1, n) failed")

    verdict = is_member(alpha, params, max_precision=max_precision)
    if verdict.kind != MEMBER:
        raise AssertionError(f"membership of alpha failed: {verdict.to_record()}")
    assert verdict.certificate is not None

    # re-derive the proof chain on the finitely checked range
    k_top = verdict.certificate.K + 2
    f1 = Fraction(p1, q1)
    for k in range(k_top + 1):
        pk, qk = cf.convergent(k)
        if cf.convergent(k + 1)[1] != pk:
            raise AssertionError(f"q_(k+1) = p_k failed at k = {k}")
        if k >= 1 and (Fraction(pk, qk) > f1 or qk < q1):
            raise AssertionError(f"inequality chain failed at k = {k}")

    result = certify_isolated(alpha, params, (p0, q0), (p1, q1),
                              max_precision=max_precision)
    if not result.ok:
        raise AssertionError(f"certification rejected: {result.failures}")
    return Theorem1Instance(n=n, alpha=alpha, gamma=gamma, tau=tau,
                            left=(p0, q0), right=(p1, q1),
                            certificate=result.certificate)


# ---------------------------------------------------------------------------
# certified floors of exponential expressions

def certified_floor_3_2tau_over_gamma(gamma: Value, tau: Exponent,
                                      precision: int = DEFAULT_PRECISION,
                                      max_precision: int = MAX_PRECISION) -> int:
    """floor(3 * 2**tau / gamma), decided rigorously.

    Exact whenever 2**tau reduces symbolically (rational tau with an exact
    power, or a log-ratio exponent with base 2, where 2**tau is alpha itself).
    Otherwise the floor is decided by enclosure refinement; if the value sits
    on an integer boundary beyond the precision ceiling, IndeterminateFloor
    is raised rather than guessing."""
    two_tau = tau.pow_exact(2)
    if two_tau is not None:
        try:
            return value_floor(3 * two_tau / gamma)
        except CrossFieldError:
            pass
    work = precision
    while True:
        pw = power_enclosure(2, tau, work)
        g_lo, g_hi = value_enclosure(gamma, work)
        lo = 3 * pw.lower / g_hi
        hi = 3 * pw.upper / g_lo
        f_lo = lo.numerator // lo.denominator
        f_hi = hi.numerator // hi.denominator
        if f_lo == f_hi:
            return f_lo
        if work >= max_precision:
            raise IndeterminateFloor(
                f"3*2**tau/gamma straddles an integer in [{float(lo)}, {float(hi)}]")
        work = min(2 * work, max_precision)


@dataclass
class Theorem2Instance:
    """Equivalent-representative transform of a member alpha."""

    alpha: QuadIrr
    gamma: Value
    tau: Exponent
    m: int
    alpha_prime: QuadIrr
    determinant: int
    membership: MembershipVerdict
    agreement: Optional[tuple[int, int]]  # tail agreement indices of alpha, alpha'
    warning: Optional[str] = None
    search_result: Optional["SearchHit"] = None

    def to_json(self) -> dict:
        out = {
            "alpha": value_str(self.alpha),
            "gamma": value_str(self.gamma),
            "tau": exponent_str(self.tau),
            "m": self.m,
            "alpha_prime": value_str(self.alpha_prime),
            "determinant": self.determinant,
            "membership": self.membership.to_json(),
            "tail_agreement": list(self.agreement) if self.agreement else None,
        }
        if self.warning:
            out["warning"] = self.warning
        out["search_result"] = (self.search_result.to_json()
                                if self.search_result is not None else None)
        return out


def theorem2_transform(alpha: QuadIrr, gamma: Value, tau: Exponent,
                       max_precision: int = MAX_PRECISION) -> Theorem2Instance:
    """Compute m = floor(3*2**tau/gamma) and alpha' = (m a + 1)/((2m+1) a + 2).

    Membership of alpha is a hypothesis: a refuting verdict raises; an
    unknown verdict (tau = 1 has no tail bound) passes with a warning.  The
    transform matrix (m, 1; 2m+1, 2) always has determinant -1, so alpha' is
    equivalent to alpha; the shared tail is verified on the expansions."""
    params = DiophParams(gamma, tau)
    verdict = is_member(alpha, params, max_precision=max_precision)
    warning = None
    if verdict.kind == NOT_MEMBER:
        raise HypothesisViolation(
            f"alpha is not a member: {verdict.to_record()}")
    if verdict.kind == UNKNOWN:
        warning = ("membership not fully decided "
                   f"({verdict.reason}); proceeding on the checked range")
    m = certified_floor_3_2tau_over_gamma(gamma, tau, max_precision=max_precision)
    det = m * 2 - (2 * m + 1) * 1
    alpha_prime = mobius(alpha, m, 1, 2 * m + 1, 2)
    assert isinstance(alpha_prime, QuadIrr)
    if not tails_eventually_agree(alpha, alpha_prime):
        raise AssertionError("alpha and alpha' do not share a periodic tail")
    agreement = tail_agreement(alpha, alpha_prime)
    return Theorem2Instance(alpha=alpha, gamma=gamma, tau=tau, m=m,
                            alpha_prime=alpha_prime, determinant=det,
                            membership=verdict, agreement=agreement,
                            warning=warning)


# ---------------------------------------------------------------------------
# exploratory parameter search

@dataclass
class SearchHit:
    gamma: Value
    tau: Exponent
    certificate: IsolationCertificate

    def to_json(self) -> dict:
        return {
            "gamma": value_str(self.gamma),
            "tau": exponent_str(self.tau),
            "certificate": self.certificate.to_json(),
        }


def default_search_grid(tau_min: Exponent,
                        gamma_steps: int = 32, tau_steps: int = 32
                        ) -> list[tuple[Value, Exponent]]:
    """Rational grid gamma' in {k/64}, tau' = base + {j/16}, tau' > tau_min.

    For an irrational tau_min the base is a dyadic upper bound rounded up to
    the 1/16 grid, which keeps every tau' strictly above tau_min."""
    if tau_min.rat is not None:
        base = tau_min.rat
    else:
        hi = tau_min.enclosure(DEFAULT_PRECISION)[1]
        base = Fraction(-((-hi.numerator * 16) // hi.denominator), 16)
    grid = []
    for k in range(1, gamma_steps):
        for j in range(1, tau_steps + 1):
            grid.append((Fraction(k, 64), Exponent.rational(base + Fraction(j, 16))))
    return grid


def search_isolation_params(alpha_prime: QuadIrr, tau_min: Exponent,
                            grid: Optional[Sequence[tuple[Value, Exponent]]] = None,
                            convergent_range: int = 40,
                            max_precision: int = MAX_PRECISION) -> Optional[SearchHit]:
    """First grid point whose cover isolates alpha_prime between two touching
    excluded intervals; None on exhaustion (which refutes nothing).

    Only convergents can attain the exact boundary identity (a touching
    interval satisfies |alpha' - p/q| = gamma/q**(tau+1) < 1/(2 q^2)), so
    candidates are scanned along the convergents and then confirmed by an
    actual cover build plus the independent certifier."""
    if grid is None:
        grid = default_search_grid(tau_min)
    cf = expand(alpha_prime)
    for gamma, tau in grid:
        try:
            params = DiophParams(gamma, tau)
        except ValueError:
            continue
        if params.classification != "standard":
            continue
        if is_member(alpha_prime, params, max_precision=max_precision).kind != MEMBER:
            continue
        left = right = None
        for k in range(convergent_range + 1):
            p, q = cf.convergent(k)
            r = excluded_interval(p, q, params).exact_radius()
            if r is None:
                continue
            diff = alpha_prime - Fraction(p, q)
            if compare(diff, r) == 0:
                left = (p, q)
            elif compare(-diff, r) == 0:
                right = (p, q)
            if left and right:
                break
        if not (left and right):
            continue
        # the cover lives on a band around [0, 1]; confirm the touching
        # configuration at the integer translate of alpha' inside it
        shift = value_floor(alpha_prime)
        translated = alpha_prime - shift
        cover = build_cover(params, max(left[1], right[1]))
        touches = [t for t in find_touching_points(cover)
                   if t.confirmed and isinstance(t.xi, QuadIrr)
                   and compare(t.xi, translated) == 0]
        if not touches:
            continue
        result = certify_isolated(alpha_prime, params, left, right,
                                  max_precision=max_precision)
        if result.ok:
            return SearchHit(gamma=gamma, tau=tau, certificate=result.certificate)
    return None
