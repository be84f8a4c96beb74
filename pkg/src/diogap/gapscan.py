"""Excluded-interval covers, measure brackets, and isolated-point certificates.

`build_cover` assembles the union of all excluded intervals I(p, q) with
q <= Q over a guard band around [0, 1], merged into disjoint open components
with provenance.  Merging never bridges a gap it cannot prove is covered:
inexact radii are rounded inward (the reported cover is a subset of the true
union), so every exclusion claim stays sound, while outward hulls are kept so
that "not excluded by any q <= Q" claims are sound too.  Touching components
are detected only through exact endpoint equality; isolation of a point is
certified by membership plus two excluded intervals whose closures meet
exactly there.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Sequence

from .diocore import (
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
    power_enclosure,
    value_enclosure,
    value_str,
)

GRID_BITS = 128  # dyadic grid for measure accumulation
COVER_PRECISION = 128


@dataclass
class MergedInterval:
    """One disjoint open component of the cover, with provenance.

    `left`/`right` are exact endpoint values when `*_exact` is set; otherwise
    they are inward dyadic bounds (the true component extends at least this
    far).  `left_outer`/`right_outer` always bound the true endpoints from
    outside.  `sources` lists the contributing reduced fractions (p, q);
    `left_source`/`right_source` name the contributors whose interval attains
    each endpoint."""

    left: Value
    right: Value
    left_exact: bool
    right_exact: bool
    left_outer: Fraction
    right_outer: Fraction
    sources: tuple[tuple[int, int], ...]
    left_source: tuple[int, int]
    right_source: tuple[int, int]


@dataclass
class TouchingPoint:
    """Two adjacent components whose closures meet in a single point.

    `confirmed` requires exact symbolic equality of the facing endpoints;
    near-touches within rounding slack are reported unconfirmed, with the
    midpoint of the residual gap as candidate location."""

    xi: Value
    left_source: tuple[int, int]
    right_source: tuple[int, int]
    confirmed: bool


class _ObjectComponents:
    """Component storage for the symbolic path: plain MergedInterval list."""

    def __init__(self, components: list[MergedInterval]):
        self._comps = components

    def __len__(self) -> int:
        return len(self._comps)

    def component(self, i: int) -> MergedInterval:
        return self._comps[i]

    def left_value(self, i: int) -> Value:
        return self._comps[i].left

    def touching_pairs(self) -> list[TouchingPoint]:
        out = []
        for i in range(len(self._comps) - 1):
            a, b = self._comps[i], self._comps[i + 1]
            if a.right_exact and b.left_exact:
                if compare(a.right, b.left) == 0:
                    out.append(TouchingPoint(a.right, a.right_source,
                                             b.left_source, True))
            elif a.right_outer >= b.left_outer:
                lo = value_enclosure(a.right, GRID_BITS)[0]
                hi = value_enclosure(b.left, GRID_BITS)[1]
                out.append(TouchingPoint((lo + hi) / 2, a.right_source,
                                         b.left_source, False))
        return out


class _CompactComponents:
    """Integer-backed storage for the rational fast path (all endpoints exact).

    Items are kept in sweep order; each component is the contiguous run
    sp[start:start'], its left endpoint is the first item's left endpoint and
    its right endpoint is attained by (rp, rq).  MergedInterval views are
    materialized on demand."""

    def __init__(self, g1: int, mults: list[int], dens: list[int],
                 sp: list[int], sq: list[int], starts: list[int],
                 rp: list[int], rq: list[int],
                 band_lo: Fraction, band_hi: Fraction):
        self.g1, self.mults, self.dens = g1, mults, dens
        self.sp, self.sq = sp, sq
        self.starts, self.rp, self.rq = starts, rp, rq
        self.band_lo, self.band_hi = band_lo, band_hi

    def __len__(self) -> int:
        return len(self.starts)

    def _left_raw(self, i: int) -> tuple[int, int]:
        j = self.starts[i]
        q = self.sq[j]
        return self.sp[j] * self.mults[q] - self.g1, self.dens[q]

    def _right_raw(self, i: int) -> tuple[int, int]:
        q = self.rq[i]
        return self.rp[i] * self.mults[q] + self.g1, self.dens[q]

    def left_value(self, i: int) -> Fraction:
        return Fraction(*self._left_raw(i))

    def component(self, i: int) -> MergedInterval:
        j0 = self.starts[i]
        j1 = self.starts[i + 1] if i + 1 < len(self.starts) else len(self.sp)
        left = max(Fraction(*self._left_raw(i)), self.band_lo)
        right = min(Fraction(*self._right_raw(i)), self.band_hi)
        return MergedInterval(
            left=left, right=right, left_exact=True, right_exact=True,
            left_outer=left, right_outer=right,
            sources=tuple(zip(self.sp[j0:j1], self.sq[j0:j1])),
            left_source=(self.sp[j0], self.sq[j0]),
            right_source=(self.rp[i], self.rq[i]))

    def touching_pairs(self) -> list[TouchingPoint]:
        out = []
        for i in range(len(self.starts) - 1):
            rn, rd = self._right_raw(i)
            ln, ld = self._left_raw(i + 1)
            if rn * ld == ln * rd:
                j = self.starts[i + 1]
                out.append(TouchingPoint(Fraction(rn, rd),
                                         (self.rp[i], self.rq[i]),
                                         (self.sp[j], self.sq[j]), True))
        return out


class _LazyIntervals(Sequence):
    def __init__(self, impl):
        self._impl = impl

    def __len__(self) -> int:
        return len(self._impl)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self._impl.component(j) for j in range(*i.indices(len(self._impl)))]
        if i < 0:
            i += len(self._impl)
        return self._impl.component(i)


class IntervalCover:
    """Merged excluded-interval cover of the guard band for fixed (params, Q).

    Non-reduced fractions are skipped: I(p, q) with gcd(p, q) = g > 1 lies
    inside I(p/g, q/g) (same center, strictly larger radius), so the union is
    unchanged.  Construction is deterministic: items are ordered by exact
    endpoint comparison with (q, p) tie-breaks, independent of partitioning.
    """

    def __init__(self, params: DiophParams, Q: int, band: tuple[Value, Value],
                 precision: int, impl, covered_units_lo: int,
                 covered_units_hi: int, interval_count: int, all_exact: bool):
        self.params = params
        self.Q = Q
        self.band = band
        self.precision = precision
        self._impl = impl
        self.intervals = _LazyIntervals(impl)
        self.interval_count = interval_count
        self.all_exact = all_exact
        self._units_lo = covered_units_lo
        self._units_hi = covered_units_hi

    def __len__(self) -> int:
        return len(self._impl)

    def covered_length_bounds(self) -> tuple[Fraction, Fraction]:
        """Certified bounds on the length of (cover union) ∩ [0, 1]."""
        unit = Fraction(1, 1 << GRID_BITS)
        return self._units_lo * unit, self._units_hi * unit

    def point_status(self, x: Value) -> str:
        """"excluded" (interior of a component: certainly not a member),
        "outside" (beyond every outward hull: no q <= Q excludes it), or
        "boundary" (an endpoint or rounding shell; undecided here)."""
        n = len(self._impl)
        if n == 0:
            return "outside"
        lo, hi = 0, n - 1  # largest i with left(i) <= x (0 if none)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if compare(self._impl.left_value(mid), x) <= 0:
                lo = mid
            else:
                hi = mid - 1
        status = "outside"
        for i in (lo - 1, lo, lo + 1):
            if i < 0 or i >= n:
                continue
            comp = self._impl.component(i)
            if compare(x, comp.left) > 0 and compare(x, comp.right) < 0:
                return "excluded"
            if compare(x, comp.left_outer) >= 0 and compare(x, comp.right_outer) <= 0:
                status = "boundary"
        return status

    def to_csv(self, path: str) -> None:
        """Columns: left, right, endpoint kind, contributing p/q list."""
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write("left,right,endpoints,sources\n")
            for i in range(len(self._impl)):
                comp = self._impl.component(i)
                kind = "exact" if comp.left_exact and comp.right_exact else "inner-dyadic"
                srcs = ";".join(f"{p}/{q}" for p, q in comp.sources)
                fh.write(f"{value_str(comp.left)},{value_str(comp.right)},{kind},{srcs}\n")
        os.replace(tmp, path)


# ---------------------------------------------------------------------------
# cover construction

def _exact_radius(params: DiophParams, q: int) -> Optional[Value]:
    x = params.tau.pow_exact(q)
    if x is None:
        return None
    try:
        return params.gamma / (x * q)
    except CrossFieldError:
        return None


def _p_range(lo: Fraction, hi: Fraction) -> range:
    # integers p with lo < p < hi
    p_min = lo.numerator // lo.denominator + 1
    p_max = (hi.numerator - 1) // hi.denominator
    return range(p_min, p_max + 1)


def _grid_floor_ceil(length: Fraction) -> tuple[int, int]:
    t = length * (1 << GRID_BITS)
    fl = t.numerator // t.denominator
    return fl, (fl if t.denominator == 1 else fl + 1)


def _build_fast(params: DiophParams, Q: int, precision: int) -> IntervalCover:
    """Pure-integer engine: rational gamma and integer tau; endpoints exact."""
    g1 = params.gamma.numerator
    g2 = params.gamma.denominator
    e = int(params.tau.rat) + 1  # radius gamma / q**e
    band_lo = -params.gamma  # guard band delta = gamma, the radius at q = 1
    band_hi = 1 + params.gamma

    dens = [0] * (Q + 1)
    mults = [0] * (Q + 1)
    ps: list[int] = []
    qs: list[int] = []
    lefts: list[int] = []
    keys: list[float] = []
    for q in range(1, Q + 1):
        m = g2 * q ** (e - 1)
        den = m * q
        dens[q], mults[q] = den, m
        r = Fraction(g1, den)
        qf = float(q)
        rf = g1 / den
        for p in _p_range((band_lo - r) * q, (band_hi + r) * q):
            if math.gcd(p, q) != 1:
                continue
            ps.append(p)
            qs.append(q)
            lefts.append(p * m - g1)
            keys.append(p / qf - rf)

    n = len(ps)
    order = sorted(range(n), key=keys.__getitem__)
    # floats order correctly unless two keys collide or round together;
    # verify neighbours by cross-multiplication and re-insert locally
    for idx in range(1, n):
        i = order[idx]
        li, di, ti = lefts[i], dens[qs[i]], (qs[i], ps[i])
        j = idx - 1
        while j >= 0:
            k = order[j]
            a, b = li * dens[qs[k]], lefts[k] * di
            if a > b or (a == b and ti >= (qs[k], ps[k])):
                break
            order[j + 1] = k
            j -= 1
        order[j + 1] = i

    sp = [ps[i] for i in order]
    sq = [qs[i] for i in order]
    del ps, qs, lefts, keys, order

    starts: list[int] = []
    rps: list[int] = []
    rqs: list[int] = []
    units_lo = units_hi = 0

    def close(start: int, rn: int, rp: int, rq: int) -> None:
        nonlocal units_lo, units_hi
        starts.append(start)
        rps.append(rp)
        rqs.append(rq)
        # measure contribution on [0, 1]
        q0 = sq[start]
        ln, ld = sp[start] * mults[q0] - g1, dens[q0]
        rd = dens[rq]
        if rn > 0 and ln < ld:  # overlaps (0, 1)
            if ln < 0:
                ln, ld = 0, 1
            if rn > rd:
                rn, rd = 1, 1
            t, rem = divmod((rn * ld - ln * rd) << GRID_BITS, rd * ld)
            units_lo += t
            units_hi += t if rem == 0 else t + 1

    if n:
        cur_start = 0
        cur_rn = sp[0] * mults[sq[0]] + g1
        cur_rp, cur_rq = sp[0], sq[0]
        for i in range(1, n):
            q = sq[i]
            ln = sp[i] * mults[q] - g1
            ld = dens[q]
            rd = dens[cur_rq]
            if ln * rd < cur_rn * ld:  # strict overlap: merge
                rn_new = ln + 2 * g1
                if rn_new * rd > cur_rn * ld:
                    cur_rn, cur_rp, cur_rq = rn_new, sp[i], q
            else:  # gap or exact touch: close the component
                close(cur_start, cur_rn, cur_rp, cur_rq)
                cur_start = i
                cur_rn = ln + 2 * g1
                cur_rp, cur_rq = sp[i], q
        close(cur_start, cur_rn, cur_rp, cur_rq)

    impl = _CompactComponents(g1, mults, dens, sp, sq, starts, rps, rqs,
                              band_lo, band_hi)
    return IntervalCover(params, Q, (band_lo, band_hi), precision, impl,
                         units_lo, units_hi, n, all_exact=True)


def _build_general(params: DiophParams, Q: int, precision: int) -> IntervalCover:
    """Exact-or-enclosure path for symbolic radii (irrational gamma or tau)."""
    gb_lo, gb_hi = params.gamma_bounds(precision)
    band_lo: Value = -params.gamma
    band_hi: Value = 1 + params.gamma
    band_lo_f, band_hi_f = -gb_hi, 1 + gb_hi

    # item: (left, right, left_outer, right_outer, p, q, exact)
    items: list[tuple] = []
    all_exact = True
    for q in range(1, Q + 1):
        r = _exact_radius(params, q)
        if r is not None:
            r_lo, r_hi = value_enclosure(r, precision)
        else:
            pw = power_enclosure(q, params.tau, precision)
            r_lo = gb_lo / (pw.upper * q)
            r_hi = gb_hi / (pw.lower * q)
            all_exact = False
        for p in _p_range((band_lo_f - r_hi) * q, (band_hi_f + r_hi) * q):
            if math.gcd(p, q) != 1:
                continue
            c = Fraction(p, q)
            if r is not None:
                items.append((c - r, c + r, c - r_hi, c + r_hi, p, q, True))
            else:
                items.append((c - r_lo, c + r_lo, c - r_hi, c + r_hi, p, q, False))

    def cmp_items(x, y) -> int:
        c = compare(x[0], y[0])
        if c:
            return c
        kx, ky = (x[5], x[4]), (y[5], y[4])
        return -1 if kx < ky else (1 if kx > ky else 0)

    items.sort(key=cmp_to_key(cmp_items))

    def clip_left(v: Value, outer: Fraction) -> tuple[Value, Fraction]:
        if compare(v, band_lo) < 0:
            return band_lo, max(outer, band_lo_f)
        return v, outer

    def clip_right(v: Value, outer: Fraction) -> tuple[Value, Fraction]:
        if compare(v, band_hi) > 0:
            return band_hi, min(outer, band_hi_f)
        return v, outer

    components: list[MergedInterval] = []
    cur: Optional[list] = None
    for left, right, louter, router, p, q, exact in items:
        if cur is not None and compare(left, cur[1]) < 0:  # strict overlap
            cur[6].append((p, q))
            if compare(right, cur[1]) > 0:
                cur[1], cur[5], cur[8] = right, (p, q), exact
            if router > cur[3]:
                cur[3] = router
        else:
            if cur is not None:
                components.append(_finish(cur, clip_left, clip_right))
            cur = [left, right, louter, router, (p, q), (p, q), [(p, q)], exact, exact]
    if cur is not None:
        components.append(_finish(cur, clip_left, clip_right))

    # boundary-touchers clip to empty interior within the band; drop them
    components = [c for c in components if compare(c.left, c.right) < 0]

    units_lo = units_hi = 0
    zero, one = Fraction(0), Fraction(1)
    for comp in components:
        l_hi = value_enclosure(comp.left, GRID_BITS)[1]
        r_lo = value_enclosure(comp.right, GRID_BITS)[0]
        inner = max(min(r_lo, one) - max(l_hi, zero), zero)
        outer = max(min(comp.right_outer, one) - max(comp.left_outer, zero), zero)
        units_lo += _grid_floor_ceil(inner)[0]
        units_hi += _grid_floor_ceil(outer)[1]

    return IntervalCover(params, Q, (band_lo, band_hi), precision,
                         _ObjectComponents(components), units_lo, units_hi,
                         len(items), all_exact)


def _finish(cur, clip_left, clip_right) -> MergedInterval:
    left, louter = clip_left(cur[0], cur[2])
    right, router = clip_right(cur[1], cur[3])
    return MergedInterval(
        left=left, right=right, left_exact=cur[7], right_exact=cur[8],
        left_outer=louter, right_outer=router, sources=tuple(cur[6]),
        left_source=cur[4], right_source=cur[5])


def build_cover(params: DiophParams, Q: int,
                precision: int = COVER_PRECISION) -> IntervalCover:
    """Merged cover of the guard band [-delta, 1+delta], delta = radius at q=1.

    Deterministic for fixed inputs.  Rational gamma with integer tau runs on
    the pure-integer engine; anything symbolic takes the exact/enclosure path
    (slower; intended for moderate Q).
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if params.is_full:
        impl = _ObjectComponents([])
        return IntervalCover(params, Q, (Fraction(0), Fraction(1)), precision,
                             impl, 0, 0, 0, True)
    if isinstance(params.gamma, Fraction) and params.tau.rat is not None \
            and params.tau.rat.denominator == 1:
        return _build_fast(params, Q, precision)
    return _build_general(params, Q, precision)


# ---------------------------------------------------------------------------
# measure bounds

@dataclass
class MeasureBounds:
    """Certified bracket for the Lebesgue measure of (the set) ∩ [0, 1].

    upper = 1 - (certified lower bound on covered length); lower comes from
    subtracting the q > Q tail bound as well.  divergent_tail marks tau = 1,
    where the series bound fails and lower degrades to 0 with a flag."""

    lower: Fraction
    upper: Fraction
    tail_bound: Fraction
    covered_lower: Fraction
    covered_upper: Fraction
    divergent_tail: bool = False

    def to_json(self) -> dict:
        return {
            "lower": str(self.lower),
            "upper": str(self.upper),
            "tail_bound": str(self.tail_bound),
            "covered_lower": str(self.covered_lower),
            "covered_upper": str(self.covered_upper),
            "divergent_tail": self.divergent_tail,
        }


def _rational_power_bounds(s: Fraction, tau: Exponent,
                           precision: int) -> tuple[Fraction, Fraction]:
    """Bounds on s**tau for rational s >= 1."""
    nb = power_enclosure(s.numerator, tau, precision)
    db = power_enclosure(s.denominator, tau, precision)
    return nb.lower / db.upper, nb.upper / db.lower


def tail_series_bound(params: DiophParams, Q: int,
                      shift: Fraction = Fraction(0),
                      precision: int = DEFAULT_PRECISION) -> Optional[Fraction]:
    """Rational upper bound on sum_{q>Q} (q+1) * 2*gamma / q**(tau+1).

    Integral comparison from S = Q + shift: the summand x -> (x+1)/x**(tau+1)
    is decreasing and convex, so shift 0 is the plain bound and shift 1/2 the
    tighter midpoint form, both rigorous.  Returns None for tau = 1 (the
    series diverges at the bounding rate; no finite bound of this form).
    """
    if params.is_full:
        return Fraction(0)
    if params.tau.is_one():
        return None
    g_hi = params.gamma_bounds(precision)[1]
    s = Q + shift
    if params.tau.rat is not None:
        t = params.tau.rat
        s_pow_lo = _rational_power_bounds(s, params.tau, precision)[0]
        return 2 * g_hi * ((s / s_pow_lo) / (t - 1) + (1 / s_pow_lo) / t)
    # log-ratio tau: any certified rational lower bound t_lo > 1 gives a
    # larger integral, hence still an upper bound on the series
    work = precision
    while True:
        t_lo = params.tau.enclosure(work)[0]
        if t_lo > 1:
            break
        work *= 2
        if work > MAX_PRECISION:
            raise ArithmeticError("cannot separate tau from 1 within precision ceiling")
    proxy = Exponent.rational(t_lo)
    s_pow_lo = _rational_power_bounds(s, proxy, precision)[0]
    return 2 * g_hi * ((s / s_pow_lo) / (t_lo - 1) + (1 / s_pow_lo) / t_lo)


def measure_bounds(cover: IntervalCover) -> MeasureBounds:
    """Two-sided measure bracket from a built cover.

    The reported tail_bound is the plain integral comparison at Q.  The
    uncertainty actually spent is the tighter midpoint-shifted bound plus the
    dyadic accumulation slack; the bracket uses the plain bound only after
    verifying it dominates that sum (else it falls back to the safe form)."""
    params, Q = cover.params, cover.Q
    cov_lo, cov_hi = cover.covered_length_bounds()
    upper = 1 - cov_lo
    upper = Fraction(0) if upper < 0 else (Fraction(1) if upper > 1 else upper)
    tb = tail_series_bound(params, Q)
    if tb is None:
        return MeasureBounds(Fraction(0), upper, Fraction(0),
                             cov_lo, cov_hi, divergent_tail=True)
    dust = cov_hi - cov_lo
    tight = tail_series_bound(params, Q, shift=Fraction(1, 2))
    if tight is not None and tight + dust <= tb:
        lower = upper - tb
    else:
        lower = 1 - cov_hi - tb
    if lower < 0:
        lower = Fraction(0)
    if lower > upper:
        lower = upper
    return MeasureBounds(lower, upper, tb, cov_lo, cov_hi)


# ---------------------------------------------------------------------------
# touching detection and isolation certificates

def find_touching_points(cover: IntervalCover) -> list[TouchingPoint]:
    """All adjacent component pairs whose closures meet in one point.

    Confirmed entries carry the exact shared endpoint; near-touches within
    rounding slack come back unconfirmed (candidates, not certificates)."""
    return cover._impl.touching_pairs()


@dataclass
class IsolationCertificate:
    """Machine-checked witness that xi is an isolated member.

    Both boundary identities hold exactly (symbolically): xi - p/q equals the
    radius of I(p, q), and p'/q' - xi equals the radius of I(p', q').  The two
    open intervals flank xi and meet exactly there, so together with the
    membership verdict every sufficiently small punctured neighbourhood of xi
    misses the set."""

    xi: QuadIrr
    params: DiophParams
    left: tuple[int, int]
    right: tuple[int, int]
    left_radius: Value
    right_radius: Value
    membership: MembershipVerdict

    def puncture_radius(self) -> Value:
        """Half the smaller radius: a safe h for punctured-neighbourhood checks."""
        r = self.left_radius if compare(self.left_radius, self.right_radius) <= 0 \
            else self.right_radius
        return r / 2

    def to_json(self) -> dict:
        return {
            "xi": value_str(self.xi),
            "gamma": value_str(self.params.gamma),
            "tau": exponent_str(self.params.tau),
            "left_p": self.left[0],
            "left_q": self.left[1],
            "left_radius": value_str(self.left_radius),
            "right_p": self.right[0],
            "right_q": self.right[1],
            "right_radius": value_str(self.right_radius),
            "membership": self.membership.to_json(),
        }


@dataclass
class CertificationResult:
    """certify_isolated outcome: a certificate, a structured rejection naming
    each failed clause, or incomplete when membership came back unknown."""

    certificate: Optional[IsolationCertificate]
    failures: list[str]
    incomplete: bool
    membership: Optional[MembershipVerdict]

    @property
    def ok(self) -> bool:
        return self.certificate is not None


def certify_isolated(xi: QuadIrr, params: DiophParams,
                     left: tuple[int, int], right: tuple[int, int],
                     max_precision: int = MAX_PRECISION) -> CertificationResult:
    """Certify xi as isolated via two flanking excluded intervals.

    Clause (a): membership of xi.  Clause (b): exact boundary identities
    xi - p/q = radius(q) on the left and p'/q' - xi = radius(q') on the right.
    All failed clauses are reported together; an unknown membership verdict
    yields certification-incomplete rather than a rejection."""
    failures: list[str] = []
    if not isinstance(xi, QuadIrr):
        return CertificationResult(None, ["xi must be a quadratic irrational"],
                                   False, None)
    verdict = is_member(xi, params, max_precision=max_precision)
    incomplete = verdict.kind == UNKNOWN
    if verdict.kind == NOT_MEMBER:
        failures.append(f"membership: {verdict.to_record()}")

    def boundary(pq: tuple[int, int], side: str) -> Optional[Value]:
        p, q = pq
        iv = excluded_interval(p, q, params)
        r = iv.exact_radius()
        if r is None:
            failures.append(f"{side} radius gamma/q**(tau+1) at q={q} "
                            "is not exactly representable")
            return None
        diff = xi - Fraction(p, q) if side == "left" else Fraction(p, q) - xi
        if compare(diff, r) != 0:
            failures.append(f"{side} boundary identity fails at (p, q) = ({p}, {q})")
            return None
        return r

    lr = boundary(left, "left")
    rr = boundary(right, "right")
    if failures or incomplete or lr is None or rr is None:
        return CertificationResult(None, failures, incomplete, verdict)
    cert = IsolationCertificate(xi=xi, params=params, left=left, right=right,
                                left_radius=lr, right_radius=rr, membership=verdict)
    return CertificationResult(cert, [], False, verdict)


def touching_survey(params_list: list[DiophParams], Q: int,
                    precision: int = COVER_PRECISION) -> list[dict]:
    """Observational scan over parameter sets: build each cover, list touching
    candidates, attempt certification at the confirmed ones.  Records only."""
    records = []
    for params in params_list:
        cover = build_cover(params, Q, precision)
        touches = find_touching_points(cover)
        certified = 0
        for t in touches:
            if not t.confirmed or not isinstance(t.xi, QuadIrr):
                continue
            if certify_isolated(t.xi, params, t.left_source, t.right_source).ok:
                certified += 1
        records.append({
            "gamma": value_str(params.gamma),
            "tau": exponent_str(params.tau),
            "Q": Q,
            "components": len(cover),
            "touching_confirmed": sum(1 for t in touches if t.confirmed),
            "touching_unconfirmed": sum(1 for t in touches if not t.confirmed),
            "isolation_certificates": certified,
        })
    return records
