"""Continued fractions of rationals and quadratic irrationals.

Expansion is exact: partial quotients come from `value_floor`, complete
quotients are field elements, and the period of a quadratic irrational is
detected by recurrence of a canonical complete quotient, so no false periods
can be reported.  Convergents are cached lazily per expansion.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import (
    QuadIrr,
    Value,
    make_quad,
    mobius,
    value_inverse,
    value_str,
)

# generous cap on the search for a recurring complete quotient; valid inputs
# repeat long before this (Lagrange), the cap only guards against bugs
_PERIOD_SEARCH_CAP = 20000


class PeriodNotFoundError(RuntimeError):
    """No recurring complete quotient within the search bound (should not
    occur for a valid quadratic irrational); carries the partial expansion."""

    def __init__(self, quotients: list[int]):
        super().__init__(f"no period within {len(quotients)} quotients")
        self.partial = quotients


class CFExpansion:
    """Continued fraction [a0; preperiod..., (period...)] of an exact value.

    `period` is empty exactly when the source is rational (the finite
    expansion is canonical: last quotient >= 2 unless it is just [a0]).
    Partial quotients, convergents and complete quotients are all available
    for arbitrary k; the convergent table grows on demand and the complete
    quotients of a periodic expansion are answered from the period cache.
    """

    def __init__(self, a0: int, preperiod: Sequence[int], period: Sequence[int],
                 source: Value, complete: Sequence[Value], cycle_start: int = 0):
        self.a0 = a0
        self.preperiod = tuple(preperiod)
        self.period = tuple(period)
        self.source = source
        self._complete = list(complete)  # x_0, x_1, ... as far as computed
        self._cycle_start = cycle_start  # index where complete quotients recur
        self._rows: list[tuple[int, int]] = [(1, 0), (a0, 1)]  # p,q for k = -1, 0
        self._lock = threading.Lock()

    # -- structure ----------------------------------------------------------

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def quotient_count(self) -> Optional[int]:
        """Number of partial quotients for a rational source, None if infinite."""
        if self.period:
            return None
        return 1 + len(self.preperiod)

    def partial_quotient(self, k: int) -> int:
        if k < 0:
            raise IndexError("partial quotients start at k = 0")
        if k == 0:
            return self.a0
        i = k - 1
        if i < len(self.preperiod):
            return self.preperiod[i]
        if self.period:
            return self.period[(i - len(self.preperiod)) % len(self.period)]
        raise IndexError(f"finite expansion has {1 + len(self.preperiod)} quotients")

    def max_partial_quotient(self) -> int:
        """Largest a_k over k >= 1 (preperiod and period, or the rational tail)."""
        tail = self.preperiod + self.period
        if not tail:
            raise ValueError("expansion [a0] has no quotients past a0")
        return max(tail)

    # -- convergents ----------------------------------------------------------

    def convergent(self, k: int) -> tuple[int, int]:
        """(p_k, q_k) with p_{-1} = 1, q_{-1} = 0; exact recurrence values."""
        if k < -1:
            raise IndexError("convergents start at k = -1")
        if k + 2 > len(self._rows):
            with self._lock:
                while k + 2 > len(self._rows):
                    j = len(self._rows) - 1  # next index to fill
                    a = self.partial_quotient(j)
                    p1, q1 = self._rows[-1]
                    p0, q0 = self._rows[-2]
                    self._rows.append((a * p1 + p0, a * q1 + q0))
        return self._rows[k + 1]

    def complete_quotient(self, k: int) -> Value:
        """x_k = [a_k; a_{k+1}, ...], an exact field element."""
        if k < 0:
            raise IndexError("complete quotients start at k = 0")
        if k < len(self._complete):
            return self._complete[k]
        if not self.period:
            raise IndexError(f"finite expansion has {len(self._complete)} complete quotients")
        j = self._cycle_start
        return self._complete[j + (k - j) % len(self.period)]

    # -- text form ------------------------------------------------------------

    def to_text(self) -> str:
        """"[a0; a1, a2, (b1, b2, ...)]" with parentheses around the period."""
        parts = [str(q) for q in self.preperiod]
        if self.period:
            parts.append("(" + ", ".join(str(q) for q in self.period) + ")")
        if not parts:
            return f"[{self.a0}]"
        return f"[{self.a0}; " + ", ".join(parts) + "]"

    @staticmethod
    def parse_text(text: str) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """Inverse of to_text; returns (a0, preperiod, period)."""
        m = re.match(r"^\[(-?\d+)(?:;(.*))?\]$", text.replace(" ", ""))
        if not m:
            raise ValueError(f"unparsable continued fraction: {text!r}")
        a0 = int(m.group(1))
        rest = m.group(2) or ""
        pm = re.search(r"\(([^)]*)\)$", rest)
        period: tuple[int, ...] = ()
        if pm:
            period = tuple(int(t) for t in pm.group(1).split(",") if t)
            rest = rest[: pm.start()].rstrip(",")
        pre = tuple(int(t) for t in rest.split(",") if t)
        return a0, pre, period

    def __eq__(self, other):
        if not isinstance(other, CFExpansion):
            return NotImplemented
        return (self.a0, self.preperiod, self.period) == (other.a0, other.preperiod, other.period)

    def __repr__(self):
        return f"CFExpansion({self.to_text()} of {value_str(self.source)})"


def expand(x: Value, k_max: int = _PERIOD_SEARCH_CAP) -> CFExpansion:
    """Continued fraction expansion of an exact value.

    Rationals get their finite canonical expansion.  Quadratic irrationals are
    expanded until a complete quotient recurs; the recurrence is detected on
    canonical field elements, which guarantees the reported preperiod and
    period are minimal.
    """
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        quotients: list[int] = []
        complete: list[Value] = []
        v: Fraction = x
        while True:
            complete.append(v)
            a = math.floor(v)
            quotients.append(a)
            if v == a:
                break
            v = 1 / (v - a)
        return CFExpansion(quotients[0], quotients[1:], (), x, complete)

    seen: dict[QuadIrr, int] = {}
    quotients = []
    complete = []
    v = x
    bound = max(k_max, 1)
    for k in range(bound + 1):
        assert isinstance(v, QuadIrr)
        if v in seen:
            j = seen[v]
            block = quotients[j:]
            if j == 0:
                # purely periodic: rotate the block past a0
                pre: tuple[int, ...] = ()
                period = tuple(block[1:] + block[:1])
            else:
                pre = tuple(quotients[1:j])
                period = tuple(block)
            return CFExpansion(quotients[0], pre, period, x, complete, cycle_start=j)
        seen[v] = k
        complete.append(v)
        a = v.floor()
        quotients.append(a)
        v = value_inverse(v - a)
    raise PeriodNotFoundError(quotients)


def convergents(cf: CFExpansion, k: int) -> tuple[int, int]:
    return cf.convergent(k)


def _block_matrix(block: Sequence[int]) -> tuple[int, int, int, int]:
    # product of [[b, 1], [1, 0]] over the block
    m00, m01, m10, m11 = 1, 0, 0, 1
    for b in block:
        m00, m01, m10, m11 = m00 * b + m01, m00, m10 * b + m11, m10
    return m00, m01, m10, m11


def from_periodic(a0: int, preperiod: Sequence[int], period: Sequence[int]) -> QuadIrr:
    """Value of [a0; preperiod..., (period...)], the period repeating forever.

    Solves the fixed-point quadratic of the periodic tail, then folds the
    prefix back in; expand() on the result reproduces the canonical lists.
    """
    period = list(period)
    preperiod = list(preperiod)
    if not period:
        raise ValueError("invalid input: period must be non-empty")
    if any(b < 1 for b in preperiod + period):
        raise ValueError("invalid input: quotients after a0 must be >= 1")
    P, Pp, Q, Qp = _block_matrix(period)
    # tail y = (P*y + Pp)/(Q*y + Qp)  =>  Q y^2 + (Qp - P) y - Pp = 0.
    # The coefficient vector is an integer multiple of y's primitive minimal
    # polynomial; divide it out first, else the raw discriminant carries a
    # huge square factor that squarefree reduction would have to factor.
    g = math.gcd(math.gcd(Q, abs(Qp - P)), Pp)
    A, B, C = Q // g, (Qp - P) // g, -Pp // g
    disc = B * B - 4 * A * C
    y = make_quad(-B, 1, 2 * A, disc)
    if not isinstance(y, QuadIrr):
        raise ValueError("period does not define an irrational tail")
    prefix = [a0] + preperiod
    pm00, pm01, pm10, pm11 = _block_matrix(prefix)
    out = (pm00 * y + pm01) / (pm10 * y + pm11)
    assert isinstance(out, QuadIrr)
    return out


def from_purely_periodic(block: Sequence[int]) -> QuadIrr:
    """Value of the purely periodic fraction [(b1, b2, ..., bm)] repeating
    from the very first quotient, e.g. [(3, 1, 1)] = (3+sqrt(17))/2."""
    block = list(block)
    if not block:
        raise ValueError("invalid input: period must be non-empty")
    return from_periodic(block[0], (), block[1:] + block[:1])


def equivalent_by(x: QuadIrr, a: int, b: int, c: int, d: int) -> QuadIrr:
    """Unimodular Moebius image (a*x + b)/(c*x + d), ad - bc = +-1.

    The result shares its continued-fraction tail with x from some index on.
    """
    if a * d - b * c not in (1, -1):
        raise ValueError("invalid input: matrix must be unimodular (ad - bc = +-1)")
    out = mobius(x, a, b, c, d)
    assert isinstance(out, QuadIrr)  # unimodular maps preserve irrationality
    return out


def _rotations(t: tuple[int, ...]):
    return {t[i:] + t[:i] for i in range(len(t))}


def tail_agreement(x: QuadIrr, y: QuadIrr, search: int = 50) -> Optional[tuple[int, int]]:
    """Smallest (i, j) with the complete quotients x_i == y_j, scanning up to
    `search` on each side; from there the two expansions coincide forever.
    Returns None when no common tail is found in range."""
    cx, cy = expand(x), expand(y)
    index_y: dict[Value, int] = {}
    for j in range(search + 1):
        v = cy.complete_quotient(j)
        if v not in index_y:
            index_y[v] = j
    for i in range(search + 1):
        j = index_y.get(cx.complete_quotient(i))
        if j is not None:
            return i, j
    return None


def tails_eventually_agree(x: QuadIrr, y: QuadIrr) -> bool:
    """True iff the periodic parts are cyclic rotations of one another."""
    px, py = expand(x).period, expand(y).period
    return len(px) == len(py) and py in _rotations(px)
