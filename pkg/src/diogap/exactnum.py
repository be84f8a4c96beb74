"""Exact arithmetic over rationals and real quadratic fields.

Scalars are either `fractions.Fraction` or `QuadIrr`, a canonical quadratic
irrational (a + b*sqrt(d))/c.  Every comparison between such values is decided
symbolically; floating point never enters a decision.  Quantities that leave
the quadratic world -- q**t with an irrational exponent -- are handled by
`Enclosure`, a two-sided dyadic bound with directed rounding.
"""

from __future__ import annotations

import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Optional, Union

import gmpy2

Rational = Fraction
Value = Union[Fraction, "QuadIrr"]

DEFAULT_PRECISION = 64
MAX_PRECISION = 4096

LT, EQ, GT = -1, 0, 1


class UnsupportedFieldError(ValueError):
    """Input describes a value outside the real quadratic fields."""


class CrossFieldError(ArithmeticError):
    """Exact arithmetic between incompatible quadratic fields was attempted."""


class PrecisionExhausted(ArithmeticError):
    """A decision could not be made within the configured precision ceiling."""


# ---------------------------------------------------------------------------
# integer helpers

def int_nthroot(n: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of n >= 0, with an exactness flag."""
    if n < 0 or k < 1:
        raise ValueError("int_nthroot requires n >= 0 and k >= 1")
    if k == 1 or n in (0, 1):
        return n, True
    if k == 2:
        r = math.isqrt(n)
        return r, r * r == n
    x = 1 << -(-n.bit_length() // k)  # power of two >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x, x ** k == n


def squarefree_decompose(d: int) -> tuple[int, int]:
    """Write d > 0 as f*f*d0 with d0 squarefree; returns (f, d0)."""
    if d <= 0:
        raise ValueError("squarefree_decompose requires d > 0")
    f, d0, m = 1, 1, d
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                d0 *= p
        p += 1 if p == 2 else 2
    return f, d0 * m


def exact_power_of(q: int, n: int) -> Optional[int]:
    """j with q == n**j, or None.  Requires q >= 1, n >= 2."""
    j = 0
    while q > 1:
        if q % n:
            return None
        q //= n
        j += 1
    return j


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_with_radical(A: Fraction, B: Fraction, d: int) -> int:
    """Exact sign of A + B*sqrt(d) for rational A, B and squarefree d > 1."""
    if B == 0:
        return _sign(A)
    if B < 0:
        return -_sign_with_radical(-A, -B, d)
    if A >= 0:
        return 1
    # A < 0 < B: sign decided by B^2 d vs A^2 (equality impossible, d nonsquare)
    return 1 if B * B * d > A * A else -1


# ---------------------------------------------------------------------------
# quadratic irrationals

def _normalize_quad(a: int, b: int, c: int, d: int):
    """Reduce (a + b*sqrt(d))/c; returns a Fraction or a canonical tuple."""
    if c == 0:
        raise ValueError("invalid input: denominator c must be nonzero")
    if d <= 0:
        raise UnsupportedFieldError("need d > 0: only real quadratic fields are supported")
    f, d0 = squarefree_decompose(d)
    b *= f
    if d0 == 1:
        return Fraction(a + b, c)
    if b == 0:
        return Fraction(a, c)
    if c < 0:
        a, b, c = -a, -b, -c
    g = math.gcd(math.gcd(abs(a), abs(b)), c)
    return (a // g, b // g, c // g, d0)


class QuadIrr:
    """Canonical quadratic irrational (a + b*sqrt(d))/c.

    Invariants: d squarefree > 1, b != 0, c >= 1, gcd(a, b, c) = 1.  Equal
    values have identical field tuples, so equality and hashing are structural.
    Arithmetic stays inside Q(sqrt(d)), collapses to Fraction when the
    irrational part cancels, and raises CrossFieldError when two distinct
    fields would have to mix.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int = 1, d: int = 2):
        norm = _normalize_quad(a, b, c, d)
        if isinstance(norm, Fraction):
            raise ValueError("value is rational; use Fraction (or make_quad)")
        self.a, self.b, self.c, self.d = norm

    @classmethod
    def _wrap(cls, a: int, b: int, c: int, d: int) -> "QuadIrr":
        # trusted canonical data, skip renormalization
        self = object.__new__(cls)
        self.a, self.b, self.c, self.d = a, b, c, d
        return self

    # -- representation ----------------------------------------------------

    def parts(self) -> tuple[Fraction, Fraction]:
        """Value as r + s*sqrt(d) with rational r, s."""
        return Fraction(self.a, self.c), Fraction(self.b, self.c)

    def conjugate(self) -> "QuadIrr":
        return QuadIrr._wrap(self.a, -self.b, self.c, self.d)

    def __repr__(self) -> str:
        return f"QuadIrr({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        return f"({self.a}+{self.b}*sqrt({self.d}))/{self.c}"

    def __float__(self) -> float:
        return float(Fraction(self.a, self.c)) + float(Fraction(self.b, self.c)) * math.sqrt(self.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _from_parts(r: Fraction, s: Fraction, d: int) -> Value:
        if s == 0:
            return r
        den = (r.denominator * s.denominator) // math.gcd(r.denominator, s.denominator)
        a = r.numerator * (den // r.denominator)
        b = s.numerator * (den // s.denominator)
        g = math.gcd(math.gcd(abs(a), abs(b)), den)
        return QuadIrr._wrap(a // g, b // g, den // g, d)

    def _coerce(self, other) -> Optional[tuple[Fraction, Fraction]]:
        if isinstance(other, QuadIrr):
            if other.d != self.d:
                raise CrossFieldError(f"cannot mix sqrt({self.d}) and sqrt({other.d}) exactly")
            return other.parts()
        if isinstance(other, int):
            return Fraction(other), Fraction(0)
        if isinstance(other, Fraction):
            return other, Fraction(0)
        return None

    def __add__(self, other) -> Value:
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        r, s = self.parts()
        return QuadIrr._from_parts(r + parts[0], s + parts[1], self.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadIrr":
        return QuadIrr._wrap(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other) -> Value:
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        r, s = self.parts()
        return QuadIrr._from_parts(r - parts[0], s - parts[1], self.d)

    def __rsub__(self, other) -> Value:
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        r, s = self.parts()
        return QuadIrr._from_parts(parts[0] - r, parts[1] - s, self.d)

    def __mul__(self, other) -> Value:
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        r, s = self.parts()
        u, v = parts
        return QuadIrr._from_parts(r * u + s * v * self.d, r * v + s * u, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadIrr":
        r, s = self.parts()
        norm = r * r - s * s * self.d  # nonzero: the value is irrational
        out = QuadIrr._from_parts(r / norm, -s / norm, self.d)
        assert isinstance(out, QuadIrr)
        return out

    def __truediv__(self, other) -> Value:
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        u, v = parts
        if u == 0 and v == 0:
            raise ZeroDivisionError("division by zero")
        r, s = self.parts()
        norm = u * u - v * v * self.d
        return QuadIrr._from_parts(
            (r * u - s * v * self.d) / norm, (s * u - r * v) / norm, self.d
        )

    def __rtruediv__(self, other) -> Value:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int) -> Value:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out: Value = Fraction(1)
        base: Value = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    # -- order --------------------------------------------------------------

    def sign(self) -> int:
        return _sign_with_radical(Fraction(self.a, self.c), Fraction(self.b, self.c), self.d)

    def floor(self) -> int:
        """Greatest integer <= value, decided exactly."""
        s = math.isqrt(self.b * self.b * self.d)
        if self.b < 0:
            s = -s - 1  # floor(b*sqrt(d)) for negative b; b*sqrt(d) irrational
        return (self.a + s) // self.c

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadIrr):
            return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # canonical QuadIrr is never rational
        return NotImplemented

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0


def make_quad(a: int, b: int, c: int, d: int) -> Value:
    """Normalize (a + b*sqrt(d))/c, collapsing to Fraction when rational.

    Raises ValueError for c = 0 and UnsupportedFieldError for d <= 0.
    """
    norm = _normalize_quad(a, b, c, d)
    if isinstance(norm, Fraction):
        return norm
    return QuadIrr._wrap(*norm)


def compare(x: Value, y: Value) -> int:
    """Exact trichotomy (-1, 0, +1) for rationals and quadratic irrationals.

    Works across distinct fields: the sign of A + B*sqrt(d1) - C*sqrt(d2) is
    resolved by at most two squarings, never by approximation.
    """
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(y, int):
        y = Fraction(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return _sign(x - y)
    if isinstance(x, Fraction):
        return -compare(y, x)
    if isinstance(y, (Fraction, QuadIrr)) and (
        isinstance(y, Fraction) or x.d == y.d
    ):
        r, s = x.parts()
        u, v = (y, Fraction(0)) if isinstance(y, Fraction) else y.parts()
        return _sign_with_radical(r - u, s - v, x.d)
    # distinct fields: x - y = A + B*sqrt(d1) - C*sqrt(d2), B, C != 0
    r, s = x.parts()
    u, v = y.parts()
    A, B, C = r - u, s, v
    left_sign = _sign_with_radical(A, B, x.d)
    right_sign = _sign(C)
    if left_sign != right_sign:
        return 1 if left_sign > right_sign else -1
    # same nonzero sign: compare squares, one radical survives
    t_rat = A * A + B * B * x.d - C * C * y.d
    sigma = _sign_with_radical(t_rat, 2 * A * B, x.d)
    if sigma == 0:
        raise AssertionError("distinct squarefree fields cannot produce equal values")
    return sigma if left_sign > 0 else -sigma


def value_sign(x: Value) -> int:
    if isinstance(x, QuadIrr):
        return x.sign()
    return _sign(x)


def value_abs(x: Value) -> Value:
    return -x if value_sign(x) < 0 else x


def value_floor(x: Value) -> int:
    if isinstance(x, QuadIrr):
        return x.floor()
    return math.floor(x)


def value_inverse(x: Value) -> Value:
    if isinstance(x, QuadIrr):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("division by zero")
    return 1 / x


def mobius(x: Value, a: int, b: int, c: int, d: int) -> Value:
    """Exact Moebius image (a*x + b)/(c*x + d)."""
    den = c * x + d
    if value_sign(den) == 0:
        raise ZeroDivisionError("Moebius denominator c*x + d vanishes")
    return (a * x + b) / den


def float_approx(x: Value) -> float:
    return float(x)


# ---------------------------------------------------------------------------
# exponents

_ONE = Fraction(1)


class Exponent:
    """The exponent t of a power q**t.

    Two forms are supported, the only ones the rest of the package needs:
    an exact rational t >= 1, or log(alpha)/log(base) for a quadratic
    irrational alpha > base >= 2.  In the second form base**t == alpha holds
    by construction and is used for exact power reduction.
    """

    __slots__ = ("rat", "alpha", "base")

    def __init__(self, rat: Optional[Fraction], alpha: Optional[QuadIrr], base: Optional[int]):
        self.rat = rat
        self.alpha = alpha
        self.base = base

    @classmethod
    def rational(cls, t) -> "Exponent":
        t = Fraction(t)
        if t < 1:
            raise ValueError(f"exponent t must be >= 1, got {t}")
        return cls(t, None, None)

    @classmethod
    def log_ratio(cls, alpha: QuadIrr, base: int) -> "Exponent":
        if not isinstance(alpha, QuadIrr):
            raise TypeError("log-ratio exponent needs a quadratic irrational alpha")
        if base < 2:
            raise ValueError("log-ratio base must be an integer >= 2")
        if compare(alpha, Fraction(base)) <= 0:
            raise ValueError("need alpha > base so the exponent exceeds 1")
        return cls(None, alpha, base)

    @property
    def is_rational(self) -> bool:
        return self.rat is not None

    def is_one(self) -> bool:
        return self.rat == 1

    def __eq__(self, other):
        if not isinstance(other, Exponent):
            return NotImplemented
        return (self.rat, self.alpha, self.base) == (other.rat, other.alpha, other.base)

    def __hash__(self):
        return hash((self.rat, self.alpha, self.base))

    def __repr__(self):
        return f"Exponent.parse({exponent_str(self)!r})"

    def compare_rational(self, r) -> int:
        """Exact trichotomy of self against a rational r."""
        r = Fraction(r)
        if self.rat is not None:
            return _sign(self.rat - r)
        # log(alpha)/log(base) vs u/v  <=>  alpha**v vs base**u (all > 1)
        u, v = r.numerator, r.denominator
        if u < 0:
            return 1
        lhs = self.alpha ** v
        return compare(lhs, Fraction(self.base) ** u)

    def pow_exact(self, q: int) -> Optional[Value]:
        """Exact value of q**self when it reduces, else None.

        Rational exponents u/v reduce exactly when q is a perfect v-th power;
        log-ratio exponents reduce exactly when q is a power of the base,
        giving alpha**j.
        """
        if q < 1:
            raise ValueError("powers are only taken for q >= 1")
        if q == 1:
            return _ONE
        if self.rat is not None:
            u, v = self.rat.numerator, self.rat.denominator
            root, exact = int_nthroot(q, v)
            if exact:
                return Fraction(root ** u)
            return None
        j = exact_power_of(q, self.base)
        if j is None:
            return None
        return self.alpha ** j

    def enclosure(self, precision: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
        """Dyadic bounds lo <= t <= hi at the given precision."""
        if self.rat is not None:
            return self.rat, self.rat
        work = precision + 16
        alo, ahi = value_enclosure(self.alpha, work)
        with gmpy2.context(precision=work, round=gmpy2.RoundDown):
            la_lo = gmpy2.log(gmpy2.mpq(alo))
            lb_lo = gmpy2.log(gmpy2.mpfr(self.base))
        with gmpy2.context(precision=work, round=gmpy2.RoundUp):
            la_hi = gmpy2.log(gmpy2.mpq(ahi))
            lb_hi = gmpy2.log(gmpy2.mpfr(self.base))
        with gmpy2.context(precision=work, round=gmpy2.RoundDown):
            t_lo = la_lo / lb_hi
        with gmpy2.context(precision=work, round=gmpy2.RoundUp):
            t_hi = la_hi / lb_lo
        return _mpfr_to_fraction(t_lo), _mpfr_to_fraction(t_hi)


def _mpfr_to_fraction(x) -> Fraction:
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


# ---------------------------------------------------------------------------
# enclosures

def sqrt_enclosure(d: int, precision: int) -> tuple[Fraction, Fraction]:
    """Dyadic bounds on sqrt(d) with lo <= sqrt(d) <= hi, width 2**-precision."""
    s = math.isqrt(d << (2 * precision))
    unit = Fraction(1, 1 << precision)
    lo = s * unit
    return lo, lo if s * s == d << (2 * precision) else lo + unit


def value_enclosure(x: Value, precision: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
    """Dyadic bounds on an exact value (degenerate for rationals)."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return x, x
    slo, shi = sqrt_enclosure(x.d, precision)
    b = Fraction(x.b)
    if x.b < 0:
        slo, shi = shi, slo
    return (x.a + b * slo) / x.c, (x.a + b * shi) / x.c


class Enclosure:
    """Certified two-sided bound: lower <= true value <= upper.

    Endpoints are dyadic rationals produced by directed rounding.  When the
    true value is exactly known, it is carried symbolically in `value` and the
    enclosure counts as width zero.  `flagged` marks a result that hit the
    precision ceiling: the bounds are still correct, just not tight.
    """

    __slots__ = ("lower", "upper", "precision", "value", "flagged", "_source")

    def __init__(self, lower: Fraction, upper: Fraction, precision: int,
                 value: Optional[Value] = None, flagged: bool = False,
                 source: Optional[Callable[[int], "Enclosure"]] = None):
        if lower > upper:
            raise ValueError("enclosure with lower > upper")
        self.lower = lower
        self.upper = upper
        self.precision = precision
        self.value = value
        self.flagged = flagged
        self._source = source

    @classmethod
    def exact(cls, value: Value, precision: int = DEFAULT_PRECISION) -> "Enclosure":
        lo, hi = value_enclosure(value, precision)
        return cls(lo, hi, precision, value=value)

    def width(self) -> Fraction:
        if self.value is not None:
            return Fraction(0)
        return self.upper - self.lower

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def is_exact(self) -> bool:
        return self.value is not None or self.lower == self.upper

    def cmp_value(self, v: Value) -> Optional[int]:
        """+1 / -1 when the whole enclosure lies above / below v, 0 for exact
        equality, None when undecided at this precision."""
        if self.value is not None:
            return compare(self.value, v)
        if compare(self.lower, v) > 0:
            return 1
        if compare(self.upper, v) < 0:
            return -1
        return None

    def refine(self, max_precision: int = MAX_PRECISION) -> "Enclosure":
        """Recompute until the width at least halves (no-op when exact).

        If the ceiling is reached first, the best enclosure so far is returned
        with `flagged` set; bounds remain correct.
        """
        if self.value is not None or self._source is None:
            return self
        target = self.width() / 2
        prec, best = self.precision, self
        while prec < max_precision:
            prec = min(2 * prec, max_precision)
            cand = self._source(prec)
            if cand.width() < best.width():
                best = cand
            if cand.value is not None or cand.width() <= target:
                return cand
        return Enclosure(best.lower, best.upper, best.precision, value=best.value,
                         flagged=True, source=best._source)

    def __repr__(self):
        if self.value is not None:
            return f"Enclosure(exact {value_str(self.value)})"
        return f"Enclosure[{self.lower}, {self.upper}] @{self.precision}b"


def enc_bounds(x: Union[Value, Enclosure], precision: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
    if isinstance(x, Enclosure):
        return x.lower, x.upper
    return value_enclosure(x, precision)


def interval_add(a, b):
    return a[0] + b[0], a[1] + b[1]


def interval_mul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def interval_inv(a):
    lo, hi = a
    if lo <= 0 <= hi:
        raise ZeroDivisionError("interval straddles zero")
    return 1 / hi, 1 / lo


def interval_div(a, b):
    return interval_mul(a, interval_inv(b))


def power_enclosure(q: int, t: Exponent, precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Rigorous enclosure of q**t for an integer q >= 1.

    Reducible powers (rational result, or base**j against a log-ratio
    exponent) come back exact and symbolic with width zero.  Otherwise the
    endpoints are dyadic with directed rounding: integer-root bracketing for
    rational exponents, correctly-rounded log/exp for log-ratio exponents.
    """
    if q < 1:
        raise ValueError("power_enclosure requires q >= 1")
    source = lambda p: power_enclosure(q, t, p)
    exact = t.pow_exact(q)
    if exact is not None:
        lo, hi = value_enclosure(exact, precision)
        return Enclosure(lo, hi, precision, value=exact, source=source)
    if t.rat is not None:
        u, v = t.rat.numerator, t.rat.denominator
        root, _ = int_nthroot((q ** u) << (v * precision), v)
        unit = Fraction(1, 1 << precision)
        return Enclosure(root * unit, (root + 1) * unit, precision, source=source)
    t_lo, t_hi = t.enclosure(precision)
    work = precision + 16
    with gmpy2.context(precision=work, round=gmpy2.RoundDown):
        p_lo = gmpy2.mpfr(q) ** gmpy2.mpq(t_lo)
    with gmpy2.context(precision=work, round=gmpy2.RoundUp):
        p_hi = gmpy2.mpfr(q) ** gmpy2.mpq(t_hi)
    return Enclosure(_mpfr_to_fraction(p_lo), _mpfr_to_fraction(p_hi), precision, source=source)


# ---------------------------------------------------------------------------
# text formats

_QUAD_RE = re.compile(r"^\((-?\d+)\+(-?\d+)\*sqrt\((\d+)\)\)/(-?\d+)$")
_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_EXP_LOG_RE = re.compile(r"^log\((.+)\)/log\((\d+)\)$")


def value_str(x: Value) -> str:
    """Canonical text form: "p/q" for rationals, "(a+b*sqrt(d))/c" otherwise."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def parse_value(text: str) -> Value:
    """Inverse of value_str (whitespace tolerated); round-trips bit-exactly."""
    s = text.replace(" ", "")
    m = _RAT_RE.match(s)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    m = _QUAD_RE.match(s)
    if m:
        return make_quad(int(m.group(1)), int(m.group(2)), int(m.group(4)), int(m.group(3)))
    raise ValueError(f"unparsable value: {text!r}")


def exponent_str(t: Exponent) -> str:
    if t.rat is not None:
        return f"t={value_str(t.rat)}"
    return f"t=log({t.alpha})/log({t.base})"


def parse_exponent(text: str) -> Exponent:
    s = text.replace(" ", "")
    if s.startswith("t="):
        s = s[2:]
    m = _EXP_LOG_RE.match(s)
    if m:
        alpha = parse_value(m.group(1))
        if not isinstance(alpha, QuadIrr):
            raise ValueError("log-ratio exponent needs an irrational alpha")
        return Exponent.log_ratio(alpha, int(m.group(2)))
    m = _RAT_RE.match(s)
    if m:
        return Exponent.rational(Fraction(int(m.group(1)), int(m.group(2) or 1)))
    raise ValueError(f"unparsable exponent: {text!r}")


def decimal_str(x: Union[Value, Fraction], digits: int = 20) -> str:
    """Display-only decimal rendering with `digits` significant digits."""
    if isinstance(x, QuadIrr):
        lo, hi = value_enclosure(x, 4 * digits)
        x = (lo + hi) / 2
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))
