"""Exact scalars a + b*sqrt(d) over the rationals, and their continued fractions.

A scalar carries a squarefree tag d (d == 0 means plain rational).  All
comparisons are decided by integer sign tests -- no floating point enters any
computation; __float__ exists only so callers can render approximate pictures.

Canonical form: if b == 0 the tag collapses to d == 0, so equality and hashing
are structural.  Mixing two different nonzero tags raises FieldMismatch.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import FieldMismatch, NotCommensurable, ZeroInput

_F0 = Fraction(0)
_F1 = Fraction(1)

_squarefree_ok: set[int] = set()


def _check_squarefree(d: int) -> None:
    if d in _squarefree_ok:
        return
    if d < 2:
        raise ValueError("field tag must be 0 or a squarefree integer >= 2")
    n, p = d, 2
    while p * p <= n:
        if n % (p * p) == 0:
            raise ValueError("field tag %d is not squarefree" % d)
        if n % p == 0:
            n //= p
        p += 1
    _squarefree_ok.add(d)


def _floor_times_sqrt(m: int, d: int) -> int:
    # floor(m * sqrt(d)) for integers m, squarefree d >= 2
    r = math.isqrt(m * m * d)
    if m >= 0:
        return r
    return -r if r * r == m * m * d else -r - 1


class FieldScalar:
    """Immutable exact number a + b*sqrt(d)."""

    __slots__ = ("d", "a", "b")

    def __init__(self, a, b=0, d=0):
        a = a if isinstance(a, Fraction) else Fraction(a)
        b = b if isinstance(b, Fraction) else Fraction(b)
        if d == 1:  # sqrt(1) folds into the rational part
            a, b, d = a + b, _F0, 0
        if not b:
            d = 0
        if d == 0:
            if b:
                raise ValueError("rational scalar cannot carry a radical part")
        else:
            _check_squarefree(d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *_):
        raise AttributeError("FieldScalar is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "FieldScalar":
        self = object.__new__(cls)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d if b else 0)
        return self

    @classmethod
    def rational(cls, x) -> "FieldScalar":
        return cls._raw(x if isinstance(x, Fraction) else Fraction(x), _F0, 0)

    @classmethod
    def sqrt_of(cls, d: int) -> "FieldScalar":
        """The scalar sqrt(d) itself."""
        if d == 0:
            return cls._raw(_F0, _F0, 0)
        if d == 1:
            return cls._raw(_F1, _F0, 0)
        _check_squarefree(d)
        return cls._raw(_F0, _F1, d)

    # -- coercion -------------------------------------------------------------

    def _pair(self, other) -> "FieldScalar":
        if isinstance(other, FieldScalar):
            if self.d and other.d and self.d != other.d:
                raise FieldMismatch(
                    "cannot mix sqrt(%d) with sqrt(%d)" % (self.d, other.d)
                )
            return other
        if isinstance(other, (int, Fraction)):
            return FieldScalar._raw(Fraction(other), _F0, 0)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        return FieldScalar._raw(self.a + o.a, self.b + o.b, self.d or o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        return FieldScalar._raw(self.a - o.a, self.b - o.b, self.d or o.d)

    def __rsub__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        return FieldScalar._raw(o.a - self.a, o.b - self.b, self.d or o.d)

    def __neg__(self):
        return FieldScalar._raw(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        if not self.b and not o.b:
            return FieldScalar._raw(self.a * o.a, _F0, 0)
        d = self.d or o.d
        a = self.a * o.a + self.b * o.b * d
        b = self.a * o.b + self.b * o.a
        return FieldScalar._raw(a, b if b else _F0, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        if not o.a and not o.b:
            raise ZeroDivisionError("division by zero scalar")
        if not o.b:
            return FieldScalar._raw(self.a / o.a, self.b / o.a, self.d)
        # multiply by the conjugate; the norm a^2 - d b^2 is a nonzero rational
        norm = o.a * o.a - o.d * o.b * o.b
        return self * FieldScalar._raw(o.a / norm, -o.b / norm, o.d)

    def __rtruediv__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        return o / self

    # -- order ----------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1}, decided by rational comparisons only."""
        a, b = self.a, self.b
        if not b:
            return -1 if a < 0 else (1 if a > 0 else 0)
        if not a:
            return -1 if b < 0 else 1
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        # opposite signs: compare |a| against |b|*sqrt(d) via squares
        lhs, rhs = a * a, self.d * b * b
        if lhs == rhs:  # would force sqrt(d) rational
            raise ArithmeticError("non-squarefree tag leaked into comparison")
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        o = self._pair(other) if not isinstance(other, FieldScalar) else other
        if o is NotImplemented:
            return o
        if isinstance(o, FieldScalar) and self.d and o.d and self.d != o.d:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.d, self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- structure ------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not self.b

    def as_fraction(self) -> Fraction:
        if self.b:
            raise ValueError("scalar %s is irrational" % self)
        return self.a

    def __floor__(self) -> int:
        if not self.b:
            return self.a.numerator // self.a.denominator
        # write self = (N + M*sqrt(d)) / D with integer N, M and D > 0
        q, s = self.a.denominator, self.b.denominator
        big_d = q * s
        big_n = self.a.numerator * s
        big_m = self.b.numerator * q
        return (big_n + _floor_times_sqrt(big_m, self.d)) // big_d

    def floor_frac(self) -> tuple[int, "FieldScalar"]:
        """(n, r) with n = floor(self) and r = self - n in [0, 1)."""
        n = self.__floor__()
        return n, self - n

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    # -- text and JSON forms --------------------------------------------------

    def __repr__(self):
        return "FieldScalar(%s)" % self

    def __str__(self):
        if not self.b:
            return str(self.a)
        rad = "sqrt(%d)" % self.d
        if self.b == 1:
            bs = rad
        elif self.b == -1:
            bs = "-" + rad
        else:
            bs = "%s*%s" % (self.b, rad)
        if not self.a:
            return bs
        return "%s%s%s" % (self.a, "" if bs.startswith("-") else "+", bs)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "a": "%d/%d" % (self.a.numerator, self.a.denominator),
            "b": "%d/%d" % (self.b.numerator, self.b.denominator),
        }

    @classmethod
    def from_json(cls, obj) -> "FieldScalar":
        if isinstance(obj, dict):
            return cls(Fraction(obj["a"]), Fraction(obj.get("b", 0)), int(obj.get("d", 0)))
        return parse_scalar(obj)


def scalar(x) -> FieldScalar:
    """Coerce ints, Fractions, literal strings or scalars to FieldScalar."""
    if isinstance(x, FieldScalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return FieldScalar.rational(x)


_TERM_RE = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?:sqrt\(\s*(?P<rad>\d+)\s*\))?\s*$"
)


def parse_scalar(text: str) -> FieldScalar:
    """Parse literals like '3/2', 'sqrt(5)', '1/2+1/2*sqrt(5)', '(1+sqrt(5))/2'."""
    s = text.strip()
    m = re.match(r"^\((?P<body>.*)\)\s*/\s*(?P<den>\d+)$", s)
    if m:
        return parse_scalar(m.group("body")) / int(m.group("den"))
    # split into signed terms at top level
    terms, buf, depth = [], "", 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "*/+-(":
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)
    total = FieldScalar.rational(0)
    for term in terms:
        m = _TERM_RE.match(term)
        if not m or (m.group("coef") is None and m.group("rad") is None):
            raise ValueError("cannot parse scalar literal %r" % text)
        coef = Fraction(m.group("coef")) if m.group("coef") else _F1
        if m.group("sign") == "-":
            coef = -coef
        if m.group("rad") is not None:
            total = total + FieldScalar.sqrt_of(int(m.group("rad"))) * coef
        else:
            total = total + FieldScalar.rational(coef)
    return total


def field_sqrt(x: FieldScalar, ambient_d: int = 0):
    """Exact square root of x inside Q(sqrt(d)), or None when it has none.

    `ambient_d` matters only for rational x living in a bigger field, where
    the root may be a rational multiple of sqrt(ambient_d).
    """
    sg = x.sign()
    if sg < 0:
        return None
    if sg == 0:
        return FieldScalar.rational(0)
    if x.is_rational:
        f = x.as_fraction()
        rn, rd = math.isqrt(f.numerator), math.isqrt(f.denominator)
        if rn * rn == f.numerator and rd * rd == f.denominator:
            return FieldScalar.rational(Fraction(rn, rd))
        if ambient_d:
            g = f / ambient_d
            rn, rd = math.isqrt(g.numerator), math.isqrt(g.denominator)
            if rn * rn == g.numerator and rd * rd == g.denominator:
                return FieldScalar(_F0, Fraction(rn, rd), ambient_d)
        return None
    # solve (u + w*sqrt(d))^2 = a + b*sqrt(d)
    a, b, d = x.a, x.b, x.d
    disc = a * a - d * b * b
    rn, rd = math.isqrt(abs(disc.numerator)), math.isqrt(disc.denominator)
    if disc < 0 or rn * rn != disc.numerator or rd * rd != disc.denominator:
        return None
    s = Fraction(rn, rd)
    for u2 in ((a + s) / 2, (a - s) / 2):
        if u2 <= 0:
            continue
        un, ud = math.isqrt(u2.numerator), math.isqrt(u2.denominator)
        if un * un == u2.numerator and ud * ud == u2.denominator:
            u = Fraction(un, ud)
            w = b / (2 * u)
            cand = FieldScalar(u, w, d)
            if cand * cand == x:
                return cand if cand.sign() > 0 else -cand
    return None


# -- commensurability ---------------------------------------------------------


def commensurable(x: FieldScalar, y: FieldScalar) -> bool:
    """True when x/y is rational.  Both inputs must be nonzero."""
    if not x or not y:
        raise ZeroInput("commensurability needs nonzero scalars")
    return (x / y).is_rational


def commensurability_classes(values) -> list[list[int]]:
    """Partition indices of `values` into commensurability classes.

    Classes come back ordered by their smallest member index.
    """
    values = list(values)
    classes: list[list[int]] = []
    reps: list[FieldScalar] = []
    for i, v in enumerate(values):
        for j, r in enumerate(reps):
            if commensurable(v, r):
                classes[j].append(i)
                break
        else:
            classes.append([i])
            reps.append(v)
    return classes


def least_common_integer_multiple(values) -> FieldScalar:
    """Least positive v with v an integer multiple of every input.

    Inputs must be positive and pairwise commensurable.
    """
    vals = [scalar(v) for v in values]
    if not vals:
        raise ValueError("need at least one value")
    for v in vals:
        if v.sign() <= 0:
            raise ValueError("values must be positive")
    c = vals[0]
    nums, dens = [], []
    for v in vals:
        r = v / c
        if not r.is_rational:
            raise NotCommensurable("%s and %s have irrational ratio" % (v, c))
        f = r.as_fraction()
        nums.append(f.numerator)
        dens.append(f.denominator)
    return c * Fraction(math.lcm(*nums), math.gcd(*dens))


# -- continued fractions ------------------------------------------------------


class ContinuedFraction:
    """Expansion data for a nonnegative real quadratic (or rational) number.

    quotients   -- partial quotients a0, a1, ... (a0 >= 0, rest positive)
    convergents -- (p, q) integer pairs, one per quotient
    periodic    -- (preperiod, period) when detected, else None
    exact       -- True when the expansion terminated (rational input)
    """

    __slots__ = ("quotients", "convergents", "periodic", "exact")

    def __init__(self, quotients, convergents, periodic, exact):
        self.quotients = list(quotients)
        self.convergents = list(convergents)
        self.periodic = periodic
        self.exact = exact

    def __repr__(self):
        head = self.quotients[:1] + self.quotients[1:]
        return "ContinuedFraction(%r, periodic=%r, exact=%r)" % (
            head, self.periodic, self.exact)


def continued_fraction(x, n: int, state_cap: int = 64) -> ContinuedFraction:
    """First n partial quotients of x >= 0 with convergents.

    Rational x terminates (possibly before n terms).  Quadratic irrationals are
    run through the integer surd recurrence, which also detects the eventual
    period by state repetition (capped at `state_cap` distinct states).
    """
    x = scalar(x)
    if n < 1:
        raise ValueError("need n >= 1")
    if x.sign() < 0:
        raise ValueError("continued fractions here take nonnegative input")

    quotients: list[int] = []
    convergents: list[tuple[int, int]] = []
    p_prev, p_prev2 = 1, 0
    q_prev, q_prev2 = 0, 1

    def push(a: int):
        nonlocal p_prev, p_prev2, q_prev, q_prev2
        quotients.append(a)
        p, q = a * p_prev + p_prev2, a * q_prev + q_prev2
        convergents.append((p, q))
        p_prev2, p_prev = p_prev, p
        q_prev2, q_prev = q_prev, q

    if x.is_rational:
        p, q = x.a.numerator, x.a.denominator
        while len(quotients) < n:
            a, r = divmod(p, q)
            push(a)
            if r == 0:
                return ContinuedFraction(quotients, convergents, None, True)
            p, q = q, r
        return ContinuedFraction(quotients, convergents, None, False)

    # surd state: x_i = (P + sqrt(D)) / Q with Q | D - P^2
    d = x.d
    qa, sb = x.a.denominator, x.b.denominator
    den = qa * sb
    num_p = x.a.numerator * sb
    num_m = x.b.numerator * qa  # x = (num_p + num_m*sqrt(d)) / den
    if num_m < 0:
        num_p, num_m, den = -num_p, -num_m, -den
    big_d = num_m * num_m * d
    big_p, big_q = num_p, den
    if (big_d - big_p * big_p) % big_q != 0:
        big_p *= abs(big_q)
        big_d *= big_q * big_q
        big_q *= abs(big_q)
    sqrt_floor = math.isqrt(big_d)

    seen: dict[tuple[int, int], int] = {}
    periodic = None
    while len(quotients) < n:
        state = (big_p, big_q)
        if periodic is None:
            if state in seen:
                periodic = (seen[state], len(quotients) - seen[state])
            elif len(seen) < state_cap:
                seen[state] = len(quotients)
        if big_q > 0:
            a = (big_p + sqrt_floor) // big_q
        else:
            a = (-big_p - sqrt_floor - 1) // (-big_q)
        push(a)
        big_p = a * big_q - big_p
        big_q = (big_d - big_p * big_p) // big_q
    return ContinuedFraction(quotients, convergents, periodic, False)
