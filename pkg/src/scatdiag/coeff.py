"""Exact coefficient arithmetic in Q(v), where v stands for q^(1/2).

A CoeffFn is kept in the canonical form  v^shift * num/den  with num, den
integer polynomials stored as ascending coefficient tuples whose constant
terms are nonzero, gcd(num, den) = 1, the integer contents coprime, and
den with positive leading coefficient.  Canonical forms are unique, so
equality and hashing are structural.

Everything downstream (wall functions, dilogarithm series, counting
oracles) stores its coefficients as CoeffFn values; no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class PoleError(ArithmeticError):
    """Evaluation of a coefficient at a point where it has a pole."""


# ---------------------------------------------------------------------------
# integer polynomials as ascending coefficient tuples, () is zero
# ---------------------------------------------------------------------------

def _ptrim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pneg(a):
    return tuple(-x for x in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pscale(a, c):
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _pcontent(a):
    g = 0
    for x in a:
        g = gcd(g, abs(x))
        if g == 1:
            return 1
    return g


def _pprim(a):
    g = _pcontent(a)
    if g in (0, 1):
        return a
    return tuple(x // g for x in a)


def _pdiv_exact(a, b):
    """Exact division of integer polynomials (a = b * q assumed)."""
    if not a:
        return ()
    q = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    lb = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = rem[i + len(b) - 1]
        if c % lb != 0:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c // lb
        if q[i]:
            for j, y in enumerate(b):
                rem[i + j] -= q[i] * y
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return _ptrim(q)


def _prem_pseudo(a, b):
    """Pseudo-remainder of a by b (b nonzero, deg a >= deg b)."""
    rem = list(a)
    lb = b[-1]
    db = len(b) - 1
    if lb == 1 or lb == -1:
        # plain division remainder, no coefficient growth
        while True:
            rem = list(_ptrim(rem))
            if not rem or len(rem) - 1 < db:
                break
            d = len(rem) - 1 - db
            lead = rem[-1] * lb
            for j, y in enumerate(b):
                rem[d + j] -= lead * y
        return _ptrim(rem)
    while len(rem) - 1 >= db and any(rem):
        rem = _ptrim(rem)
        if not rem or len(rem) - 1 < db:
            break
        d = len(rem) - 1 - db
        lead = rem[-1]
        rem = [lb * x for x in rem]
        for j, y in enumerate(b):
            rem[d + j] -= lead * y
        rem = list(_ptrim(rem))
    return _ptrim(rem)


def _pgcd(a, b):
    """Primitive gcd of integer polynomials, positive leading coefficient."""
    a, b = _pprim(a), _pprim(b)
    if not a:
        g = b
    elif not b:
        g = a
    else:
        while b:
            if len(a) < len(b):
                a, b = b, a
            r = _pprim(_prem_pseudo(a, b))
            a, b = b, r
        g = a
    if g and g[-1] < 0:
        g = _pneg(g)
    return g


def _peval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# the coefficient field
# ---------------------------------------------------------------------------

class CoeffFn:
    """A rational function of v = q^(1/2) in canonical form."""

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, shift, num, den, _canonical=False):
        if not _canonical:
            shift, num, den = _canonicalize(shift, num, den)
        self.shift = shift
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(a):
        if a == 0:
            return ZERO
        if a == 1:
            return ONE
        return CoeffFn(0, (a,), (1,), _canonical=True)

    @staticmethod
    def from_fraction(a, b=1):
        f = Fraction(a, b)
        if f.denominator == 1:
            return CoeffFn.from_int(f.numerator)
        return CoeffFn(0, (f.numerator,), (f.denominator,), _canonical=True)

    @staticmethod
    def v_power(k):
        """The monomial v^k (k may be negative)."""
        if k == 0:
            return ONE
        return CoeffFn(k, (1,), (1,), _canonical=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_rational(self):
        return self.shift == 0 and len(self.num) <= 1 and len(self.den) == 1

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not self.num:
            return other
        if not other.num:
            return self
        s = min(self.shift, other.shift)
        a = _pshift(self.num, self.shift - s)
        b = _pshift(other.num, other.shift - s)
        if self.den == other.den:
            if self.den == (1,):
                return CoeffFn(s, _padd(a, b), (1,))
            return CoeffFn(s, _padd(a, b), self.den)
        if self.den == (1,):
            return CoeffFn(s, _padd(_pmul(a, other.den), b), other.den)
        if other.den == (1,):
            return CoeffFn(s, _padd(a, _pmul(b, self.den)), self.den)
        g = _pgcd(self.den, other.den)
        if g == (1,):
            num = _padd(_pmul(a, other.den), _pmul(b, self.den))
            return CoeffFn(s, num, _pmul(self.den, other.den))
        d1 = _pdiv_exact(self.den, g)
        d2 = _pdiv_exact(other.den, g)
        num = _padd(_pmul(a, d2), _pmul(b, d1))
        return CoeffFn(s, num, _pmul(_pmul(d1, g), d2))

    def __neg__(self):
        if not self.num:
            return self
        return CoeffFn(self.shift, _pneg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.num or not other.num:
            return ZERO
        # cross-cancellation keeps both pairs coprime, so the product is
        # already in lowest terms and the final gcd pass can be skipped
        g1 = _pgcd(self.num, other.den) if len(other.den) > 1 and len(self.num) > 1 else (1,)
        g2 = _pgcd(other.num, self.den) if len(self.den) > 1 and len(other.num) > 1 else (1,)
        n1 = _pdiv_exact(self.num, g1) if g1 != (1,) else self.num
        d2 = _pdiv_exact(other.den, g1) if g1 != (1,) else other.den
        n2 = _pdiv_exact(other.num, g2) if g2 != (1,) else other.num
        d1 = _pdiv_exact(self.den, g2) if g2 != (1,) else self.den
        num, den = _pmul(n1, n2), _pmul(d1, d2)
        c = gcd(_pcontent(num), _pcontent(den))
        if c > 1:
            num = tuple(x // c for x in num)
            den = tuple(x // c for x in den)
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
        return CoeffFn(self.shift + other.shift, num, den, _canonical=True)

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero coefficient")
        return CoeffFn(-self.shift, self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def mul_vpow(self, k):
        """Multiply by v^k (cheap: only the shift moves)."""
        if k == 0 or not self.num:
            return self
        return CoeffFn(self.shift + k, self.num, self.den, _canonical=True)

    def scale(self, a, b=1):
        return self * CoeffFn.from_fraction(a, b)

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, CoeffFn):
            return NotImplemented
        return (self.shift == other.shift and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, self.num, self.den))
        return self._hash

    # -- evaluation ------------------------------------------------------------

    def eval_at_q(self, q0):
        """Exact value at q = q0, i.e. v^2 = q0.

        Fails if the element genuinely involves odd powers of v (a half
        power of q) or has a pole at the point.
        """
        if not self.num:
            return Fraction(0)
        pn = {i % 2 for i, c in enumerate(self.num) if c}
        pd = {i % 2 for i, c in enumerate(self.den) if c}
        if len(pn) > 1 or len(pd) > 1:
            raise PoleError("coefficient is not a function of q alone")
        a, b = pn.pop(), pd.pop()
        if (self.shift + a - b) % 2 != 0:
            raise PoleError("odd half-integer power of q at evaluation")
        q0 = Fraction(q0)
        nv = _peval(self.num[a::2], q0)
        dv = _peval(self.den[b::2], q0)
        if dv == 0:
            raise PoleError("pole at q = %s" % q0)
        return q0 ** ((self.shift + a - b) // 2) * nv / dv

    def eval_at_v1(self):
        """Exact value at v = 1 (the classical limit); PoleError at a pole."""
        if not self.num:
            return Fraction(0)
        dv = _peval(self.den, Fraction(1))
        if dv == 0:
            raise PoleError("pole at v = 1")
        return _peval(self.num, Fraction(1)) / dv

    def eval_at_sqrt(self, q0):
        """Value at v = sqrt(q0) as a pair (a, b) meaning a + b*sqrt(q0)."""
        if not self.num:
            return (Fraction(0), Fraction(0))
        q0 = Fraction(q0)

        def _pair(poly):
            # value of poly(v) mod v^2 - q0, split as (even part, odd part)
            return _peval(poly[0::2], q0), _peval(poly[1::2], q0)

        num, den = self.num, self.den
        if self.shift >= 0:
            num = _pshift(num, self.shift)
        else:
            den = _pshift(den, -self.shift)
        na, nb = _pair(num)
        da, db = _pair(den)
        d2 = da * da - db * db * q0
        if d2 == 0:
            raise PoleError("pole at v = sqrt(%s)" % q0)
        return ((na * da - nb * db * q0) / d2, (nb * da - na * db) / d2)

    def subst_neg_v(self):
        """The coefficient with v replaced by -v."""
        if not self.num:
            return self
        num = tuple(-c if i % 2 else c for i, c in enumerate(self.num))
        den = tuple(-c if i % 2 else c for i, c in enumerate(self.den))
        if self.shift % 2:
            num = _pneg(num)
        return CoeffFn(self.shift, num, den)

    # -- formatting ---------------------------------------------------------

    def __repr__(self):
        return "CoeffFn(%s)" % self.to_string()

    def to_string(self):
        """Single fraction "num/den" with nonnegative v powers, variable v."""
        if not self.num:
            return "0"
        num, den = self.num, self.den
        if self.shift >= 0:
            num = _pshift(num, self.shift)
        else:
            den = _pshift(den, -self.shift)
        ns, ds = _poly_str(num), _poly_str(den)
        if ds == "1":
            return ns
        if len(num) > 1 or (num and num[-1] < 0):
            ns = "(%s)" % ns
        if len(den) > 1:
            ds = "(%s)" % ds
        return "%s/%s" % (ns, ds)


def _pshift(a, k):
    if k == 0 or not a:
        return a
    return (0,) * k + tuple(a)


def _poly_str(a):
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            t = str(abs(c))
        else:
            t = "v" if i == 1 else "v^%d" % i
            if abs(c) != 1:
                t = "%d*%s" % (abs(c), t)
        if not parts:
            parts.append(t if c > 0 else "-" + t)
        else:
            parts.append(("+ " if c > 0 else "- ") + t)
    return " ".join(parts)


def _canonicalize(shift, num, den):
    num, den = _ptrim(num), _ptrim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return 0, (), (1,)
    # strip powers of v
    i = 0
    while num[i] == 0:
        i += 1
    j = 0
    while den[j] == 0:
        j += 1
    shift += i - j
    num, den = num[i:], den[j:]
    # cancel polynomial gcd
    g = _pgcd(num, den)
    if g != (1,):
        num, den = _pdiv_exact(num, g), _pdiv_exact(den, g)
    # coprime integer contents, positive leading denominator coefficient
    c = gcd(_pcontent(num), _pcontent(den))
    if c > 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    if den[-1] < 0:
        num, den = _pneg(num), _pneg(den)
    return shift, num, den


ZERO = CoeffFn(0, (), (1,), _canonical=True)
ONE = CoeffFn(0, (1,), (1,), _canonical=True)


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def q_power(k):
    """q^k as a CoeffFn (q = v^2)."""
    return CoeffFn.v_power(2 * k)


def q_int(k):
    """The balanced quantum integer [k]_q = v^(k-1) + v^(k-3) + ... + v^(1-k)."""
    assert k >= 1
    return CoeffFn(-(k - 1), (1, 0) * (k - 1) + (1,), (1,))


def gl_count(k):
    """Number of points of GL_k over F_q: prod_{i<k} (q^k - q^i); 1 for k = 0."""
    assert k >= 0
    out = ONE
    for i in range(k):
        out = out * (q_power(k) - q_power(i))
    return out


def eval_at(f, q0):
    """Exact value of f at q = q0 (a prime power)."""
    return f.eval_at_q(q0)


def classical_limit(f):
    """Exact value of f at q^(1/2) = 1; PoleError when f leaves Q_reg."""
    return f.eval_at_v1()
