"""Truncated graded (quantum) torus algebras in three conventions.

An element is a finite map from dimension vectors d with 0 <= |d| <= D to
coefficients in Q(v).  The product twists by the skew form:

    quantum    x^d1 * x^d2 = v^{d1,d2} x^{d1+d2}
    dt         x^d1 * x^d2 = (-v)^{d1,d2} x^{d1+d2}
    classical  commutative product

Lie elements have no constant term; group elements have constant term 1
and live in the completed algebra truncated at total degree D.  In the
quantum convention a Lie element is the plain series with the
1/(v - 1/v) normalization already multiplied into its coefficients; the
classical limit divides it back out before evaluating at v = 1.
"""

from __future__ import annotations

from .coeff import CoeffFn, ONE, ZERO, gl_count, q_int
from .lattice import skew, total_degree

QUANTUM = "quantum"
CLASSICAL = "classical"
DT_TWIST = "dt"

CONVENTIONS = (QUANTUM, CLASSICAL, DT_TWIST)

LIE = "lie"
GROUP = "group"


class GradedElement:
    """Truncated element of the graded torus algebra.

    coeffs maps dimension-vector tuples to CoeffFn; the constant term is
    implicit (0 for lie flavor, 1 for group flavor) and never stored.
    """

    __slots__ = ("seed", "order", "convention", "flavor", "coeffs")

    def __init__(self, seed, order, convention, flavor, coeffs):
        assert convention in CONVENTIONS
        assert flavor in (LIE, GROUP)
        self.seed = seed
        self.order = order
        self.convention = convention
        self.flavor = flavor
        clean = {}
        for d, c in coeffs.items():
            if not any(x < 0 for x in d) and any(d) and total_degree(d) <= order:
                if not c.is_zero():
                    clean[tuple(d)] = c
            elif any(x < 0 for x in d):
                raise ValueError("dimension vector outside N+: %r" % (d,))
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(seed, order, convention):
        return GradedElement(seed, order, convention, LIE, {})

    @staticmethod
    def one(seed, order, convention):
        return GradedElement(seed, order, convention, GROUP, {})

    @staticmethod
    def monomial(seed, order, convention, d, coeff, flavor=LIE):
        return GradedElement(seed, order, convention, flavor, {tuple(d): coeff})

    # -- helpers ---------------------------------------------------------------

    def _require_same_context(self, other):
        if (self.seed, self.order, self.convention) != (other.seed, other.order, other.convention):
            raise ValueError("convention/seed/order mismatch")

    def constant(self):
        return ONE if self.flavor == GROUP else ZERO

    def with_flavor(self, flavor):
        return GradedElement(self.seed, self.order, self.convention, flavor, self.coeffs)

    def support(self):
        return set(self.coeffs)

    def coefficient(self, d):
        d = tuple(d)
        if not any(d):
            return self.constant()
        return self.coeffs.get(d, ZERO)

    # -- linear structure --------------------------------------------------------

    def add(self, other):
        self._require_same_context(other)
        if self.flavor != other.flavor or self.flavor == GROUP:
            raise ValueError("can only add lie elements")
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = out.get(d, ZERO) + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
        return GradedElement(self.seed, self.order, self.convention, LIE, out)

    def scale(self, a, b=1):
        c = CoeffFn.from_fraction(a, b)
        return GradedElement(self.seed, self.order, self.convention, self.flavor,
                             {d: x * c for d, x in self.coeffs.items()})

    def neg(self):
        return self.scale(-1)

    # -- products ------------------------------------------------------------------

    def mul(self, other):
        """Truncated twisted product (commutative in the classical convention)."""
        self._require_same_context(other)
        out = _dict_mul(self.seed, self.convention, self.order,
                        _full(self), _full(other))
        c0 = out.pop(_zero_key(self.seed), ZERO)
        if c0 == ONE:
            flavor = GROUP
        elif c0.is_zero():
            flavor = LIE
        else:
            raise ValueError("product has constant term %r" % c0)
        return GradedElement(self.seed, self.order, self.convention, flavor, out)

    def bracket(self, other):
        """Lie bracket: Poisson rule classically, commutator otherwise."""
        self._require_same_context(other)
        if self.flavor != LIE or other.flavor != LIE:
            raise ValueError("bracket needs lie elements")
        seed, order = self.seed, self.order
        out = {}
        if self.convention == CLASSICAL:
            for d1, c1 in self.coeffs.items():
                for d2, c2 in other.coeffs.items():
                    d = _add_key(d1, d2)
                    if total_degree(d) > order:
                        continue
                    w = skew(seed, d1, d2)
                    if w == 0:
                        continue
                    c = c1 * c2
                    c = c.scale(w)
                    _acc(out, d, c)
        else:
            dt = self.convention == DT_TWIST
            for d1, c1 in self.coeffs.items():
                for d2, c2 in other.coeffs.items():
                    d = _add_key(d1, d2)
                    if total_degree(d) > order:
                        continue
                    w = skew(seed, d1, d2)
                    if w == 0:
                        continue
                    tw = CoeffFn.v_power(w) - CoeffFn.v_power(-w)
                    if dt and w % 2:
                        tw = -tw
                    _acc(out, d, c1 * c2 * tw)
        return GradedElement(seed, order, self.convention, LIE, out)

    # -- series ----------------------------------------------------------------------

    def exp(self):
        """Group element exp(a), computed in the ambient associative algebra
        (the commutative algebra in the classical convention)."""
        if self.flavor != LIE:
            raise ValueError("exp needs a lie element")
        out = _exp_dict(self.seed, self.convention, self.order, self.coeffs)
        return GradedElement(self.seed, self.order, self.convention, GROUP, out)

    def log(self):
        if self.flavor != GROUP:
            raise ValueError("log needs a group element")
        out = _log_dict(self.seed, self.convention, self.order, self.coeffs)
        return GradedElement(self.seed, self.order, self.convention, LIE, out)

    def group_inverse(self):
        if self.flavor != GROUP:
            raise ValueError("inverse needs a group element")
        out = _group_inverse_dict(self.seed, self.convention, self.order, self.coeffs)
        return GradedElement(self.seed, self.order, self.convention, GROUP, out)

    def project(self, keep):
        """Zero all coefficients whose dimension vector fails the predicate."""
        return GradedElement(self.seed, self.order, self.convention, self.flavor,
                             {d: c for d, c in self.coeffs.items() if keep(d)})

    # -- equality / serialization --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (self.seed, self.order, self.convention, self.flavor) == \
            (other.seed, other.order, other.convention, other.flavor) and \
            self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.seed, self.order, self.convention, self.flavor,
                     frozenset(self.coeffs.items())))

    def __repr__(self):
        terms = ["%s x^%s" % (c.to_string(), list(d))
                 for d, c in sorted(self.coeffs.items())]
        head = "1" if self.flavor == GROUP else "0"
        return "<%s %s + %s>" % (self.convention, head, " + ".join(terms) or "0")

    def serialize(self):
        """Deterministic list of {dimvec, coeff} entries, sorted by key."""
        return [{"dimvec": list(d), "coeff": c.to_string()}
                for d, c in sorted(self.coeffs.items())]


# ---------------------------------------------------------------------------
# raw dict arithmetic; keys are dimension-vector tuples including the zero key
# ---------------------------------------------------------------------------

def _zero_key(seed):
    return (0,) * seed.rank


def _add_key(d1, d2):
    return tuple(a + b for a, b in zip(d1, d2))


def _acc(out, d, c):
    s = out.get(d)
    s = c if s is None else s + c
    if s.is_zero():
        out.pop(d, None)
    else:
        out[d] = s


def _full(elem):
    out = dict(elem.coeffs)
    if elem.flavor == GROUP:
        out[_zero_key(elem.seed)] = ONE
    return out


def _twist(seed, convention, d1, d2):
    if convention == CLASSICAL:
        return None
    w = skew(seed, d1, d2)
    if convention == DT_TWIST and w % 2:
        return -CoeffFn.v_power(w)
    return CoeffFn.v_power(w) if w else None


def _dict_mul(seed, convention, order, a, b):
    out = {}
    classical = convention == CLASSICAL
    dt = convention == DT_TWIST
    for d1, c1 in a.items():
        t1 = total_degree(d1)
        for d2, c2 in b.items():
            if t1 + total_degree(d2) > order:
                continue
            d = _add_key(d1, d2)
            c = c1 * c2
            if not classical:
                w = skew(seed, d1, d2)
                if w:
                    c = c.mul_vpow(w)
                    if dt and w % 2:
                        c = -c
            _acc(out, d, c)
    return out


def _exp_dict(seed, convention, order, a):
    out = {_zero_key(seed): ONE}
    if not a:
        return {}
    term = dict(a)
    for d, c in a.items():
        _acc(out, d, c)
    k = 1
    while term and k < order:
        k += 1
        term = _dict_mul(seed, convention, order, term, a)
        inv = CoeffFn.from_fraction(1, _factorial(k))
        for d, c in term.items():
            _acc(out, d, c * inv)
    out.pop(_zero_key(seed), None)
    return out


def _log_dict(seed, convention, order, g):
    u = dict(g)
    u.pop(_zero_key(seed), None)
    out = dict(u)
    term = dict(u)
    k = 1
    while term and k < order:
        k += 1
        term = _dict_mul(seed, convention, order, term, u)
        inv = CoeffFn.from_fraction((-1) ** (k - 1), k)
        for d, c in term.items():
            _acc(out, d, c * inv)
    return out


def _group_inverse_dict(seed, convention, order, g):
    u = dict(g)
    u.pop(_zero_key(seed), None)
    out = {}
    term = {d: -c for d, c in u.items()}
    for d, c in term.items():
        _acc(out, d, c)
    k = 1
    while term and k < order:
        k += 1
        term = {d: -c for d, c in _dict_mul(seed, convention, order, term, u).items()}
        for d, c in term.items():
            _acc(out, d, c)
    return out


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# dilogarithm wall elements
# ---------------------------------------------------------------------------

def dilog_group_element(seed, n, order, convention):
    """The wall-crossing group element attached to the primitive vector n.

    quantum:    sum_k q^{k^2/2} x^{kn} / [GL_k]_q
    dt:         sum_k (-q^{1/2})^{k^2} x^{kn} / [GL_k]_q
    classical:  exp(-Li_2(-x^n))

    For a vertex i pass n = e_i.  Supported on multiples of n up to the
    truncation order.
    """
    n = tuple(n)
    deg = total_degree(n)
    assert deg >= 1
    coeffs = {}
    kmax = order // deg
    if convention == CLASSICAL:
        lie = {}
        for k in range(1, kmax + 1):
            lie[tuple(k * x for x in n)] = CoeffFn.from_fraction((-1) ** (k - 1), k * k)
        coeffs = _exp_dict(seed, CLASSICAL, order, lie)
    else:
        for k in range(1, kmax + 1):
            c = CoeffFn.v_power(k * k) / gl_count(k)
            if convention == DT_TWIST and k % 2:
                c = -c
            coeffs[tuple(k * x for x in n)] = c
    return GradedElement(seed, order, convention, GROUP, coeffs)


def dilog_lie_element(seed, n, order, convention):
    """log of the dilogarithm group element, written down directly."""
    n = tuple(n)
    deg = total_degree(n)
    coeffs = {}
    for k in range(1, order // deg + 1):
        key = tuple(k * x for x in n)
        if convention == CLASSICAL:
            coeffs[key] = CoeffFn.from_fraction((-1) ** (k - 1), k * k)
        elif convention == QUANTUM:
            # (-1)^(k-1) xhat^{kn} / (k [k]_q)
            coeffs[key] = (CoeffFn.from_fraction((-1) ** (k - 1), k) / q_int(k)) * _xhat_factor()
        else:
            # the quantum series at v -> -v: -x^{kn} / (k (q^{k/2} - q^{-k/2}))
            coeffs[key] = CoeffFn.from_fraction(-1, k) / (CoeffFn.v_power(k) - CoeffFn.v_power(-k))
    return GradedElement(seed, order, convention, LIE, coeffs)


def _xhat_factor():
    # 1/(v - 1/v) = v/(v^2 - 1)
    return CoeffFn(1, (1,), (-1, 0, 1))


# ---------------------------------------------------------------------------
# classical limit and the classical <-> quantum lift
# ---------------------------------------------------------------------------

def classical_map(elem):
    """Evaluate a quantum element at q^(1/2) = 1 (x-hat^d -> x^d).

    Group elements go through log and exp so the result is a genuine
    classical group element; a pole at v = 1 raises PoleError.
    """
    if elem.convention != QUANTUM:
        raise ValueError("classical_map expects a quantum element")
    if elem.flavor == GROUP:
        lie = elem.log()
        return classical_map(lie).exp()
    fac = (CoeffFn.v_power(2) - ONE).mul_vpow(-1)  # v - 1/v
    out = {}
    for d, c in elem.coeffs.items():
        out[d] = CoeffFn.from_fraction((c * fac).eval_at_v1())
    return GradedElement(elem.seed, elem.order, CLASSICAL, LIE, out)


def lift_classical(elem):
    """Canonical quantum lift: a classical lie coefficient c becomes
    c/(v - 1/v); group elements lift through log/exp."""
    if elem.convention != CLASSICAL:
        raise ValueError("lift expects a classical element")
    if elem.flavor == GROUP:
        return lift_classical(elem.log()).exp()
    fac = _xhat_factor()
    out = {d: c * fac for d, c in elem.coeffs.items()}
    return GradedElement(elem.seed, elem.order, QUANTUM, LIE, out)
