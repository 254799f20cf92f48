"""Exact arithmetic in the coefficient ring Q^pi(q) = Q(q)[pi]/(pi^2 - 1).

The ring splits as Q(q)eps_+ (+) Q(q)eps_- via the idempotents
eps_+ = (1+pi)/2 and eps_- = (1-pi)/2, so a scalar is stored as the pair
of its values at pi = +1 and pi = -1.  Multiplication is then
componentwise and needs no reduction mod pi^2 - 1.

Rational functions are kept in a canonical form (coprime integer
polynomials, positive leading denominator coefficient, no common integer
content), so equality is structural.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd as int_gcd

# ---------------------------------------------------------------------------
# Dense integer polynomials in q: tuple of coefficients, index = exponent,
# no trailing zeros.  () is the zero polynomial.
# ---------------------------------------------------------------------------

P_ZERO = ()
P_ONE = (1,)


def _trim(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def p_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] += c
    return _trim(out)


def p_neg(a):
    return tuple(-c for c in a)


def p_sub(a, b):
    return p_add(a, p_neg(b))


def p_mul(a, b):
    if not a or not b:
        return P_ZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _trim(out)


def p_scale(a, c):
    if c == 0:
        return P_ZERO
    return tuple(c * x for x in a)


def p_content(a):
    g = 0
    for c in a:
        g = int_gcd(g, c)
    return g


def p_primitive(a):
    g = p_content(a)
    if g <= 1:
        return a
    return tuple(c // g for c in a)


def p_divexact(a, b):
    """Quotient of a by b, assuming the division is exact over Z[q]."""
    if not a:
        return P_ZERO
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    out = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        assert c % lb == 0, "inexact polynomial division"
        f = c // lb
        out[k - db] = f
        for j, cb in enumerate(b):
            rem[k - db + j] -= f * cb
    assert not any(rem), "inexact polynomial division"
    return _trim(out)


def p_gcd(a, b):
    """Primitive gcd in Z[q] via the primitive-PRS Euclidean scheme."""
    if not a:
        g = p_primitive(b)
    elif not b:
        g = p_primitive(a)
    else:
        a, b = p_primitive(a), p_primitive(b)
        if len(a) < len(b):
            a, b = b, a
        while b:
            # pseudo-remainder of a by b
            rem = list(a)
            lb = b[-1]
            db = len(b) - 1
            for k in range(len(a) - 1, db - 1, -1):
                c = rem[k]
                if c == 0:
                    continue
                if c % lb:
                    rem = [lb * x for x in rem]
                    c = rem[k]
                f = c // lb
                for j, cb in enumerate(b):
                    rem[k - db + j] -= f * cb
                rem[k] = 0
            a, b = b, p_primitive(_trim(rem))
            if len(a) < len(b):
                a, b = b, a
        g = a
    if g and g[-1] < 0:
        g = p_neg(g)
    return g


def p_pow(a, n):
    out = P_ONE
    for _ in range(n):
        out = p_mul(out, a)
    return out


def p_subs_negq(a):
    return tuple(-c if k % 2 else c for k, c in enumerate(a))


def p_eval_at_one(a):
    return sum(a)


def p_text(a, unknown="q"):
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        if k == 0:
            term = str(abs(c))
        else:
            qp = unknown if k == 1 else f"{unknown}^{k}"
            term = qp if abs(c) == 1 else f"{abs(c)}*{qp}"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append((" + " if c > 0 else " - ") + term)
    return "".join(parts)


# ---------------------------------------------------------------------------
# Rational functions over Q, with integer numerator/denominator polynomials.
# ---------------------------------------------------------------------------

class RationalFunction:
    """An element of Q(q) in canonical num/den form.

    Canonical form: num, den in Z[q] with no common polynomial factor,
    gcd(content(num), content(den)) = 1 and positive leading denominator
    coefficient; zero is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=P_ONE, _canonical=False):
        if _canonical:
            self.num = num
            self.den = den
            return
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = P_ZERO, P_ONE
            return
        if den == P_ONE:
            self.num, self.den = num, P_ONE
            return
        if den[-1] < 0:
            num, den = p_neg(num), p_neg(den)
        # monomial denominator c*q^k: cancel a q-power and integer content only
        if not any(den[:-1]):
            k = len(den) - 1
            v = 0
            while v < len(num) and num[v] == 0:
                v += 1
            s = k if k < v else v
            if s:
                num = num[s:]
                k -= s
            c = den[-1]
            if c > 1:
                g = int_gcd(p_content(num), c)
                if g > 1:
                    num = tuple(x // g for x in num)
                    c //= g
            self.num = num
            self.den = (0,) * k + (c,) if k else (c,)
            return
        # monomial numerator c*q^v: cancel a q-power and integer content only
        if not any(num[:-1]):
            v = len(num) - 1
            dv = 0
            while den[dv] == 0:
                dv += 1
            s = v if v < dv else dv
            if s:
                num = num[s:]
                den = den[s:]
            g = int_gcd(abs(num[-1]), p_content(den))
            if g > 1:
                num = (num[-1] // g,) if len(num) == 1 else num[:-1] + (num[-1] // g,)
                den = tuple(x // g for x in den)
            self.num = num
            self.den = den
            return
        g = p_gcd(num, den)
        if len(g) > 1 or g != (1,):
            num = p_divexact(num, g)
            den = p_divexact(den, g)
        cg = int_gcd(p_content(num), p_content(den))
        if cg > 1:
            num = tuple(c // cg for c in num)
            den = tuple(c // cg for c in den)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n):
        return RationalFunction((n,) if n else P_ZERO)

    @staticmethod
    def from_fraction(fr):
        return RationalFunction((fr.numerator,) if fr else P_ZERO, (fr.denominator,))

    @staticmethod
    def q_power(k):
        """q^k as a rational function (k may be negative)."""
        if k >= 0:
            return RationalFunction((0,) * k + (1,), P_ONE, _canonical=True)
        return RationalFunction(P_ONE, (0,) * (-k) + (1,), _canonical=True)

    # -- ring structure ----------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if self.den == other.den:
            return RationalFunction(p_add(self.num, other.num), self.den)
        return RationalFunction(
            p_add(p_mul(self.num, other.den), p_mul(other.num, self.den)),
            p_mul(self.den, other.den),
        )

    def __sub__(self, other):
        if self.den == other.den:
            return RationalFunction(p_sub(self.num, other.num), self.den)
        return RationalFunction(
            p_sub(p_mul(self.num, other.den), p_mul(other.num, self.den)),
            p_mul(self.den, other.den),
        )

    def __neg__(self):
        return RationalFunction(p_neg(self.num), self.den, _canonical=True)

    def __mul__(self, other):
        if not self.num or not other.num:
            return RF_ZERO
        d1, d2 = self.den, other.den
        if d1 == P_ONE and d2 == P_ONE:
            return RationalFunction(p_mul(self.num, other.num), P_ONE, _canonical=True)
        # cross-cancel: each factor is coprime to its own denominator, so the
        # product of the cross-reduced pieces is already canonical
        a = RationalFunction(self.num, d2)
        b = RationalFunction(other.num, d1)
        return RationalFunction(
            p_mul(a.num, b.num), p_mul(a.den, b.den), _canonical=True
        )

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    # -- substitutions -----------------------------------------------------

    def subs_q_inverse(self):
        """The rational function f(q^{-1})."""
        dn, dd = len(self.num) - 1, len(self.den) - 1
        num = tuple(reversed(self.num))
        den = tuple(reversed(self.den))
        shift = dd - dn
        if shift >= 0:
            num = (0,) * shift + num
        else:
            den = (0,) * (-shift) + den
        return RationalFunction(num, den)

    def subs_neg_q(self):
        """The rational function f(-q)."""
        return RationalFunction(p_subs_negq(self.num), p_subs_negq(self.den))

    # -- predicates and views ----------------------------------------------

    def is_laurent_monic_denominator(self):
        """True iff the canonical denominator is exactly q^k."""
        return self.den[-1] == 1 and not any(self.den[:-1])

    def half(self):
        return RationalFunction(self.num, p_scale(self.den, 2))

    def eval_fraction(self, value):
        """Evaluate at a rational q-value (for sanity checks)."""
        num = sum(Fraction(c) * value**k for k, c in enumerate(self.num))
        den = sum(Fraction(c) * value**k for k, c in enumerate(self.den))
        return num / den

    def text(self):
        if not self.num:
            return "0"
        if self.den == P_ONE:
            return p_text(self.num)
        if self.is_laurent_monic_denominator():
            # print as a Laurent polynomial with negative exponents
            shift = len(self.den) - 1
            parts = []
            for k in range(len(self.num) - 1, -1, -1):
                c = self.num[k]
                if c == 0:
                    continue
                e = k - shift
                if e == 0:
                    term = str(abs(c))
                elif e == 1:
                    term = "q" if abs(c) == 1 else f"{abs(c)}*q"
                else:
                    term = f"q^{e}" if abs(c) == 1 else f"{abs(c)}*q^{e}"
                if not parts:
                    parts.append(term if c > 0 else "-" + term)
                else:
                    parts.append((" + " if c > 0 else " - ") + term)
            return "".join(parts)
        return f"({p_text(self.num)})/({p_text(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self.text()})"


RF_ZERO = RationalFunction(P_ZERO, P_ONE, _canonical=True)
RF_ONE = RationalFunction(P_ONE, P_ONE, _canonical=True)


# ---------------------------------------------------------------------------
# Q^pi(q) scalars in idempotent coordinates.
# ---------------------------------------------------------------------------

class ZeroDivisorError(ArithmeticError):
    """Raised when inverting a scalar that is a nonzero zero divisor."""


class QPiScalar:
    """An element of Q^pi(q), stored as (value at pi=+1, value at pi=-1)."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus, minus):
        self.plus = plus
        self.minus = minus

    @staticmethod
    def from_int(n):
        rf = RationalFunction.from_int(n)
        return QPiScalar(rf, rf)

    @staticmethod
    def from_fraction(fr):
        rf = RationalFunction.from_fraction(fr)
        return QPiScalar(rf, rf)

    @staticmethod
    def q_power(k):
        rf = RationalFunction.q_power(k)
        return QPiScalar(rf, rf)

    @staticmethod
    def pi_power(k):
        return QPiScalar(RF_ONE, RF_ONE if k % 2 == 0 else -RF_ONE)

    @staticmethod
    def monomial(coeff, pi_exp, q_exp):
        """coeff * pi^pi_exp * q^q_exp."""
        rf = RationalFunction.q_power(q_exp)
        if isinstance(coeff, int):
            rf = rf * RationalFunction.from_int(coeff)
        else:
            rf = rf * coeff
        return QPiScalar(rf, rf if pi_exp % 2 == 0 else -rf)

    # -- ring structure ----------------------------------------------------

    def __bool__(self):
        return bool(self.plus) or bool(self.minus)

    def is_zero(self):
        return not self

    def __eq__(self, other):
        return (
            isinstance(other, QPiScalar)
            and self.plus == other.plus
            and self.minus == other.minus
        )

    def __hash__(self):
        return hash((self.plus, self.minus))

    def __add__(self, other):
        return QPiScalar(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other):
        return QPiScalar(self.plus - other.plus, self.minus - other.minus)

    def __neg__(self):
        return QPiScalar(-self.plus, -self.minus)

    def __mul__(self, other):
        return QPiScalar(self.plus * other.plus, self.minus * other.minus)

    def invert(self):
        """Multiplicative inverse; zero divisors (one zero component) fail."""
        zp, zm = not self.plus, not self.minus
        if zp and zm:
            raise ZeroDivisionError("inverse of zero in Q^pi(q)")
        if zp or zm:
            raise ZeroDivisorError("scalar with one vanishing idempotent component")
        return QPiScalar(self.plus.inverse(), self.minus.inverse())

    def __truediv__(self, other):
        return self * other.invert()

    def __pow__(self, n):
        base = self if n >= 0 else self.invert()
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    # -- structure maps ----------------------------------------------------

    def bar(self):
        """Bar involution f(q) -> f(pi*q^{-1}), componentwise q -> +-q^{-1}."""
        return QPiScalar(
            self.plus.subs_q_inverse(),
            self.minus.subs_neg_q().subs_q_inverse(),
        )

    def specialize(self, sign):
        """The Q(q)-component at pi = sign (sign in {+1, -1})."""
        if sign not in (1, -1):
            raise ValueError("specialization sign must be +1 or -1")
        return self.plus if sign == 1 else self.minus

    def even_odd_parts(self):
        """The pair (f, g) with self = f + g*pi and f, g in Q(q)."""
        f = (self.plus + self.minus).half()
        g = (self.plus - self.minus).half()
        return f, g

    def is_integral(self):
        """True iff self lies in A = Z^pi[q, q^{-1}]."""
        for part in self.even_odd_parts():
            if part and not part.is_laurent_monic_denominator():
                return False
        return True

    def text(self):
        f, g = self.even_odd_parts()
        if not f and not g:
            return "0"
        parts = []
        if f:
            parts.append(f.text())
        if g:
            gt = g.text()
            if gt == "1":
                term = "pi"
            elif gt == "-1":
                term = "-pi"
            elif ("+" in gt or " - " in gt or gt.startswith("(")) and not gt.startswith("-"):
                term = f"pi*({gt})"
            elif gt.startswith("-"):
                term = f"-pi*({gt[1:]})" if ("+" in gt or " - " in gt) else f"-pi*{gt[1:]}"
            else:
                term = f"pi*{gt}"
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __repr__(self):
        return f"QPiScalar({self.text()})"


ZERO = QPiScalar.from_int(0)
ONE = QPiScalar.from_int(1)
TWO = QPiScalar.from_int(2)
PI = QPiScalar.pi_power(1)
Q = QPiScalar.q_power(1)
EPS_PLUS = QPiScalar(RF_ONE, RF_ZERO)
EPS_MINUS = QPiScalar(RF_ZERO, RF_ONE)


def pi_q_power(k, d=1):
    """(pi_d q_d)^k = pi^(dk) q^(dk)."""
    return QPiScalar.monomial(1, d * k, d * k)


# ---------------------------------------------------------------------------
# (q,pi)-quantum integers, factorials, binomials.
#
# All take the scaling parameter d, computing at q_i = q^d, pi_i = pi^d.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def quantum_int(n, d=1):
    """[n] at (q^d, pi^d): ((pi q)^n - q^{-n}) / (pi q - q^{-1})."""
    num = pi_q_power(n, d) - QPiScalar.q_power(-n * d)
    den = pi_q_power(1, d) - QPiScalar.q_power(-d)
    return num / den


@lru_cache(maxsize=None)
def quantum_factorial(n, d=1):
    """[n]! at (q^d, pi^d); requires n >= 0."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = ONE
    for k in range(1, n + 1):
        out = out * quantum_int(k, d)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(n, k, d=1):
    """Binomial [n choose k] at (q^d, pi^d); n any integer, k >= 0."""
    if k < 0:
        raise ValueError("binomial with negative lower index")
    num = ONE
    for l in range(n - k + 1, n + 1):
        num = num * (pi_q_power(l, d) - QPiScalar.q_power(-l * d))
    den = ONE
    for m in range(1, k + 1):
        den = den * (pi_q_power(m, d) - QPiScalar.q_power(-m * d))
    return num / den


def binom2(n):
    """Ordinary binomial coefficient C(n, 2) = n(n-1)/2, any integer n."""
    return n * (n - 1) // 2
