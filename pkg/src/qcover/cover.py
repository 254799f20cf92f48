"""The quantum covering group U in triangular normal form.

A normal monomial is (f_word, j_exp, k_exp, e_word): an F-word, a torus
element J_mu K_nu with mu, nu in coroot coordinates (J-exponents mod 2),
and an E-word.  Products are straightened: torus letters pass E/F words
with pi/q weight factors, and each E-letter passes an entire F-word
through the commutation formula

    [E_i, x^-] = (pi_i^{p(x)-p(i)} r_i(x)^- Jt_i Kt_i
                  - Kt_i^{-1} (_i r)(x)^-) / (pi_i q_i - q_i^{-1}),

recursing through the half-algebra derivations.  Zero-testing reduces,
via the triangular decomposition, to bilinear-form pairings of the
residual f (x) f components per torus element.
"""

from functools import lru_cache

from .halfalg import HalfElement, half_algebra
from .scalars import ONE, PI, QPiScalar, ZERO, binom2, quantum_factorial


def _acc(out, key, val):
    if not val:
        return
    s = out.get(key)
    s = val if s is None else s + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class CoverElement:
    """A linear combination of normal monomials over Q^pi(q)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, CoverElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return CoverElement(self.alg, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CoverElement(self.alg, {m: -c for m, c in self.terms.items()})

    def scale(self, c):
        if not c:
            return CoverElement(self.alg, {})
        return CoverElement(self.alg, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        return self.alg.straighten_mul(self, other)

    def __pow__(self, n):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            parts.append(f"({c.text()})*{self.alg.monomial_text(m)}")
        return " + ".join(parts)


class CoverAlgebra:
    """U for a fixed datum, with straightening and structure maps."""

    def __init__(self, datum):
        self.datum = datum
        self.half = half_algebra(datum)
        n = datum.rank
        self._zero_coords = (0,) * n
        self._single_cache = {}
        self._e_past_f_cache = {}
        self._denom_inv = {}

    # -- constructors -----------------------------------------------------------

    def zero(self):
        return CoverElement(self, {})

    def one(self):
        return self.monomial((), self._zero_coords, self._zero_coords, ())

    def monomial(self, f_word, j_exp, k_exp, e_word, coeff=ONE):
        if not coeff:
            return CoverElement(self, {})
        mono = (tuple(f_word), tuple(x % 2 for x in j_exp), tuple(k_exp), tuple(e_word))
        return CoverElement(self, {mono: coeff})

    def E(self, i):
        return self.monomial((), self._zero_coords, self._zero_coords, (i,))

    def F(self, i):
        return self.monomial((i,), self._zero_coords, self._zero_coords, ())

    def E_power(self, i, nn):
        """Divided power E_i^(n), word-expanded with the 1/[n]_i! scalar."""
        if nn < 0:
            return self.zero()
        c = quantum_factorial(nn, self.datum.d[i]).invert()
        return self.monomial((), self._zero_coords, self._zero_coords, (i,) * nn, c)

    def F_power(self, i, nn):
        if nn < 0:
            return self.zero()
        c = quantum_factorial(nn, self.datum.d[i]).invert()
        return self.monomial((i,) * nn, self._zero_coords, self._zero_coords, (), c)

    def K(self, coords):
        return self.monomial((), self._zero_coords, coords, ())

    def J(self, coords):
        return self.monomial((), coords, self._zero_coords, ())

    def torus(self, j_exp, k_exp):
        return self.monomial((), j_exp, k_exp, ())

    def K_tilde(self, i, power=1):
        coords = [0] * self.datum.rank
        coords[i] = self.datum.d[i] * power
        return self.K(coords)

    def J_tilde(self, i, power=1):
        coords = [0] * self.datum.rank
        coords[i] = self.datum.d[i] * power
        return self.J(coords)

    def from_half(self, x, sign):
        """x^+ (words as E's) or x^- (words as F's) for x in f."""
        out = {}
        for w, c in x.terms.items():
            if sign == "+":
                _acc(out, ((), self._zero_coords, self._zero_coords, w), c)
            else:
                _acc(out, (w, self._zero_coords, self._zero_coords, ()), c)
        return CoverElement(self, out)

    # -- gradings ----------------------------------------------------------------

    def monomial_weight(self, mono):
        f, _, _, e = mono
        wf = self.half.word_weight(f)
        we = self.half.word_weight(e)
        return tuple(b - a for a, b in zip(wf, we))

    def monomial_parity(self, mono):
        f, _, _, e = mono
        return (self.half.word_parity(f) + self.half.word_parity(e)) % 2

    def monomial_text(self, mono):
        f, j, k, e = mono
        parts = [f"F_{i + 1}" for i in f]
        if any(j):
            parts.append("J{" + ",".join(str(x) for x in j) + "}")
        if any(k):
            parts.append("K{" + ",".join(str(x) for x in k) + "}")
        parts.extend(f"E_{i + 1}" for i in e)
        return "*".join(parts) if parts else "1"

    # -- straightening ------------------------------------------------------------

    def _denominator_inverse(self, i):
        inv = self._denom_inv.get(i)
        if inv is None:
            d = self.datum.d[i]
            inv = (QPiScalar.monomial(1, d, d) - QPiScalar.q_power(-d)).invert()
            self._denom_inv[i] = inv
        return inv

    def _single_e_past_f(self, i, f_word):
        """E_i . F_{f_word} as a dict of normal monomials."""
        key = (i, f_word)
        cached = self._single_cache.get(key)
        if cached is not None:
            return cached
        datum = self.datum
        half = self.half
        d_i = datum.d[i]
        p_i = datum.parity[i]
        p_w = half.word_parity(f_word)
        out = {}
        _acc(out, (f_word, self._zero_coords, self._zero_coords, (i,)),
             QPiScalar.pi_power(p_i * p_w))
        inv = self._denominator_inverse(i)
        word = HalfElement(half, {f_word: ONE})
        tilde = [0] * datum.rank
        tilde[i] = d_i
        tilde = tuple(tilde)
        neg_tilde = tuple(-x for x in tilde)
        lead = QPiScalar.pi_power(d_i * (p_w + p_i)) * inv
        for u, cu in half.right_derivation(i, word).terms.items():
            _acc(out, (u, tilde, tilde, ()), lead * cu)
        for u, cu in half.left_derivation(i, word).terms.items():
            # Kt_i^{-1} F_u = q^{<d_i alpha_i^vee, |u|>} F_u Kt_i^{-1}
            q_exp = d_i * datum.coroot_pairing_root(i, half.word_weight(u))
            fac = QPiScalar.monomial(-1, 0, q_exp) * inv
            _acc(out, (u, self._zero_coords, neg_tilde, ()), fac * cu)
        self._single_cache[key] = out
        return out

    def _e_past_f(self, e_word, f_word):
        """E_{e_word} . F_{f_word} as a dict of normal monomials."""
        if not e_word or not f_word:
            return {(f_word, self._zero_coords, self._zero_coords, e_word): ONE}
        key = (e_word, f_word)
        cached = self._e_past_f_cache.get(key)
        if cached is not None:
            return cached
        i = e_word[-1]
        rest = e_word[:-1]
        out = {}
        for (fw, jm, km, ew), c in self._single_e_past_f(i, f_word).items():
            for (fw2, jm2, km2, ew2), c2 in self._e_past_f(rest, fw).items():
                fac = self._pass_torus_left_of_e(jm, km, ew2)
                mono = (
                    fw2,
                    tuple((a + b) % 2 for a, b in zip(jm2, jm)),
                    tuple(a + b for a, b in zip(km2, km)),
                    ew2 + ew,
                )
                _acc(out, mono, c * c2 * fac)
        self._e_past_f_cache[key] = out
        return out

    def _pass_torus_left_of_e(self, j_exp, k_exp, e_word):
        """Scalar factor from E_{e_word} . J_j K_k = factor . J_j K_k E_{e_word}."""
        if not e_word or (not any(j_exp) and not any(k_exp)):
            return ONE
        nu = self.half.word_weight(e_word)
        pi_exp = self.datum.coweight_pairing_root(j_exp, nu)
        q_exp = -self.datum.coweight_pairing_root(k_exp, nu)
        return QPiScalar.monomial(1, pi_exp, q_exp)

    def straighten_mul(self, x, y):
        """The product in U, re-expressed over normal monomials."""
        out = {}
        datum = self.datum
        for (f1, j1, k1, e1), c1 in x.terms.items():
            for (f2, j2, k2, e2), c2 in y.terms.items():
                c = c1 * c2
                for (fw, jm, km, ew), cm in self._e_past_f(e1, f2).items():
                    cc = c * cm
                    # tau_1 past F_{fw}: J gives pi^{-<mu,|fw|>}, K gives q^{-<nu,|fw|>}
                    if fw and (any(j1) or any(k1)):
                        wf = self.half.word_weight(fw)
                        cc = cc * QPiScalar.monomial(
                            1,
                            datum.coweight_pairing_root(j1, wf),
                            -datum.coweight_pairing_root(k1, wf),
                        )
                    # E_{ew} past tau_2
                    cc = cc * self._pass_torus_left_of_e(j2, k2, ew)
                    mono = (
                        f1 + fw,
                        tuple((a + b + g) % 2 for a, b, g in zip(j1, jm, j2)),
                        tuple(a + b + g for a, b, g in zip(k1, km, k2)),
                        ew + e2,
                    )
                    _acc(out, mono, cc)
        return CoverElement(self, out)

    # -- zero testing ---------------------------------------------------------------

    def is_zero(self, x):
        """Exact zero test via the triangular decomposition and the form.

        Terms are grouped by torus element and (F,E) biweight; each group
        is a residual element of f (x) f and vanishes iff it pairs to zero
        with every word pair of that biweight.
        """
        groups = {}
        for (f, j, k, e), c in x.terms.items():
            key = (j, k, self.half.word_weight(f), self.half.word_weight(e))
            groups.setdefault(key, {})[(f, e)] = c
        for (j, k, wf, we), tensor in groups.items():
            for w1 in self.half.words_of_weight(wf):
                for w2 in self.half.words_of_weight(we):
                    total = ZERO
                    for (f, e), c in tensor.items():
                        a = self.half._form_laurent(f, w1)
                        if not a:
                            continue
                        b = self.half._form_laurent(e, w2)
                        if b:
                            total = total + c * a * b
                    if total:
                        return False
        return True

    def equals(self, x, y):
        return self.is_zero(x - y)

    # -- structure maps ---------------------------------------------------------------

    def omega(self, x):
        """The automorphism E_i -> pi_i Jt_i F_i, F_i -> E_i, K -> K^{-1}."""
        out = self.zero()
        for (f, j, k, e), c in x.terms.items():
            img = CoverElement(self, {((), self._zero_coords, self._zero_coords, ()): c})
            for i in f:
                img = img * self.E(i)
            img = img * self.torus(j, tuple(-v for v in k))
            for i in e:
                pref = QPiScalar.pi_power(self.datum.d[i])
                img = img * (self.J_tilde(i) * self.F(i)).scale(pref)
            out = out + img
        return out

    def sigma(self, x):
        """The anti-automorphism fixing E_i, twisting F_i by pi_i Jt_i."""
        out = self.zero()
        for (f, j, k, e), c in x.terms.items():
            img = CoverElement(self, {((), self._zero_coords, self._zero_coords, ()): c})
            for i in reversed(e):
                img = img * self.E(i)
            img = img * self.torus(j, tuple(-v for v in k))
            for i in reversed(f):
                pref = QPiScalar.pi_power(self.datum.d[i])
                img = img * (self.J_tilde(i) * self.F(i)).scale(pref)
            out = out + img
        return out

    def bar(self, x):
        """The bar involution: fixes E, F, J; K_nu -> J_nu K_{-nu}; bars scalars."""
        out = {}
        for (f, j, k, e), c in x.terms.items():
            mono = (
                f,
                tuple((a + b) % 2 for a, b in zip(j, k)),
                tuple(-v for v in k),
                e,
            )
            _acc(out, mono, c.bar())
        return CoverElement(self, out)

    # -- coproduct ----------------------------------------------------------------------

    def tensor_mul(self, t1, t2):
        """Product in U (x) U with the pi^{p(x')p(y)} sign twist."""
        out = {}
        for (a1, b1), c1 in t1.items():
            p_b1 = self.monomial_parity(b1)
            for (a2, b2), c2 in t2.items():
                sign = (
                    PI if (p_b1 * self.monomial_parity(a2)) % 2 else ONE
                )
                left = self.straighten_mul(
                    CoverElement(self, {a1: ONE}), CoverElement(self, {a2: ONE})
                )
                right = self.straighten_mul(
                    CoverElement(self, {b1: ONE}), CoverElement(self, {b2: ONE})
                )
                cc = c1 * c2 * sign
                for ma, ca in left.terms.items():
                    for mb, cb in right.terms.items():
                        _acc(out, (ma, mb), cc * ca * cb)
        return out

    def tensor_scale(self, t, c):
        return {k: c * v for k, v in t.items()} if c else {}

    def tensor_add(self, t1, t2):
        out = dict(t1)
        for k, v in t2.items():
            _acc(out, k, v)
        return out

    def coproduct(self, x):
        """Delta on U, valued in {(monomial, monomial): scalar}."""
        unit = self.one().terms
        out = {}
        for (f, j, k, e), c in x.terms.items():
            t = {(next(iter(unit)), next(iter(unit))): ONE}
            for i in f:
                t = self.tensor_mul(t, self._delta_f(i))
            t = self.tensor_mul(t, self._delta_torus(j, k))
            for i in e:
                t = self.tensor_mul(t, self._delta_e(i))
            out = self.tensor_add(out, self.tensor_scale(t, c))
        return out

    def _delta_e(self, i):
        m1 = next(iter(self.E(i).terms))
        unit = next(iter(self.one().terms))
        jk = next(iter((self.J_tilde(i) * self.K_tilde(i)).terms))
        return {(m1, unit): ONE, (jk, m1): ONE}

    def _delta_f(self, i):
        m1 = next(iter(self.F(i).terms))
        unit = next(iter(self.one().terms))
        kinv = next(iter(self.K_tilde(i, -1).terms))
        return {(m1, kinv): ONE, (unit, m1): ONE}

    def _delta_torus(self, j, k):
        m = next(iter(self.torus(j, k).terms))
        return {(m, m): ONE}

    def tensor_is_zero(self, t):
        """Zero test in U (x) U, componentwise over torus/biweight groups."""
        groups = {}
        for (m1, m2), c in t.items():
            f1, j1, k1, e1 = m1
            f2, j2, k2, e2 = m2
            key = (
                j1, k1, j2, k2,
                self.half.word_weight(f1), self.half.word_weight(e1),
                self.half.word_weight(f2), self.half.word_weight(e2),
            )
            groups.setdefault(key, {})[(f1, e1, f2, e2)] = c
        half = self.half
        for key, terms in groups.items():
            _, _, _, _, wf1, we1, wf2, we2 = key
            for p1 in half.words_of_weight(wf1):
                for p2 in half.words_of_weight(we1):
                    for p3 in half.words_of_weight(wf2):
                        for p4 in half.words_of_weight(we2):
                            total = ZERO
                            for (f1, e1, f2, e2), c in terms.items():
                                v = half._form_laurent(f1, p1)
                                if not v:
                                    continue
                                v2 = half._form_laurent(e1, p2)
                                if not v2:
                                    continue
                                v3 = half._form_laurent(f2, p3)
                                if not v3:
                                    continue
                                v4 = half._form_laurent(e2, p4)
                                if v4:
                                    total = total + c * v * v2 * v3 * v4
                            if total:
                                return False
        return True

    # -- Serre and higher Serre elements ---------------------------------------------

    def serre_element(self, i, j, sign):
        """The E- or F-side Serre combination (sign '+' or '-')."""
        return self.from_half(self.half.serre_element(i, j), sign)

    def higher_serre(self, kind, i, j, n, m):
        """The elements e_{i,j;n,m}, e'_{...}, f_{...}, f'_{...}.

        kind is one of 'e', "e'", 'f', "f'".  The primed families are the
        sigma-images of the unprimed ones up to central factors; the four
        conventions used here are the unique ones under which the braid
        generator table gives mutually inverse automorphisms (verified by
        solving the intertwining constraints; cf. tests).
        """
        if i == j:
            raise ValueError("higher Serre element needs distinct indices")
        datum = self.datum
        d_i = datum.d[i]
        p_i, p_j = datum.parity[i], datum.parity[j]
        a_ij = datum.cartan[i][j]
        out = self.zero()
        for r in range(m + 1):
            s = m - r
            pi_exp = d_i * (r * n * p_i * p_j + binom2(r) * p_i)
            base = -r * (n * a_ij + m - 1)
            sign = -1 if r % 2 else 1
            if kind in ("e", "e'"):
                # (pi_i q_i)^{-r(n a_ij + m - 1)} on both E-side families
                coeff = QPiScalar.monomial(sign, pi_exp + d_i * base, d_i * base)
                if kind == "e":
                    term = self.E_power(i, r) * self.E_power(j, n) * self.E_power(i, s)
                else:
                    term = self.E_power(i, s) * self.E_power(j, n) * self.E_power(i, r)
            elif kind in ("f", "f'"):
                # q_i^{r(n a_ij + m - 1)} on both F-side families
                coeff = QPiScalar.monomial(sign, pi_exp, -d_i * base)
                if kind == "f":
                    term = self.F_power(i, s) * self.F_power(j, n) * self.F_power(i, r)
                else:
                    term = self.F_power(i, r) * self.F_power(j, n) * self.F_power(i, s)
            else:
                raise ValueError(f"unknown higher Serre kind {kind!r}")
            out = out + term.scale(coeff)
        return out

    def e_small(self, i, j, m):
        """e(i,j;m) = e_{i,j;1,m}."""
        return self.higher_serre("e", i, j, 1, m)

    def e_small_prime(self, i, j, m):
        return self.higher_serre("e'", i, j, 1, m)

    # -- nu-binomial torus elements -----------------------------------------------------

    def coroot_integer(self, i, n):
        """[alpha_i^vee; n] = (pi_i^n q_i^n Jt_i Kt_i - Kt_i^{-1} q_i^{-n}) / (pi_i q_i - q_i^{-1})."""
        d = self.datum.d[i]
        inv = self._denominator_inverse(i)
        top = (self.J_tilde(i) * self.K_tilde(i)).scale(
            QPiScalar.monomial(1, d * n, d * n)
        ) - self.K_tilde(i, -1).scale(QPiScalar.q_power(-d * n))
        return top.scale(inv)

    def coroot_binomial(self, i, n, k):
        """[alpha_i^vee; n over k], the torus-valued binomial."""
        out = self.one()
        for s in range(1, k + 1):
            out = out * self.coroot_integer(i, n + 1 - s)
        return out.scale(quantum_factorial(k, self.datum.d[i]).invert())


@lru_cache(maxsize=None)
def cover_algebra(datum):
    """The shared CoverAlgebra instance (and caches) for a datum."""
    return CoverAlgebra(datum)
