"""The half-quantum covering group f over a Cartan datum with parity.

Elements live in the free algebra on the generators theta_i as
word-indexed linear combinations; the Serre relations are never
rewritten away.  Semantic equality is delegated to the bilinear form,
whose radical contains the Serre ideal (and equals it by the theory the
construction rests on), so two combinations are equal in f iff their
difference pairs to zero against every word of matching weight.
"""

from functools import lru_cache

from .scalars import ONE, QPiScalar, ZERO, quantum_factorial


class HalfElement:
    """A finite word-indexed linear combination over Q^pi(q)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, HalfElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return HalfElement(self.alg, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return HalfElement(self.alg, {w: -c for w, c in self.terms.items()})

    def scale(self, c):
        if not c:
            return HalfElement(self.alg, {})
        return HalfElement(self.alg, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                s = out.get(w)
                s = c if s is None else s + c
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return HalfElement(self.alg, out)

    def by_weight(self):
        """Split into weight-homogeneous pieces: {weight: HalfElement}."""
        pieces = {}
        for w, c in self.terms.items():
            nu = self.alg.word_weight(w)
            pieces.setdefault(nu, {})[w] = c
        return {nu: HalfElement(self.alg, t) for nu, t in pieces.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            word = "*".join(f"th_{i + 1}" for i in w) if w else "1"
            parts.append(f"({c.text()})*{word}")
        return " + ".join(parts)


class HalfAlgebra:
    """The algebra f for a fixed Cartan datum, with memoized form data."""

    def __init__(self, datum):
        self.datum = datum
        n = datum.rank
        # (alpha_k, alpha_i) = d_k a_ki, symmetric by C4
        self._root_form = tuple(
            tuple(datum.d[k] * datum.cartan[k][i] for i in range(n)) for k in range(n)
        )
        self._form_cache = {}
        self._theta_norms = {}
        self._norm_factor_cache = {}

    # -- element constructors ------------------------------------------------

    def zero(self):
        return HalfElement(self, {})

    def one(self):
        return HalfElement(self, {(): ONE})

    def from_terms(self, terms):
        return HalfElement(self, {w: c for w, c in terms.items() if c})

    def word(self, letters, coeff=ONE):
        return HalfElement(self, {tuple(letters): coeff} if coeff else {})

    def theta(self, i):
        return self.word((i,))

    def theta_power(self, i, n):
        """Divided power theta_i^(n), expanded as a word with 1/[n]_i!."""
        if n < 0:
            return self.zero()
        coeff = quantum_factorial(n, self.datum.d[i]).invert()
        return self.word((i,) * n, coeff)

    # -- grading --------------------------------------------------------------

    def word_weight(self, w):
        nu = [0] * self.datum.rank
        for i in w:
            nu[i] += 1
        return tuple(nu)

    def word_parity(self, w):
        return sum(self.datum.parity[i] for i in w) % 2

    def weight_parity(self, nu):
        return self.datum.root_parity(nu)

    def words_of_weight(self, nu):
        """All words with letter multiset given by the root coordinates."""
        return _words_of_weight(tuple(nu))

    # -- coproduct and derivations ---------------------------------------------

    def coproduct(self, x):
        """The twisted coproduct r as a map {(left word, right word): scalar}.

        r is multiplicative for (x (x) y)(x' (x) y') =
        pi^{p(x')p(y)} q^{-(|x'|,|y|)} xx' (x) yy', with
        r(theta_i) = theta_i (x) 1 + 1 (x) theta_i.
        """
        out = {}
        for w, c in x.terms.items():
            for (w1, w2), f in self._coproduct_word(w).items():
                key = (w1, w2)
                s = out.get(key)
                s = c * f if s is None else s + c * f
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def _coproduct_word(self, w):
        # scan letters left to right; sending a letter left past the letters
        # already sent right costs pi^{p(i)p(right)} q^{-(alpha_i, |right|)}
        n = self.datum.rank
        states = {((), (), 0, (0,) * n): ONE}  # (left, right, parity_r, weight_r)
        for i in w:
            new = {}
            pi_i = self.datum.parity[i]
            for (lw, rw, pr, nr), c in states.items():
                # letter goes right: no factor
                key = (lw, rw + (i,), (pr + pi_i) % 2, _bump(nr, i, n))
                s = new.get(key)
                s = c if s is None else s + c
                new[key] = s
                # letter goes left
                if rw:
                    exp_q = -sum(
                        self._root_form[i][k] * nr[k] for k in range(n) if nr[k]
                    )
                    fac = QPiScalar.monomial(1, pi_i * pr, exp_q)
                    c2 = c * fac
                else:
                    c2 = c
                key = (lw + (i,), rw, pr, nr)
                s = new.get(key)
                s = c2 if s is None else s + c2
                new[key] = s
            states = new
        return {(lw, rw): c for (lw, rw, _, _), c in states.items()}

    def left_derivation(self, i, x):
        """The derivation _i r: strips i-letters from the left."""
        return self._derivation(i, x, left=True)

    def right_derivation(self, i, x):
        """The derivation r_i: strips i-letters from the right."""
        return self._derivation(i, x, left=False)

    def _derivation(self, i, x, left):
        out = self.zero()
        for w, c in x.terms.items():
            for pos, fac in self._deriv_word_positions(i, w, left):
                out = out + self.word(w[:pos] + w[pos + 1:], c * fac)
        return out

    def _deriv_word_positions(self, i, w, left):
        n = self.datum.rank
        p_i = self.datum.parity[i]
        results = []
        for pos, letter in enumerate(w):
            if letter != i:
                continue
            passed = w[:pos] if left else w[pos + 1:]
            pi_exp = p_i * sum(self.datum.parity[a] for a in passed)
            q_exp = -sum(self._root_form[a][i] for a in passed)
            results.append((pos, QPiScalar.monomial(1, pi_exp, q_exp)))
        return results

    # -- the bilinear form ------------------------------------------------------

    def theta_norm(self, i):
        """(theta_i, theta_i) = (1 - pi_i q_i^2)^{-1}."""
        norm = self._theta_norms.get(i)
        if norm is None:
            d = self.datum.d[i]
            norm = (ONE - QPiScalar.monomial(1, d, 2 * d)).invert()
            self._theta_norms[i] = norm
        return norm

    def weight_norm_factor(self, nu):
        """prod_i (theta_i, theta_i)^{nu_i}: the invertible norm per weight."""
        nu = tuple(nu)
        fac = self._norm_factor_cache.get(nu)
        if fac is None:
            fac = ONE
            for i, c in enumerate(nu):
                for _ in range(c):
                    fac = fac * self.theta_norm(i)
            self._norm_factor_cache[nu] = fac
        return fac

    def form_words(self, w1, w2):
        """(theta_{w1}, theta_{w2}), by recursion on the left letter of w1."""
        if self.word_weight(w1) != self.word_weight(w2):
            return ZERO
        return self._form_words_eq(w1, w2)

    def _form_words_eq(self, w1, w2):
        lau = self._form_laurent(w1, w2)
        if not lau:
            return ZERO
        return self.weight_norm_factor(self.word_weight(w1)) * lau

    def _form_laurent(self, w1, w2):
        """The word form divided by the weight norm factor (a Laurent value).

        Each recursion step contributes exactly one theta-norm, so the
        full form is weight_norm_factor(|w1|) times this Laurent part;
        the Laurent recursion stays denominator-free and fast.
        """
        if not w1:
            return ONE
        key = (w1, w2)
        val = self._form_cache.get(key)
        if val is not None:
            return val
        i = w1[0]
        rest = w1[1:]
        total = ZERO
        for pos, fac in self._deriv_word_positions(i, w2, left=True):
            sub = self._form_laurent(rest, w2[:pos] + w2[pos + 1:])
            if sub:
                total = total + fac * sub
        self._form_cache[key] = total
        return total

    def bilinear_form(self, x, y):
        """The form on f; zero across distinct weights."""
        total = ZERO
        by_wt = {}
        for w2, c2 in y.terms.items():
            by_wt.setdefault(self.word_weight(w2), []).append((w2, c2))
        sums = {}
        for w1, c1 in x.terms.items():
            nu = self.word_weight(w1)
            for w2, c2 in by_wt.get(nu, ()):
                f = self._form_laurent(w1, w2)
                if f:
                    cur = sums.get(nu)
                    add = c1 * c2 * f
                    sums[nu] = add if cur is None else cur + add
        for nu, val in sums.items():
            if val:
                total = total + self.weight_norm_factor(nu) * val
        return total

    def tensor_form(self, tensor_terms, u1, u2):
        """Pair a {(w1,w2): c} tensor combination against u1 (x) u2 (words)."""
        total = ZERO
        nu1 = self.word_weight(u1)
        nu2 = self.word_weight(u2)
        for (w1, w2), c in tensor_terms.items():
            if self.word_weight(w1) != nu1 or self.word_weight(w2) != nu2:
                continue
            f1 = self._form_laurent(w1, u1)
            if not f1:
                continue
            f2 = self._form_laurent(w2, u2)
            if f2:
                total = total + c * f1 * f2
        if not total:
            return ZERO
        return self.weight_norm_factor(nu1) * self.weight_norm_factor(nu2) * total

    # -- Serre elements and the equality oracle -----------------------------------

    def serre_element(self, i, j):
        """The degree-(1 - a_ij) Serre combination in divided powers."""
        if i == j:
            raise ValueError("Serre element needs distinct indices")
        b = self.datum.b(i, j)
        p_i, p_j = self.datum.parity[i], self.datum.parity[j]
        out = self.zero()
        for k in range(b + 1):
            sign = -1 if k % 2 else 1
            pi_exp = (k * (k - 1) // 2) * p_i + k * p_i * p_j
            coeff = QPiScalar.monomial(sign, pi_exp, 0)
            term = self.theta_power(i, b - k) * self.theta(j) * self.theta_power(i, k)
            out = out + term.scale(coeff)
        return out

    def is_zero_mod_serre(self, x):
        """True iff x pairs to zero with every word of each occurring weight.

        Vanishing is tested on the Laurent parts; the weight norm factor
        is invertible and drops out.
        """
        for nu, piece in x.by_weight().items():
            for w in self.words_of_weight(nu):
                total = ZERO
                for w1, c1 in piece.terms.items():
                    f = self._form_laurent(w1, w)
                    if f:
                        total = total + c1 * f
                if total:
                    return False
        return True

    def equals_mod_serre(self, x, y):
        """The equality oracle for f: form-equality of x and y."""
        return self.is_zero_mod_serre(x - y)


def _bump(nu, i, n):
    out = list(nu) if nu else [0] * n
    out[i] += 1
    return tuple(out)


@lru_cache(maxsize=None)
def _words_of_weight(nu):
    if all(c == 0 for c in nu):
        return ((),)
    out = []
    for i, c in enumerate(nu):
        if c > 0:
            rest = list(nu)
            rest[i] -= 1
            for w in _words_of_weight(tuple(rest)):
                out.append((i,) + w)
    return tuple(out)


@lru_cache(maxsize=None)
def half_algebra(datum):
    """The shared HalfAlgebra instance (and caches) for a datum."""
    return HalfAlgebra(datum)
