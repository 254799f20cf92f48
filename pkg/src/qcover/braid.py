"""The braid automorphisms T_i, T_i^{-1} of U and braid-word application.

Generator images follow the table induced by the module operators: on
the rank-1 generators the standard signed torus-twisted images, on
E_j/F_j (j != i) the higher Serre elements e, e' = sigma(e), f, f' with
J-tilde and pi prefactors, and reflection on torus exponents.  Since
elements store divided powers expanded into plain words, a braid letter
acts letter-by-letter and the images are extended multiplicatively by
straightening.
"""

from math import inf

from .cover import CoverElement, cover_algebra
from .scalars import ONE, QPiScalar, binom2


class InfiniteOrderError(ValueError):
    pass


def parse_braid_word(text):
    """Parse `T1 T2^-1 T1` into a tuple of (index, sign) letters (1-based)."""
    letters = []
    for tok in text.split():
        if not tok.startswith("T"):
            raise ValueError(f"bad braid letter {tok!r}")
        body = tok[1:]
        sign = 1
        if body.endswith("^-1"):
            sign = -1
            body = body[:-3]
        elif body.endswith("^1"):
            body = body[:-2]
        letters.append((int(body) - 1, sign))
    return tuple(letters)


class Braider:
    """Braid-letter application on CoverElements with per-datum caches."""

    def __init__(self, datum):
        self.datum = datum
        self.U = cover_algebra(datum)
        self._letter_cache = {}

    # -- generator images ---------------------------------------------------

    def generator_image(self, i, sign, kind, j, n=1):
        """The table entry T_i^{sign} applied to E_j^(n) or F_j^(n)."""
        U = self.U
        datum = self.datum
        d_i = datum.d[i]
        if kind == "E" and j == i:
            if sign > 0:
                return (
                    U.J_tilde(i, n) * U.K_tilde(i, n) * U.F_power(i, n)
                ).scale(QPiScalar.monomial((-1) ** n, d_i * n, d_i * n * (n - 1)))
            return (U.F_power(i, n) * U.K_tilde(i, -n)).scale(
                QPiScalar.monomial((-1) ** n, 0, d_i * n * (n - 1))
            )
        if kind == "F" and j == i:
            if sign > 0:
                return (U.E_power(i, n) * U.K_tilde(i, -n)).scale(
                    QPiScalar.monomial((-1) ** n, 0, -d_i * n * (n - 1))
                )
            return (
                U.J_tilde(i, n) * U.K_tilde(i, n) * U.E_power(i, n)
            ).scale(QPiScalar.monomial((-1) ** n, d_i * n, -d_i * n * (n - 1)))
        a = datum.cartan[i][j]
        p_j = datum.parity[j]
        if kind == "E":
            pref = QPiScalar.pi_power(d_i * binom2(n * a))
            core = U.higher_serre("e" if sign > 0 else "e'", i, j, n, -n * a)
            return (U.J_tilde(i, n * p_j) * core).scale(pref)
        core = U.higher_serre("f" if sign > 0 else "f'", i, j, n, -n * a)
        return U.J_tilde(i, n * p_j) * core

    def _letter_image(self, i, sign, kind, j):
        key = (i, sign, kind, j)
        img = self._letter_cache.get(key)
        if img is None:
            img = self.generator_image(i, sign, kind, j, 1)
            self._letter_cache[key] = img
        return img

    # -- application ----------------------------------------------------------

    def apply_letter(self, i, sign, x):
        """T_i^{sign} of a CoverElement, multiplicatively over letters."""
        U = self.U
        datum = self.datum
        out = U.zero()
        for (f, j_exp, k_exp, e), c in x.terms.items():
            img = U.one().scale(c)
            for letter in f:
                img = img * self._letter_image(i, sign, "F", letter)
            jr = tuple(v % 2 for v in datum.reflect_coweight_coords(i, j_exp))
            kr = datum.reflect_coweight_coords(i, k_exp)
            img = img * U.torus(jr, kr)
            for letter in e:
                img = img * self._letter_image(i, sign, "E", letter)
            out = out + img
        return out

    def apply_word(self, word, x):
        """Apply a braid word, rightmost letter first (innermost)."""
        for i, sign in reversed(word):
            x = self.apply_letter(i, sign, x)
        return x

    # -- relation verification --------------------------------------------------

    def standard_generators(self):
        """E_k, F_k and coroot torus generators, with labels."""
        U = self.U
        gens = []
        for k in range(self.datum.rank):
            gens.append((f"E_{k + 1}", U.E(k)))
            gens.append((f"F_{k + 1}", U.F(k)))
            coords = tuple(1 if a == k else 0 for a in range(self.datum.rank))
            gens.append((f"K_{k + 1}", U.K(coords)))
            gens.append((f"J_{k + 1}", U.J(coords)))
        return gens

    def verify_braid_relation(self, i, j):
        """Compare the two alternating m_ij-fold products on all generators."""
        m = self.datum.braid_order(i, j)
        if m == inf:
            raise InfiniteOrderError(f"m({i},{j}) is infinite")
        left = tuple((i, 1) if t % 2 == 0 else (j, 1) for t in range(m))
        right = tuple((j, 1) if t % 2 == 0 else (i, 1) for t in range(m))
        report = {}
        for label, g in self.standard_generators():
            diff = self.apply_word(left, g) - self.apply_word(right, g)
            report[label] = self.U.is_zero(diff)
        return report

    def e_small(self, i, j, m):
        return self.U.e_small(i, j, m)

    def e_small_prime(self, i, j, m):
        return self.U.e_small_prime(i, j, m)


def braider(datum):
    b = _braiders.get(datum)
    if b is None:
        b = Braider(datum)
        _braiders[datum] = b
    return b


_braiders = {}
