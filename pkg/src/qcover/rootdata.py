"""Cartan data with parity, weight/coweight lattices, and Weyl machinery.

Weights are stored in fundamental-weight coordinates (coords[i] is the
pairing with the i-th simple coroot).  Coweights, which only ever arise
here as torus exponents and reflection arguments, are stored in simple
coroot coordinates: by the parity condition P1 every simple coroot has
all-even fundamental coordinates, so reducing fundamental coordinates
mod 2 (as the relation J_nu^2 = 1 demands) would collapse every J-tilde
generator; coroot coordinates keep them independent.

Elements of the root lattice are plain tuples of simple-root
multiplicities.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, inf


class CartanValidationError(ValueError):
    """A Cartan datum axiom failed; `axiom` names the violated condition."""

    def __init__(self, axiom, message):
        self.axiom = axiom
        super().__init__(f"{axiom}: {message}")


class NotFiniteTypeError(ValueError):
    pass


class NotReducedError(ValueError):
    pass


@dataclass(frozen=True)
class CartanDatum:
    """A generalized Cartan matrix with parity function and symmetrizers."""

    cartan: tuple
    parity: tuple
    d: tuple

    @staticmethod
    def make(cartan, parity, d):
        datum = CartanDatum(
            tuple(tuple(int(x) for x in row) for row in cartan),
            tuple(int(x) for x in parity),
            tuple(int(x) for x in d),
        )
        datum.validate()
        return datum

    @staticmethod
    def from_json(obj):
        try:
            return CartanDatum.make(obj["cartan"], obj["parity"], obj["d"])
        except KeyError as exc:
            raise CartanValidationError("shape", f"missing field {exc}") from exc

    @property
    def rank(self):
        return len(self.cartan)

    def validate(self):
        a, p, d = self.cartan, self.parity, self.d
        n = len(a)
        if n == 0 or any(len(row) != n for row in a) or len(p) != n or len(d) != n:
            raise CartanValidationError("shape", "matrix/parity/d sizes disagree")
        if any(x not in (0, 1) for x in p):
            raise CartanValidationError("shape", "parity entries must be 0 or 1")
        for i in range(n):
            if a[i][i] != 2:
                raise CartanValidationError("C1", f"a[{i}][{i}] = {a[i][i]} != 2")
        for i in range(n):
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise CartanValidationError("C2", f"a[{i}][{j}] = {a[i][j]} > 0")
        for i in range(n):
            for j in range(n):
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise CartanValidationError("C3", f"a[{i}][{j}]/a[{j}][{i}] zero mismatch")
        if any(x <= 0 for x in d):
            raise CartanValidationError("C4", "symmetrizers must be positive")
        for i in range(n):
            for j in range(n):
                if d[i] * a[i][j] != d[j] * a[j][i]:
                    raise CartanValidationError("C4", "DA is not symmetric")
        # gcd(d)=1 is a normalization, but P2 forces every d_i even when all
        # indices are even, so it is only required once an odd index exists.
        if any(p) and gcd(*d) != 1 and len(d) > 1:
            raise CartanValidationError("C4", "gcd of symmetrizers is not 1")
        if len(d) == 1 and any(p) and d[0] != 1:
            raise CartanValidationError("C4", "gcd of symmetrizers is not 1")
        for i in range(n):
            if p[i] == 1:
                for j in range(n):
                    if a[i][j] % 2 != 0:
                        raise CartanValidationError("P1", f"a[{i}][{j}] odd with p({i}) = 1")
        for i in range(n):
            if d[i] % 2 != p[i] % 2:
                raise CartanValidationError("P2", f"d[{i}] = {d[i]} has wrong parity")
        return self

    # -- basic combinatorics -------------------------------------------------

    def b(self, i, j):
        return 1 - self.cartan[i][j]

    def odd_indices(self):
        return tuple(i for i in range(self.rank) if self.parity[i] == 1)

    def root_parity(self, nu):
        """Parity of a root-lattice element (tuple of root coordinates)."""
        return sum(c * p for c, p in zip(nu, self.parity)) % 2

    def symmetric_form(self, mu, nu):
        """(mu, nu) on the root lattice, with (alpha_i, alpha_j) = d_i a_ij."""
        a, d = self.cartan, self.d
        return sum(
            d[i] * a[i][j] * mu[i] * nu[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if mu[i] and nu[j]
        )

    def coroot_pairing_root(self, i, nu):
        """<alpha_i^vee, nu> for nu in root coordinates."""
        return sum(self.cartan[i][j] * nu[j] for j in range(self.rank) if nu[j])

    def reflect_root(self, i, nu):
        """s_i acting on the root lattice (root coordinates)."""
        c = self.coroot_pairing_root(i, nu)
        out = list(nu)
        out[i] -= c
        return tuple(out)

    def reflect_weight_coords(self, i, coords):
        """s_i on fundamental-weight coordinates."""
        c = coords[i]
        return tuple(coords[j] - c * self.cartan[j][i] for j in range(self.rank))

    def reflect_coweight_coords(self, i, coords):
        """s_i on coroot coordinates: mu - <mu, alpha_i> alpha_i^vee."""
        c = sum(coords[k] * self.cartan[k][i] for k in range(self.rank))
        out = list(coords)
        out[i] -= c
        return tuple(out)

    def coweight_pairing_root(self, coords, nu):
        """<mu, nu> for mu in coroot coordinates, nu in root coordinates."""
        return sum(
            coords[i] * self.cartan[i][j] * nu[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if coords[i] and nu[j]
        )

    def tilde_root(self, nu):
        """Coroot coordinates of the coweight sum(d_i nu_i alpha_i^vee)."""
        return tuple(self.d[i] * nu[i] for i in range(self.rank))

    def braid_order(self, i, j):
        """m_ij from the a_ij a_ji table; inf marks infinite order."""
        prod = self.cartan[i][j] * self.cartan[j][i]
        return {0: 2, 1: 3, 2: 4, 3: 6}.get(prod, inf)

    def spin_braid_relation_kind(self, i, j, parity_fn=None):
        """'spin' iff both indices are odd for parity_fn and a_ij = 0."""
        pf = parity_fn if parity_fn is not None else (lambda k: self.parity[k])
        if pf(i) == 1 and pf(j) == 1 and self.cartan[i][j] == 0:
            return "spin"
        return "ordinary"

    # -- finite type and reduced words ----------------------------------------

    def is_finite_type(self):
        """Positive definiteness of DA via leading principal minors."""
        n = self.rank
        sym = [[self.d[i] * self.cartan[i][j] for j in range(n)] for i in range(n)]
        for k in range(1, n + 1):
            if _det([row[:k] for row in sym[:k]]) <= 0:
                return False
        return True

    def longest_word(self):
        """A reduced word for w_0 by greedy descent, smallest index first."""
        if not self.is_finite_type():
            raise NotFiniteTypeError("longest word requires finite type")
        coords = (1,) * self.rank
        word = []
        while True:
            for i in range(self.rank):
                if coords[i] > 0:
                    word.append(i)
                    coords = self.reflect_weight_coords(i, coords)
                    break
            else:
                return tuple(word)

    def word_is_reduced(self, word):
        """Test s_{i_1}...s_{i_N} for reducedness via root positivity.

        A word is reduced iff each prefix sends the next simple root to a
        positive root; valid for arbitrary (also non-finite) type.
        """
        n = self.rank
        for k, letter in enumerate(word):
            root = [0] * n
            root[letter] = 1
            root = tuple(root)
            for pos in range(k - 1, -1, -1):
                root = self.reflect_root(word[pos], root)
            if any(c < 0 for c in root):
                return False
        return True

    def word_matrix(self, word):
        """The product s_{i_1}...s_{i_N} as a matrix on fundamental coords."""
        n = self.rank
        cols = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
        for letter in reversed(word):
            cols = [self.reflect_weight_coords(letter, col) for col in cols]
        return _from_cols(cols)

    def positive_roots(self):
        """All positive roots (root coordinates); finite type only."""
        if not self.is_finite_type():
            raise NotFiniteTypeError("positive roots require finite type")
        n = self.rank
        simples = []
        for i in range(n):
            root = [0] * n
            root[i] = 1
            simples.append(tuple(root))
        seen = set(simples)
        frontier = list(simples)
        while frontier:
            new = []
            for root in frontier:
                for i in range(n):
                    img = self.reflect_root(i, root)
                    if img not in seen:
                        seen.add(img)
                        new.append(img)
            frontier = new
        return sorted(r for r in seen if all(c >= 0 for c in r))

    def weyl_elements(self):
        """All (length, matrix-on-fundamental-coords) pairs; finite type."""
        if not self.is_finite_type():
            raise NotFiniteTypeError("Weyl enumeration requires finite type")
        n = self.rank
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        elements = {ident: 0}
        frontier = [ident]
        length = 0
        while frontier:
            length += 1
            new = []
            for mat in frontier:
                for i in range(n):
                    cols = [self.reflect_weight_coords(i, col) for col in _cols(mat)]
                    img = _from_cols(cols)
                    if img not in elements:
                        elements[img] = length
                        new.append(img)
            frontier = new
        return elements


def _cols(mat):
    n = len(mat)
    return [tuple(mat[i][j] for i in range(n)) for j in range(n)]


def _from_cols(cols):
    n = len(cols)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _det(mat):
    n = len(mat)
    rows = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for k in range(n):
        pivot = None
        for r in range(k, n):
            if rows[r][k]:
                pivot = r
                break
        if pivot is None:
            return 0
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
            det = -det
        det *= rows[k][k]
        for r in range(k + 1, n):
            f = rows[r][k] / rows[k][k]
            if f:
                for c in range(k, n):
                    rows[r][c] -= f * rows[k][c]
    assert det.denominator == 1
    return det.numerator


# -- weights ------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """A weight in fundamental coordinates: coords[i] = <alpha_i^vee, .>."""

    coords: tuple

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __getitem__(self, i):
        return self.coords[i]

    def is_dominant(self):
        return all(c >= 0 for c in self.coords)


def simple_root(datum, j):
    """alpha_j as a Weight (column j of the Cartan matrix)."""
    return Weight(tuple(datum.cartan[i][j] for i in range(datum.rank)))


def root_as_weight(datum, nu):
    """A root-lattice element (root coordinates) as a Weight."""
    n = datum.rank
    return Weight(
        tuple(sum(datum.cartan[i][j] * nu[j] for j in range(n)) for i in range(n))
    )


def simple_reflection(datum, i, wt):
    """s_i(lambda) = lambda - <alpha_i^vee, lambda> alpha_i."""
    return Weight(datum.reflect_weight_coords(i, wt.coords))


def spin(datum, wt):
    """The block spin: 0 at even indices, coordinate parity at odd ones."""
    return tuple(
        (wt.coords[i] % 2) if datum.parity[i] == 1 else 0 for i in range(datum.rank)
    )


def spin_parity(datum, wt):
    """The spin parity function p_lambda as a callable on indices."""
    sp = spin(datum, wt)
    return lambda i: sp[i]


def weight_to_root_coords(datum, wt):
    """Root coordinates of a Weight known to lie in the root lattice."""
    n = datum.rank
    rows = [[Fraction(datum.cartan[i][j]) for j in range(n)] + [Fraction(wt.coords[i])]
            for i in range(n)]
    for k in range(n):
        pivot = next(r for r in range(k, n) if rows[r][k])
        rows[k], rows[pivot] = rows[pivot], rows[k]
        pk = rows[k][k]
        rows[k] = [x / pk for x in rows[k]]
        for r in range(n):
            if r != k and rows[r][k]:
                f = rows[r][k]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[k])]
    coords = [rows[i][n] for i in range(n)]
    if any(c.denominator != 1 for c in coords):
        raise ValueError("weight does not lie in the root lattice")
    return tuple(int(c) for c in coords)


@lru_cache(maxsize=None)
def _positive_roots(datum):
    return tuple(datum.positive_roots())


@lru_cache(maxsize=None)
def _partition_count(datum, nu, k):
    """Number of ways to write nu as an N-combination of roots[k:]."""
    if all(c == 0 for c in nu):
        return 1
    if any(c < 0 for c in nu):
        return 0
    roots = _positive_roots(datum)
    if k >= len(roots):
        return 0
    total = 0
    root = roots[k]
    bound = min((c // r for c, r in zip(nu, root) if r), default=0)
    for mult in range(bound + 1):
        rest = tuple(c - mult * r for c, r in zip(nu, root))
        total += _partition_count(datum, rest, k + 1)
    return total


def kostant_partition(datum, nu):
    """Kostant partition function on the positive roots."""
    if any(c < 0 for c in nu):
        return 0
    return _partition_count(datum, tuple(nu), 0)


@lru_cache(maxsize=None)
def _weyl_elements(datum):
    return tuple(datum.weyl_elements().items())


def weight_multiplicity(datum, highest, mu):
    """dim V(highest)_mu for the classical (pi = 1) module, via Kostant.

    This is the Weyl-character oracle used to cross-check module
    construction; it never touches the bilinear-form machinery.
    """
    rho = Weight((1,) * datum.rank)
    lam_rho = highest + rho
    total = 0
    for w, length in _weyl_elements(datum):
        img = Weight(tuple(
            sum(w[i][j] * lam_rho.coords[j] for j in range(datum.rank))
            for i in range(datum.rank)
        ))
        diff = img - (mu + rho)
        try:
            nu = weight_to_root_coords(datum, diff)
        except ValueError:
            continue
        total += (-1) ** length * kostant_partition(datum, nu)
    return total


# -- stock data used across the test-suite ------------------------------------

def rank1_odd():
    return CartanDatum.make([[2]], [1], [1])


def spin_rank2():
    return CartanDatum.make([[2, 0], [0, 2]], [1, 1], [1, 1])


def b2_super():
    return CartanDatum.make([[2, -2], [-1, 2]], [1, 0], [1, 2])


def a2_classical():
    # P2 forces even symmetrizers on an all-even datum.
    return CartanDatum.make([[2, -1], [-1, 2]], [0, 0], [2, 2])
