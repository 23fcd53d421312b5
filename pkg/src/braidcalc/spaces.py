"""Braided vector spaces and the braid-group action on tensor powers.

A braided vector space is a dimension d together with an invertible solution
c of the Yang-Baxter equation c1 c2 c1 = c2 c1 c2 on V (x) V (x) V.  The
d^2 x d^2 matrix acts in word coordinates: the basis of V^(x)n is indexed by
length-n words over {0..d-1} encoded big-endian as base-d integers.

The braiding is stored as a sparse "pair map" e_a (x) e_b -> sum of weighted
pairs, which keeps the action of the generators c_i = Id^(i-1) (x) c (x)
Id^(n-i-1) cheap for the monomial and diagonal braidings that dominate the
examples.
"""

from __future__ import annotations

import itertools

from .errors import (
    BadParams,
    DegreeBudgetExceeded,
    DegreeMismatch,
    SingularBraiding,
    YBENotSatisfied,
)
from .linalg import Echelon
from .scalars import CycloField, CycloScalar, Q, is_regular_exact

DEFAULT_DEGREE_BUDGET = 8


# ---------------------------------------------------------------------------
# permutations, lengths, Matsumoto lifts, shuffles
# ---------------------------------------------------------------------------

def perm_length(sigma) -> int:
    """Number of inversions."""
    n = len(sigma)
    return sum(
        1 for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j]
    )


def perm_inverse(sigma):
    inv = [0] * len(sigma)
    for i, v in enumerate(sigma):
        inv[v] = i
    return tuple(inv)


def perm_compose(sigma, tau):
    """(sigma tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t] for t in tau)


class BraidWord:
    """A word in the Artin generators; letters are signed 1-based indices."""

    __slots__ = ("strand_count", "letters")

    def __init__(self, strand_count: int, letters):
        letters = tuple(letters)
        for ell in letters:
            if ell == 0 or abs(ell) > strand_count - 1:
                raise BadParams(
                    "letter %d out of range for %d strands" % (ell, strand_count)
                )
        self.strand_count = strand_count
        self.letters = letters

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strand_count, [-l for l in reversed(self.letters)])

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return "BraidWord(n=%d, %r)" % (self.strand_count, list(self.letters))


def matsumoto_lift(sigma) -> BraidWord:
    """The positive braid word over the canonical reduced decomposition.

    Deterministic: values n-1, n-2, ... are bubbled right into place, which
    realises the Lehmer-code reduced word; any reduced word lifts to the same
    braid-group element, which the tests verify rather than assume.
    """
    n = len(sigma)
    perm = list(sigma)
    swaps = []
    for target in range(n - 1, 0, -1):
        p = perm.index(target)
        for j in range(p, target):
            perm[j], perm[j + 1] = perm[j + 1], perm[j]
            swaps.append(j + 1)
    # the swaps compose right-to-left to rebuild sigma
    return BraidWord(max(n, 1), list(reversed(swaps)))


def shuffles(p: int, q: int):
    """All (p,q)-shuffles with their lengths, ordered by the chosen p-subset.

    A shuffle is sigma with sigma(1) < ... < sigma(p) and
    sigma(p+1) < ... < sigma(p+q); there are binom(p+q, p) of them and the
    length is sum(S[i] - i) over the image subset S of the first block.
    """
    n = p + q
    out = []
    for subset in itertools.combinations(range(n), p):
        complement = [x for x in range(n) if x not in subset]
        sigma = tuple(list(subset) + complement)
        length = sum(s - i for i, s in enumerate(subset))
        out.append((sigma, length))
    return out


def word_index(letters, d: int) -> int:
    idx = 0
    for ell in letters:
        idx = idx * d + ell
    return idx


def word_letters(idx: int, n: int, d: int):
    out = [0] * n
    for k in range(n - 1, -1, -1):
        out[k] = idx % d
        idx //= d
    return tuple(out)


def word_name(idx: int, n: int, d: int) -> str:
    if n == 0:
        return "1"
    return ".".join("x%d" % ell for ell in word_letters(idx, n, d))


# ---------------------------------------------------------------------------
# the braided space proper
# ---------------------------------------------------------------------------

class BraidedSpace:
    """Dimension, validated braiding, and lazily computed metadata."""

    def __init__(self, field: CycloField, dim: int, pairs, kind: str,
                 qmatrix=None, degree_budget: int = DEFAULT_DEGREE_BUDGET,
                 _skip_checks: bool = False):
        if dim < 1:
            raise BadParams("dimension must be positive")
        self.field = field
        self.dim = dim
        self.kind = kind
        self.qmatrix = qmatrix  # d x d scalar matrix for diagonal braidings
        self.degree_budget = degree_budget
        # pairs: dict (a, b) -> tuple(((a2, b2), scalar), ...)
        self.pairs = {
            key: tuple((tgt, s) for tgt, s in val if not s.is_zero())
            for key, val in pairs.items()
        }
        self.pairs = {k: v for k, v in self.pairs.items() if v}
        self._power_cache = [1]
        self._memo: dict = {}
        self.inv_pairs = self._invert_pairs()
        if not _skip_checks:
            self._check_ybe()
        self._min_poly = None
        self._hecke = None

    # -- construction helpers -------------------------------------------------

    def _invert_pairs(self):
        d = self.dim
        D = d * d
        one = self.field.one
        # rows of [C | I] in pair coordinates, then Gauss-Jordan
        rows = {}
        for (a, b), images in self.pairs.items():
            col = a * d + b
            for (a2, b2), s in images:
                rows.setdefault(a2 * d + b2, {})[col] = (
                    rows.get(a2 * d + b2, {}).get(col, self.field.zero) + s
                )
        ech = Echelon(2 * D)
        for r in range(D):
            row = {c: v for c, v in rows.get(r, {}).items() if not v.is_zero()}
            row[D + r] = one
            ech.add(row)
        if ech.rank < D or any(p >= D for p in ech.pivot_rows):
            raise SingularBraiding("the braiding matrix is not invertible")
        ech.back_substitute()
        inv = {}
        for col, row in ech.pivot_rows.items():
            a, b = divmod(col, d)
            images = []
            for c2, v in row.items():
                if c2 >= D:
                    images.append((divmod(c2 - D, d), v))
            inv[(a, b)] = tuple(images)
        return inv

    def _check_ybe(self):
        d = self.dim
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    start = {word_index((i, j, k), d): self.field.one}
                    lhs = self.apply_word(3, (1, 2, 1), start)
                    rhs = self.apply_word(3, (2, 1, 2), start)
                    for col, val in rhs.items():
                        cur = lhs.get(col)
                        if cur is None or not (cur == val):
                            raise YBENotSatisfied((i, j, k))
                    if len(lhs) != len(rhs):
                        raise YBENotSatisfied((i, j, k))

    # -- basic structure -------------------------------------------------------

    def power(self, k: int) -> int:
        """d**k, cached."""
        while len(self._power_cache) <= k:
            self._power_cache.append(self._power_cache[-1] * self.dim)
        return self._power_cache[k]

    def check_budget(self, n: int):
        if n > self.degree_budget:
            raise DegreeBudgetExceeded(n, self.degree_budget)

    def apply_generator(self, n: int, i: int, vec: dict, inverse=False) -> dict:
        """Apply c_i (or its inverse) to a sparse degree-n vector."""
        if not 1 <= i <= n - 1:
            raise DegreeMismatch("generator %d needs %d strands" % (i, i + 1))
        d = self.dim
        hi = self.power(n - i)      # place value of position i (1-based)
        lo = self.power(n - i - 1)  # place value of position i + 1
        table = self.inv_pairs if inverse else self.pairs
        out: dict = {}
        for idx, coeff in vec.items():
            a = (idx // hi) % d
            b = (idx // lo) % d
            base = idx - a * hi - b * lo
            for (a2, b2), s in table.get((a, b), ()):
                tgt = base + a2 * hi + b2 * lo
                cur = out.get(tgt)
                if cur is None:
                    out[tgt] = coeff * s
                else:
                    new = cur + coeff * s
                    if new.is_zero():
                        del out[tgt]
                    else:
                        out[tgt] = new
        return out

    def apply_word(self, n: int, letters, vec: dict) -> dict:
        """Apply the braid word (rightmost letter acts first)."""
        for ell in reversed(tuple(letters)):
            if not vec:
                return {}
            vec = self.apply_generator(n, abs(ell), vec, inverse=ell < 0)
        return dict(vec)

    def apply_braid(self, word: BraidWord, vec: dict) -> dict:
        return self.apply_word(word.strand_count, word.letters, vec)

    def braiding_block_apply(self, p: int, q: int, vec: dict) -> dict:
        """c_T^{p,q}: V^(x)p (x) V^(x)q -> V^(x)q (x) V^(x)p on a sparse vector."""
        if p == 0 or q == 0:
            return dict(vec)
        word = self._block_word(p, q)
        return self.apply_word(p + q, word, vec)

    def _block_word(self, p: int, q: int):
        key = ("block", p, q)
        word = self._memo.get(key)
        if word is None:
            # one-line form: the first p positions map past the last q strands
            chi = tuple(pos + q if pos < p else pos - p for pos in range(p + q))
            word = matsumoto_lift(chi).letters
            self._memo[key] = word
        return word

    def braiding_block_matrix(self, p: int, q: int):
        """Columns of the block braiding as sparse dicts."""
        key = ("blockmat", p, q)
        mat = self._memo.get(key)
        if mat is None:
            n = p + q
            mat = [
                self.braiding_block_apply(p, q, {w: self.field.one})
                for w in range(self.power(n))
            ]
            self._memo[key] = mat
        return mat

    # -- lazily computed metadata ---------------------------------------------

    @property
    def min_poly(self):
        """Minimal polynomial of the braiding matrix, coefficients low -> high."""
        if self._min_poly is None:
            self._min_poly = self._compute_min_poly()
        return self._min_poly

    def _compute_min_poly(self):
        d = self.dim
        D = d * d
        flat_cols = D * D
        one = self.field.one
        ech = Echelon(flat_cols + D * D + 2)
        # power k occupies augmented column flat_cols + k
        power = {w: {w: one} for w in range(D)}  # identity, column map
        k = 0
        while True:
            flat = {}
            for col, colvec in power.items():
                for row, val in colvec.items():
                    flat[col * D + row] = val
            flat[flat_cols + k] = one
            rem = ech.reduce(flat)
            if all(c >= flat_cols for c in rem):
                lead = rem[flat_cols + k]
                coeffs = []
                for j in range(k + 1):
                    coeffs.append(rem.get(flat_cols + j, self.field.zero) / lead)
                return tuple(coeffs)
            ech.add(flat)
            # multiply by c: next power columns
            new_power = {}
            for col, colvec in power.items():
                out: dict = {}
                for mid, val in colvec.items():
                    a, b = divmod(mid, d)
                    for (a2, b2), s in self.pairs.get((a, b), ()):
                        tgt = a2 * d + b2
                        cur = out.get(tgt)
                        if cur is None:
                            out[tgt] = val * s
                        else:
                            new = cur + val * s
                            if new.is_zero():
                                del out[tgt]
                            else:
                                out[tgt] = new
                new_power[col] = out
            power = new_power
            k += 1

    def hecke_analysis(self):
        """Return {'mark': q, 'regular': bool} when the minimal polynomial
        divides (X+1)(X-q) for a nonzero q, else None."""
        if self._hecke is None:
            self._hecke = self._compute_hecke()
        return self._hecke if self._hecke != "none" else None

    def _compute_hecke(self):
        poly = self.min_poly
        field = self.field
        if len(poly) == 2:
            mark = -poly[0]  # X - q
            if mark.is_zero():
                return "none"
            return {"mark": mark, "regular": is_regular_exact(mark)}
        if len(poly) == 3:
            # X^2 + aX + b = (X+1)(X-q) iff b = -q and a = 1 - q
            q = -poly[0]
            if q.is_zero():
                return "none"
            if poly[1] == field.one - q:
                return {"mark": q, "regular": is_regular_exact(q)}
        return "none"

    @property
    def hecke_mark(self):
        info = self.hecke_analysis()
        return info["mark"] if info else None

    def __repr__(self):
        return "BraidedSpace(kind=%s, d=%d, m=%d)" % (
            self.kind, self.dim, self.field.order,
        )


def braid_apply(space: BraidedSpace, word: BraidWord, vec: dict, degree=None) -> dict:
    """Module-level wrapper matching the operation surface."""
    n = word.strand_count
    if degree is not None and degree != n:
        raise DegreeMismatch("vector degree %d vs %d strands" % (degree, n))
    return space.apply_braid(word, vec)


def minimal_polynomial(space: BraidedSpace):
    return space.min_poly


def hecke_analysis(space: BraidedSpace):
    return space.hecke_analysis()


def braiding_block(space: BraidedSpace, p: int, q: int):
    return space.braiding_block_matrix(p, q)


# ---------------------------------------------------------------------------
# constructors and presets
# ---------------------------------------------------------------------------

def _as_scalar(field, value):
    if isinstance(value, CycloScalar):
        if value.field.order != field.order:
            raise BadParams("scalar from a different field")
        return value
    try:
        return field.from_rational(Q(value))
    except (TypeError, ValueError) as exc:
        raise BadParams("cannot interpret %r as a scalar: %s" % (value, exc))


def _diagonal_pairs(field, qmatrix):
    d = len(qmatrix)
    pairs = {}
    for i in range(d):
        if len(qmatrix[i]) != d:
            raise BadParams("q matrix must be square")
        for j in range(d):
            qij = _as_scalar(field, qmatrix[i][j])
            if qij.is_zero():
                raise BadParams("diagonal braidings need all q_ij nonzero")
            pairs[(i, j)] = (((j, i), qij),)
    return pairs


def make_braiding(kind: str, params: dict, field: CycloField,
                  degree_budget: int = DEFAULT_DEGREE_BUDGET) -> BraidedSpace:
    """Build and validate a braided vector space.

    kinds: explicit, diagonal, scalar, flip, preset (params["name"] one of
    d4_rack, gurevich, twodim_sdeg2, cartan_An, quantum_linear, hecke_gl).
    """
    params = dict(params or {})
    if kind == "preset":
        name = params.pop("name", None)
        if name is None:
            raise BadParams("preset requires a name")
        return make_preset(name, field, degree_budget=degree_budget, **params)
    if kind == "flip":
        d = int(params["d"])
        qmat = [[field.one] * d for _ in range(d)]
        return BraidedSpace(field, d, _diagonal_pairs(field, qmat), "flip",
                            qmatrix=qmat, degree_budget=degree_budget)
    if kind == "scalar":
        d = int(params["d"])
        q = _as_scalar(field, params["q"])
        if q.is_zero():
            raise BadParams("scalar braiding needs q != 0")
        pairs = {
            (i, j): (((i, j), q),) for i in range(d) for j in range(d)
        }
        return BraidedSpace(field, d, pairs, "scalar",
                            degree_budget=degree_budget)
    if kind in ("diagonal", "quantum_linear"):
        qmat = params["q"]
        qmat = [[_as_scalar(field, v) for v in row] for row in qmat]
        return BraidedSpace(field, len(qmat), _diagonal_pairs(field, qmat),
                            "diagonal", qmatrix=qmat,
                            degree_budget=degree_budget)
    if kind == "explicit":
        matrix = params["matrix"]
        d = int(params.get("d", round(len(matrix) ** 0.5)))
        if d * d != len(matrix):
            raise BadParams("explicit braiding needs a d^2 x d^2 matrix")
        pairs = {}
        for col in range(d * d):
            images = []
            for row in range(d * d):
                s = _as_scalar(field, matrix[row][col])
                if not s.is_zero():
                    images.append((divmod(row, d), s))
            pairs[divmod(col, d)] = tuple(images)
        return BraidedSpace(field, d, pairs, "explicit",
                            degree_budget=degree_budget)
    raise BadParams("unknown braiding kind %r" % kind)


def make_preset(name: str, field: CycloField,
                degree_budget: int = DEFAULT_DEGREE_BUDGET, **params) -> BraidedSpace:
    if name == "d4_rack":
        d = 4
        minus = -field.one
        pairs = {
            (i, j): ((((2 * i - j) % 4, i), minus),)
            for i in range(d) for j in range(d)
        }
        return BraidedSpace(field, d, pairs, "preset:d4_rack",
                            degree_budget=degree_budget)
    if name == "gurevich":
        q = _as_scalar(field, params.get("q", 4))
        ab = _as_scalar(field, params.get("alpha_over_beta", 2))
        if not (ab * ab == q):
            raise BadParams("gurevich preset needs (alpha/beta)^2 = q")
        if q.is_zero() or q.is_one() or not is_regular_exact(q):
            raise BadParams("gurevich preset needs a regular q != 1")
        m = -ab
        one = field.one
        pairs = {}
        for j in range(3):
            pairs[(0, j)] = (((j, 0), one),)
        for i in (1, 2):
            pairs[(i, 0)] = (((0, i), one),)
            pairs[(i, i)] = (((i, i), q),)
        pairs[(2, 1)] = (((1, 2), m), ((2, 1), q - one))
        pairs[(1, 2)] = (((2, 1), q * m.inv()),)
        return BraidedSpace(field, 3, pairs, "preset:gurevich",
                            degree_budget=degree_budget)
    if name == "twodim_sdeg2":
        minus = -field.one
        qmat = [[minus, field.one], [minus, minus]]
        space = make_braiding("diagonal", {"q": qmat}, field,
                              degree_budget=degree_budget)
        space.kind = "preset:twodim_sdeg2"
        return space
    if name == "cartan_An":
        n = int(params.get("n", 2))
        if "q" in params:
            q = _as_scalar(field, params["q"])
        else:
            t = int(params.get("t", 3))
            q = field.root_of_unity(t)
        if q.is_zero():
            raise BadParams("cartan preset needs q != 0")
        qinv = q.inv()
        one = field.one
        qmat = [[one] * n for _ in range(n)]
        for i in range(n):
            qmat[i][i] = q
            if i + 1 < n:
                qmat[i][i + 1] = qinv
                qmat[i + 1][i] = one
        space = make_braiding("diagonal", {"q": qmat}, field,
                              degree_budget=degree_budget)
        space.kind = "preset:cartan_An"
        return space
    if name == "quantum_linear":
        return make_braiding("diagonal", {"q": params["q"]}, field,
                             degree_budget=degree_budget)
    if name == "hecke_gl":
        d = int(params.get("d", 2))
        q = _as_scalar(field, params.get("q", 4))
        if q.is_zero():
            raise BadParams("hecke_gl needs q != 0")
        one = field.one
        pairs = {}
        for i in range(d):
            pairs[(i, i)] = (((i, i), q),)
            for j in range(i + 1, d):
                pairs[(i, j)] = (((j, i), q),)
                pairs[(j, i)] = (((i, j), one), ((j, i), q - one))
        space = BraidedSpace(field, d, pairs, "preset:hecke_gl",
                             degree_budget=degree_budget)
        return space
    if name == "flip":
        return make_braiding("flip", {"d": params.get("d", 2)}, field,
                             degree_budget=degree_budget)
    if name == "scalar":
        return make_braiding(
            "scalar", {"d": params.get("d", 2), "q": params["q"]}, field,
            degree_budget=degree_budget)
    raise BadParams("unknown preset %r" % name)
