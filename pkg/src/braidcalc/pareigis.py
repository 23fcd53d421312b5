"""Root-of-unity eigenspaces of the braid action and symmetrized operators.

V^(x)n(zeta) is the largest subspace of the intersection of the eigenspaces
ker(c_i^2 - zeta^2) that is stable under every braid generator; since the
generators are invertible and generate the braid group, stability under them
is equivalent to the conjugation-invariance over the whole group that the
definition quantifies.  On it the symmetric group acts by
sigma |> x = zeta^(-l(sigma)) lift(sigma) x, and the full symmetrization
Pi(x) = sum_sigma sigma |> x lands in the degree-n primitives whenever zeta
is a primitive n-th root of unity.

A bracket then induces partial n-ary operations [x] = b_n(Pi(x)); the three
Pareigis identities for them are verified exactly on the computed bases.
Permutation enumeration caps the degree at 6 by default (7! times d^7 blows
past desk scale).
"""

from __future__ import annotations

import itertools

from .errors import (
    BadParams,
    DegreeBudgetExceeded,
    InternalCheckError,
    NotInZetaSpace,
    RootOrderMismatch,
)
from .linalg import Echelon, Subspace, kernel_basis, left_kernel
from .scalars import root_order
from .spaces import BraidedSpace, matsumoto_lift
from .tensorbialg import primitive_space
from .enveloping import BracketTable, _coords_in_primitives

FACTORIAL_CAP = 6


class ZetaSpace:
    __slots__ = ("n", "zeta", "subspace")

    def __init__(self, n, zeta, subspace):
        self.n = n
        self.zeta = zeta
        self.subspace = subspace

    @property
    def dim(self):
        return self.subspace.dim


class MixedZetaSpace:
    __slots__ = ("n", "zeta", "subspace")

    def __init__(self, n, zeta, subspace):
        self.n = n
        self.zeta = zeta
        self.subspace = subspace

    @property
    def dim(self):
        return self.subspace.dim


def _require_primitive_root(zeta, n):
    order = root_order(zeta)
    if order != n:
        raise RootOrderMismatch(
            "zeta has multiplicative order %s, needed a primitive %d-th root"
            % (order, n)
        )


def _eigen_fixpoint(space: BraidedSpace, degree: int, zeta) -> Subspace:
    """Largest generator-stable subspace of the zeta^2-eigenspace intersection."""
    size = space.power(degree)
    one = space.field.one
    z2 = zeta * zeta
    if degree < 2:
        return Subspace.from_rows(size, ({w: one} for w in range(size))) \
            if z2.is_one() else Subspace.zero(size)
    rows: dict[tuple, dict] = {}
    for i in range(1, degree):
        for w in range(size):
            img = space.apply_generator(
                degree, i, space.apply_generator(degree, i, {w: one}))
            cur = img.get(w)
            s = -z2 if cur is None else cur - z2
            if s.is_zero():
                img.pop(w, None)
            else:
                img[w] = s
            for r, val in img.items():
                rows.setdefault((i, r), {})[w] = val
    basis = kernel_basis(rows.values(), size, one=one)
    current = Subspace.from_rows(size, basis)
    while current.dim:
        reductions = []
        for row in current.rows:
            acc = {}
            for i in range(1, degree):
                img = space.apply_generator(degree, i, row)
                red = current.reduce(img)
                for c, v in red.items():
                    acc[i * size + c] = v
            reductions.append(acc)
        if all(not r for r in reductions):
            break
        combos = left_kernel(reductions, one=one)
        new_rows = []
        for combo in combos:
            acc = {}
            for idx, coeff in combo.items():
                for c, v in current.rows[idx].items():
                    cur = acc.get(c)
                    s = coeff * v if cur is None else cur + coeff * v
                    if s.is_zero():
                        acc.pop(c, None)
                    else:
                        acc[c] = s
            if acc:
                new_rows.append(acc)
        shrunk = Subspace.from_rows(size, new_rows)
        if shrunk.dim == current.dim:
            break
        current = shrunk
    return current


def zeta_space(space: BraidedSpace, n: int, zeta,
               require_primitive: bool = True) -> ZetaSpace:
    """V^(x)n(zeta) as a fixpoint of the eigenspace-shrink iteration."""
    space.check_budget(n)
    if n < 2:
        raise BadParams("zeta spaces live in degree >= 2")
    if require_primitive:
        _require_primitive_root(zeta, n)
    key = ("zeta_space", n, zeta.coeffs)
    cached = space._memo.get(key)
    if cached is None:
        cached = ZetaSpace(n, zeta, _eigen_fixpoint(space, n, zeta))
        space._memo[key] = cached
    return cached


def _action_terms(space: BraidedSpace, n: int, zeta):
    """(letters, zeta^(-length)) for every permutation of n strands."""
    key = ("pi_terms", n, zeta.coeffs)
    terms = space._memo.get(key)
    if terms is None:
        if n > FACTORIAL_CAP:
            raise DegreeBudgetExceeded(n, FACTORIAL_CAP)
        zinv = zeta.inv()
        terms = []
        for sigma in itertools.permutations(range(n)):
            word = matsumoto_lift(sigma).letters
            terms.append((word, zinv ** len(word)))
        space._memo[key] = tuple(terms)
    return terms


def perm_act(space: BraidedSpace, n: int, zeta, sigma, vec: dict) -> dict:
    """sigma |> x = zeta^(-l(sigma)) lift(sigma) x."""
    word = matsumoto_lift(tuple(sigma)).letters
    out = space.apply_word(n, word, vec)
    scale = zeta.inv() ** len(word)
    return {c: scale * v for c, v in out.items()}


def pi_zeta(space: BraidedSpace, n: int, zeta, vec: dict,
            check_membership: bool = True) -> dict:
    """The full symmetrization sum over S_n applied to a zeta-space vector."""
    if check_membership:
        zs = zeta_space(space, n, zeta, require_primitive=False)
        if not zs.subspace.contains(vec):
            raise NotInZetaSpace(
                "vector is outside the degree-%d zeta-eigenspace" % n)
    acc: dict = {}
    for word, scale in _action_terms(space, n, zeta):
        img = space.apply_word(n, word, vec)
        for c, v in img.items():
            cur = acc.get(c)
            s = scale * v if cur is None else cur + scale * v
            if s.is_zero():
                acc.pop(c, None)
            else:
                acc[c] = s
    return acc


def pi_image(space: BraidedSpace, n: int, zeta) -> Subspace:
    zs = zeta_space(space, n, zeta)
    rows = [pi_zeta(space, n, zeta, r, check_membership=False)
            for r in zs.subspace.rows]
    return Subspace.from_rows(space.power(n), rows)


def check_pi_in_E(space: BraidedSpace, n: int, zeta) -> bool:
    """Im Pi inside the degree-n primitives; a theorem, so failure is a bug."""
    prims = primitive_space(space, n)
    return prims.contains_subspace(pi_image(space, n, zeta))


def check_pi_su(space: BraidedSpace, n: int) -> bool:
    """Whether the images of Pi over all primitive n-th roots sum to the
    whole degree-n primitive space."""
    roots = space.field.primitive_roots(n)
    ech = Echelon(space.power(n))
    for zeta in roots:
        for row in pi_image(space, n, zeta).rows:
            ech.add(row)
    return Subspace.from_echelon(ech) == primitive_space(space, n)


def induced_bracket(bracket: BracketTable, n: int, zeta, vec: dict) -> dict:
    """[x] = b_n(Pi(x)), a vector in V."""
    space = bracket.space
    image = pi_zeta(space, n, zeta, vec)
    prims = primitive_space(space, n)
    coords = _coords_in_primitives(prims, image, n)
    if coords is None:
        raise InternalCheckError(
            "symmetrized vector escaped the primitive space (degree %d)" % n)
    return bracket.value(n, coords)


def mixed_zeta_space(space: BraidedSpace, n: int, zeta) -> MixedZetaSpace:
    """{x in V (x) V^(x)n(zeta) fixed by the twisted tau_1^2 conjugates}."""
    space.check_budget(n + 1)
    if n > FACTORIAL_CAP:
        raise DegreeBudgetExceeded(n, FACTORIAL_CAP)
    d = space.dim
    size_n = space.power(n)
    size = space.power(n + 1)
    one = space.field.one
    inner = zeta_space(space, n, zeta, require_primitive=False)
    carrier_rows = []
    for j in range(d):
        for row in inner.subspace.rows:
            carrier_rows.append({j * size_n + c: v for c, v in row.items()})
    carrier = Subspace.from_rows(size, carrier_rows)
    if carrier.dim == 0:
        return MixedZetaSpace(n, zeta, carrier)
    reductions = []
    conds = []
    for phi in itertools.permutations(range(n)):
        lifted = tuple([0] + [p + 1 for p in phi])
        word_in = matsumoto_lift(lifted).letters
        word_out = matsumoto_lift(tuple(
            lifted.index(k) for k in range(n + 1))).letters
        scale = (zeta.inv() ** len(word_in)) ** 2
        conds.append((word_in, word_out, scale))
    for row in carrier.rows:
        acc = {}
        for k, (word_in, word_out, scale) in enumerate(conds):
            img = space.apply_word(n + 1, word_in, row)
            img = space.apply_generator(n + 1, 1, space.apply_generator(n + 1, 1, img))
            img = space.apply_word(n + 1, word_out, img)
            for c, v in img.items():
                sv = scale * v
                cur = row.get(c)
                if cur is not None:
                    sv = sv - cur
                if not sv.is_zero():
                    acc[k * size + c] = sv
            for c, cur in row.items():
                if c not in img:
                    acc[k * size + c] = -cur
        reductions.append(acc)
    combos = left_kernel(reductions, one=one)
    rows = []
    for combo in combos:
        acc = {}
        for idx, coeff in combo.items():
            for c, v in carrier.rows[idx].items():
                curv = acc.get(c)
                s = coeff * v if curv is None else curv + coeff * v
                if s.is_zero():
                    acc.pop(c, None)
                else:
                    acc[c] = s
        if acc:
            rows.append(acc)
    return MixedZetaSpace(n, zeta, Subspace.from_rows(size, rows))


# ---------------------------------------------------------------------------
# the Pareigis identities
# ---------------------------------------------------------------------------

def _pair_bracket(bracket: BracketTable, vec: dict) -> dict:
    """[z] for z in V^(x)2 with c^2 z = z: b_2(z - c z)."""
    space = bracket.space
    img = space.apply_word(2, (1,), vec)
    anti = dict(vec)
    for c, v in img.items():
        cur = anti.get(c)
        s = -v if cur is None else cur - v
        if s.is_zero():
            anti.pop(c, None)
        else:
            anti[c] = s
    prims = primitive_space(space, 2)
    coords = _coords_in_primitives(prims, anti, 2)
    if coords is None:
        raise NotInZetaSpace(
            "pair outside the squared-braiding fixed space: the binary "
            "bracket is undefined on it")
    return bracket.value(2, coords)


def _apply_first_slice(space, bracket, n, zeta, vec, zs_check: Subspace):
    """(V (x) [-]) on a vector of V^(x)(n+1): slice off the first letter."""
    size_n = space.power(n)
    d = space.dim
    slices: dict[int, dict] = {}
    for col, val in vec.items():
        j, rest = divmod(col, size_n)
        slices.setdefault(j, {})[rest] = val
    out: dict = {}
    for j, sl in slices.items():
        if not zs_check.contains(sl):
            raise NotInZetaSpace(
                "first-factor slice left the degree-%d zeta space; "
                "the identity precondition fails" % n)
        val = induced_bracket(bracket, n, zeta, sl)
        for t, v in val.items():
            key = j * d + t
            cur = out.get(key)
            s = v if cur is None else cur + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _cycle_one_line(i: int, n: int):
    """The cycle sending 1 -> 2 -> ... -> i -> 1 inside S_n, one-line 0-based."""
    line = list(range(n))
    for j in range(i - 1):
        line[j] = j + 1
    if i >= 1:
        line[i - 1] = 0
    return tuple(line)


def verify_PL(bracket: BracketTable, n: int, zeta=None) -> dict:
    """Exact check of the three partial-bracket identities at arity n.

    Uses the canonical primitive n-th root when zeta is omitted.  The checks
    run over computed bases of the relevant eigenspaces; an identity that
    holds on every basis vector holds on the space.
    """
    space = bracket.space
    if zeta is None:
        zeta = space.field.root_of_unity(n)
    _require_primitive_root(zeta, n)
    space.check_budget(n + 1)
    zs = zeta_space(space, n, zeta)
    results = {}

    # PL1: invariance of [x] under the twisted symmetric-group action
    ok = True
    for row in zs.subspace.rows:
        base = induced_bracket(bracket, n, zeta, row)
        for sigma in itertools.permutations(range(n)):
            moved = perm_act(space, n, zeta, sigma, row)
            if not zs.subspace.contains(moved):
                raise InternalCheckError(
                    "twisted action left the zeta space (degree %d)" % n)
            if induced_bracket(bracket, n, zeta, moved) != base:
                ok = False
                break
        if not ok:
            break
    results["pl1"] = ok

    # PL2: the cyclic sum of [ - , [ - ] ] vanishes on V^(x)(n+1)(zeta)
    upper = zeta_space(space, n + 1, zeta, require_primitive=False)
    ok = True
    for row in upper.subspace.rows:
        total: dict = {}
        for i in range(1, n + 2):
            moved = perm_act(space, n + 1, zeta, _cycle_one_line(i, n + 1), row)
            inner_val = _apply_first_slice(space, bracket, n, zeta, moved,
                                           zs.subspace)
            if not inner_val:
                continue
            outer = _pair_bracket(bracket, inner_val)
            for t, v in outer.items():
                cur = total.get(t)
                s = v if cur is None else cur + v
                if s.is_zero():
                    total.pop(t, None)
                else:
                    total[t] = s
        if total:
            ok = False
            break
    results["pl2"] = ok

    # PL3: compatibility of the binary and n-ary brackets on the mixed space
    mixed = mixed_zeta_space(space, n, zeta)
    d = space.dim
    ok = True
    for row in mixed.subspace.rows:
        inner_val = _apply_first_slice(space, bracket, n, zeta, row,
                                       zs.subspace)
        lhs = _pair_bracket(bracket, inner_val) if inner_val else {}
        rhs: dict = {}
        for i in range(1, n + 1):
            letters = tuple(range(i - 1, 0, -1))
            moved = space.apply_word(n + 1, letters, row) if letters else dict(row)
            # apply the binary bracket to tensor positions i, i+1
            size_tail = space.power(n - i)
            pair_block = space.power(2) * size_tail
            grouped: dict[tuple, dict] = {}
            for col, val in moved.items():
                head, rest = divmod(col, pair_block)
                pair, tail = divmod(rest, size_tail)
                grouped.setdefault((head, tail), {})[pair] = val
            collapsed: dict = {}
            for (head, tail), pair_vec in grouped.items():
                val = _pair_bracket(bracket, pair_vec)
                for t, v in val.items():
                    key = (head * d + t) * size_tail + tail
                    cur = collapsed.get(key)
                    s = v if cur is None else cur + v
                    if s.is_zero():
                        collapsed.pop(key, None)
                    else:
                        collapsed[key] = s
            if not collapsed:
                continue
            if not zs.subspace.contains(collapsed):
                raise NotInZetaSpace(
                    "middle-bracket image left the degree-%d zeta space" % n)
            val = induced_bracket(bracket, n, zeta, collapsed)
            for t, v in val.items():
                cur = rhs.get(t)
                s = v if cur is None else cur + v
                if s.is_zero():
                    rhs.pop(t, None)
                else:
                    rhs[t] = s
        if lhs != rhs:
            ok = False
            break
    results["pl3"] = ok
    return results
