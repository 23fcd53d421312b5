"""Brackets, universal enveloping quotients and PBW verdicts.

A bracket assigns to each canonical basis vector of a degree-n primitive
space a value in V, compatibly with the braiding.  The enveloping algebra is
the quotient of the tensor algebra by the two-sided ideal generated by
u - b(u); since that ideal is inhomogeneous, everything is computed inside
the tensor-length filtration T_(m) = K + V + ... + V^(x)m.

The computed ideal is spanned by explicit products x (u - b(u)) y, so it is
always a subspace of the true ideal.  That makes negative verdicts sound
(a vector of V caught in the span is genuinely killed in the quotient), while
positive verdicts are reported relative to the degree budget and slack
window, never absolutely.

Filtration columns are ordered by degree, highest first, so the rows of the
echelon whose pivots sit in blocks of degree <= n form a basis of the span's
intersection with T_(n); dimensions of the standard filtration of U and of
its associated graded fall out by counting pivots.
"""

from __future__ import annotations

from .errors import (
    BadParams,
    DomainMismatch,
    InternalCheckError,
    IrregularMark,
    NotABracket,
)
from .linalg import Echelon, Subspace, kernel_basis
from .spaces import BraidedSpace
from .tensorbialg import delta_columns, primitive_space
from .tower import QuotientBialgebra, symmetric_step


class BracketTable:
    """Values of a bracket on the canonical bases of the primitive spaces.

    entries[n][k] is the value in V (sparse dict over 0..d-1) taken on the
    k-th canonical basis row of the degree-n primitive space.  Degrees above
    the cutoff are implicitly zero; the filtration machinery warns when such
    degrees carry nonzero primitives, because products of their generators
    are then left out of the computed ideal (unconstrained degrees).
    """

    def __init__(self, space: BraidedSpace, entries: dict, validated=False):
        self.space = space
        self.entries = {
            n: [dict(v) for v in vecs] for n, vecs in sorted(entries.items())
        }
        for n in self.entries:
            if n < 2:
                raise BadParams("brackets are defined on degrees >= 2")
        self.cutoff = max(self.entries, default=1)
        self.validated = validated

    @classmethod
    def zero(cls, space: BraidedSpace, cutoff: int) -> "BracketTable":
        entries = {}
        for n in range(2, cutoff + 1):
            e_n = primitive_space(space, n)
            entries[n] = [{} for _ in range(e_n.dim)]
        table = cls(space, entries, validated=True)
        table.cutoff = cutoff
        return table

    def is_zero(self) -> bool:
        return all(not v for vecs in self.entries.values() for v in vecs)

    def value(self, n: int, coords) -> dict:
        """b of an element of the degree-n primitive space given its
        coordinates over the canonical basis."""
        vecs = self.entries.get(n)
        out: dict = {}
        if vecs is None:
            return out
        for k, coeff in coords:
            for j, val in vecs[k].items():
                cur = out.get(j)
                if cur is None:
                    out[j] = coeff * val
                else:
                    s = cur + coeff * val
                    if s.is_zero():
                        del out[j]
                    else:
                        out[j] = s
        return out


def _coords_in_primitives(prims: Subspace, vec: dict, degree: int):
    """Coordinates of vec over the canonical RREF basis, or None."""
    if not prims.contains(vec):
        return None
    return [
        (k, vec[p]) for k, p in enumerate(prims.pivots) if p in vec
    ]


def validate_bracket(space: BraidedSpace, table: BracketTable) -> BracketTable:
    """Check the braiding-compatibility law on every degree of the table.

    First asserts the theorem-level inclusion that block braidings carry
    E_n (x) V into V (x) E_n (and mirrored); its failure is a bug, not user
    error.  Then verifies c(b (x) V) = (V (x) b) c_{E,V} and the mirrored law
    on all basis pairs, raising NotABracket with a witness otherwise.
    """
    d = space.dim
    one = space.field.one
    entries = {}
    for n, vecs in table.entries.items():
        prims = primitive_space(space, n)
        if len(vecs) != prims.dim:
            raise DomainMismatch(
                "degree %d table has %d columns, primitive space has dimension %d"
                % (n, len(vecs), prims.dim)
            )
        entries[n] = vecs
        if prims.dim == 0:
            continue
        dim_n = space.power(n)
        for k, row in enumerate(prims.rows):
            for j in range(d):
                # c_{E,V}: block (n,1) on u (x) e_j, sliced by the new first letter
                vec = {c * d + j: v for c, v in row.items()}
                image = space.braiding_block_apply(n, 1, vec)
                slices: dict[int, dict] = {}
                for col, val in image.items():
                    lead, rest = divmod(col, dim_n)
                    slices.setdefault(lead, {})[rest] = val
                rhs: dict = {}
                for lead, sl in slices.items():
                    coords = _coords_in_primitives(prims, sl, n)
                    if coords is None:
                        raise InternalCheckError(
                            "block braiding left the primitive space "
                            "(degree %d)" % n
                        )
                    for j2, val in table.value(n, coords).items():
                        tgt = lead * d + j2
                        cur = rhs.get(tgt)
                        s = val if cur is None else cur + val
                        if s.is_zero():
                            rhs.pop(tgt, None)
                        else:
                            rhs[tgt] = s
                bu = table.value(n, [(k, one)])
                lhs: dict = {}
                for v_idx, val in bu.items():
                    img = space.apply_word(2, (1,), {v_idx * d + j: val})
                    for col, s in img.items():
                        cur = lhs.get(col)
                        s2 = s if cur is None else cur + s
                        if s2.is_zero():
                            lhs.pop(col, None)
                        else:
                            lhs[col] = s2
                if lhs != rhs:
                    raise NotABracket(n, (k, j), "left compatibility fails")
                # mirrored law: c(V (x) b) = (b (x) V) c_{V,E} on e_j (x) u
                vec = {j * dim_n + c: v for c, v in row.items()}
                image = space.braiding_block_apply(1, n, vec)
                slices = {}
                for col, val in image.items():
                    rest, tail = divmod(col, d)
                    slices.setdefault(tail, {})[rest] = val
                rhs = {}
                for tail, sl in slices.items():
                    coords = _coords_in_primitives(prims, sl, n)
                    if coords is None:
                        raise InternalCheckError(
                            "block braiding left the primitive space "
                            "(degree %d, mirrored)" % n
                        )
                    for j2, val in table.value(n, coords).items():
                        tgt = j2 * d + tail
                        cur = rhs.get(tgt)
                        s = val if cur is None else cur + val
                        if s.is_zero():
                            rhs.pop(tgt, None)
                        else:
                            rhs[tgt] = s
                lhs = {}
                for v_idx, val in bu.items():
                    img = space.apply_word(2, (1,), {j * d + v_idx: val})
                    for col, s in img.items():
                        cur = lhs.get(col)
                        s2 = s if cur is None else cur + s
                        if s2.is_zero():
                            lhs.pop(col, None)
                        else:
                            lhs[col] = s2
                if lhs != rhs:
                    raise NotABracket(n, (k, j), "right compatibility fails")
    return BracketTable(space, entries, validated=True)


# ---------------------------------------------------------------------------
# the filtered enveloping quotient
# ---------------------------------------------------------------------------

def filtration_offsets(space: BraidedSpace, top: int):
    """Column offsets for T_(top) with blocks ordered degree-descending."""
    offsets = [0] * (top + 1)
    pos = 0
    for k in range(top, -1, -1):
        offsets[k] = pos
        pos += space.power(k)
    return offsets, pos


class FilteredQuotient:
    """Span of the explicit ideal products inside T_(N + slack)."""

    def __init__(self, bracket: BracketTable, cutoff: int, slack: int):
        space = bracket.space
        top = cutoff + slack
        space.check_budget(top)
        self.bracket = bracket
        self.cutoff = cutoff
        self.slack = slack
        self.top = top
        self.offsets, self.ncols = filtration_offsets(space, top)
        self.echelon = Echelon(self.ncols)
        self.unconstrained = []
        self.history = {n: [] for n in range(0, cutoff + 1)}
        self._build()

    # -- construction ----------------------------------------------------------

    def _mixed(self, degree: int, vec: dict) -> dict:
        off = self.offsets[degree]
        return {off + c: v for c, v in vec.items()}

    def _build(self):
        space = self.bracket.space
        d = space.dim
        gens = []  # (degree t, top part, bracket part dict over V)
        for t in range(2, self.top + 1):
            prims = primitive_space(space, t)
            if prims.dim == 0:
                continue
            if t > self.bracket.cutoff:
                self.unconstrained.append(t)
                continue
            vecs = self.bracket.entries.get(t) or [{}] * prims.dim
            for k, row in enumerate(prims.rows):
                gens.append((t, row, vecs[k] if k < len(vecs) else {}))
        for m in range(2, self.top + 1):
            for t, u_vec, b_vec in gens:
                if t > m:
                    continue
                pad = m - t
                for p in range(pad + 1):
                    q = pad - p
                    dim_p = space.power(p)
                    dim_q = space.power(q)
                    for x in range(dim_p):
                        for y in range(dim_q):
                            row = {}
                            base = x
                            for c, v in u_vec.items():
                                col = (base * space.power(t) + c) * dim_q + y
                                row[self.offsets[m] + col] = v
                            for j, v in b_vec.items():
                                col = (base * d + j) * dim_q + y
                                row[self.offsets[p + 1 + q] + col] = -v
                            self.echelon.add(row)
            self._record_history()

    def _record_history(self):
        counts = {n: 0 for n in range(self.cutoff + 1)}
        for pcol in self.echelon.pivot_rows:
            deg = self._degree_of_col(pcol)
            for n in range(deg, self.cutoff + 1):
                counts[n] += 1
        for n in range(self.cutoff + 1):
            self.history[n].append(counts[n])

    def _degree_of_col(self, col: int) -> int:
        for k in range(self.top, -1, -1):
            if col >= self.offsets[k] and col < self.offsets[k] + self.bracket.space.power(k):
                return k
        raise InternalCheckError("column outside the filtration")

    # -- reported data ----------------------------------------------------------

    def ideal_dim(self, n: int) -> int:
        """Dimension of (computed ideal) intersect T_(n)."""
        return self.history[n][-1]

    @property
    def dims_U(self):
        space = self.bracket.space
        total = 0
        out = []
        for n in range(self.cutoff + 1):
            total += space.power(n)
            out.append(total - self.ideal_dim(n))
        return out

    @property
    def stabilized(self):
        out = {}
        for n in range(self.cutoff + 1):
            hist = self.history[n]
            if self.slack == 0:
                out[n] = False
            else:
                out[n] = len(hist) > self.slack and hist[-1] == hist[-1 - self.slack]
        return out

    def span_rows_in(self, n: int):
        """Echelon rows lying in T_(n) (pivot in a block of degree <= n)."""
        self.echelon.back_substitute()
        boundary = self.offsets[n]
        return [
            row for pcol, row in sorted(self.echelon.pivot_rows.items())
            if pcol >= boundary
        ]

    def reduce(self, mixed_vec: dict) -> dict:
        return self.echelon.reduce(mixed_vec)

    def vector_in_V_cap_ideal(self):
        """A nonzero element of V caught in the computed ideal, if any."""
        for row in self.span_rows_in(1):
            off = self.offsets[1]
            vec = {c - off: v for c, v in row.items() if c >= off}
            if any(c < off for c in row):
                raise InternalCheckError("ideal row with constant term")
            if vec:
                return vec
        return None

    def check_braiding_stability(self) -> bool:
        """The braiding carries (span (x) V) into (V (x) span): theorem-level,
        checked row by row on the computed echelon."""
        space = self.bracket.space
        d = space.dim
        self.echelon.back_substitute()
        for row in list(self.echelon.pivot_rows.values()):
            for j in range(d):
                moved: dict[int, dict] = {}
                for col, val in row.items():
                    k = self._degree_of_col(col)
                    w = col - self.offsets[k]
                    img = space.braiding_block_apply(
                        k, 1, {w * d + j: val})
                    for c2, v2 in img.items():
                        lead, rest = divmod(c2, space.power(k))
                        tgt = moved.setdefault(lead, {})
                        key = self.offsets[k] + rest
                        cur = tgt.get(key)
                        s = v2 if cur is None else cur + v2
                        if s.is_zero():
                            tgt.pop(key, None)
                        else:
                            tgt[key] = s
                for lead, sl in moved.items():
                    if self.reduce(sl):
                        return False
        return True


def enveloping_filtration(bracket: BracketTable, cutoff: int,
                          slack: int = 2) -> FilteredQuotient:
    if not bracket.validated:
        raise BadParams("validate the bracket before building the filtration")
    return FilteredQuotient(bracket, cutoff, slack)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

class PbwVerdict:
    __slots__ = ("status", "cutoff", "slack", "gr_dims", "s_dims",
                 "failure_degree", "theta_bound_ok", "detail")

    def __init__(self, status, cutoff, slack, gr_dims, s_dims,
                 failure_degree=None, theta_bound_ok=True, detail=""):
        self.status = status  # pbw_consistent | fails_certified | inconclusive_at_cutoff
        self.cutoff = cutoff
        self.slack = slack
        self.gr_dims = gr_dims
        self.s_dims = s_dims
        self.failure_degree = failure_degree
        self.theta_bound_ok = theta_bound_ok
        self.detail = detail

    def __repr__(self):
        return "PbwVerdict(%s, gr=%r, s=%r)" % (self.status, self.gr_dims, self.s_dims)


class LieVerdict:
    __slots__ = ("status", "cutoff", "slack", "witness")

    def __init__(self, status, cutoff, slack, witness=None):
        self.status = status  # is_lie_up_to | fails_certified
        self.cutoff = cutoff
        self.slack = slack
        self.witness = witness

    def __repr__(self):
        return "LieVerdict(%s, N=%d, slack=%d)" % (self.status, self.cutoff, self.slack)


def symmetric_algebra_dims(space: BraidedSpace, cutoff: int):
    """Graded dimensions of the quotient by all primitives of degree >= 2."""
    key = ("sym_dims", cutoff)
    dims = space._memo.get(key)
    if dims is None:
        qb = QuotientBialgebra.tensor_algebra(space, cutoff)
        dims = symmetric_step(qb).dims
        space._memo[key] = dims
    return dims


def pbw_check(bracket: BracketTable, cutoff: int, slack: int = 2,
              filtration: FilteredQuotient = None) -> PbwVerdict:
    """Compare the associated graded of the standard filtration against the
    symmetric algebra.  A shortfall below the symmetric dimensions is a
    certified failure (the computed ideal only ever underestimates); equality
    with stable spans is consistency at this budget; an excess that refuses
    to stabilise is reported as inconclusive."""
    fq = filtration or enveloping_filtration(bracket, cutoff, slack)
    space = bracket.space
    s_dims = symmetric_algebra_dims(space, cutoff)
    sigma = []
    total = 0
    for s in s_dims:
        total += s
        sigma.append(total)
    dims_u = fq.dims_U
    gr_dims = [dims_u[0]] + [
        dims_u[n] - dims_u[n - 1] for n in range(1, cutoff + 1)
    ]
    theta_ok = all(gr_dims[n] <= s_dims[n] for n in range(cutoff + 1))
    for n in range(1, cutoff + 1):
        if dims_u[n] < sigma[n]:
            return PbwVerdict(
                "fails_certified", cutoff, slack, gr_dims, s_dims,
                failure_degree=n, theta_bound_ok=theta_ok,
                detail="filtration dimension %d below the symmetric bound %d "
                       "in degree %d" % (dims_u[n], sigma[n], n))
    stab = fq.stabilized
    if all(dims_u[n] == sigma[n] for n in range(cutoff + 1)) and \
       all(stab[n] for n in range(2, cutoff + 1)):
        return PbwVerdict("pbw_consistent", cutoff, slack, gr_dims, s_dims,
                          theta_bound_ok=theta_ok)
    return PbwVerdict(
        "inconclusive_at_cutoff", cutoff, slack, gr_dims, s_dims,
        theta_bound_ok=theta_ok,
        detail="ideal spans not stabilised or above the symmetric bound; "
               "raise the slack or the cutoff")


def lie_check(bracket: BracketTable, cutoff: int, slack: int = 2,
              filtration: FilteredQuotient = None) -> LieVerdict:
    """Injectivity of V into the truncated enveloping quotient."""
    fq = filtration or enveloping_filtration(bracket, cutoff, slack)
    witness = fq.vector_in_V_cap_ideal()
    if witness is not None:
        return LieVerdict("fails_certified", cutoff, slack, witness=witness)
    return LieVerdict("is_lie_up_to", cutoff, slack)


def primitive_check(bracket: BracketTable, cutoff: int, slack: int = 2,
                    filtration: FilteredQuotient = None) -> bool:
    """Whether the primitives of the truncated quotient are exactly the image
    of V: solves the coproduct-primitivity system inside T_(N)/(ideal)."""
    fq = filtration or enveloping_filtration(bracket, cutoff, slack)
    space = bracket.space
    d = space.dim
    one = space.field.one
    # quotient reduction of T_(cutoff) basis vectors modulo the span
    offsets, ncols = filtration_offsets(space, cutoff)
    span_rows = fq.span_rows_in(cutoff)
    # remap the span rows from the (top)-filtration columns into (cutoff) ones
    remap = {}
    for k in range(cutoff + 1):
        for w in range(space.power(k)):
            remap[fq.offsets[k] + w] = offsets[k] + w
    ech = Echelon(ncols)
    for row in span_rows:
        ech.add({remap[c]: v for c, v in row.items()})
    ech.back_substitute()
    rho_cache: dict[int, dict] = {}

    def rho(k, w):
        col = offsets[k] + w
        red = rho_cache.get(col)
        if red is None:
            red = ech.reduce({col: one})
            rho_cache[col] = red
        return red

    # unknowns: basis vectors of degrees 1..cutoff
    unknowns = []
    for k in range(1, cutoff + 1):
        for w in range(space.power(k)):
            unknowns.append((k, w))
    rows: dict[tuple, dict] = {}
    for idx, (k, w) in enumerate(unknowns):
        if k < 2:
            continue
        for a in range(1, k):
            b = k - a
            img = delta_columns(space, a, b)[w]
            for col, val in img.items():
                u, v = divmod(col, space.power(b))
                ru = rho(a, u)
                rv = rho(b, v)
                for c1, s1 in ru.items():
                    for c2, s2 in rv.items():
                        key = (c1, c2)
                        tgt = rows.setdefault(key, {})
                        cur = tgt.get(idx)
                        s = val * s1 * s2 if cur is None else cur + val * s1 * s2
                        if s.is_zero():
                            tgt.pop(idx, None)
                        else:
                            tgt[idx] = s
    solutions = kernel_basis(rows.values(), len(unknowns), one=one)
    # span of the solutions in the quotient
    img_ech = Echelon(ncols)
    for sol in solutions:
        acc: dict = {}
        for idx, coeff in sol.items():
            k, w = unknowns[idx]
            for c, v in rho(k, w).items():
                cur = acc.get(c)
                s = coeff * v if cur is None else cur + coeff * v
                if s.is_zero():
                    acc.pop(c, None)
                else:
                    acc[c] = s
        if acc:
            img_ech.add(acc)
    v_ech = Echelon(ncols)
    for j in range(d):
        red = rho(1, j)
        if red:
            v_ech.add(dict(red))
    return img_ech.rank == d and v_ech.rank == d


class HeckePresentation:
    __slots__ = ("mark", "relations", "induced_bracket_zero")

    def __init__(self, mark, relations, induced_bracket_zero):
        self.mark = mark
        self.relations = relations
        self.induced_bracket_zero = induced_bracket_zero


def hecke_presentation(bracket: BracketTable):
    """Quadratic-inhomogeneous presentation c(z) - q z - b(c(z) - q z) of the
    enveloping quotient, available exactly for Hecke braidings with regular
    mark.  Returns None for non-Hecke braidings."""
    space = bracket.space
    info = space.hecke_analysis()
    if info is None:
        return None
    if not info["regular"]:
        raise IrregularMark("Hecke mark %s is not regular" % (info["mark"],))
    for n, vecs in bracket.entries.items():
        if n > 2 and any(v for v in vecs):
            raise DomainMismatch(
                "Hecke presentations need a bracket supported in degree 2")
    q = info["mark"]
    d = space.dim
    one = space.field.one
    prims = primitive_space(space, 2)
    # Im(c - q Id) must be the whole degree-2 primitive space
    image_rows = []
    size = d * d
    for z in range(size):
        img = space.apply_word(2, (1,), {z: one})
        cur = img.get(z)
        s = -q if cur is None else cur - q
        if s.is_zero():
            img.pop(z, None)
        else:
            img[z] = s
        image_rows.append(img)
    image = Subspace.from_rows(size, (r for r in image_rows if r))
    if not (image == prims):
        raise InternalCheckError(
            "image of (c - q Id) differs from the degree-2 primitives")
    relations = []
    induced_zero = True
    for z in range(size):
        rel_top = image_rows[z]
        coords = _coords_in_primitives(prims, rel_top, 2)
        b_val = bracket.value(2, coords)
        if b_val:
            induced_zero = False
        relations.append({"quadratic": dict(rel_top),
                          "linear": {j: -v for j, v in b_val.items()}})
    return HeckePresentation(q, relations, induced_zero)
