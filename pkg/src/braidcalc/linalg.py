"""Sparse exact linear algebra over a cyclotomic field.

Vectors are dicts {column index: nonzero scalar}.  Subspaces are kept in
reduced row echelon form with a fixed ascending column order, so two equal
subspaces have literally identical representations and equality, membership
and inclusion tests are syntactic.

The echelon is built by forward reduction (each incoming row is reduced
against the pivots found so far) and back-substituted once at the end;
sparsity of the input rows is preserved as far as the fill-in pattern of the
pivot graph allows, which for the monomial and diagonal braidings that
dominate this workbench means eliminations never leave the orbit of words
a row touches.
"""

from __future__ import annotations


def vec_axpy(target: dict, coeff, source: dict) -> None:
    """target += coeff * source, dropping entries that cancel to zero."""
    for col, val in source.items():
        cur = target.get(col)
        if cur is None:
            target[col] = coeff * val
        else:
            new = cur + coeff * val
            if new.is_zero():
                del target[col]
            else:
                target[col] = new


def vec_eq(a: dict, b: dict) -> bool:
    if len(a) != len(b):
        return False
    for col, val in a.items():
        other = b.get(col)
        if other is None or not (val == other):
            return False
    return True


class Echelon:
    """Mutable row echelon accumulator over a fixed column count."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict] = {}
        self._reduced = True

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: dict) -> dict:
        """Return the remainder of row after eliminating all pivot columns."""
        row = dict(row)
        pivots = self.pivot_rows
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                # eliminate any later pivot columns too, for a canonical remainder
                for col in sorted(c for c in row if c in pivots and c != lead):
                    val = row.get(col)
                    if val is not None:
                        vec_axpy(row, -val, pivots[col])
                return row
            vec_axpy(row, -row[lead], prow)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True when the rank grew."""
        row = dict(row)
        pivots = self.pivot_rows
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                leadval = row.pop(lead)
                if not leadval.is_one():
                    inv = leadval.inv()
                    row = {c: inv * v for c, v in row.items()}
                row[lead] = leadval.field.one
                pivots[lead] = row
                self._reduced = False
                return True
            vec_axpy(row, -row[lead], prow)
        return False

    def add_rows(self, rows) -> int:
        added = 0
        for row in rows:
            if self.add(row):
                added += 1
        return added

    def back_substitute(self) -> None:
        """Bring the accumulated rows into fully reduced echelon form."""
        if self._reduced:
            return
        pivots = self.pivot_rows
        for pcol in sorted(pivots, reverse=True):
            row = pivots[pcol]
            for col in sorted(c for c in row if c != pcol and c in pivots):
                val = row.get(col)
                if val is not None:
                    vec_axpy(row, -val, pivots[col])
        self._reduced = True

    def rows(self) -> list[dict]:
        self.back_substitute()
        return [self.pivot_rows[c] for c in sorted(self.pivot_rows)]


class Subspace:
    """A subspace of a coordinate space, held canonically in RREF."""

    __slots__ = ("ncols", "rows", "pivots", "_index")

    def __init__(self, ncols: int, rows: list[dict], pivots: tuple[int, ...]):
        self.ncols = ncols
        self.rows = rows
        self.pivots = pivots
        self._index = None

    @classmethod
    def from_rows(cls, ncols: int, rows) -> "Subspace":
        ech = Echelon(ncols)
        ech.add_rows(rows)
        return cls.from_echelon(ech)

    @classmethod
    def from_echelon(cls, ech: Echelon) -> "Subspace":
        rows = ech.rows()
        return cls(ech.ncols, rows, tuple(min(r) for r in rows))

    @classmethod
    def zero(cls, ncols: int) -> "Subspace":
        return cls(ncols, [], ())

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def echelon(self) -> Echelon:
        ech = Echelon(self.ncols)
        for pcol, row in zip(self.pivots, self.rows):
            ech.pivot_rows[pcol] = dict(row)
        return ech

    def reduce(self, vector: dict) -> dict:
        """Canonical remainder of a vector modulo this subspace."""
        row = dict(vector)
        index = self._index
        if index is None:
            index = self._index = dict(zip(self.pivots, self.rows))
        while row:
            lead = min(row)
            prow = index.get(lead)
            if prow is None:
                for col in sorted(c for c in row if c in index and c != lead):
                    val = row.get(col)
                    if val is not None:
                        vec_axpy(row, -val, index[col])
                return row
            vec_axpy(row, -row[lead], prow)
        return row

    def contains(self, vector: dict) -> bool:
        return not self.reduce(vector)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ncols != other.ncols:
            raise ValueError("subspace dimensions differ")
        ech = self.echelon()
        ech.add_rows(other.rows)
        return Subspace.from_echelon(ech)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Combinations of self's rows that reduce to zero modulo other."""
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ncols)
        reduced = [other.reduce(r) for r in self.rows]
        unit = next(iter(self.rows[0].values())).field.one
        combos = left_kernel(reduced, one=unit)
        rows = []
        for combo in combos:
            acc: dict = {}
            for i, coeff in combo.items():
                vec_axpy(acc, coeff, self.rows[i])
            if acc:
                rows.append(acc)
        return Subspace.from_rows(self.ncols, rows)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ncols == other.ncols
            and self.pivots == other.pivots
            and all(vec_eq(a, b) for a, b in zip(self.rows, other.rows))
        )

    def __hash__(self):  # pragma: no cover - subspaces are not dict keys today
        return hash((self.ncols, self.pivots))

    def __repr__(self):
        return "Subspace(dim=%d, ncols=%d)" % (self.dim, self.ncols)


def kernel_basis(rows, ncols: int, one=None) -> list[dict]:
    """Basis of {x : R x = 0} given the constraint rows of R.

    The basis is the canonical free-column one: for every non-pivot column f
    (ascending) the vector with 1 at f and -R[p][f] at each pivot column p.
    Returned rows are themselves in RREF.  `one` supplies the unit scalar when
    the constraint set might be empty.
    """
    ech = Echelon(ncols)
    ech.add_rows(rows)
    return kernel_from_echelon(ech, one=one)


def kernel_from_echelon(ech: Echelon, one=None) -> list[dict]:
    ech.back_substitute()
    pivots = ech.pivot_rows
    for row in pivots.values():
        for val in row.values():
            one = val.field.one
            break
        break
    if one is None:
        raise ValueError("kernel of an empty constraint set needs a unit hint")
    # collect, per free column, the pivot entries hitting it
    free_entries: dict[int, dict] = {}
    for pcol, row in pivots.items():
        for col, val in row.items():
            if col != pcol and col not in pivots:
                free_entries.setdefault(col, {})[pcol] = -val
    basis = []
    for f in range(ech.ncols):
        if f in pivots:
            continue
        vec = dict(free_entries.get(f, {}))
        vec[f] = one
        basis.append(vec)
    return basis


def left_kernel(vectors: list[dict], one=None) -> list[dict]:
    """Basis of {lambda : sum_i lambda_i v_i = 0} for a list of sparse vectors."""
    transposed: dict[int, dict] = {}
    for i, vec in enumerate(vectors):
        for col, val in vec.items():
            transposed.setdefault(col, {})[i] = val
            if one is None:
                one = val.field.one
    n = len(vectors)
    if one is None:
        raise ValueError("left kernel of an all-zero family needs a unit hint")
    ech = Echelon(n)
    ech.add_rows(transposed.values())
    ech.back_substitute()
    pivots = ech.pivot_rows
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        vec = {f: one}
        for pcol, row in pivots.items():
            val = row.get(f)
            if val is not None:
                vec[pcol] = -val
        basis.append(vec)
    return basis


def rank_of_rows(rows, ncols: int) -> int:
    ech = Echelon(ncols)
    ech.add_rows(rows)
    return ech.rank


# -- tensor-shaped reindexing helpers ----------------------------------------

def row_tensor_basis_right(row: dict, d: int, letter: int) -> dict:
    """row (x) e_letter, for a row living in degree-n word coordinates."""
    return {col * d + letter: val for col, val in row.items()}


def row_tensor_basis_left(row: dict, d: int, letter: int, deg: int) -> dict:
    """e_letter (x) row, row in degree-`deg` coordinates."""
    shift = letter * d**deg
    return {shift + col: val for col, val in row.items()}


def row_tensor_row(a: dict, b: dict, dim_b: int) -> dict:
    out = {}
    for ca, va in a.items():
        base = ca * dim_b
        for cb, vb in b.items():
            out[base + cb] = va * vb
    return out
