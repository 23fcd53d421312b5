"""Canned brackets and the expected-values catalog for the preset spaces.

The catalog drives the batch self-check: every preset records the invariants
it is known to have (strongness degree, quadraticity, primitive-space
dimensions), and the full run asserts them.
"""

from __future__ import annotations

from .enveloping import BracketTable, validate_bracket
from .errors import BadParams
from .spaces import BraidedSpace
from .tensorbialg import primitive_space


def preset_bracket(space: BraidedSpace, name: str) -> BracketTable:
    """Named bracket fixtures on the preset spaces, already validated.

    gurevich: the degree-2 bracket sending the first two canonical
    generators of the primitive space to -x1, -x2 (the canonical rows are
    the negatives of the usual difference generators) and the third to 0.
    sl2_flip: the classical structure constants on the flip of dimension 3
    with x0 = h, x1 = e, x2 = f.
    zero: the zero bracket up to the space's degree budget.
    """
    field = space.field
    one = field.one
    if name == "zero":
        return BracketTable.zero(space, space.degree_budget)
    if name == "gurevich":
        if space.kind != "preset:gurevich":
            raise BadParams("the gurevich bracket needs the gurevich preset")
        e2 = primitive_space(space, 2)
        if e2.dim != 3:
            raise BadParams("unexpected degree-2 primitive space")
        table = BracketTable(space, {2: [{1: -one}, {2: -one}, {}]})
        return validate_bracket(space, table)
    if name == "sl2_flip":
        if space.kind != "flip" or space.dim != 3:
            raise BadParams("the sl2 bracket needs the flip of dimension 3")
        two = field.from_rational(2)
        table = BracketTable(space, {2: [{1: two}, {2: -two}, {0: one}]})
        return validate_bracket(space, table)
    raise BadParams("unknown bracket fixture %r" % name)


# Expected invariants, used by the catalog self-test and the batch runner.
# Keys: preset name; construction parameters live next to the expectations.
CATALOG = [
    {
        "preset": "flip", "params": {"d": 2}, "field_order": 1,
        "sdeg": 1, "sdeg_status": "certified", "quadratic_at_4": True,
        "e2_dim": 1, "nichols_upto_4": [1, 2, 3, 4, 5],
    },
    {
        "preset": "flip", "params": {"d": 3}, "field_order": 1,
        "sdeg": 1, "sdeg_status": "certified", "quadratic_at_4": True,
        "e2_dim": 3, "nichols_upto_4": [1, 3, 6, 10, 15],
    },
    {
        "preset": "scalar", "params": {"d": 2, "q": 2}, "field_order": 1,
        "sdeg": 0, "sdeg_status": "certified", "quadratic_at_4": True,
        "e2_dim": 0, "nichols_upto_4": [1, 2, 4, 8, 16],
    },
    {
        "preset": "d4_rack", "params": {}, "field_order": 1,
        "sdeg": 2, "quadratic_at_4": False, "e2_dim": 8,
        "nichols_upto_4": [1, 4, 8, 12, 14],
    },
    {
        "preset": "gurevich", "params": {}, "field_order": 1,
        "sdeg": 1, "quadratic_at_4": True, "e2_dim": 3,
        "nichols_upto_4": [1, 3, 6, 10, 15],
    },
    {
        "preset": "twodim_sdeg2", "params": {}, "field_order": 1,
        "sdeg": 2, "e2_dim": 2, "nichols_upto_4": [1, 2, 2, 2, 1],
    },
    {
        "preset": "cartan_An", "params": {"n": 2, "t": 3}, "field_order": 3,
        "sdeg": 2, "e2_dim": 0, "nichols_upto_4": [1, 2, 4, 4, 5],
    },
    {
        "preset": "hecke_gl", "params": {"d": 2, "q": 3}, "field_order": 1,
        "sdeg": 1, "sdeg_status": "certified", "quadratic_at_4": True,
        "e2_dim": 1, "nichols_upto_4": [1, 2, 3, 4, 5],
    },
]
