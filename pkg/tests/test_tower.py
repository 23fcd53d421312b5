import random

import pytest

from braidcalc.errors import BadParams, NotACoideal
from braidcalc.linalg import Subspace
from braidcalc.scalars import field_make
from braidcalc.spaces import make_braiding, make_preset, word_index
from braidcalc.tensorbialg import (
    delta_columns,
    nichols_dims,
    primitive_space,
    symmetrizer,
)
from braidcalc.tower import (
    QuotientBialgebra,
    delta_injectivity_ladder,
    ideal_closure,
    is_quadratic,
    nichols_via_tower,
    quotient_primitives,
    reduce_bidegree,
    sdeg,
    symmetric_step,
    tower_iterates,
)

F1 = field_make(1)
F3 = field_make(3)
F4 = field_make(4)


def w(space, *letters):
    return word_index(letters, space.dim)


def test_closure_of_classical_commutator():
    fl = make_braiding("flip", {"d": 2}, F1)
    gen = {w(fl, 0, 1): F1.one, w(fl, 1, 0): -F1.one}
    tower = ideal_closure(fl, {2: [gen]}, 5)
    # the quotient is the polynomial algebra on two variables
    assert tower.dims == [1, 2, 3, 4, 5, 6]
    # the per-degree ideals are the symmetrizer kernels
    for n in range(2, 6):
        assert tower.components[n].dim == fl.power(n) - symmetrizer(fl, n).rank


def test_closure_of_nothing_is_tensor_algebra():
    gu = make_preset("gurevich", F1)
    tower = ideal_closure(gu, {}, 4)
    assert tower.dims == [1, 3, 9, 27, 81]
    assert all(c.is_zero() for c in tower.components)


def test_closure_rejects_non_coideal_generators():
    fl = make_braiding("flip", {"d": 2}, F1)
    # a single monomial is not a coideal generator
    with pytest.raises(NotACoideal):
        ideal_closure(fl, {2: [{w(fl, 0, 1): F1.one}]}, 4)
    with pytest.raises(BadParams):
        ideal_closure(fl, {1: [{0: F1.one}]}, 4)


def test_symmetric_step_reaches_symmetric_algebra():
    gu = make_preset("gurevich", F1)
    first = symmetric_step(QuotientBialgebra.tensor_algebra(gu, 4))
    assert first.dims == [1, 3, 6, 10, 15]
    # a second step is a fixpoint here
    assert symmetric_step(first) is first


def test_quotient_primitives_match_plain_primitives_on_t():
    d4 = make_preset("d4_rack", F1)
    qb = QuotientBialgebra.tensor_algebra(d4, 4)
    for n in (2, 3, 4):
        assert quotient_primitives(qb, n) == primitive_space(d4, n)


def test_d4_quartic_classes_are_quotient_primitives():
    d4 = make_preset("d4_rack", F1)
    iterates = tower_iterates(d4, 6)
    s_one = iterates[1]
    prims4 = quotient_primitives(s_one, 4)
    one = F1.one
    a = {w(d4, 1, 2): one, w(d4, 0, 1): one}
    b = {w(d4, 1, 0): one, w(d4, 2, 1): one}

    def cat(x, y):
        out = {}
        for cx, vx in x.items():
            for cy, vy in y.items():
                out[cx * 16 + cy] = vx * vy
        return out

    def plus(x, y):
        out = dict(x)
        for c, v in y.items():
            cur = out.get(c, F1.zero) + v
            if cur.is_zero():
                out.pop(c, None)
            else:
                out[c] = cur
        return out

    a2, b2, abba = cat(a, a), cat(b, b), plus(cat(a, b), cat(b, a))
    J4 = s_one.tower.components[4]
    for vec in (a2, b2, abba):
        assert prims4.contains(vec)
        assert not J4.contains(vec)  # nontrivial classes in the quotient


def test_primitive_degrees_live_inside_lower_ideal_for_d4():
    # degree-3 and degree-4 primitives add no generators beyond degree 2
    d4 = make_preset("d4_rack", F1)
    e2 = primitive_space(d4, 2)
    tower = ideal_closure(d4, {2: e2}, 4, verify="off")
    assert tower.components[3].contains_subspace(primitive_space(d4, 3))
    assert tower.components[4].contains_subspace(primitive_space(d4, 4))
    # while the quartic relation classes stay outside
    one = F1.one
    a = {w(d4, 1, 2): one, w(d4, 0, 1): one}
    a2 = {}
    for cx, vx in a.items():
        for cy, vy in a.items():
            a2[cx * 16 + cy] = vx * vy
    assert not tower.components[4].contains(a2)


def test_sdeg_scalar_regular_certified():
    sc = make_braiding("scalar", {"d": 2, "q": 2}, F1)
    verdict = sdeg(sc, 5)
    assert verdict.value == 0
    assert verdict.status == "certified"


def test_sdeg_scalar_root_of_unity():
    scz = make_braiding("scalar", {"d": 2, "q": F4.gen}, F4)
    verdict = sdeg(scz, 6)
    assert verdict.value == 1
    assert verdict.status == "certified"
    assert verdict.tower_trace[-1]["dims"] == [1, 2, 4, 8, 0, 0, 0]


def test_sdeg_hecke_flip():
    for d in (2, 3):
        fl = make_braiding("flip", {"d": d}, F1)
        verdict = sdeg(fl, 5)
        assert verdict.value == 1
        assert verdict.status == "certified"


def test_sdeg_examples_kharchenko():
    tw = make_preset("twodim_sdeg2", F1)
    assert sdeg(tw, 6).value == 2
    ca = make_preset("cartan_An", F3, n=2, t=3)
    assert sdeg(ca, 6).value == 2
    ca_generic = make_preset("cartan_An", F1, n=2, q=2)
    verdict = sdeg(ca_generic, 5)
    assert verdict.value == 1
    assert verdict.status == "lower_bound_at_cutoff"


def test_sdeg_cartan_certifies_at_degree_nine():
    ca = make_preset("cartan_An", F3, n=2, t=3, degree_budget=9)
    verdict = sdeg(ca, 9)
    assert verdict.value == 2
    assert verdict.status == "certified"
    # the stabilised dimensions sum to t^(number of positive roots)
    assert sum(verdict.tower_trace[-1]["dims"]) == 27


def test_tower_monotonicity():
    tw = make_preset("twodim_sdeg2", F1)
    iterates = tower_iterates(tw, 6)
    for prev, nxt in zip(iterates, iterates[1:]):
        for n in range(7):
            assert prev.tower.components[n].dim <= nxt.tower.components[n].dim
            assert nxt.tower.components[n].contains_subspace(
                prev.tower.components[n])
            assert prev.dims[n] >= nxt.dims[n]


def test_nichols_via_tower_cross_check():
    for space, upto in (
        (make_braiding("flip", {"d": 2}, F1), 5),
        (make_braiding("scalar", {"d": 2, "q": F4.gen}, F4), 6),
        (make_preset("gurevich", F1), 5),
        (make_preset("twodim_sdeg2", F1), 6),
        (make_preset("cartan_An", F3, n=2, t=3), 6),
    ):
        assert nichols_via_tower(space, upto) == nichols_dims(space, upto), space.kind


def test_nichols_via_tower_random_diagonal(seed=20):
    rng = random.Random(seed)
    F12 = field_make(12)
    scalars = [F12.gen ** k for k in range(12)] + [
        F12.from_rational(2), F12.from_fraction(1, 2), F12.from_rational(-2)]
    for _ in range(6):
        d = rng.randint(2, 3)
        qmat = [[rng.choice(scalars) for _ in range(d)] for _ in range(d)]
        space = make_braiding("diagonal", {"q": qmat}, F12)
        upto = 4
        assert nichols_via_tower(space, upto) == nichols_dims(space, upto)


def test_injectivity_ladder_on_iterates():
    tw = make_preset("twodim_sdeg2", F1)
    iterates = tower_iterates(tw, 5)
    for k, it in enumerate(iterates):
        if k == 0:
            continue
        ladder = delta_injectivity_ladder(it, min(k + 1, 5))
        assert all(ladder.values()), (k, ladder)
    ca = make_preset("cartan_An", F3, n=2, t=3)
    iterates = tower_iterates(ca, 6)
    for k, it in enumerate(iterates[1:], start=1):
        ladder = delta_injectivity_ladder(it, min(k + 1, 6))
        assert all(ladder.values())


def test_kernel_equality_across_bidegrees():
    # when all components one level down are injective, the inner kernels at
    # the next level coincide (and equal the primitives there)
    ca = make_preset("cartan_An", F3, n=2, t=3)
    iterates = tower_iterates(ca, 6)
    qb = iterates[1]
    space = qb.space
    level = 3
    if all(delta_injectivity_ladder(qb, level - 1).values()):
        kernels = []
        from braidcalc.linalg import kernel_basis

        for a in range(1, level):
            cols = delta_columns(space, a, level - a)
            rows = {}
            for word in range(space.power(level)):
                red = reduce_bidegree(qb.tower, cols[word], a, level - a)
                for r, val in red.items():
                    rows.setdefault(r, {})[word] = val
            kernels.append(Subspace.from_rows(
                space.power(level),
                kernel_basis(rows.values(), space.power(level),
                             one=space.field.one)))
        for other in kernels[1:]:
            assert other == kernels[0]


def test_is_quadratic_examples():
    fl = make_braiding("flip", {"d": 2}, F1)
    assert is_quadratic(fl, 4)
    gu = make_preset("gurevich", F1)
    assert is_quadratic(gu, 4)
    d4 = make_preset("d4_rack", F1)
    assert not is_quadratic(d4, 4)
    with pytest.raises(BadParams):
        is_quadratic(fl, 2)


def test_coideal_verification_full_mode():
    gu = make_preset("gurevich", F1)
    e2 = primitive_space(gu, 2)
    tower = ideal_closure(gu, {2: e2}, 4, verify="full")
    assert tower.dims == [1, 3, 6, 10, 15]


def test_sdeg_cutoff_honesty_for_higher_root_orders():
    # at t = 4 the second tower step only appears at degree 2t = 8, so a
    # cutoff of 6 must report a lower bound of 1, never a certified 1
    ca4 = make_preset("cartan_An", F4, n=2, t=4)
    verdict = sdeg(ca4, 6)
    assert verdict.value == 1
    assert verdict.status == "lower_bound_at_cutoff"
    ca4_deep = make_preset("cartan_An", F4, n=2, t=4, degree_budget=8)
    deeper = sdeg(ca4_deep, 8)
    assert deeper.value == 2
