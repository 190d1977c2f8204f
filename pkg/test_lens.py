import random

import pytest

from app.core.base import (
    BOTTOM,
    DCPO,
    SET,
    FnTable,
    MonotonicityError,
    TableError,
    identity_table,
    make_carrier,
    product,
    unit_carrier,
)
from app.core.category import Interface, InterfaceMismatchError, ModeError
from app.core.lens import (
    Lens,
    lens_canonical,
    lens_compose,
    lens_dcpo,
    lens_from_functions,
    lens_id,
    lens_set,
    lens_structural,
    lens_symmetry,
    lens_tensor,
    lift,
    validate_lens,
)
from app.utils.generators import random_interfaces, random_lens

X = make_carrier(SET, ("x1", "x2"), name="X")
S = make_carrier(SET, ("s1", "s2"), name="S")
Y = make_carrier(SET, ("y1", "y2", "y3"), name="Y")
R = make_carrier(SET, ("r1", "r2"), name="R")
UNIT = unit_carrier(SET)


def _sample_lens(rng, src, dst):
    return random_lens(rng, src, dst)


def test_compose_uses_the_inner_view_in_the_outer_update():
    rng = random.Random(1)
    lam = _sample_lens(rng, Interface(X, S), Interface(Y, R))
    mu = _sample_lens(rng, Interface(Y, R), Interface(X, S))
    composite = lens_compose(mu, lam)
    assert composite.src == lam.src and composite.dst == mu.dst
    for x in X.elements:
        assert composite.view(x) == mu.view(lam.view(x))
        for q in S.elements:
            assert composite.update((x, q)) == lam.update((x, mu.update((lam.view(x), q))))


def test_compose_rejects_mismatched_interfaces():
    rng = random.Random(2)
    lam = _sample_lens(rng, Interface(X, S), Interface(Y, R))
    with pytest.raises(InterfaceMismatchError):
        lens_compose(lam, lam)


def test_identity_is_neutral():
    rng = random.Random(3)
    for _ in range(20):
        a, b = random_interfaces(rng, SET, 3, 2)
        lam = random_lens(rng, a, b)
        assert lens_compose(lens_id(b), lam) == lam
        assert lens_compose(lam, lens_id(a)) == lam


def test_tensor_swaps_backward_factors():
    first = Interface(X, S)
    second = Interface(Y, R)
    tensor = first.tensor(second)
    assert tensor.fwd == product(X, Y)
    assert tensor.bwd == product(R, S)
    assert tensor.left == first and tensor.right == second


def test_tensor_update_routes_each_payoff_to_its_own_lens():
    rng = random.Random(4)
    lam = _sample_lens(rng, Interface(X, S), Interface(Y, R))
    mu = _sample_lens(rng, Interface(Y, R), Interface(X, S))
    both = lens_tensor(lam, mu)
    for x in X.elements:
        for y in Y.elements:
            assert both.view((x, y)) == (lam.view(x), mu.view(y))
            for s in S.elements:
                for r in R.elements:
                    # backward input is (mu's payoff, lam's payoff)
                    assert both.update(((x, y), (s, r))) == (mu.update((y, s)), lam.update((x, r)))


def test_tensor_rejects_mixed_modes():
    dcpo_unit = unit_carrier(DCPO)
    with pytest.raises(ModeError):
        lens_tensor(lens_id(Interface(X, S)), lens_id(Interface(dcpo_unit, dcpo_unit)))


def test_covariant_and_contravariant_lifts():
    f = FnTable(X, Y, ("y2", "y3"))
    cov = lift(f)
    assert cov.src == Interface(X, UNIT) and cov.dst == Interface(Y, UNIT)
    assert cov.view == f
    contra = lift(f, "contra")
    assert contra.src == Interface(UNIT, Y) and contra.dst == Interface(UNIT, X)
    assert contra.update(("*", "x1")) == "y2"
    with pytest.raises(ValueError):
        lift(f, "sideways")


def test_lift_is_functorial():
    f = FnTable(X, Y, ("y2", "y3"))
    g = FnTable(Y, X, ("x1", "x1", "x2"))
    assert lens_compose(lift(g), lift(f)) == lift(f.then(g))
    assert lift(identity_table(X)) == lens_id(Interface(X, UNIT))


def test_structural_lenses():
    copy = lens_structural("copy", X)
    assert copy.dst == Interface(product(X, X), UNIT)
    assert copy.view("x2") == ("x2", "x2")
    delete = lens_structural("delete", X)
    assert delete.dst == Interface(UNIT, UNIT)
    counit = lens_structural("counit", X)
    assert counit.src == Interface(X, X)
    assert counit.update(("x1", "*")) == "x1"
    with pytest.raises(ValueError):
        lens_structural("merge", X)


def test_symmetry_is_an_involution():
    a, b = Interface(X, S), Interface(Y, R)
    assert lens_compose(lens_symmetry(b, a), lens_symmetry(a, b)) == lens_id(a.tensor(b))


def test_canonical_iso_moves_elements_between_bracketings():
    src = Interface(product(X, UNIT), product(UNIT, S))
    dst = Interface(X, S)
    iso = lens_canonical(src, dst)
    assert iso.view(("x2", "*")) == "x2"
    assert iso.update((("x2", "*"), "s1")) == ("*", "s1")
    assert lens_compose(lens_canonical(dst, src), iso) == lens_id(src)
    with pytest.raises(InterfaceMismatchError):
        lens_canonical(src, Interface(Y, S))


def test_lens_checks_table_types():
    view = FnTable(X, Y, ("y1", "y1"))
    wrong = FnTable(product(X, S), S, ("s1",) * 4)
    with pytest.raises(InterfaceMismatchError):
        Lens(Interface(X, S), Interface(Y, R), view, wrong)


def test_dcpo_lenses_validate_monotonicity():
    flat = make_carrier(DCPO, ("a", "b"))
    unit = unit_carrier(DCPO)
    good = lens_from_functions(Interface(flat, unit), Interface(flat, unit), lambda x: x, lambda x, r: BOTTOM)
    assert validate_lens(good) is good
    bad = lens_from_functions(
        Interface(flat, unit), Interface(flat, unit), lambda x: "a" if x is BOTTOM else x, lambda x, r: BOTTOM
    )
    with pytest.raises(MonotonicityError):
        validate_lens(bad)


def test_composites_are_validated():
    flat = make_carrier(DCPO, ("a", "b"))
    wire = Interface(flat, unit_carrier(DCPO))
    bad = lens_from_functions(wire, wire, lambda x: "a" if x is BOTTOM else x, lambda x, r: BOTTOM)
    with pytest.raises(MonotonicityError):
        lens_compose(lens_id(wire), bad)
    with pytest.raises(MonotonicityError):
        lens_tensor(bad, lens_id(wire))
    stray = lens_from_functions(Interface(X, S), Interface(Y, R), lambda x: "y9", lambda x, r: "s1")
    with pytest.raises(TableError):
        lens_compose(stray, lens_id(Interface(X, S)))


def test_categories_hold_their_own_mode():
    dcpo_lens = lens_id(Interface(unit_carrier(DCPO), unit_carrier(DCPO)))
    assert lens_dcpo.from_lens(dcpo_lens) is dcpo_lens
    with pytest.raises(ModeError):
        lens_set.from_lens(dcpo_lens)
