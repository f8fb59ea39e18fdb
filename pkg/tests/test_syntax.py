import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gblx import syntax as sx
from gblx.errors import FormulaSyntaxError
from gblx.suites import formulas_by_height, random_formula

p1, p2 = sx.Var(1), sx.Var(2)


def formulas(modals=()):
    atoms = st.sampled_from([p1, p2, sx.Var(3), sx.ZERO, sx.ONE])

    def extend(children):
        binary = st.builds(lambda K, a, b: K(a, b), st.sampled_from(sx.BINARY_KINDS), children, children)
        if not modals:
            return binary
        return binary | st.builds(sx.Modal, st.sampled_from(list(modals)), children)

    return st.recursive(atoms, extend, max_leaves=12)


def test_parse_examples():
    assert sx.parse("p1 -> p1") == sx.Imp(p1, p1)
    assert sx.parse("~p1") == sx.Imp(p1, sx.ZERO)
    assert sx.parse("P p1", ["G", "H"]) == sx.Imp(sx.Modal("H", sx.Imp(p1, sx.ZERO)), sx.ZERO)
    assert sx.parse("F p1", ["G", "H"]) == sx.neg(sx.Modal("G", sx.neg(p1)))


def test_print_examples():
    assert sx.to_text(sx.Imp(p1, p1)) == "(p1 -> p1)"
    assert sx.to_text(sx.ZERO) == "0"
    assert sx.to_text(sx.Modal("G", p2)) == "(G p2)"


def test_precedence_and_associativity():
    assert sx.parse("p1 * p2 & p1 | p2 -> p1") == sx.Imp(
        sx.Join(sx.Meet(sx.Fuse(p1, p2), p1), p2), p1)
    assert sx.parse("p1 -> p2 -> p1") == sx.Imp(p1, sx.Imp(p2, p1))
    assert sx.parse("p1 <-> p2 <-> p1") == sx.iff(sx.iff(p1, p2), p1)
    assert sx.parse("~~p1") == sx.neg(sx.neg(p1))
    assert sx.parse("box p1 * p2", ["box"]) == sx.Fuse(sx.Modal("box", p1), p2)
    assert sx.parse("  ( p1\t)  ") == p1


@pytest.mark.parametrize("text, offset", [
    ("p1 ->", 5), ("(p1", 3), ("p1 p2", 3), ("p1 $ p2", 3), ("box p1", 0), ("", 0),
])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(FormulaSyntaxError) as err:
        sx.parse(text)
    assert err.value.offset == offset


def test_unknown_modal_and_reserved_names():
    with pytest.raises(FormulaSyntaxError):
        sx.parse("K p1", ["box"])
    with pytest.raises(FormulaSyntaxError):
        sx.parse("P p1", ["box"])
    for bad in (["P"], ["F"], ["p3"], ["box", "box"], [""], ["a-b"]):
        with pytest.raises(ValueError):
            sx.ModalSignature(bad)
    assert list(sx.ModalSignature([])) == []


def test_equation_parsing():
    assert sx.parse_equation("p1 | ~p1 = 1") == (sx.Join(p1, sx.neg(p1)), sx.ONE)
    with pytest.raises(FormulaSyntaxError) as err:
        sx.parse_equation("p1 = p2 )")
    assert err.value.offset == 8
    with pytest.raises(FormulaSyntaxError):
        sx.parse_equation("p1 = p2 = 1")


def test_height_examples():
    assert sx.height(p1) == 0
    assert sx.height(sx.Imp(p1, sx.ZERO)) == 1
    assert sx.height(sx.translate_m(sx.Imp(p1, p2))) == 3


def test_translation_examples():
    box = lambda f: sx.Modal("box", f)  # noqa: E731
    assert sx.translate_m(p1) == box(p1)
    assert sx.translate_m(sx.ZERO) == sx.ZERO
    assert sx.translate_m(sx.Imp(p1, p2)) == box(sx.Imp(box(p1), box(p2)))
    assert sx.translate_m(sx.Fuse(p1, p2)) == sx.Fuse(box(p1), box(p2))
    assert sx.translate_t(p1) == sx.Modal("G", p1)
    assert sx.translate_t(sx.ONE) == sx.ONE
    assert sx.to_text(sx.translate_t(sx.Imp(p1, p2))) == "(G ((G p1) -> (G p2)))"
    with pytest.raises(ValueError):
        sx.translate_m(sx.Modal("box", p1))


def test_round_trip_exhaustive_to_height_two():
    levels = formulas_by_height(2)
    assert len(levels[2]) == 18500
    for f in levels[2]:
        assert sx.parse(sx.to_text(f)) == f


def test_round_trip_seeded_height_three():
    rng = random.Random(7)
    level2 = formulas_by_height(2)[2]
    for _ in range(5000):
        K = rng.choice(sx.BINARY_KINDS)
        f = K(rng.choice(level2), rng.choice(level2))
        assert sx.parse(sx.to_text(f)) == f


@settings(max_examples=300, deadline=None)
@given(formulas(["box", "G", "H", "a1"]))
def test_round_trip_property(f):
    text = sx.to_text(f)
    assert sx.parse(text, ["box", "G", "H", "a1"]) == f
    assert sx.to_text(sx.parse(text, ["box", "G", "H", "a1"])) == text


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_translation_properties(f):
    m, t = sx.translate_m(f), sx.translate_t(f)
    assert sx.relabel(m, {"box": "G"}) == t
    assert sx.height(m) <= 2 * sx.height(f) + 1
    assert sx.variables(m) == sx.variables(f)

    def imps_boxed(g, under_modal):
        if isinstance(g, sx.Imp) and not under_modal:
            return False
        if isinstance(g, sx.Modal):
            return imps_boxed(g.sub, True)
        if isinstance(g, sx.Binary):
            return imps_boxed(g.left, False) and imps_boxed(g.right, False)
        return True

    assert imps_boxed(m, False)


def test_formulas_are_hashable_values():
    a = sx.parse("(p1 -> p2) & p1")
    b = sx.parse("((p1 -> p2) & p1)")
    assert a == b and hash(a) == hash(b) and len({a, b}) == 1
    assert sx.Meet(p1, p2) != sx.Join(p1, p2)


def test_substitute_and_relabel():
    f = sx.parse("box (p1 -> p2)", ["box"])
    g = sx.substitute(sx.relabel(f, {"box": "G"}), {1: sx.ONE})
    assert sx.to_text(g) == "(G (1 -> p2))"
    assert sx.modal_names(g) == {"G"}


def test_random_formula_generator_is_seeded():
    a = [random_formula(random.Random(3), 5) for _ in range(3)]
    b = [random_formula(random.Random(3), 5) for _ in range(3)]
    assert a == b
