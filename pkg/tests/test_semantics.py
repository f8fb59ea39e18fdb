import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gblx import syntax as sx
from gblx.algebra import classify, godel_chain, lukasiewicz_chain
from gblx.corpus import s4mv_algebras, s4tmv_algebras
from gblx.errors import AlgebraError, CapExceeded, EvaluationError
from gblx.posetprod import conucleus_image
from gblx.semantics import (
    Equation,
    assignment_grid,
    check_translation_equivalence,
    evaluate,
    is_valid,
    semantic_consequence,
    term_vector,
)
from gblx.suites import SuiteReport, _translation_sweep, formulas_by_height, random_pool

p1, p2 = sx.Var(1), sx.Var(2)


def test_evaluate_examples(l3, l3box):
    assert evaluate(l3, {1: 1}, sx.neg(p1)) == 1
    for A in (l3, godel_chain(4), lukasiewicz_chain(5)):
        for x in range(A.n):
            assert evaluate(A, {1: x}, sx.Imp(p1, p1)) == A.one
    assert evaluate(l3box, {1: 1}, sx.translate_m(sx.Imp(p1, p1))) == 2


def test_evaluate_errors(l3):
    with pytest.raises(EvaluationError, match="unassigned"):
        evaluate(l3, {}, p1)
    with pytest.raises(EvaluationError, match="modal"):
        evaluate(l3, {1: 0}, sx.Modal("box", p1))


def test_is_valid_examples(l3):
    assert is_valid(l3, Equation.parse("p1 | ~p1 = 1")) == (False, {1: 1})
    assert is_valid(l3, Equation.parse("1 = 1")) == (True, None)
    assert is_valid(godel_chain(3), Equation.parse("1 = 1")) == (True, None)
    assert is_valid(l3, Equation.parse("~~p1 = p1")) == (True, None)


def test_witness_is_lexicographically_least(l3):
    ok, h = is_valid(l3, Equation.parse("p1 -> p2 = 1"))
    assert not ok and h == {1: 1, 2: 0}


def test_consequence_examples(l3, l2, l3box):
    ok, w = semantic_consequence([l3box], [Equation.parse("p1 = 1")], Equation.parse("box p1 = 1", ["box"]))
    assert ok and w is None
    ok, (A, h) = semantic_consequence([l3], [Equation.parse("p1 * p1 = p1")], Equation.parse("p1 = 1"))
    assert not ok and A is l3 and h == {1: 0}
    assert semantic_consequence([l2], [], Equation.parse("p1 | ~p1 = 1")) == (True, None)


def test_assignment_cap(l3, monkeypatch):
    eq = Equation.parse("p1 * p2 * p3 = p3")
    with pytest.raises(CapExceeded):
        is_valid(l3, eq, cap=26)
    monkeypatch.setenv("GBLX_CAP_ASSIGNMENTS", "20")
    with pytest.raises(CapExceeded):
        is_valid(l3, eq)
    monkeypatch.setenv("GBLX_CAP_ASSIGNMENTS", "27")
    assert not is_valid(l3, eq)[0]
    monkeypatch.setenv("GBLX_CAP_ASSIGNMENTS", "lots")
    with pytest.raises(CapExceeded):
        is_valid(l3, eq)


def test_assignment_grid_order():
    env, rows = assignment_grid(2, [2, 1])
    assert rows.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert env[1].tolist() == [0, 0, 1, 1]


def test_translation_examples(l3box, chain_product):
    r = check_translation_equivalence(l3box, sx.parse("p1 | ~p1"))
    assert r.passed and not r.valid_in_image and not r.valid_translation
    A = chain_product.s4mv
    r = check_translation_equivalence(A, sx.parse("p1 -> p1"))
    assert r.passed and r.valid_in_image and r.valid_translation
    prelin = sx.parse("(p1 -> p2) | (p2 -> p1)")
    assert is_valid(A, Equation.is_one(prelin))[0]
    r = check_translation_equivalence(A, prelin)
    assert r.passed and r.valid_in_image and r.valid_translation
    assert classify(conucleus_image(A, "box")).is_bl


def test_translation_preconditions(l3, chain_product):
    with pytest.raises(AlgebraError):
        check_translation_equivalence(l3, p1)
    with pytest.raises(AlgebraError):
        check_translation_equivalence(chain_product.s4mv, p1, "T")
    with pytest.raises(ValueError):
        check_translation_equivalence(chain_product.s4mv, sx.Modal("box", p1))
    r = check_translation_equivalence(chain_product.s4tmv, sx.parse("~~p1 -> p1"), "T")
    assert r.passed and r.modal == "G"


def test_translation_with_a_proper_box(l3):
    # box sends 1/2 to 0, so the image is the two-element chain
    A = l3.with_modals({"box": [0, 0, 2]})
    assert classify(A).is_s4mv
    r = check_translation_equivalence(A, sx.parse("~~p1"))
    assert r.passed
    assert not r.valid_in_image and not r.valid_translation


def test_vectorised_evaluation_matches_fold():
    A = s4mv_algebras()[5]
    rng = random.Random(11)
    env, rows = assignment_grid(A.n, [1, 2])
    for f in random_pool(seed=5, count=40, max_height=4):
        f = sx.translate_m(f) if rng.random() < 0.5 else f
        vec = term_vector(A, f, env)
        vec = np.broadcast_to(vec, (rows.shape[0],))
        for k, (a, b) in enumerate(rows):
            assert vec[k] == oracles.evaluate(A, {1: a, 2: b}, f)


@pytest.mark.parametrize("A", [s4mv_algebras()[i] for i in (0, 7, 21, 40)], ids=lambda A: A.name)
def test_batched_sweep_matches_literal_translation(A):
    """The batched height-2 layer agrees with literally translating each formula."""
    rep = SuiteReport("t", 1, 0, 0)
    _translation_sweep(A, "box", rep, [])
    assert rep.passed
    C = conucleus_image(A, "box")
    rng = random.Random(3)
    level2 = formulas_by_height(2)[2]
    for f in rng.sample(level2, 300):
        r = check_translation_equivalence(A, f)
        assert r.passed
        assert r.valid_in_image == is_valid(C, Equation.is_one(f))[0]


PAIRS = [(conucleus_image(A, "box"), A) for A in s4mv_algebras()[::9]]
POOL = formulas_by_height(1)[1]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(len(PAIRS))), st.sampled_from(POOL), st.sampled_from(POOL))
def test_matched_pair_consequence(k, psi, phi):
    C, A = PAIRS[k]
    plain = semantic_consequence([C], [Equation.is_one(psi)], Equation.is_one(phi))[0]
    boxed = semantic_consequence([A], [Equation.is_one(sx.translate_m(psi))],
                                 Equation.is_one(sx.translate_m(phi)))[0]
    assert plain == boxed


@pytest.mark.parametrize("A", s4tmv_algebras()[::16], ids=lambda A: A.name)
def test_matched_pair_consequence_tense(A):
    C = conucleus_image(A, "G")
    for psi, phi in itertools.islice(itertools.product(POOL, repeat=2), 0, None, 37):
        plain = semantic_consequence([C], [Equation.is_one(psi)], Equation.is_one(phi))[0]
        tense = semantic_consequence([A], [Equation.is_one(sx.translate_t(psi))],
                                     Equation.is_one(sx.translate_t(phi)))[0]
        assert plain == tense
