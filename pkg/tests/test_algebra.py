import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gblx.algebra import (
    FiniteAlgebra,
    algebra_from_json,
    algebra_to_json,
    check_residuated_lattice,
    classify,
    derive_residuum,
    direct_product,
    godel_chain,
    identity_modal,
    lambda_table,
    load_algebra,
    lukasiewicz_chain,
    same_tables,
    save_algebra,
    tense_diamonds,
    tense_identity_failures,
    trivial_algebra,
)
from gblx.corpus import all_algebras, modal_algebras, s4tmv_algebras
from gblx.errors import AlgebraError


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_lukasiewicz_tables_match_rational_oracle(n):
    A = lukasiewicz_chain(n)
    meet, join, mult, impl = oracles.luk_tables(n)
    assert A.meet.tolist() == meet
    assert A.join.tolist() == join
    assert A.mult.tolist() == mult
    assert A.impl.tolist() == impl
    assert A.carrier[0] == "0" and A.carrier[-1] == "1"


def test_lukasiewicz_examples(l3):
    half = l3.index("1/2")
    assert l3.mult[half, half] == 0
    assert l3.neg[half] == half
    assert lukasiewicz_chain(4).impl[2, 1] == 2
    with pytest.raises(AlgebraError):
        lukasiewicz_chain(1)


def test_derive_residuum(l3):
    impl = derive_residuum(l3.meet, l3.join, l3.mult, l3.zero, l3.one)
    assert impl[1, 0] == 1
    assert (impl == l3.impl).all()
    assert (impl[l3.one, :] == np.arange(3)).all()
    assert (impl[:, l3.one] == l3.one).all()


def test_derive_residuum_fails_without_maximum():
    # diamond 0 < a, b < 1 with every product of atoms 0: {x : x*a <= 0} = {0, a, b}
    meet = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]]
    join = [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]]
    mult = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 2], [0, 1, 2, 3]]
    with pytest.raises(AlgebraError):
        derive_residuum(meet, join, mult, 0, 3)


def test_rl_examples():
    assert check_residuated_lattice(lukasiewicz_chain(3)).is_rl
    assert check_residuated_lattice(trivial_algebra()).is_rl
    # 2-chain with mult := join and the Boolean implication
    t, i, leq = [[0, 1], [1, 1]], [[1, 1], [0, 1]], [[True, True], [False, True]]
    bad = FiniteAlgebra("bad", ["0", "1"], [[0, 0], [0, 1]], [[0, 1], [1, 1]], t, i, 0, 1)
    report = check_residuated_lattice(bad)
    assert not report.is_rl
    failing = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)
               if leq[t[x][y]][z] != leq[x][i[y][z]]]
    assert (1, 0, 0) in failing
    assert report.failures["residuation"] == min(failing) == (0, 1, 0)


def test_classify_examples(l3):
    r = classify(identity_modal(l3))
    assert r.is_mv and r.is_s4mv
    const = classify(l3.with_modals({"box": [2, 2, 2]}))
    assert not const.is_s4mv
    assert const.failures["box:preserves-zero"] == (0,)
    g = classify(godel_chain(3))
    assert g.is_gbl and g.is_bl and not g.is_mv
    assert g.failures["involution"] == (1,)


def test_classify_requires_tense_modals(l3):
    with pytest.raises(AlgebraError):
        classify(identity_modal(l3, "box"), tense=True)
    assert classify(identity_modal(l3, "G", "H"), tense=True).is_s4tmv


def test_direct_products(l2):
    B = direct_product([l2, l2])
    r = classify(B)
    assert B.n == 4 and r.is_mv
    assert not all(B.leq[x, y] or B.leq[y, x] for x in range(4) for y in range(4))
    assert same_tables(direct_product([l2]), l2)
    assert classify(direct_product([l2, lukasiewicz_chain(3)])).is_mv
    with pytest.raises(AlgebraError):
        direct_product([])


@pytest.mark.parametrize("A", list(all_algebras()[:40]) + list(modal_algebras()[:12]),
                         ids=lambda A: A.name)
def test_flags_agree_with_loop_oracle(A):
    r = classify(A)
    assert r.is_rl == oracles.rl_ok(A)
    assert r.is_gbl == (r.is_rl and oracles.divisible(A))
    assert r.is_bl == (r.is_gbl and oracles.prelinear(A))
    assert r.is_mv == (r.is_bl and oracles.involutive(A))
    for name, flags in r.modal.items():
        ok = flags["endomorphism"] and flags["interior"]
        assert ok == oracles.interior_endo(A, A.modals[name].tolist())


def test_class_implications_over_corpus():
    for A in all_algebras():
        r = classify(A)
        assert not r.is_mv or r.is_bl
        assert not r.is_bl or r.is_gbl
        assert not r.is_gbl or r.is_rl
        assert not r.is_s4mv or r.is_mv
        for name, flags in r.modal.items():
            if flags["endomorphism"]:
                box = A.modals[name]
                assert (~A.leq | A.leq[box[:, None], box[None, :]]).all()


def test_tense_identities_on_corpus():
    for A in s4tmv_algebras():
        assert classify(A, tense=True).is_s4tmv
        assert tense_identity_failures(A) == {}


def test_tense_identities_detects_broken_h(chain_product):
    A = chain_product.s4tmv
    broken = A.with_modals({"G": A.modals["G"], "H": A.modals["G"]})
    assert tense_identity_failures(broken)


def test_tense_diamonds(chain_product):
    A = chain_product.s4tmv
    P, F = tense_diamonds(A)
    assert (P == A.neg[A.modals["H"][A.neg]]).all()
    assert (F == A.neg[A.modals["G"][A.neg]]).all()
    with pytest.raises(AlgebraError):
        tense_diamonds(lukasiewicz_chain(3))


def test_lambda_table(chain_product):
    A = chain_product.s4mv
    assert (lambda_table(A) == A.modals["box"]).all()
    T = chain_product.s4tmv
    assert (lambda_table(T) == T.mult[T.modals["G"], T.modals["H"]]).all()


def test_json_round_trip(tmp_path, chain_product):
    A = chain_product.s4tmv
    path = tmp_path / "a.json"
    save_algebra(A, path)
    B = load_algebra(path)
    assert B == A and B.name == A.name
    save_algebra(B, tmp_path / "b.json")
    assert load_algebra(tmp_path / "b.json") == B
    data = algebra_to_json(A)
    del data["impl"]
    assert algebra_from_json(data) == A


@pytest.mark.parametrize("mutate, msg", [
    (lambda d: d.update(meet=[[0]]), "shape"),
    (lambda d: d.update(zero=7), "zero"),
    (lambda d: d["join"][0].__setitem__(0, 9), "range"),
    (lambda d: d.pop("mult"), "lacks"),
    (lambda d: d["modals"].update(box=[0, 5, 0]), "range"),
])
def test_malformed_files(l3, mutate, msg):
    data = json.loads(json.dumps(algebra_to_json(l3)))
    mutate(data)
    with pytest.raises(AlgebraError, match=msg):
        algebra_from_json(data)


def test_malformed_json_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(AlgebraError, match="malformed"):
        load_algebra(path)


def test_tables_are_read_only(l3):
    with pytest.raises(ValueError):
        l3.meet[0, 0] = 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 4), min_size=1, max_size=3))
def test_products_of_chains_are_mv(sizes):
    B = direct_product([lukasiewicz_chain(n) for n in sizes])
    assert B.n == int(np.prod(sizes))
    assert classify(B).is_mv
