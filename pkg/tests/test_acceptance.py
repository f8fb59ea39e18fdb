"""Acceptance criteria, one check each, with wall-clock limits.

Run with ``pytest tests/test_acceptance.py -s`` (or as a script) to see one
PASS/FAIL line per criterion.
"""
import sys
import time

import pytest

from gblx import corpus
from gblx.algebra import classify, godel_chain, lukasiewicz_chain, same_tables
from gblx.derivations import bundled
from gblx.filters import enumerate_congruences
from gblx.posetprod import FinitePoset, ac_labelings, build_modal_product, conucleus_image
from gblx.proofs import PRESET_NAMES, check_derivation
from gblx.suites import cep_pairs, count_formulas, run_suite


def suite_check(name, **expect):
    def check():
        rep = run_suite(name)
        extra = [f"{k}={rep.details.get(k, getattr(rep, k, None))}" for k in expect]
        ok = rep.passed and all(
            (rep.details.get(k, getattr(rep, k, None)) or 0) >= v for k, v in expect.items())
        return ok, " ".join([f"instances={rep.instances} checked={rep.checked} failures={rep.failures}", *extra])
    return check


def algebra_laws():
    rep = run_suite("algebra-laws")
    return rep.passed and rep.instances == len(corpus.all_algebras()), \
        f"algebras={rep.instances} failures={rep.failures}"


def con_fi():
    rep = run_suite("con-fi-iso")
    ok = rep.passed and rep.details["bijections_verified"] == rep.instances
    return ok, f"algebras={rep.instances} bijections={rep.details['bijections_verified']} failures={rep.failures}"


def cep():
    rep = run_suite("cep")
    return rep.passed and rep.instances >= 50 and len(cep_pairs()) >= 50, \
        f"pairs={rep.instances} failures={rep.failures}"


def translation(name):
    def check():
        rep = run_suite(name)
        per = count_formulas(3) + 200
        ok = (rep.passed and rep.details["formulas_per_algebra"] == per
              and rep.checked >= rep.instances * per)
        return ok, f"algebras={rep.instances} pairs={rep.checked} failures={rep.failures}"
    return check


def proofs():
    items = bundled()
    valid = [d for _, d, e in items if e["valid"]]
    broken = [n for n, _, e in items if not e["valid"]]
    wrong = [n for n, d, e in items
             if (lambda r: (r.valid, r.bad_step))(check_derivation(d)) != (e["valid"], e["bad_step"])]
    presets = {d.logic.name for d in valid}
    has_congruence = "valid-box-congruence.json" in {n for n, _, e in items if e["valid"]}
    rep = run_suite("scheme-soundness")
    ok = (not wrong and presets == set(PRESET_NAMES) and has_congruence
          and len(broken) >= 10 and rep.passed)
    return ok, (f"derivations={len(items)} broken={len(broken)} mislabelled={len(wrong)} "
                f"soundness_failures={rep.failures}")


def small_facts():
    L2 = lukasiewicz_chain(2)
    mp = build_modal_product(FinitePoset.chain(2), [L2, L2])
    labelings = len(ac_labelings(mp.labeled))
    C = conucleus_image(mp.s4mv, "box")
    r = classify(C)
    goedel = C.n == 3 and bool((C.mult == C.meet).all()) and not r.is_mv and same_tables(C, godel_chain(3))
    congs = len(enumerate_congruences(lukasiewicz_chain(3)))
    return labelings == 3 and goedel and congs == 2, \
        f"ac_labelings={labelings} image_is_G3={goedel} MV={r.is_mv} L3_congruences={congs}"


CRITERIA = [
    (1, "algebra laws", 10, algebra_laws),
    (2, "lemma-tmv-identities", 10, suite_check("lemma-tmv-identities")),
    (3, "poset-product-lemma", 60, suite_check("poset-product-lemma")),
    (4, "conucleus-gbl", 10, suite_check("conucleus-gbl")),
    (5, "con-fi-iso", 60, con_fi),
    (6, "cep", 60, cep),
    (7, "lddt", 120, suite_check("lddt")),
    (8, "translation-M and translation-T", 120, None),
    (9, "proof checking", 30, proofs),
    (10, "known small facts", 60, small_facts),
]


def run_criterion(number, title, limit, check):
    if number == 8:
        t0 = time.perf_counter()
        ok_m, msg_m = translation("translation-M")()
        t_m = time.perf_counter() - t0
        t0 = time.perf_counter()
        ok_t, msg_t = translation("translation-T")()
        t_t = time.perf_counter() - t0
        ok = ok_m and ok_t and t_m < limit and t_t < limit
        detail = f"M: {msg_m} ({t_m:.1f}s); T: {msg_t} ({t_t:.1f}s); limit {limit}s each"
    else:
        t0 = time.perf_counter()
        ok, detail = check()
        elapsed = time.perf_counter() - t0
        ok = ok and elapsed < limit
        detail = f"{detail} ({elapsed:.1f}s, limit {limit}s)"
    line = f"criterion {number:>2} {title}: {'PASS' if ok else 'FAIL'} {detail}"
    return ok, line


@pytest.mark.parametrize("number, title, limit, check", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(number, title, limit, check, capsys):
    ok, line = run_criterion(number, title, limit, check)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
