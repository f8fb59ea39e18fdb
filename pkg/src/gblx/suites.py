"""Property sweeps over the built-in corpus.

Each suite returns a ``SuiteReport`` with counts and the first failure found.
Reports contain no timings, so repeated runs give identical output.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import corpus
from . import syntax as sx
from .algebra import (
    FiniteAlgebra,
    check_residuated_lattice,
    classify,
    modal_laws,
    tense_identity_failures,
)
from .derivations import bundled
from .errors import GblxError
from .filters import (
    check_cep,
    congruence_generated,
    congruence_to_filter,
    enumerate_congruences,
    enumerate_ifilters,
    filter_to_congruence,
    generate_filter,
    generate_filter_by_blocks,
    generated_subalgebra,
    lddt_witness,
    apply_word,
    partition_leq,
    star_table,
)
from .posetprod import ModalProduct, ac_labelings, check_conucleus, conucleus_image, fixpoints
from .proofs import (
    MODAL_SCHEMES,
    PRESET_NAMES,
    check_derivation,
    in_variety,
    preset,
    scheme_template,
    soundness_spotcheck,
)
from .semantics import Equation, check_translation_equivalence, is_valid

DEFAULT_SEED = 20240601
SUITE_NAMES = (
    "lemma-tmv-identities", "poset-product-lemma", "conucleus-gbl", "con-fi-iso",
    "cep", "lddt", "translation-M", "translation-T", "scheme-soundness",
)


class SuiteError(GblxError):
    """Unknown suite or unusable corpus."""


@dataclass
class SuiteReport:
    suite: str
    instances: int
    checked: int
    failures: int
    first_failure: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.failures == 0

    def fail(self, info):
        self.failures += 1
        if self.first_failure is None:
            self.first_failure = info

    def as_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "instances": self.instances,
            "checked": self.checked,
            "failures": self.failures,
            "first_failure": self.first_failure,
            **self.details,
        }


# ---------------------------------------------------------------- corpus handling

def _algebras(items):
    out = []
    for it in items:
        if isinstance(it, ModalProduct):
            out += [it.s4mv, it.s4tmv]
        else:
            out.append(it)
    return out


def _with_modals(items, names):
    return [A for A in _algebras(items) if set(A.modals) == set(names)]


def _require(items, what):
    if not items:
        raise SuiteError(f"the corpus has no {what}")
    return items


# ---------------------------------------------------------------- formula pools

def formulas_by_height(max_height, nvars=2):
    """Exhaustive pure formulas: level k holds every formula of height <= k."""
    atoms = [sx.Var(i) for i in range(1, nvars + 1)] + [sx.ZERO, sx.ONE]
    levels = [atoms]
    for _ in range(max_height):
        prev = levels[-1]
        levels.append(atoms + [K(a, b) for K in sx.BINARY_KINDS for a in prev for b in prev])
    return levels


def count_formulas(height, nvars=2):
    n = nvars + 2
    for _ in range(height):
        n = nvars + 2 + 4 * n * n
    return n


def random_formula(rng: random.Random, height, nvars=2):
    if height == 0 or rng.random() < 0.15:
        return rng.choice([sx.Var(i) for i in range(1, nvars + 1)] + [sx.ZERO, sx.ONE])
    K = rng.choice(sx.BINARY_KINDS)
    left = random_formula(rng, height - 1, nvars)
    right = random_formula(rng, rng.randrange(height), nvars)
    return K(left, right) if rng.random() < 0.5 else K(right, left)


def random_pool(seed=DEFAULT_SEED, count=200, max_height=5, nvars=2):
    rng = random.Random(seed)
    return [random_formula(rng, rng.randint(1, max_height), nvars) for _ in range(count)]


# ---------------------------------------------------------------- suites

def suite_lemma_tmv(items=None, **_):
    algebras = _require(_with_modals(items or corpus.s4tmv_algebras(), ["G", "H"]), "G/H algebras")
    rep = SuiteReport("lemma-tmv-identities", len(algebras), 0, 0)
    for A in algebras:
        if not classify(A, tense=True).is_s4tmv:
            rep.fail({"algebra": A.name, "reason": "not an S4tMV-algebra"})
            continue
        rep.checked += 8
        for family, witness in tense_identity_failures(A).items():
            rep.fail({"algebra": A.name, "family": family, "witness": list(witness)})
    return rep


def suite_poset_product_lemma(items=None, pair_cap=256, **_):
    products = [it for it in (items or corpus.poset_products()) if isinstance(it, ModalProduct)]
    _require(products, "poset products")
    rep = SuiteReport("poset-product-lemma", len(products), 0, 0)
    pairs_checked = 0
    for mp in products:
        lp = mp.labeled
        B = lp.product
        name = mp.s4mv.name
        for label, table in (("sigma", lp.sigma), ("~delta~", mp.s4tmv.modals["H"])):
            for group, law, bad in modal_laws(B, table):
                rep.checked += 1
                if group == "endomorphism" and bad.any():
                    w = tuple(int(v) for v in np.argwhere(bad)[0])
                    rep.fail({"algebra": name, "map": label, "law": law, "witness": list(w)})
        if B.n <= pair_cap:
            lhs = B.leq[:, lp.sigma]
            rhs = B.leq[lp.delta, :]
            pairs_checked += B.n * B.n
            rep.checked += 1
            if (lhs != rhs).any():
                f, g = (int(v) for v in np.argwhere(lhs != rhs)[0])
                rep.fail({"algebra": name, "law": "adjunction",
                          "witness": [lp.tuple_of(f), lp.tuple_of(g)]})
        rep.checked += 1
        image = frozenset(int(x) for x in set(lp.sigma.tolist()))
        if image != ac_labelings(lp):
            rep.fail({"algebra": name, "law": "image = ac-labelings",
                      "difference": sorted(image ^ ac_labelings(lp))})
    rep.details["adjunction_pairs"] = pairs_checked
    return rep


def suite_conucleus_gbl(items=None, **_):
    algebras = _algebras(items or corpus.modal_algebras())
    targets = [(A, m) for A in algebras for m in ("box", "G") if m in A.modals]
    _require(targets, "algebras with a box or G modal")
    rep = SuiteReport("conucleus-gbl", len(targets), 0, 0)
    for A, m in targets:
        bad = check_conucleus(A, m)
        if bad:
            rep.fail({"algebra": A.name, "modal": m, "not a conucleus": {k: list(v) for k, v in bad.items()}})
            continue
        C = conucleus_image(A, m)
        rep.checked += C.n * C.n
        report = classify(C)
        if not report.is_gbl:
            law, w = report.first_counterexample
            rep.fail({"algebra": A.name, "modal": m, "law": law,
                      "witness": [C.carrier[x] for x in w] if law == "divisibility" else list(w)})
    return rep


def suite_con_fi_iso(items=None, max_size=8, **_):
    pool = _algebras(items) if items else corpus.all_algebras()
    algebras = _require([A for A in pool if A.n <= max_size], f"algebras of size <= {max_size}")
    rep = SuiteReport("con-fi-iso", len(algebras), 0, 0)
    bijections = 0
    for A in algebras:
        filters = enumerate_ifilters(A)
        congs = enumerate_congruences(A)
        fset, cset = set(filters), set(congs)
        to_cong = {f: filter_to_congruence(A, f) for f in filters}
        to_filt = {t: congruence_to_filter(A, t) for t in congs}
        rep.checked += len(filters) + len(congs)
        problem = None
        if len(filters) != len(congs):
            problem = {"law": "equal counts", "filters": len(filters), "congruences": len(congs)}
        elif any(t not in cset for t in to_cong.values()):
            f = next(f for f, t in to_cong.items() if t not in cset)
            problem = {"law": "theta_f is enumerated", "filter": sorted(f)}
        elif any(f not in fset for f in to_filt.values()):
            t = next(t for t, f in to_filt.items() if f not in fset)
            problem = {"law": "1/theta is enumerated", "congruence": list(t)}
        elif any(to_filt[to_cong[f]] != f for f in filters):
            problem = {"law": "filter round trip"}
        elif any(to_cong[to_filt[t]] != t for t in congs):
            problem = {"law": "congruence round trip"}
        else:
            for f, g in itertools.product(filters, repeat=2):
                if (f <= g) != partition_leq(to_cong[f], to_cong[g]):
                    problem = {"law": "order", "filters": [sorted(f), sorted(g)]}
                    break
        if problem is None:
            star = star_table(A)
            for x, y in itertools.product(range(A.n), repeat=2):
                rep.checked += 1
                lhs = congruence_to_filter(A, congruence_generated(A, [(x, y)]))
                if lhs != generate_filter(A, [int(star[x, y])]):
                    problem = {"law": "f_Cg(x,y) = Fg(x*y)", "pair": [x, y]}
                    break
        if problem:
            rep.fail({"algebra": A.name, **problem})
        else:
            bijections += 1
    rep.details["bijections_verified"] = bijections
    return rep


def cep_pairs(items=None, max_sub=4, max_ambient=8, max_gens=2):
    """Deterministic (subalgebra, ambient, embedding) triples with modal tables."""
    pool = _algebras(items) if items else corpus.modal_algebras()
    out = []
    for B in pool:
        if not B.modals or B.n > max_ambient:
            continue
        seen = set()
        for k in range(max_gens + 1):
            for gens in itertools.combinations(range(B.n), k):
                A, emb = generated_subalgebra(B, gens)
                key = tuple(emb.tolist())
                if A.n <= max_sub and A.n < B.n and key not in seen:
                    seen.add(key)
                    out.append((A, B, emb))
    return out


def suite_cep(items=None, **_):
    pairs = _require(cep_pairs(items), "embedded pairs")
    rep = SuiteReport("cep", len(pairs), 0, 0)
    for A, B, emb in pairs:
        r = check_cep(A, B, emb)
        rep.checked += r.filters_checked
        if not r.passed:
            rep.fail({"subalgebra": A.name, "ambient": B.name, **r.witness})
    rep.details["pairs"] = len(pairs)
    return rep


def _subsets(n, k):
    for size in range(k + 1):
        yield from itertools.combinations(range(n), size)


def suite_lddt(items=None, max_size=6, **_):
    pool = _algebras(items) if items else corpus.modal_algebras()
    algebras = _require([A for A in pool if A.modals and A.n <= max_size], "small modal algebras")
    rep = SuiteReport("lddt", len(algebras), 0, 0)
    for A in algebras:
        # with one interior modal every block collapses to that letter
        single = list(A.modals) if len(A.modals) == 1 and classify(A).is_s4mv else None
        subsets = list(_subsets(A.n, 2))
        fg = {}
        for gamma in subsets:
            for delta in subsets:
                key = frozenset(gamma + delta)
                if key not in fg:
                    fg[key] = generate_filter_by_blocks(A, key)
        fg_gamma = {g: generate_filter(A, g) for g in subsets}
        for gamma, delta in itertools.product(subsets, repeat=2):
            member = fg[frozenset(gamma + delta)]
            for psi in range(A.n):
                rep.checked += 1
                res = lddt_witness(A, gamma, delta, psi)
                where = {"algebra": A.name, "gamma": list(gamma), "delta": list(delta), "psi": psi}
                if res.status == "inconclusive" or res.found != (psi in member):
                    rep.fail({**where, "status": res.status, "in_Fg": psi in member})
                    continue
                if res.found:
                    value = A.one
                    for word, d in zip(res.blocks, res.elements):
                        if d not in delta:
                            rep.fail({**where, "reason": f"element {d} not in delta"})
                        value = int(A.mult[value, apply_word(A, word, d)])
                    if int(A.impl[value, psi]) not in fg_gamma[gamma]:
                        rep.fail({**where, "reason": "witness does not verify"})
                    if single and any(w != single for w in res.blocks):
                        rep.fail({**where, "reason": "blocks are not the single modal", "blocks": res.blocks})
    return rep


def _translation_sweep(A: FiniteAlgebra, modal, rep, pool):
    """Batched literal check to height 2, table-level reduction at height 3, plus ``pool``."""
    box = A.modals[modal]
    C = conucleus_image(A, box)
    fix = fixpoints(box)
    pos = np.full(A.n, -1)
    pos[fix] = np.arange(len(fix))
    n, m = A.n, C.n
    h = np.indices((n, n)).reshape(2, -1)          # assignments into A
    g = np.indices((m, m)).reshape(2, -1)          # assignments into the image
    imp_t = box[A.impl]
    ops = [("&", C.meet, A.meet), ("|", C.join, A.join), ("*", C.mult, A.mult), ("->", C.impl, imp_t)]

    def atoms():
        out = []
        for k in range(2):
            out.append((pos[box[h[k]]], box[h[k]], g[k]))
        out.append((np.full(n * n, C.zero), np.full(n * n, A.zero), np.full(m * m, C.zero)))
        out.append((np.full(n * n, C.one), np.full(n * n, A.one), np.full(m * m, C.one)))
        return out

    atom_text = ["p1", "p2", "0", "1"]
    level1 = [(a, t) for a, t in zip(atoms(), atom_text)]
    for sym, ct, at in ops:
        for (x, tx), (y, ty) in itertools.product(level1[:4], repeat=2):
            level1.append(((ct[x[0], y[0]], at[x[1], y[1]], ct[x[2], y[2]]), f"({tx} {sym} {ty})"))
    U1 = np.stack([v[0] for v, _ in level1])
    W1 = np.stack([v[1] for v, _ in level1])
    G1 = np.stack([v[2] for v, _ in level1])
    texts = [t for _, t in level1]

    def check(U, W, G, describe):
        bad_point = (fix[U] != W).any(axis=1)
        bad_fixed = (box[W] != W).any(axis=1)
        bad_valid = (G == C.one).all(axis=1) != (W == A.one).all(axis=1)
        rep.checked += U.shape[0]
        for k in np.flatnonzero(bad_point | bad_fixed | bad_valid):
            rep.fail({"algebra": A.name, "formula": describe(int(k)),
                      "pointwise": not bad_point[k], "fixed": not bad_fixed[k],
                      "validity": not bad_valid[k]})

    check(U1, W1, G1, lambda k: texts[k])
    reach = np.zeros((n * n, m), dtype=bool)
    cols = np.arange(n * n)
    reach[cols[None, :].repeat(len(U1), 0), U1] = True
    for sym, ct, at in ops:
        for i in range(len(level1)):
            U = ct[U1[i][None, :], U1]
            W = at[W1[i][None, :], W1]
            G = ct[G1[i][None, :], G1]
            check(U, W, G, lambda k, i=i, sym=sym: f"({texts[i]} {sym} {texts[k]})")
            reach[cols[None, :].repeat(len(U), 0), U] = True

    # height 3: every operation applied to values reachable at a common assignment
    pairs = (reach.T.astype(np.int64) @ reach.astype(np.int64)) > 0
    a, b = np.nonzero(pairs)
    for sym, ct, at in ops:
        lhs = fix[ct[a, b]]
        rhs = at[fix[a], fix[b]]
        if (lhs != rhs).any() or (box[rhs] != rhs).any():
            k = int(np.flatnonzero((lhs != rhs) | (box[rhs] != rhs))[0])
            rep.fail({"algebra": A.name, "height": 3, "op": sym,
                      "values": [C.carrier[int(a[k])], C.carrier[int(b[k])]]})
    onto = len({(int(x), int(y)) for x, y in zip(pos[box[h[0]]], pos[box[h[1]]])}) == m * m
    if not onto:
        rep.fail({"algebra": A.name, "height": 3, "reason": "assignments do not cover the image"})
    rep.checked += count_formulas(3) - count_formulas(2)
    rep.details.setdefault("value_pairs_height3", 0)
    rep.details["value_pairs_height3"] += int(pairs.sum())

    mode = "M" if modal == "box" else "T"
    for f in pool:
        r = check_translation_equivalence(A, f, mode)
        rep.checked += 1
        if not r.passed:
            rep.fail({"algebra": A.name, "formula": r.formula, "witness": r.witness})


def _suite_translation(name, modal, default, items, seed):
    pool = random_pool(seed)
    names = ["box"] if modal == "box" else ["G", "H"]
    algebras = _with_modals(items or default(), names)
    algebras = _require([A for A in algebras if classify(A, tense=(modal == "G")).is_s4mv and
                         (modal == "box" or classify(A, tense=True).is_s4tmv)],
                        "S4MV algebras" if modal == "box" else "S4tMV algebras")
    rep = SuiteReport(name, len(algebras), 0, 0)
    for A in algebras:
        _translation_sweep(A, modal, rep, pool)
    rep.details.update({
        "formulas_per_algebra": count_formulas(3) + len(pool),
        "literal_per_algebra": count_formulas(2) + len(pool),
        "seed": seed,
    })
    return rep


def suite_translation_m(items=None, seed=DEFAULT_SEED, **_):
    return _suite_translation("translation-M", "box", corpus.s4mv_algebras, items, seed)


def suite_translation_t(items=None, seed=DEFAULT_SEED, **_):
    return _suite_translation("translation-T", "G", corpus.s4tmv_algebras, items, seed)


def _algebras_for(logic, pool):
    sig = list(logic.signature)
    exact = [A for A in pool if set(A.modals) == set(sig)]
    if exact or not sig:
        return exact
    # relabel single-box algebras so every modal of the signature is the box
    return [A.with_modals({k: A.modals["box"] for k in sig}, f"{A.name}/{'+'.join(sig)}")
            for A in pool if set(A.modals) == {"box"}]


def suite_scheme_soundness(items=None, **_):
    pool = _algebras(items) if items else corpus.all_algebras()
    _require(pool, "algebras")
    rep = SuiteReport("scheme-soundness", 0, 0, 0)
    per_preset = {}
    for name in PRESET_NAMES:
        logic = preset(name)
        algebras = [A for A in _algebras_for(logic, pool) if in_variety(A, logic)]
        per_preset[name] = len(algebras)
        rep.instances += len(algebras)
        for scheme in sorted(logic.schemes):
            mods = list(logic.signature) if scheme in MODAL_SCHEMES else [None]
            for mod in mods:
                eq = Equation.is_one(scheme_template(scheme, mod))
                for A in algebras:
                    rep.checked += 1
                    ok, w = is_valid(A, eq)
                    if not ok:
                        rep.fail({"preset": name, "scheme": scheme, "modal": mod, "algebra": A.name,
                                  "assignment": {f"p{v}": A.carrier[x] for v, x in w.items()}})
    labelled = 0
    for fname, d, expect in bundled():
        r = check_derivation(d)
        labelled += 1
        rep.checked += 1
        if r.valid != expect["valid"] or r.bad_step != expect["bad_step"]:
            rep.fail({"derivation": fname, "valid": r.valid, "bad_step": r.bad_step, "expect": expect})
        elif r.valid:
            small = [A for A in _algebras_for(d.logic, pool) if A.n <= 9 and in_variety(A, d.logic)]
            if small:
                s = soundness_spotcheck(d, d.logic, small)
                if not s.holds:
                    rep.fail({"derivation": fname, "soundness": s.witness})
    rep.details.update({"algebras_per_preset": per_preset, "derivations": labelled})
    return rep


def suite_algebra_laws(items=None, **_):
    pool = _require(_algebras(items) if items else corpus.all_algebras(), "algebras")
    rep = SuiteReport("algebra-laws", len(pool), 0, 0)
    for A in pool:
        rep.checked += A.n ** 3
        r = check_residuated_lattice(A)
        if not r.is_rl:
            law, w = r.first_counterexample
            rep.fail({"algebra": A.name, "law": law, "witness": list(w)})
    return rep


SUITES = {
    "lemma-tmv-identities": suite_lemma_tmv,
    "poset-product-lemma": suite_poset_product_lemma,
    "conucleus-gbl": suite_conucleus_gbl,
    "con-fi-iso": suite_con_fi_iso,
    "cep": suite_cep,
    "lddt": suite_lddt,
    "translation-M": suite_translation_m,
    "translation-T": suite_translation_t,
    "scheme-soundness": suite_scheme_soundness,
    "algebra-laws": suite_algebra_laws,
}


def run_suite(name, items=None, seed=DEFAULT_SEED) -> SuiteReport:
    """Run a named suite; ``items`` overrides the built-in corpus (must be nonempty)."""
    if name not in SUITES:
        raise SuiteError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    if items is not None and len(items) == 0:
        raise SuiteError("the corpus override is empty")
    return SUITES[name](items=items, seed=seed)
