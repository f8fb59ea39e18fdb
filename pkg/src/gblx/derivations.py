"""A small derivation builder and the bundled corpus of checked derivations.

Run ``python -m gblx.derivations`` to regenerate the JSON files under
``gblx/data/derivations``.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from . import syntax as sx
from .proofs import (
    Derivation,
    Step,
    derivation_from_json,
    derivation_to_json,
    instantiate,
    preset,
)


class Builder:
    """Append steps and get back their 1-based step numbers."""

    def __init__(self, logic, premises=(), name=""):
        self.logic = logic
        sig = logic.signature
        self.premises = [sx.parse(p, sig) if isinstance(p, str) else p for p in premises]
        self.steps = []
        self.name = name

    def _f(self, x):
        return sx.parse(x, self.logic.signature) if isinstance(x, str) else x

    def formula(self, k):
        return self.steps[k - 1].formula

    def _add(self, step):
        self.steps.append(step)
        return len(self.steps)

    def premise(self, i):
        return self._add(Step(self.premises[i - 1], "Premise", (i,)))

    def axiom(self, scheme, modal=None, phi=None, psi=None, chi=None, show_subst=False):
        subst = {k: self._f(v) for k, v in ((1, phi), (2, psi), (3, chi)) if v is not None}
        f = instantiate(scheme, subst, modal)
        return self._add(Step(f, "Axiom", (), scheme, modal, subst if show_subst else None))

    def mp(self, i, j):
        major = self.formula(j)
        if not (isinstance(major, sx.Imp) and major.left == self.formula(i)):
            raise ValueError(f"MP {i} {j} does not apply")
        return self._add(Step(major.right, "MP", (i, j)))

    def nec(self, i, modal):
        return self._add(Step(sx.Modal(modal, self.formula(i)), "Nec", (i,), modal=modal))

    def build(self):
        return Derivation(list(self.premises), list(self.steps), self.logic, self.name)

    # derived patterns; each takes and returns step numbers

    def syllogism(self, i, j):
        """From a->b and b->c infer a->c."""
        a, b = self.formula(i).left, self.formula(i).right
        c = self.formula(j).right
        k = self.axiom("A2", phi=a, psi=b, chi=c)
        return self.mp(j, self.mp(i, k))

    def and_left_imp(self, a, b):
        """Prove (a & b) -> a."""
        a, b = self._f(a), self._f(b)
        s8 = self.axiom("A8", phi=a, psi=b)
        s3 = self.axiom("A3", phi=a, psi=sx.Imp(a, b))
        s4 = self.axiom("A4", phi=sx.Imp(a, b), psi=a)
        return self.syllogism(self.syllogism(s8, s3), s4)

    def and_left(self, i):
        f = self.formula(i)
        return self.mp(i, self.and_left_imp(f.left, f.right))

    def and_right(self, i):
        f = self.formula(i)
        swap = self.axiom("A9", phi=f.left, psi=f.right)
        return self.mp(i, self.syllogism(swap, self.and_left_imp(f.right, f.left)))

    def weaken(self, j, a):
        """From b infer a -> b."""
        a, b = self._f(a), self.formula(j)
        s3 = self.axiom("A3", phi=b, psi=a)
        s4 = self.axiom("A4", phi=a, psi=b)
        s6 = self.axiom("A6", phi=b, psi=a, chi=b)
        curry = self.mp(self.syllogism(s3, s4), s6)
        return self.mp(j, curry)

    def pair(self, i, j):
        """From a and b infer a * b."""
        a, b = self.formula(i), self.formula(j)
        s1 = self.axiom("A1", phi=sx.Fuse(a, b))
        s6 = self.axiom("A6", phi=a, psi=b, chi=sx.Fuse(a, b))
        return self.mp(j, self.mp(i, self.mp(s1, s6)))

    def and_intro(self, i, j):
        """From a and b infer a & b."""
        a, b = self.formula(i), self.formula(j)
        s7 = self.axiom("A7", phi=a, psi=b)
        return self.mp(self.pair(i, self.weaken(j, a)), s7)


# ---------------------------------------------------------------- valid corpus

def box_congruence(modal="box"):
    """p1 <-> p2 derives (box p1) <-> (box p2)."""
    b = Builder(preset("L(I)", [modal]), [sx.iff(sx.Var(1), sx.Var(2))], f"{modal}-congruence")
    s = b.premise(1)
    halves = []
    for side in (b.and_left, b.and_right):
        imp = side(s)
        k = b.axiom("K", modal, phi=b.formula(imp).left, psi=b.formula(imp).right)
        halves.append(b.mp(b.nec(imp, modal), k))
    b.and_intro(*halves)
    return b.build()


def gbl_syllogism():
    b = Builder(preset("GBL"), ["p1 -> p2", "p2 -> p3"], "gbl-syllogism")
    b.syllogism(b.premise(1), b.premise(2))
    return b.build()


def gbl_and_swap():
    b = Builder(preset("GBL"), ["p1 & p2"], "gbl-and-swap")
    s = b.premise(1)
    b.and_intro(b.and_right(s), b.and_left(s))
    return b.build()


def bl_prelinearity():
    b = Builder(preset("BL"), [], "bl-prelinearity")
    b.and_intro(b.axiom("A14", phi="p1", psi="p2"), b.axiom("A1", phi="p1"))
    return b.build()


def l_double_negation():
    b = Builder(preset("L"), ["p1"], "l-double-negation")
    b.mp(b.premise(1), b.and_right(b.axiom("A15", phi="p1", show_subst=True)))
    return b.build()


def l_two_modals():
    b = Builder(preset("L(I)", ["a", "b"]), ["p1"], "l-two-modals")
    b.nec(b.nec(b.premise(1), "b"), "a")
    b.and_left(b.axiom("P", "a", phi="p1", psi="p2"))
    b.and_right(b.axiom("One", "b"))
    return b.build()


def s4li_reflexive():
    b = Builder(preset("S4L(I)", ["a", "b"]), ["p1"], "s4li-four")
    s = b.nec(b.premise(1), "a")
    b.mp(s, b.axiom("Four", "a", phi="p1"))
    b.mp(s, b.axiom("T", "a", phi="p1"))
    return b.build()


def s4l_triple_box():
    b = Builder(preset("S4L"), [], "s4l-triple-box")
    one = b.axiom("Four", "box", phi="p1")
    two = b.axiom("Four", "box", phi="box p1")
    b.syllogism(one, two)
    return b.build()


def s4tl_gp():
    b = Builder(preset("S4tL"), ["p1"], "s4tl-gp")
    s = b.premise(1)
    b.mp(s, b.axiom("GP", phi="p1"))
    b.mp(s, b.axiom("HF", phi="p1"))
    return b.build()


# ---------------------------------------------------------------- broken corpus

def _raw(logic, premises, steps, name, modals=None):
    data = {"name": name, "logic": logic}
    if modals:
        data["modals"] = modals
    data["premises"] = premises
    data["steps"] = [dict(zip(("formula", "by", "subst"), s)) for s in steps]
    return data


def broken_corpus():
    """(json, first bad step) pairs; each has exactly one defect."""
    cong = derivation_to_json(box_congruence())
    # replace Nec on the left half by Nec of the premise
    corrupt = json.loads(json.dumps(cong))
    k = next(i for i, s in enumerate(corrupt["steps"]) if s["by"].startswith("Nec"))
    corrupt["steps"][k]["by"] = "Nec 1 box"
    corrupt["name"] = "broken-congruence-nec"
    return [
        (_raw("L(I)", ["p1"], [("p1", "Premise 1"), ("p1 -> box p1", "A1")],
              "broken-box-by-a1", ["box"]), 2),
        (_raw("GBL", [], [("(p1 -> p2) | (p2 -> p1)", "A14")], "broken-gbl-prelinearity"), 1),
        (_raw("BL", [], [("~~p1 <-> p1", "A15")], "broken-bl-involution"), 1),
        (_raw("GBL", [], [("p1 -> p1", "A1"), ("0 -> p2", "A13"), ("p2", "MP 1 2")],
              "broken-mp-mismatch"), 3),
        (_raw("GBL", [], [("p1 -> p1", "MP 2 3"), ("p1", "A1"), ("p1 -> p1", "A1")],
              "broken-forward-reference"), 1),
        (_raw("GBL", ["p1"], [("p2", "Premise 1")], "broken-premise"), 1),
        (_raw("S4tL", ["p1"], [("p1", "Premise 1"), ("H p1", "Nec 1 G")],
              "broken-nec-modal"), 2),
        (_raw("L(I)", [], [("box p1 -> p1", "T")], "broken-t-in-li", ["box"]), 1),
        (_raw("S4L(I)", [], [("p1 -> G ~H~ p1", "GP")], "broken-gp-in-s4li", ["G", "H"]), 1),
        (_raw("GBL", [], [("(p1 * p2) -> p1", "A4")], "broken-a4-left"), 1),
        (_raw("GBL", [], [("p1 -> p1", "A1", {"phi": "p2"})], "broken-substitution"), 1),
        (corrupt, k + 1),
    ]


def valid_corpus():
    return [
        gbl_syllogism(), gbl_and_swap(), bl_prelinearity(), l_double_negation(),
        box_congruence(), box_congruence("G"), l_two_modals(), s4li_reflexive(),
        s4l_triple_box(), s4tl_gp(),
    ]


def corpus_files():
    """{file name: JSON document with an "expect" entry}."""
    out = {}
    for d in valid_corpus():
        data = derivation_to_json(d)
        data["expect"] = {"valid": True, "bad_step": None}
        out[f"valid-{d.name}.json"] = data
    for data, bad in broken_corpus():
        data = dict(data)
        data["expect"] = {"valid": False, "bad_step": bad}
        out[f"{data['name']}.json"] = data
    return out


def bundled():
    """Load the shipped corpus as (file name, Derivation, expect) triples."""
    root = resources.files("gblx") / "data" / "derivations"
    out = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            data = json.loads(entry.read_text())
            out.append((entry.name, derivation_from_json(data), data["expect"]))
    return out


def write_corpus(directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, data in corpus_files().items():
        (directory / name).write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    write_corpus(Path(__file__).parent / "data" / "derivations")
