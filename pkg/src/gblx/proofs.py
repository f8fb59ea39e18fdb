"""Hilbert-style derivation checking for GBL, BL, L and their modal expansions.

Axiom schemes are stored as formulas in which p1, p2, p3 play the roles of the
metavariables phi, psi, chi and the modal ``box`` stands for the scheme's
modal parameter.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from . import syntax as sx
from .algebra import FiniteAlgebra, classify
from .errors import AlgebraError, DerivationError, FormulaSyntaxError
from .semantics import Equation, semantic_consequence

METAVARS = {1: "phi", 2: "psi", 3: "chi"}
METAVAR_INDEX = {v: k for k, v in METAVARS.items()}

_SCHEME_TEXT = {
    "A1": "p1 -> p1",
    "A2": "(p1 -> p2) -> ((p2 -> p3) -> (p1 -> p3))",
    "A3": "(p1 * p2) -> (p2 * p1)",
    "A4": "(p1 * p2) -> p2",
    "A5": "(p1 -> (p2 -> p3)) -> ((p1 * p2) -> p3)",
    "A6": "((p1 * p2) -> p3) -> (p1 -> (p2 -> p3))",
    "A7": "(p1 * (p1 -> p2)) -> (p1 & p2)",
    "A8": "(p1 & p2) -> (p1 * (p1 -> p2))",
    "A9": "(p1 & p2) -> (p2 & p1)",
    "A10": "p1 -> (p1 | p2)",
    "A11": "p2 -> (p1 | p2)",
    "A12": "((p1 -> p2) & (p3 -> p2)) -> ((p1 | p3) -> p2)",
    "A13": "0 -> p1",
    "A14": "(p1 -> p2) | (p2 -> p1)",
    "A15": "~~p1 <-> p1",
    "K": "box (p1 -> p2) -> (box p1 -> box p2)",
    "P": "box (p1 * p2) <-> (box p1 * box p2)",
    "M": "box (p1 & p2) <-> (box p1 & box p2)",
    "One": "box 1 <-> 1",
    "Zero": "box 0 <-> 0",
    "T": "box p1 -> p1",
    "Four": "box p1 -> box box p1",
    "GP": "p1 -> G ~H~ p1",
    "HF": "p1 -> H ~G~ p1",
}
MODAL_SCHEMES = ("K", "P", "M", "One", "Zero", "T", "Four")
SCHEMES = {
    name: sx.parse(text, ["box", "G", "H"]) for name, text in _SCHEME_TEXT.items()
}
BASE_SCHEMES = tuple(f"A{i}" for i in range(1, 16))


def scheme_template(name: str, modal: Optional[str] = None) -> sx.Formula:
    if name not in SCHEMES:
        raise DerivationError(f"unknown axiom scheme {name!r}")
    if name in MODAL_SCHEMES:
        if modal is None:
            raise DerivationError(f"scheme {name} needs a modal parameter")
        return sx.relabel(SCHEMES[name], {"box": modal})
    return SCHEMES[name]


def instantiate(name: str, subst: dict, modal: Optional[str] = None) -> sx.Formula:
    """Replace phi, psi, chi (keys 1, 2, 3) in a scheme."""
    return sx.substitute(scheme_template(name, modal), subst)


# ---------------------------------------------------------------- presets

PRESET_NAMES = ("GBL", "BL", "L", "L(I)", "S4L(I)", "S4L", "S4tL")


@dataclass(frozen=True)
class LogicPreset:
    name: str
    signature: sx.ModalSignature
    schemes: frozenset
    rules: frozenset

    def allows(self, scheme, modal=None) -> bool:
        if scheme not in self.schemes:
            return False
        if scheme in MODAL_SCHEMES:
            return modal in self.signature
        return True

    def variety(self) -> str:
        return {
            "GBL": "GBL", "BL": "BL", "L": "MV", "L(I)": "MV(I)",
            "S4L(I)": "S4MV(I)", "S4L": "S4MV", "S4tL": "S4tMV",
        }[self.name]


def preset(name: str, modals=None) -> LogicPreset:
    """Look up a logic; ``modals`` sets I for L(I) and S4L(I) (default ["box"])."""
    gbl = frozenset(f"A{i}" for i in range(1, 14))
    mp = frozenset({"MP"})
    if name == "GBL":
        return LogicPreset(name, sx.PLAIN, gbl, mp)
    if name == "BL":
        return LogicPreset(name, sx.PLAIN, gbl | {"A14"}, mp)
    if name == "L":
        return LogicPreset(name, sx.PLAIN, gbl | {"A14", "A15"}, mp)
    full = frozenset(BASE_SCHEMES) | {"K", "P", "M", "One", "Zero"}
    rules = frozenset({"MP", "Nec"})
    if name == "L(I)":
        return LogicPreset(name, sx.as_signature(modals or ["box"]), full, rules)
    if name == "S4L(I)":
        return LogicPreset(name, sx.as_signature(modals or ["box"]), full | {"T", "Four"}, rules)
    if name == "S4L":
        return LogicPreset(name, sx.MONO, full | {"T", "Four"}, rules)
    if name == "S4tL":
        return LogicPreset(name, sx.TENSE, full | {"T", "Four", "GP", "HF"}, rules)
    raise DerivationError(f"unknown logic {name!r}; expected one of {PRESET_NAMES}")


def in_variety(A: FiniteAlgebra, logic: LogicPreset) -> bool:
    """Whether A lies in the equivalent algebraic semantics of ``logic``."""
    if set(A.modals) != set(logic.signature):
        return False
    rep = classify(A)
    v = logic.variety()
    if v == "GBL":
        return bool(rep.is_gbl)
    if v == "BL":
        return bool(rep.is_bl)
    if v == "MV":
        return bool(rep.is_mv)
    if v == "MV(I)":
        return bool(rep.is_mv) and all(m["endomorphism"] for m in rep.modal.values())
    if v in ("S4MV(I)", "S4MV"):
        return bool(rep.is_s4mv)
    return bool(rep.is_s4tmv)


# ---------------------------------------------------------------- matching

def _match(pattern: sx.Formula, f: sx.Formula, subst: dict) -> bool:
    if isinstance(pattern, sx.Var):
        bound = subst.get(pattern.index)
        if bound is None:
            subst[pattern.index] = f
            return True
        return bound == f
    if type(pattern) is not type(f):
        return False
    if isinstance(pattern, sx.Binary):
        return _match(pattern.left, f.left, subst) and _match(pattern.right, f.right, subst)
    if isinstance(pattern, sx.Modal):
        return pattern.name == f.name and _match(pattern.sub, f.sub, subst)
    return True


def match_axiom(f: sx.Formula, scheme: str, modal: Optional[str] = None) -> Optional[dict]:
    """The metavariable substitution making ``scheme`` equal to f, or None."""
    subst = {}
    if _match(scheme_template(scheme, modal), f, subst):
        return subst
    return None


# ---------------------------------------------------------------- derivations

@dataclass(frozen=True)
class Step:
    formula: sx.Formula
    rule: str                  # "Premise", "Axiom", "MP" or "Nec"
    refs: tuple = ()           # 1-based: premise number, or step numbers
    scheme: Optional[str] = None
    modal: Optional[str] = None
    subst: Optional[dict] = field(default=None, compare=False)


@dataclass
class Derivation:
    premises: list
    steps: list
    logic: Optional[LogicPreset] = None
    name: str = ""

    @property
    def conclusion(self):
        return self.steps[-1].formula if self.steps else None


@dataclass
class DerivationReport:
    valid: bool
    bad_step: Optional[int] = None
    reason: str = ""


def _check_refs(d: Derivation):
    for k, step in enumerate(d.steps, 1):
        limit = len(d.premises) if step.rule == "Premise" else len(d.steps)
        for r in step.refs:
            if not 1 <= r <= limit:
                raise DerivationError(f"step {k}: reference {r} out of range 1..{limit}")


def _step_problem(d: Derivation, logic: LogicPreset, k: int, step: Step) -> Optional[str]:
    extra = sx.modal_names(step.formula) - set(logic.signature)
    if extra:
        return f"modal(s) {sorted(extra)} outside the signature of {logic.name}"
    earlier = [r for r in step.refs if r >= k]
    if step.rule != "Premise" and earlier:
        return f"refers to step {earlier[0]}, which is not earlier"
    if step.rule == "Premise":
        (i,) = step.refs
        if d.premises[i - 1] != step.formula:
            return f"is not premise {i}"
        return None
    if step.rule == "Axiom":
        scheme = step.scheme
        modals = [step.modal] if step.modal or scheme not in MODAL_SCHEMES else list(logic.signature)
        if scheme not in SCHEMES:
            return f"unknown scheme {scheme}"
        for m in modals:
            if not logic.allows(scheme, m):
                continue
            sub = match_axiom(step.formula, scheme, m)
            if sub is None:
                continue
            if step.subst is not None:
                given = dict(step.subst)
                if any(sub.get(v) != given.get(v) for v in set(sub) | set(given)):
                    return f"substitution does not instantiate {scheme} to this formula"
            return None
        if not any(logic.allows(scheme, m) for m in modals):
            return f"scheme {scheme}{' ' + step.modal if step.modal else ''} is not available in {logic.name}"
        return f"is not an instance of {scheme}"
    if step.rule == "MP":
        if "MP" not in logic.rules:
            return "modus ponens is not a rule of this logic"
        i, j = step.refs
        minor, major = d.steps[i - 1].formula, d.steps[j - 1].formula
        if major != sx.Imp(minor, step.formula):
            return f"step {j} is not (step {i} -> this formula)"
        return None
    if step.rule == "Nec":
        if "Nec" not in logic.rules:
            return "necessitation is not a rule of this logic"
        (i,) = step.refs
        modal = step.modal
        if modal is None and len(logic.signature) == 1:
            modal = logic.signature.names[0]
        if modal not in logic.signature:
            return f"necessitation for unknown modal {modal!r}"
        if step.formula != sx.Modal(modal, d.steps[i - 1].formula):
            return f"is not {modal} applied to step {i}"
        return None
    return f"unknown rule {step.rule!r}"


def check_derivation(d: Derivation, logic: Optional[LogicPreset] = None) -> DerivationReport:
    """Verify every step; the report names the first bad one (1-based)."""
    logic = logic or d.logic
    if logic is None:
        raise DerivationError("no logic given for the derivation")
    _check_refs(d)
    for k, f in enumerate(d.premises, 1):
        extra = sx.modal_names(f) - set(logic.signature)
        if extra:
            return DerivationReport(False, None, f"premise {k} uses modal(s) {sorted(extra)}")
    if not d.steps:
        return DerivationReport(False, None, "derivation has no steps")
    for k, step in enumerate(d.steps, 1):
        problem = _step_problem(d, logic, k, step)
        if problem:
            return DerivationReport(False, k, f"step {k} {problem}")
    return DerivationReport(True)


@dataclass
class SoundnessReport:
    holds: bool
    algebras: int
    steps_checked: int
    witness: Optional[dict] = None


def soundness_spotcheck(d: Derivation, logic: Optional[LogicPreset], algebras) -> SoundnessReport:
    """Check {premise = 1} |= step = 1 over the given algebras, for every step."""
    logic = logic or d.logic
    report = check_derivation(d, logic)
    if not report.valid:
        raise DerivationError(f"derivation is not valid: {report.reason}")
    for A in algebras:
        if not in_variety(A, logic):
            raise AlgebraError(f"{A.name} is not in the variety {logic.variety()} of {logic.name}")
    premises = [Equation.is_one(p) for p in d.premises]
    for k, step in enumerate(d.steps, 1):
        ok, witness = semantic_consequence(algebras, premises, Equation.is_one(step.formula))
        if not ok:
            A, h = witness
            return SoundnessReport(False, len(algebras), k, {
                "step": k, "algebra": A.name,
                "assignment": {f"p{v}": A.carrier[x] for v, x in h.items()},
            })
    return SoundnessReport(True, len(algebras), len(d.steps))


# ---------------------------------------------------------------- files

_BY = re.compile(r"^\s*(\w+)((?:\s+\S+)*)\s*$")


def parse_justification(by: str):
    """'A1', 'K G', 'MP 3 5', 'Nec 2 G', 'Premise 1' -> (rule, refs, scheme, modal)."""
    m = _BY.match(by or "")
    if not m:
        raise DerivationError(f"cannot read justification {by!r}")
    head, rest = m.group(1), m.group(2).split()
    try:
        if head == "Premise":
            (i,) = rest
            return "Premise", (int(i),), None, None
        if head == "MP":
            i, j = rest
            return "MP", (int(i), int(j)), None, None
        if head == "Nec":
            if len(rest) == 1:
                return "Nec", (int(rest[0]),), None, None
            i, modal = rest
            return "Nec", (int(i),), None, modal
    except ValueError:
        raise DerivationError(f"cannot read justification {by!r}") from None
    if head in SCHEMES and len(rest) <= 1:
        return "Axiom", (), head, (rest[0] if rest else None)
    raise DerivationError(f"cannot read justification {by!r}")


def format_justification(step: Step) -> str:
    if step.rule == "Axiom":
        return step.scheme + (f" {step.modal}" if step.modal else "")
    parts = [step.rule, *map(str, step.refs)]
    if step.rule == "Nec" and step.modal:
        parts.append(step.modal)
    return " ".join(parts)


def derivation_from_json(data: dict) -> Derivation:
    if not isinstance(data, dict) or "logic" not in data or "steps" not in data:
        raise DerivationError("derivation file needs 'logic' and 'steps'")
    logic = preset(data["logic"], data.get("modals"))
    sig = logic.signature
    try:
        premises = [sx.parse(p, sig) for p in data.get("premises", [])]
        steps = []
        for k, raw in enumerate(data["steps"], 1):
            rule, refs, scheme, modal = parse_justification(raw.get("by", ""))
            subst = None
            if raw.get("subst") is not None:
                subst = {}
                for key, text in raw["subst"].items():
                    if key not in METAVAR_INDEX:
                        raise DerivationError(f"step {k}: unknown metavariable {key!r}")
                    subst[METAVAR_INDEX[key]] = sx.parse(text, sig)
            steps.append(Step(sx.parse(raw["formula"], sig), rule, refs, scheme, modal, subst))
    except FormulaSyntaxError as exc:
        raise DerivationError(f"formula error: {exc}") from None
    return Derivation(premises, steps, logic, data.get("name", ""))


def derivation_to_json(d: Derivation) -> dict:
    out = {"logic": d.logic.name}
    if d.name:
        out = {"name": d.name, **out}
    if d.logic.name in ("L(I)", "S4L(I)"):
        out["modals"] = list(d.logic.signature)
    out["premises"] = [sx.to_text(p) for p in d.premises]
    steps = []
    for s in d.steps:
        row = {"formula": sx.to_text(s.formula), "by": format_justification(s)}
        if s.subst is not None:
            row["subst"] = {METAVARS[k]: sx.to_text(v) for k, v in sorted(s.subst.items())}
        steps.append(row)
    out["steps"] = steps
    return out


def load_derivation(path) -> Derivation:
    with open(path) as fh:
        try:
            return derivation_from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise DerivationError(f"{path}: malformed JSON ({exc})") from None
