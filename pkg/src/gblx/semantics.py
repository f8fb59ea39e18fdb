"""Evaluation of formulas in finite algebras, validity and finite consequence."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import syntax as sx
from .algebra import FiniteAlgebra, classify
from .errors import AlgebraError, CapExceeded, EvaluationError
from .posetprod import conucleus_image, fixpoints

DEFAULT_ASSIGNMENT_CAP = 100_000


def assignment_cap() -> int:
    raw = os.environ.get("GBLX_CAP_ASSIGNMENTS")
    if raw is None:
        return DEFAULT_ASSIGNMENT_CAP
    try:
        return int(raw)
    except ValueError:
        raise CapExceeded(f"GBLX_CAP_ASSIGNMENTS={raw!r} is not an integer") from None


@dataclass(frozen=True)
class Equation:
    left: sx.Formula
    right: sx.Formula

    @classmethod
    def parse(cls, text, sig=None):
        return cls(*sx.parse_equation(text, sig))

    @classmethod
    def is_one(cls, f):
        return cls(f, sx.ONE)

    def variables(self):
        return sx.variables(self.left) | sx.variables(self.right)

    def __str__(self):
        return f"{sx.to_text(self.left)} = {sx.to_text(self.right)}"


def evaluate(A: FiniteAlgebra, h, f: sx.Formula) -> int:
    """Fold f through A's tables under the assignment h (variable index -> element)."""
    if isinstance(f, sx.Var):
        try:
            return int(h[f.index])
        except (KeyError, IndexError):
            raise EvaluationError(f"variable p{f.index} is unassigned") from None
    if isinstance(f, sx.Zero):
        return A.zero
    if isinstance(f, sx.One):
        return A.one
    if isinstance(f, sx.Binary):
        return int(A.binary(f.symbol)[evaluate(A, h, f.left), evaluate(A, h, f.right)])
    if isinstance(f, sx.Modal):
        if f.name not in A.modals:
            raise EvaluationError(f"{A.name} has no table for modal {f.name!r}")
        return int(A.modals[f.name][evaluate(A, h, f.sub)])
    raise TypeError(f"not a formula: {f!r}")


def term_vector(A: FiniteAlgebra, f: sx.Formula, env: dict, cache: Optional[dict] = None) -> np.ndarray:
    """Evaluate f at many assignments at once; env maps variable -> index array."""
    if cache is not None:
        hit = cache.get(f)
        if hit is not None:
            return hit
    if isinstance(f, sx.Var):
        try:
            out = env[f.index]
        except KeyError:
            raise EvaluationError(f"variable p{f.index} is unassigned") from None
    elif isinstance(f, (sx.Zero, sx.One)):
        size = len(next(iter(env.values()))) if env else 1
        out = np.full(size, A.zero if isinstance(f, sx.Zero) else A.one)
    elif isinstance(f, sx.Binary):
        out = A.binary(f.symbol)[term_vector(A, f.left, env, cache), term_vector(A, f.right, env, cache)]
    elif isinstance(f, sx.Modal):
        if f.name not in A.modals:
            raise EvaluationError(f"{A.name} has no table for modal {f.name!r}")
        out = A.modals[f.name][term_vector(A, f.sub, env, cache)]
    else:
        raise TypeError(f"not a formula: {f!r}")
    if cache is not None:
        cache[f] = out
    return out


def assignment_grid(n: int, variables: Sequence[int], values=None, cap=None):
    """All assignments of ``values`` (default 0..n-1) to ``variables``, lexicographically.

    Returns (env, rows) where rows[k] is the k-th assignment as a tuple.
    """
    variables = sorted(variables)
    values = np.arange(n) if values is None else np.asarray(values)
    cap = assignment_cap() if cap is None else cap
    total = len(values) ** len(variables)
    if total > cap:
        raise CapExceeded(f"{len(values)}^{len(variables)} = {total} assignments exceeds cap {cap}")
    if not variables:
        return {}, np.zeros((1, 0), dtype=np.int64)
    idx = np.indices((len(values),) * len(variables)).reshape(len(variables), -1)
    rows = values[idx].T
    return {v: rows[:, k] for k, v in enumerate(variables)}, rows


def _check_modals(A, formulas):
    for f in formulas:
        missing = sx.modal_names(f) - set(A.modals)
        if missing:
            raise EvaluationError(f"{A.name} has no table for modal(s) {sorted(missing)}")


def _vectors(A, formulas, env, rows):
    _check_modals(A, formulas)
    cache = {}
    size = rows.shape[0]
    out = []
    for f in formulas:
        v = term_vector(A, f, env, cache)
        out.append(np.broadcast_to(v, (size,)))
    return out


def is_valid(A: FiniteAlgebra, eq: Equation, cap=None):
    """Return (valid, least failing assignment or None)."""
    variables = sorted(eq.variables())
    env, rows = assignment_grid(A.n, variables, cap=cap)
    lhs, rhs = _vectors(A, [eq.left, eq.right], env, rows)
    bad = np.flatnonzero(lhs != rhs)
    if bad.size == 0:
        return True, None
    return False, dict(zip(variables, (int(v) for v in rows[bad[0]])))


def semantic_consequence(algebras, premises, conclusion: Equation, cap=None):
    """Finite-class consequence: premises hold => conclusion holds, at every assignment.

    Returns (holds, witness) with witness = (algebra, assignment) on failure.
    """
    premises = list(premises)
    variables = sorted(set().union(conclusion.variables(), *(p.variables() for p in premises)))
    for A in algebras:
        env, rows = assignment_grid(A.n, variables, cap=cap)
        sides = [conclusion.left, conclusion.right]
        for p in premises:
            sides += [p.left, p.right]
        vecs = _vectors(A, sides, env, rows)
        ok = np.ones(rows.shape[0], dtype=bool)
        for k in range(len(premises)):
            ok &= vecs[2 + 2 * k] == vecs[3 + 2 * k]
        bad = np.flatnonzero(ok & (vecs[0] != vecs[1]))
        if bad.size:
            return False, (A, dict(zip(variables, (int(v) for v in rows[bad[0]]))))
    return True, None


# ---------------------------------------------------------------- translations

@dataclass
class TranslationReport:
    formula: str
    modal: str
    assignments: int
    pointwise: bool
    valid_in_image: bool
    valid_translation: bool
    fixed: bool
    witness: Optional[dict] = None

    @property
    def passed(self):
        return self.pointwise and self.fixed and self.valid_in_image == self.valid_translation


def check_translation_equivalence(A: FiniteAlgebra, f: sx.Formula, mode="M", cap=None) -> TranslationReport:
    """Compare f in the conucleus image with its translation in A.

    (a) f evaluated in A_box under p |-> box(h(p)) equals M(f) under h, for every h;
    (b) f = 1 valid in A_box iff M(f) = 1 valid in A;
    (c) every value of M(f) is box-fixed.
    Mode "T" uses G and the T translation and requires S4tMV.
    """
    if mode not in ("M", "T"):
        raise ValueError("mode must be 'M' or 'T'")
    if not sx.is_pure(f):
        raise ValueError("the formula must be modal-free")
    modal = "box" if mode == "M" else "G"
    report = classify(A, tense=(mode == "T"))
    if mode == "M" and not (set(A.modals) == {"box"} and report.is_s4mv):
        raise AlgebraError(f"{A.name} is not an S4MV-algebra with modal 'box'")
    if mode == "T" and not report.is_s4tmv:
        raise AlgebraError(f"{A.name} is not an S4tMV-algebra")
    box = A.modals[modal]
    image = conucleus_image(A, box)
    fix = fixpoints(box)
    pos = np.full(A.n, -1)
    pos[fix] = np.arange(len(fix))
    translated = sx.translate(f, modal)
    variables = sorted(sx.variables(f))

    env, rows = assignment_grid(A.n, variables, cap=cap)
    bar_env = {v: pos[box[vec]] for v, vec in env.items()}
    (left,) = _vectors(image, [f], bar_env, rows)
    (right,) = _vectors(A, [translated], env, rows)
    mismatch = np.flatnonzero(fix[left] != right)
    unfixed = np.flatnonzero(box[right] != right)

    img_env, img_rows = assignment_grid(image.n, variables, cap=cap)
    (img_vals,) = _vectors(image, [f], img_env, img_rows)
    witness = None
    if mismatch.size:
        witness = {"check": "pointwise", "assignment": dict(zip(variables, rows[mismatch[0]].tolist()))}
    elif unfixed.size:
        witness = {"check": "fixed", "assignment": dict(zip(variables, rows[unfixed[0]].tolist()))}
    return TranslationReport(
        formula=sx.to_text(f),
        modal=modal,
        assignments=int(rows.shape[0]),
        pointwise=not mismatch.size,
        valid_in_image=bool((img_vals == image.one).all()),
        valid_translation=bool((right == A.one).all()),
        fixed=not unfixed.size,
        witness=witness,
    )
