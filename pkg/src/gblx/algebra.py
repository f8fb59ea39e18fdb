"""Finite bounded commutative integral residuated lattices with unary modals.

Elements are the indices ``0..n-1``; the order is read off the meet table.
All laws are decided by exhaustive, vectorised evaluation over the carrier and
witnesses are the lexicographically least failing tuples.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import AlgebraError


def _table(data, shape, what, n):
    try:
        arr = np.array(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise AlgebraError(f"{what}: not an integer table ({exc})") from None
    if arr.shape != shape:
        raise AlgebraError(f"{what}: expected shape {shape}, got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise AlgebraError(f"{what}: index out of range 0..{n - 1}")
    arr.setflags(write=False)
    return arr


class FiniteAlgebra:
    """Operation tables for (A, meet, join, mult, impl, 0, 1, modals).

    ``impl`` may be omitted, in which case it is derived by residuation.
    Instances are treated as immutable.
    """

    def __init__(self, name, carrier, meet, join, mult, impl, zero, one, modals=None):
        n = len(carrier)
        if n < 1:
            raise AlgebraError("carrier must be nonempty")
        carrier = tuple(str(c) for c in carrier)
        if len(set(carrier)) != n:
            raise AlgebraError("carrier names must be distinct")
        self.name = str(name)
        self.carrier = carrier
        self.meet = _table(meet, (n, n), "meet", n)
        self.join = _table(join, (n, n), "join", n)
        self.mult = _table(mult, (n, n), "mult", n)
        for what, c in (("zero", zero), ("one", one)):
            if not isinstance(c, (int, np.integer)) or not 0 <= c < n:
                raise AlgebraError(f"{what}: index out of range 0..{n - 1}")
        self.zero = int(zero)
        self.one = int(one)
        if impl is None:
            impl = derive_residuum(self.meet, self.join, self.mult, self.zero, self.one)
        self.impl = _table(impl, (n, n), "impl", n)
        self.modals = {
            str(k): _table(v, (n,), f"modal {k!r}", n) for k, v in (modals or {}).items()
        }
        leq = self.meet == np.arange(n)[:, None]
        leq.setflags(write=False)
        self.leq = leq
        negation = self.impl[:, self.zero].copy()
        negation.setflags(write=False)
        self.neg = negation

    @property
    def n(self) -> int:
        return len(self.carrier)

    def __len__(self):
        return self.n

    def __repr__(self):
        mods = ",".join(self.modals)
        return f"FiniteAlgebra({self.name!r}, n={self.n}, modals=[{mods}])"

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return same_tables(self, other) and self.carrier == other.carrier

    __hash__ = None

    def index(self, name) -> int:
        try:
            return self.carrier.index(str(name))
        except ValueError:
            raise AlgebraError(f"{name!r} is not an element of {self.name}") from None

    def le(self, x, y) -> bool:
        return bool(self.leq[x, y])

    def with_modals(self, modals: Mapping, name=None) -> "FiniteAlgebra":
        return FiniteAlgebra(
            name or self.name, self.carrier, self.meet, self.join, self.mult,
            self.impl, self.zero, self.one, modals,
        )

    def reduct(self, name=None) -> "FiniteAlgebra":
        return self.with_modals({}, name)

    def binary(self, symbol: str):
        return {"&": self.meet, "|": self.join, "*": self.mult, "->": self.impl}[symbol]


def same_tables(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    """Structural equality of all tables (carrier names ignored)."""
    if a.n != b.n or a.zero != b.zero or a.one != b.one:
        return False
    if set(a.modals) != set(b.modals):
        return False
    for t in ("meet", "join", "mult", "impl"):
        if not np.array_equal(getattr(a, t), getattr(b, t)):
            return False
    return all(np.array_equal(a.modals[k], b.modals[k]) for k in a.modals)


def identity_modal(A: FiniteAlgebra, *names, name=None) -> FiniteAlgebra:
    names = names or ("box",)
    ident = np.arange(A.n)
    return A.with_modals({k: ident for k in names}, name)


# ---------------------------------------------------------------- residuation

def derive_residuum(meet, join, mult, zero, one):
    """impl(y, z) = max{x : x*y <= z}; raises if some maximum does not exist."""
    meet = np.asarray(meet)
    mult = np.asarray(mult)
    n = meet.shape[0]
    leq = meet == np.arange(n)[:, None]
    impl = np.empty((n, n), dtype=np.int64)
    for y in range(n):
        for z in range(n):
            cands = np.flatnonzero(leq[mult[:, y], z])
            tops = [m for m in cands if leq[cands, m].all()]
            if not tops:
                raise AlgebraError(f"no residuum for ({y}, {z}): not residuated")
            impl[y, z] = tops[0]
    return impl


# ---------------------------------------------------------------- law checking

def _first(bad: np.ndarray):
    idx = np.argwhere(bad)
    if idx.size == 0:
        return None
    return tuple(int(i) for i in idx[0])


def _assoc_failures(t):
    n = t.shape[0]
    r = np.arange(n)
    lhs = t[t[:, :, None], r[None, None, :]]
    rhs = t[r[:, None, None], t[None, :, :]]
    return lhs != rhs


@dataclass
class ClassReport:
    is_rl: bool
    is_gbl: Optional[bool] = None
    is_bl: Optional[bool] = None
    is_mv: Optional[bool] = None
    modal: dict = field(default_factory=dict)
    is_s4mv: Optional[bool] = None
    is_s4tmv: Optional[bool] = None
    failures: dict = field(default_factory=dict)

    @property
    def first_counterexample(self):
        for law, witness in self.failures.items():
            return law, witness
        return None

    def as_dict(self):
        return {
            "is_rl": self.is_rl,
            "is_gbl": self.is_gbl,
            "is_bl": self.is_bl,
            "is_mv": self.is_mv,
            "modal": self.modal,
            "is_s4mv": self.is_s4mv,
            "is_s4tmv": self.is_s4tmv,
            "failures": {k: list(v) for k, v in self.failures.items()},
        }


def _rl_laws(A: FiniteAlgebra):
    n = A.n
    r = np.arange(n)
    m, j, t, i = A.meet, A.join, A.mult, A.impl
    leq = A.leq
    yield "meet-idempotent", m[r, r] != r
    yield "join-idempotent", j[r, r] != r
    yield "meet-commutative", m != m.T
    yield "join-commutative", j != j.T
    yield "meet-associative", _assoc_failures(m)
    yield "join-associative", _assoc_failures(j)
    yield "absorption-meet", m[r[:, None], j] != r[:, None]
    yield "absorption-join", j[r[:, None], m] != r[:, None]
    yield "zero-bottom", (m[A.zero, :] != A.zero) | (j[A.zero, :] != r)
    yield "one-top", (j[A.one, :] != A.one) | (m[A.one, :] != r)
    yield "mult-commutative", t != t.T
    yield "mult-associative", _assoc_failures(t)
    yield "mult-unit", t[:, A.one] != r
    lhs = leq[t[:, :, None], r[None, None, :]]
    rhs = leq[r[:, None, None], i[None, :, :]]
    yield "residuation", lhs != rhs


def check_residuated_lattice(A: FiniteAlgebra) -> ClassReport:
    """Decide the bounded commutative integral residuated lattice laws."""
    failures = {}
    for law, bad in _rl_laws(A):
        w = _first(bad)
        if w is not None:
            failures[law] = w
    return ClassReport(is_rl=not failures, failures=failures)


def tense_diamonds(A: FiniteAlgebra):
    """Tables of P = ~H~ and F = ~G~."""
    if "G" not in A.modals or "H" not in A.modals:
        raise AlgebraError(f"{A.name} lacks the G and H modals")
    neg = A.neg
    return neg[A.modals["H"][neg]], neg[A.modals["G"][neg]]


def lambda_table(A: FiniteAlgebra, names=None):
    """x |-> product of every modal image of x, in declared modal order."""
    names = list(A.modals) if names is None else list(names)
    if not names:
        raise AlgebraError("lambda needs at least one modal")
    out = A.modals[names[0]].copy()
    for k in names[1:]:
        out = A.mult[out, A.modals[k]]
    return out


def modal_laws(A: FiniteAlgebra, box):
    """Yield (law, failure mask) for the endomorphism and interior laws."""
    m, t, leq = A.meet, A.mult, A.leq
    r = np.arange(A.n)
    yield "endomorphism", "preserves-meet", box[m] != m[box[:, None], box[None, :]]
    yield "endomorphism", "preserves-mult", box[t] != t[box[:, None], box[None, :]]
    yield "endomorphism", "preserves-zero", np.array([box[A.zero] != A.zero])
    yield "endomorphism", "preserves-one", np.array([box[A.one] != A.one])
    yield "interior", "contracting", ~leq[box, r]
    yield "interior", "idempotent", box[box] != box
    yield "interior", "monotone", leq & ~leq[box[:, None], box[None, :]]


def classify(A: FiniteAlgebra, tense: bool = False) -> ClassReport:
    """Decide RL, GBL, BL, MV, per-modal, S4MV(I) and S4tMV membership.

    With ``tense=True`` the modal set must be exactly {G, H}.
    """
    if tense and set(A.modals) != {"G", "H"}:
        raise AlgebraError(
            f"S4tMV needs exactly the modals G and H, {A.name} has {sorted(A.modals)}"
        )
    report = check_residuated_lattice(A)
    fail = report.failures
    r = np.arange(A.n)
    i = A.impl

    def record(law, bad):
        w = _first(bad)
        if w is not None:
            fail[law] = w
        return w is None

    divisible = record("divisibility", A.mult[r[:, None], i] != A.meet)
    prelinear = record("prelinearity", A.join[i, i.T] != A.one)
    involutive = record("involution", A.neg[A.neg] != r)
    report.is_gbl = report.is_rl and divisible
    report.is_bl = report.is_gbl and prelinear
    report.is_mv = report.is_bl and involutive

    all_ok = True
    for name, box in A.modals.items():
        flags = {"endomorphism": True, "interior": True}
        for group, law, bad in modal_laws(A, box):
            if not record(f"{name}:{law}", bad):
                flags[group] = False
        report.modal[name] = flags
        all_ok = all_ok and flags["endomorphism"] and flags["interior"]
    report.is_s4mv = report.is_mv and all_ok

    if set(A.modals) == {"G", "H"}:
        P, F = tense_diamonds(A)
        G, H = A.modals["G"], A.modals["H"]
        gp = record("x->GP(x)", i[r, G[P]] != A.one)
        hf = record("x->HF(x)", i[r, H[F]] != A.one)
        report.is_s4tmv = report.is_s4mv and gp and hf
    return report


def tense_identity_failures(A: FiniteAlgebra) -> dict:
    """Check the derived laws of P = ~H~ and F = ~G~.

    Returns {family: (clause, *witness)} for the least failing clause of each family.
    """
    P, F = tense_diamonds(A)
    G, H = A.modals["G"], A.modals["H"]
    j, i, leq, one, z = A.join, A.impl, A.leq, A.one, A.zero
    r = np.arange(A.n)

    def closure(C):
        return [~leq[r, C], C[C] != C, leq & ~leq[C[:, None], C[None, :]]]

    families = {
        "P-join": [P[j] != j[P[:, None], P[None, :]]],
        "P-bounds": [np.array([P[z] != z]), np.array([P[one] != one])],
        "H-F-adjunction": [leq[r[:, None], H[None, :]] != leq[F[:, None], r[None, :]]],
        "F-join": [F[j] != j[F[:, None], F[None, :]]],
        "F-bounds": [np.array([F[one] != one]), np.array([F[z] != z])],
        "G-P-unit": [i[r, G[P]] != one, i[P[G], r] != one],
        "H-F-unit": [i[r, H[F]] != one, i[F[H], r] != one],
        "P-F-closure": closure(P) + closure(F),
    }
    out = {}
    for name, clauses in families.items():
        for k, bad in enumerate(clauses):
            w = _first(bad)
            if w is not None:
                out[name] = (k, *w)
                break
    return out


# ---------------------------------------------------------------- constructors

def _fraction_name(k, d):
    return str(Fraction(k, d)) if d else "0"


def lukasiewicz_chain(n: int) -> FiniteAlgebra:
    """The n-element MV-chain {0, 1/(n-1), ..., 1}."""
    if n < 2:
        raise AlgebraError("a Lukasiewicz chain needs n >= 2")
    top = n - 1
    r = np.arange(n)
    x, y = r[:, None], r[None, :]
    return FiniteAlgebra(
        f"L{n}", [_fraction_name(k, top) for k in r],
        np.minimum(x, y), np.maximum(x, y),
        np.maximum(0, x + y - top), np.minimum(top, top - x + y),
        0, top,
    )


def godel_chain(n: int) -> FiniteAlgebra:
    """The n-element Goedel chain (mult = meet)."""
    if n < 2:
        raise AlgebraError("a Goedel chain needs n >= 2")
    top = n - 1
    r = np.arange(n)
    x, y = r[:, None], r[None, :]
    return FiniteAlgebra(
        f"G{n}", [_fraction_name(k, top) for k in r],
        np.minimum(x, y), np.maximum(x, y), np.minimum(x, y),
        np.where(x <= y, top, y), 0, top,
    )


def trivial_algebra() -> FiniteAlgebra:
    z = [[0]]
    return FiniteAlgebra("trivial", ["0"], z, z, z, z, 0, 0)


def product_tuples(sizes: Sequence[int]):
    """Carrier tuples in mixed-radix order (first coordinate most significant)."""
    return list(itertools.product(*(range(s) for s in sizes)))


def product_index(sizes: Sequence[int], coords) -> int:
    return int(np.ravel_multi_index(tuple(coords), tuple(sizes)))


def direct_product(factors: Sequence[FiniteAlgebra], modals=None, name=None) -> FiniteAlgebra:
    """Pointwise product; ``modals`` defaults to the names shared by all factors."""
    if not factors:
        raise AlgebraError("direct product of an empty factor list")
    if modals is None:
        modals = [k for k in factors[0].modals if all(k in f.modals for f in factors)]
    for k in modals:
        for f in factors:
            if k not in f.modals:
                raise AlgebraError(f"factor {f.name} lacks modal {k!r}")
    sizes = tuple(f.n for f in factors)
    tuples = np.array(product_tuples(sizes), dtype=np.int64).reshape(-1, len(factors))

    def pointwise(attr):
        cols = [getattr(f, attr)[tuples[:, c][:, None], tuples[:, c][None, :]]
                for c, f in enumerate(factors)]
        return np.ravel_multi_index(tuple(cols), sizes)

    def unary(tables):
        cols = [tab[tuples[:, c]] for c, tab in enumerate(tables)]
        return np.ravel_multi_index(tuple(cols), sizes)

    carrier = [
        "(" + ",".join(f.carrier[c] for f, c in zip(factors, row)) + ")" for row in tuples
    ]
    if len(factors) == 1:
        carrier = list(factors[0].carrier)
    zero = product_index(sizes, [f.zero for f in factors])
    one = product_index(sizes, [f.one for f in factors])
    return FiniteAlgebra(
        name or "x".join(f.name for f in factors),
        carrier,
        pointwise("meet"), pointwise("join"), pointwise("mult"), pointwise("impl"),
        zero, one,
        {k: unary([f.modals[k] for f in factors]) for k in modals},
    )


# ---------------------------------------------------------------- files

def algebra_to_json(A: FiniteAlgebra) -> dict:
    return {
        "name": A.name,
        "carrier": list(A.carrier),
        "meet": A.meet.tolist(),
        "join": A.join.tolist(),
        "mult": A.mult.tolist(),
        "impl": A.impl.tolist(),
        "zero": A.zero,
        "one": A.one,
        "modals": {k: v.tolist() for k, v in A.modals.items()},
    }


def algebra_from_json(data: dict) -> FiniteAlgebra:
    if not isinstance(data, dict):
        raise AlgebraError("algebra file must hold a JSON object")
    missing = [k for k in ("carrier", "meet", "join", "mult", "zero", "one") if k not in data]
    if missing:
        raise AlgebraError(f"algebra file lacks {missing}")
    return FiniteAlgebra(
        data.get("name", "algebra"), data["carrier"], data["meet"], data["join"],
        data["mult"], data.get("impl"), data["zero"], data["one"], data.get("modals") or {},
    )


def load_algebra(path) -> FiniteAlgebra:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"{path}: malformed JSON ({exc})") from None
    return algebra_from_json(data)


def save_algebra(A: FiniteAlgebra, path):
    with open(path, "w") as fh:
        json.dump(algebra_to_json(A), fh, indent=1)
        fh.write("\n")
