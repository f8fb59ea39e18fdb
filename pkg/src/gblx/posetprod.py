"""Finite posets, the conuclei sigma and delta on a product, and conucleus images."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    FiniteAlgebra,
    check_residuated_lattice,
    classify,
    direct_product,
    product_index,
)
from .errors import AlgebraError, NotAConucleus

MAX_POSET_SIZE = 4
MAX_PRODUCT_SIZE = 4096


class FinitePoset:
    """A poset on ``0..m-1`` stored by its strict order ``lt``."""

    def __init__(self, lt, elements=None):
        lt = np.array(lt, dtype=bool)
        m = lt.shape[0] if lt.ndim == 2 else 0
        if lt.shape != (m, m):
            raise AlgebraError("strict order must be a square boolean table")
        if lt.diagonal().any():
            raise AlgebraError(f"order is not irreflexive at {int(np.flatnonzero(lt.diagonal())[0])}")
        closed = lt.copy()
        for k in range(m):
            closed |= closed[:, k:k + 1] & closed[k:k + 1, :]
        if not np.array_equal(closed, lt):
            raise AlgebraError("strict order is not transitive")
        lt.setflags(write=False)
        self.lt = lt
        self.elements = tuple(elements) if elements is not None else tuple(f"x{i}" for i in range(m))
        if len(self.elements) != m:
            raise AlgebraError("element names do not match the order size")

    @classmethod
    def from_pairs(cls, m, pairs, elements=None):
        """Build from covering or arbitrary ``(i, j)`` pairs meaning i < j; closes transitively."""
        lt = np.zeros((m, m), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < m and 0 <= j < m):
                raise AlgebraError(f"pair ({i}, {j}) out of range")
            lt[i, j] = True
        for k in range(m):
            lt |= lt[:, k:k + 1] & lt[k:k + 1, :]
        if lt.diagonal().any():
            raise AlgebraError("order relation has a cycle (not irreflexive after closure)")
        return cls(lt, elements)

    @classmethod
    def chain(cls, m):
        return cls.from_pairs(m, [(i, i + 1) for i in range(m - 1)])

    @classmethod
    def antichain(cls, m):
        return cls.from_pairs(m, [])

    @property
    def size(self):
        return self.lt.shape[0]

    def pairs(self):
        return [(int(i), int(j)) for i, j in np.argwhere(self.lt)]

    def __repr__(self):
        return f"FinitePoset(size={self.size}, lt={self.pairs()})"


def poset_from_json(data) -> FinitePoset:
    if not isinstance(data, dict) or "elements" not in data:
        raise AlgebraError("poset file must be a JSON object with 'elements'")
    elements = [str(e) for e in data["elements"]]
    return FinitePoset.from_pairs(len(elements), [tuple(p) for p in data.get("lt", [])], elements)


def poset_to_json(P: FinitePoset) -> dict:
    return {"elements": list(P.elements), "lt": [list(p) for p in P.pairs()]}


def load_poset(path) -> FinitePoset:
    with open(path) as fh:
        try:
            return poset_from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"{path}: malformed JSON ({exc})") from None


@dataclass(frozen=True, eq=False)
class LabeledProduct:
    poset: FinitePoset
    factors: tuple
    product: FiniteAlgebra
    tuples: np.ndarray
    sigma: np.ndarray
    delta: np.ndarray

    @property
    def sizes(self):
        return tuple(f.n for f in self.factors)

    def index_of(self, f) -> int:
        if len(f) != len(self.factors):
            raise AlgebraError(f"tuple {tuple(f)} has the wrong length")
        for c, (v, A) in enumerate(zip(f, self.factors)):
            if not 0 <= v < A.n:
                raise AlgebraError(f"coordinate {c} value {v} out of range")
        return product_index(self.sizes, f)

    def tuple_of(self, i) -> tuple:
        return tuple(int(v) for v in self.tuples[i])


def _bounds(factors):
    zeros = np.array([A.zero for A in factors])
    ones = np.array([A.one for A in factors])
    return zeros, ones


def sigma_tuple(poset: FinitePoset, factors, f) -> tuple:
    """sigma(f)(x) = f(x) if f(y) = 1 for all y > x, else 0."""
    zeros, ones = _bounds(factors)
    out = []
    for x in range(poset.size):
        above = np.flatnonzero(poset.lt[x])
        keep = all(f[y] == ones[y] for y in above)
        out.append(int(f[x]) if keep else int(zeros[x]))
    return tuple(out)


def delta_tuple(poset: FinitePoset, factors, f) -> tuple:
    """delta(f)(x) = f(x) if f(y) = 0 for all y < x, else 1."""
    zeros, ones = _bounds(factors)
    out = []
    for x in range(poset.size):
        below = np.flatnonzero(poset.lt[:, x])
        keep = all(f[y] == zeros[y] for y in below)
        out.append(int(f[x]) if keep else int(ones[x]))
    return tuple(out)


def build_labeled_product(
    poset: FinitePoset,
    factors: Sequence[FiniteAlgebra],
    max_poset_size=MAX_POSET_SIZE,
    max_product_size=MAX_PRODUCT_SIZE,
) -> LabeledProduct:
    """Direct product indexed by ``poset`` together with the sigma and delta tables.

    Each coordinate uses its own factor's designated 0 and 1.
    """
    factors = tuple(f.reduct() for f in factors)
    if poset.size < 1:
        raise AlgebraError("poset must be nonempty")
    if len(factors) != poset.size:
        raise AlgebraError(f"need {poset.size} factors, got {len(factors)}")
    if poset.size > max_poset_size:
        raise AlgebraError(f"poset size {poset.size} exceeds cap {max_poset_size}")
    total = int(np.prod([f.n for f in factors]))
    if total > max_product_size:
        raise AlgebraError(f"product size {total} exceeds cap {max_product_size}")
    for A in factors:
        if not check_residuated_lattice(A).is_rl:
            raise AlgebraError(f"factor {A.name} is not a residuated lattice")
    B = direct_product(factors, modals=())
    sizes = tuple(f.n for f in factors)
    tuples = np.array(np.unravel_index(np.arange(B.n), sizes)).T.reshape(B.n, len(sizes))
    tuples.setflags(write=False)
    zeros, ones = _bounds(factors)
    lt = poset.lt
    is_one = tuples == ones
    is_zero = tuples == zeros
    # keep_up[i, x]: every y > x is 1 in tuple i
    keep_up = ~((~is_one)[:, None, :] & lt[None, :, :]).any(axis=2)
    keep_down = ~((~is_zero)[:, None, :] & lt.T[None, :, :]).any(axis=2)
    sig = np.where(keep_up, tuples, zeros)
    dlt = np.where(keep_down, tuples, ones)
    sigma = np.ravel_multi_index(tuple(sig.T), sizes)
    delta = np.ravel_multi_index(tuple(dlt.T), sizes)
    sigma.setflags(write=False)
    delta.setflags(write=False)
    return LabeledProduct(poset, factors, B, tuples, sigma, delta)


def sigma(lp: LabeledProduct, f) -> tuple:
    return lp.tuple_of(lp.sigma[lp.index_of(f)])


def delta(lp: LabeledProduct, f) -> tuple:
    return lp.tuple_of(lp.delta[lp.index_of(f)])


def box_from_delta_table(lp: LabeledProduct) -> np.ndarray:
    neg = lp.product.neg
    return neg[lp.delta[neg]]


def box_from_delta(lp: LabeledProduct, f) -> tuple:
    """~delta(~f), computed with the product's negation."""
    return lp.tuple_of(box_from_delta_table(lp)[lp.index_of(f)])


def ac_labelings(lp: LabeledProduct) -> frozenset:
    """Indices of tuples with x < y implying f(x) = 0 or f(y) = 1."""
    zeros, ones = _bounds(lp.factors)
    out = set()
    pairs = lp.poset.pairs()
    for i, row in enumerate(lp.tuples):
        if all(row[x] == zeros[x] or row[y] == ones[y] for x, y in pairs):
            out.add(i)
    return frozenset(out)


@dataclass(frozen=True, eq=False)
class ModalProduct:
    labeled: LabeledProduct
    s4mv: FiniteAlgebra   # modals {box: sigma}
    s4tmv: FiniteAlgebra  # modals {G: sigma, H: ~delta~}


def build_modal_product(poset: FinitePoset, factors: Sequence[FiniteAlgebra], name=None, **caps) -> ModalProduct:
    for A in factors:
        if not classify(A.reduct()).is_mv:
            raise AlgebraError(f"factor {A.name} is not an MV-algebra")
    lp = build_labeled_product(poset, factors, **caps)
    name = name or "PP[" + ",".join(f.name for f in lp.factors) + "]"
    B = lp.product
    box = lp.sigma
    h = box_from_delta_table(lp)
    return ModalProduct(
        lp,
        B.with_modals({"box": box}, name),
        B.with_modals({"G": box, "H": h}, name + "/t"),
    )


# ---------------------------------------------------------------- conuclei

def _unary(A: FiniteAlgebra, g):
    if isinstance(g, str):
        if g not in A.modals:
            raise AlgebraError(f"{A.name} has no modal {g!r}")
        return A.modals[g]
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (A.n,) or (g.size and (g.min() < 0 or g.max() >= A.n)):
        raise AlgebraError("unary table has the wrong shape or range")
    return g


def check_conucleus(A: FiniteAlgebra, g) -> dict:
    """Return {law: least witness} for every failed conucleus law (empty when g is one)."""
    g = _unary(A, g)
    r = np.arange(A.n)
    leq, t = A.leq, A.mult
    laws = {
        "contracting": ~leq[g, r],
        "idempotent": g[g] != g,
        "monotone": leq & ~leq[g[:, None], g[None, :]],
        "submultiplicative": ~leq[t[g[:, None], g[None, :]], g[t]],
        "unit": t[g, g[A.one]] != g,
    }
    out = {}
    for law, bad in laws.items():
        idx = np.argwhere(bad)
        if idx.size:
            out[law] = tuple(int(v) for v in idx[0])
    return out


def fixpoints(g) -> np.ndarray:
    g = np.asarray(g)
    return np.flatnonzero(g == np.arange(len(g)))


def conucleus_image(A: FiniteAlgebra, g, name=None) -> FiniteAlgebra:
    """The algebra of g-fixed elements; meet and impl are post-composed with g.

    Carrier order follows ``fixpoints(g)``.
    """
    label = g if isinstance(g, str) else "g"
    g = _unary(A, g)
    fix = fixpoints(g)
    pos = np.full(A.n, -1)
    pos[fix] = np.arange(len(fix))
    sub = np.ix_(fix, fix)

    def restrict(table, what):
        out = pos[table]
        if (out < 0).any():
            i, j = np.argwhere(out < 0)[0]
            raise NotAConucleus(
                f"{what} of fixpoints {A.carrier[fix[i]]}, {A.carrier[fix[j]]} is not fixed"
            )
        return out

    if pos[A.zero] < 0 or pos[g[A.one]] < 0:
        raise NotAConucleus("bounds are not fixed")
    return FiniteAlgebra(
        name or f"{A.name}_{label}",
        [A.carrier[x] for x in fix],
        restrict(g[A.meet[sub]], "g(meet)"),
        restrict(A.join[sub], "join"),
        restrict(A.mult[sub], "mult"),
        restrict(g[A.impl[sub]], "g(impl)"),
        int(pos[A.zero]),
        int(pos[g[A.one]]),
    )
