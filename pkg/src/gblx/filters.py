"""I-filters, congruences and the correspondence between them.

Filters are frozensets of element indices. Congruences are canonical block
vectors: ``theta[x]`` is the block number of x, blocks numbered by first
occurrence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .algebra import FiniteAlgebra
from .errors import AlgebraError, GblxError

MAX_ENUM_SIZE = 32


# ---------------------------------------------------------------- filters

def up_closure(A: FiniteAlgebra, S: Iterable[int]) -> frozenset:
    S = list(S)
    if not S:
        return frozenset()
    return frozenset(int(y) for y in np.flatnonzero(A.leq[S].any(axis=0)))


def ifilter_violation(A: FiniteAlgebra, S) -> Optional[tuple]:
    """First violated I-filter condition as (condition, witness), or None."""
    S = frozenset(int(x) for x in S)
    if not S:
        return ("nonempty", ())
    for x in sorted(S):
        for y in range(A.n):
            if A.leq[x, y] and y not in S:
                return ("up-set", (x, y))
    for x in sorted(S):
        for y in sorted(S):
            if int(A.mult[x, y]) not in S:
                return ("mult", (x, y))
    for name, box in A.modals.items():
        for x in sorted(S):
            if int(box[x]) not in S:
                return (f"modal:{name}", (x,))
    return None


def is_ifilter(A: FiniteAlgebra, S) -> bool:
    return ifilter_violation(A, S) is None


def generate_filter(A: FiniteAlgebra, X=()) -> frozenset:
    """Least I-filter containing X, by closure under modals, mult and up-sets."""
    S = set(int(x) for x in X) | {A.one}
    boxes = list(A.modals.values())
    while True:
        new = set(S)
        for box in boxes:
            new.update(int(box[x]) for x in S)
        new.update(int(A.mult[x, y]) for x in S for y in S)
        new = set(up_closure(A, new))
        if new == S:
            return frozenset(S)
        S = new


def block_images(A: FiniteAlgebra, X) -> set:
    """{M x : x in X, M a nonempty word over the modals}.

    With no modals the empty word is the only block, so X itself is returned.
    """
    boxes = list(A.modals.values())
    if not boxes:
        return {int(x) for x in X}
    seen = {int(box[x]) for box in boxes for x in X}
    frontier = set(seen)
    while frontier:
        nxt = {int(box[x]) for box in boxes for x in frontier} - seen
        seen |= nxt
        frontier = nxt
    return seen


def generate_filter_by_blocks(A: FiniteAlgebra, X=()) -> frozenset:
    """Up-set of all finite products of block images of X (empty product is 1)."""
    prods = {A.one}
    images = block_images(A, X)
    frontier = set(prods)
    while frontier:
        nxt = {int(A.mult[p, m]) for p in frontier for m in images} - prods
        prods |= nxt
        frontier = nxt
    return up_closure(A, prods)


# ---------------------------------------------------------------- congruences

def star_table(A: FiniteAlgebra) -> np.ndarray:
    """x * y = (x -> y)(y -> x)."""
    return A.mult[A.impl, A.impl.T]


def biimp_table(A: FiniteAlgebra) -> np.ndarray:
    return A.meet[A.impl, A.impl.T]


def canonical_partition(labels) -> tuple:
    seen = {}
    return tuple(seen.setdefault(lab, len(seen)) for lab in labels)


def partition_blocks(theta) -> list:
    blocks = {}
    for x, b in enumerate(theta):
        blocks.setdefault(b, []).append(x)
    return [blocks[b] for b in sorted(blocks)]


def congruence_violation(A: FiniteAlgebra, theta) -> Optional[tuple]:
    """First operation not respected by the partition, as (operation, witness)."""
    part = np.asarray(theta)
    R = part[:, None] == part[None, :]
    for sym in ("&", "|", "*", "->"):
        t = A.binary(sym)
        # first argument varies within a block
        bad = R[:, :, None] & (part[t[:, None, :]] != part[t[None, :, :]])
        idx = np.argwhere(bad)
        if idx.size:
            return (sym, tuple(int(v) for v in idx[0]))
        bad = R[:, :, None] & (part[t.T[:, None, :]] != part[t.T[None, :, :]])
        idx = np.argwhere(bad)
        if idx.size:
            x, x2, y = (int(v) for v in idx[0])
            return (sym, (y, x, x2))
    for name, box in A.modals.items():
        idx = np.argwhere(R & (part[box][:, None] != part[box][None, :]))
        if idx.size:
            return (f"modal:{name}", tuple(int(v) for v in idx[0]))
    return None


def filter_to_congruence(A: FiniteAlgebra, f, via="star") -> tuple:
    """theta_f = {(x, y) : x*y in f} (or x<->y in f with ``via='biimp'``)."""
    table = star_table(A) if via == "star" else biimp_table(A)
    member = np.zeros(A.n, dtype=bool)
    member[list(f)] = True
    rel = member[table]
    labels = [int(np.flatnonzero(rel[x])[0]) for x in range(A.n)]
    theta = canonical_partition(labels)
    T = np.asarray(theta)
    if not np.array_equal(T[:, None] == T[None, :], rel):
        raise GblxError("theta_f is not an equivalence relation; input is not an I-filter")
    bad = congruence_violation(A, theta)
    if bad is not None:
        raise GblxError(f"theta_f is not a congruence ({bad}); input is not an I-filter")
    return theta


def congruence_to_filter(A: FiniteAlgebra, theta) -> frozenset:
    """The block of 1."""
    return frozenset(x for x in range(A.n) if theta[x] == theta[A.one])


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def partition(self):
        return canonical_partition(self.find(x) for x in range(len(self.parent)))


def congruence_generated(A: FiniteAlgebra, pairs) -> tuple:
    """Cg(pairs): close under equivalence and every basic translation."""
    uf = _UnionFind(A.n)
    tables = [A.meet, A.join, A.mult, A.impl, A.impl.T]
    boxes = list(A.modals.values())
    work = [(int(a), int(b)) for a, b in pairs]
    while work:
        a, b = work.pop()
        if not uf.union(a, b):
            continue
        for t in tables:
            work.extend(zip(t[a].tolist(), t[b].tolist()))
        for box in boxes:
            work.append((int(box[a]), int(box[b])))
    return uf.partition()


def join_congruences(A: FiniteAlgebra, t1, t2) -> tuple:
    uf = _UnionFind(A.n)
    for theta in (t1, t2):
        first = {}
        for x, b in enumerate(theta):
            uf.union(first.setdefault(b, x), x)
    return uf.partition()


def partition_leq(t1, t2) -> bool:
    """t1 is contained in t2."""
    return all(t2[x] == t2[y] for x in range(len(t1)) for y in range(x) if t1[x] == t1[y])


def _check_size(A, max_size):
    if A.n > max_size:
        raise AlgebraError(f"carrier size {A.n} exceeds enumeration bound {max_size}")


def enumerate_ifilters(A: FiniteAlgebra, max_size=MAX_ENUM_SIZE) -> list:
    """All I-filters, found by growing generated filters one generator at a time."""
    _check_size(A, max_size)
    start = generate_filter(A)
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for F in frontier:
            for x in range(A.n):
                if x not in F:
                    G = generate_filter(A, F | {x})
                    if G not in found:
                        found.add(G)
                        nxt.append(G)
        frontier = nxt
    return sorted(found, key=lambda F: (len(F), sorted(F)))


def enumerate_congruences(A: FiniteAlgebra, max_size=MAX_ENUM_SIZE) -> list:
    """All congruences: joins of principal congruences Cg(x, y), plus the identity."""
    _check_size(A, max_size)
    principal = {congruence_generated(A, [(x, y)]) for x in range(A.n) for y in range(x)}
    found = {tuple(range(A.n))} | principal
    frontier = set(found)
    while frontier:
        nxt = set()
        for t1 in frontier:
            for t2 in principal:
                j = join_congruences(A, t1, t2)
                if j not in found:
                    nxt.add(j)
        found |= nxt
        frontier = nxt
    return sorted(found, key=lambda t: (-max(t), t))


# ---------------------------------------------------------------- CEP

def embedding_violation(A: FiniteAlgebra, B: FiniteAlgebra, emb) -> Optional[str]:
    emb = np.asarray(emb)
    if emb.shape != (A.n,) or emb.min() < 0 or emb.max() >= B.n:
        return "index map has the wrong shape or range"
    if len(set(emb.tolist())) != A.n:
        return "index map is not injective"
    if emb[A.zero] != B.zero or emb[A.one] != B.one:
        return "index map does not preserve the constants"
    for sym in ("&", "|", "*", "->"):
        if not np.array_equal(emb[A.binary(sym)], B.binary(sym)[emb[:, None], emb[None, :]]):
            return f"index map does not commute with {sym}"
    if set(A.modals) != set(B.modals):
        return "modal signatures differ"
    for name in A.modals:
        if not np.array_equal(emb[A.modals[name]], B.modals[name][emb]):
            return f"index map does not commute with modal {name}"
    return None


def generated_subalgebra(B: FiniteAlgebra, gens, name=None):
    """Close ``gens`` under all operations; returns (subalgebra, index map)."""
    S = {B.zero, B.one} | {int(g) for g in gens}
    boxes = list(B.modals.values())
    while True:
        new = set(S)
        for t in (B.meet, B.join, B.mult, B.impl):
            new.update(int(t[x, y]) for x in S for y in S)
        for box in boxes:
            new.update(int(box[x]) for x in S)
        if new == S:
            break
        S = new
    emb = np.array(sorted(S))
    pos = {int(x): i for i, x in enumerate(emb)}
    sub = np.ix_(emb, emb)

    def re(t):
        return np.vectorize(pos.__getitem__)(t)

    A = FiniteAlgebra(
        name or f"{B.name}<{','.join(B.carrier[g] for g in sorted(set(int(g) for g in gens)))}>",
        [B.carrier[x] for x in emb],
        re(B.meet[sub]), re(B.join[sub]), re(B.mult[sub]), re(B.impl[sub]),
        pos[B.zero], pos[B.one],
        {k: re(v[emb]) for k, v in B.modals.items()},
    )
    return A, emb


@dataclass
class CepReport:
    passed: bool
    filters_checked: int
    witness: Optional[dict] = None


def check_cep(A: FiniteAlgebra, B: FiniteAlgebra, emb, max_size=MAX_ENUM_SIZE) -> CepReport:
    """Every I-filter f of A is the trace on A of the I-filter B generates from f."""
    problem = embedding_violation(A, B, emb)
    if problem:
        raise AlgebraError(problem)
    emb = np.asarray(emb)
    image = frozenset(int(x) for x in emb)
    filters = enumerate_ifilters(A, max_size)
    for f in filters:
        fimg = frozenset(int(emb[x]) for x in f)
        g = generate_filter(B, fimg)
        if g & image != fimg:
            return CepReport(False, len(filters), {
                "filter": sorted(f),
                "extension": sorted(g),
                "trace": sorted(g & image),
            })
    return CepReport(True, len(filters))


# ---------------------------------------------------------------- deduction

@dataclass
class LddtResult:
    status: str  # "witness", "none" or "inconclusive"
    blocks: list = field(default_factory=list)
    elements: list = field(default_factory=list)

    @property
    def found(self):
        return self.status == "witness"


def block_words(names, max_len):
    for k in range(1, max_len + 1):
        yield from itertools.product(names, repeat=k)


def apply_word(A: FiniteAlgebra, word, x) -> int:
    # the rightmost letter acts first: (G H) x = G(H(x))
    for name in reversed(word):
        x = int(A.modals[name][x])
    return x


def lddt_witness(A: FiniteAlgebra, gamma, delta, psi, max_product=4, max_block=4) -> LddtResult:
    """Search I-blocks M_j and elements d_j of delta with prod M_j(d_j) -> psi in Fg(gamma).

    Order: increasing product length, then block words by (length, lexicographic).
    Candidates with equal values are represented by their first occurrence, so
    idempotent modals always yield single-letter blocks.
    """
    gamma = [int(x) for x in gamma]
    delta = sorted({int(x) for x in delta})
    psi = int(psi)
    fg_gamma = generate_filter(A, gamma)
    names = sorted(A.modals)
    reps = {}
    for word in block_words(names, max_block):
        for d in delta:
            reps.setdefault(apply_word(A, word, d), (word, d))
    cands = sorted(reps.items(), key=lambda kv: (len(kv[1][0]), kv[1][0], kv[1][1]))
    for n in range(max_product + 1):
        for combo in itertools.combinations_with_replacement(range(len(cands)), n):
            value = A.one
            for c in combo:
                value = int(A.mult[value, cands[c][0]])
            if int(A.impl[value, psi]) in fg_gamma:
                return LddtResult(
                    "witness",
                    [list(cands[c][1][0]) for c in combo],
                    [cands[c][1][1] for c in combo],
                )
    if psi in generate_filter(A, gamma + delta):
        return LddtResult("inconclusive")
    return LddtResult("none")


def lambda_power(A: FiniteAlgebra, x: int, m: int) -> int:
    """lambda^m(x) with lambda(x) the product of all modal images in declared order."""
    if m < 0:
        raise ValueError("power must be nonnegative")
    if m and not A.modals:
        raise AlgebraError("lambda needs at least one modal")
    x = int(x)
    for _ in range(m):
        value = A.one
        for box in A.modals.values():
            value = int(A.mult[value, box[x]])
        x = value
    return x
