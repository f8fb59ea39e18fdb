"""Slow pure-Python reference implementations used to cross-check the package.

Nothing here imports numpy-backed helpers from gblx beyond reading tables.
"""
from fractions import Fraction
from itertools import product


def luk_value(i, n):
    return Fraction(i, n - 1)


def luk_tables(n):
    """Lukasiewicz operations computed on rationals, then mapped back to indices."""
    vals = [luk_value(i, n) for i in range(n)]
    idx = {v: i for i, v in enumerate(vals)}
    mult = [[idx[max(Fraction(0), a + b - 1)] for b in vals] for a in vals]
    impl = [[idx[min(Fraction(1), 1 - a + b)] for b in vals] for a in vals]
    meet = [[idx[min(a, b)] for b in vals] for a in vals]
    join = [[idx[max(a, b)] for b in vals] for a in vals]
    return meet, join, mult, impl


def tables(A):
    return (A.meet.tolist(), A.join.tolist(), A.mult.tolist(), A.impl.tolist(),
            {k: v.tolist() for k, v in A.modals.items()})


def leq(meet, x, y):
    return meet[x][y] == x


def rl_ok(A):
    m, j, t, i, _ = tables(A)
    r = range(A.n)
    for x, y in product(r, r):
        if m[x][y] != m[y][x] or j[x][y] != j[y][x] or t[x][y] != t[y][x]:
            return False
        if m[x][j[x][y]] != x or j[x][m[x][y]] != x:
            return False
    for x, y, z in product(r, r, r):
        if m[m[x][y]][z] != m[x][m[y][z]] or t[t[x][y]][z] != t[x][t[y][z]]:
            return False
        if j[j[x][y]][z] != j[x][j[y][z]]:
            return False
        if leq(m, t[x][y], z) != leq(m, x, i[y][z]):
            return False
    return all(t[x][A.one] == x and leq(m, A.zero, x) and leq(m, x, A.one) for x in r)


def divisible(A):
    m, _, t, i, _ = tables(A)
    return all(t[x][i[x][y]] == m[x][y] for x, y in product(range(A.n), repeat=2))


def prelinear(A):
    _, j, _, i, _ = tables(A)
    return all(j[i[x][y]][i[y][x]] == A.one for x, y in product(range(A.n), repeat=2))


def involutive(A):
    _, _, _, i, _ = tables(A)
    return all(i[i[x][A.zero]][A.zero] == x for x in range(A.n))


def interior_endo(A, box):
    m, _, t, _, _ = tables(A)
    r = range(A.n)
    for x, y in product(r, r):
        if box[m[x][y]] != m[box[x]][box[y]] or box[t[x][y]] != t[box[x]][box[y]]:
            return False
    return (box[A.zero] == A.zero and box[A.one] == A.one
            and all(leq(m, box[x], x) and box[box[x]] == box[x] for x in r))


def evaluate(A, h, f):
    """Recursive evaluation through Python lists."""
    from gblx import syntax as sx
    m, j, t, i, mods = tables(A)
    ops = {"&": m, "|": j, "*": t, "->": i}

    def ev(g):
        if isinstance(g, sx.Var):
            return h[g.index]
        if isinstance(g, sx.Zero):
            return A.zero
        if isinstance(g, sx.One):
            return A.one
        if isinstance(g, sx.Modal):
            return mods[g.name][ev(g.sub)]
        return ops[g.symbol][ev(g.left)][ev(g.right)]

    return ev(f)


def filters_by_subsets(A):
    """Every I-filter, by testing all subsets of the carrier."""
    m, _, t, _, mods = tables(A)
    out = []
    for bits in range(1, 2 ** A.n):
        S = {x for x in range(A.n) if bits >> x & 1}
        up = all(y in S for x in S for y in range(A.n) if leq(m, x, y))
        closed = all(t[x][y] in S for x in S for y in S)
        modal = all(b[x] in S for b in mods.values() for x in S)
        if up and closed and modal:
            out.append(frozenset(S))
    return out


def set_partitions(n):
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for k in range(len(part)):
            yield part[:k] + [part[k] | {n - 1}] + part[k + 1:]
        yield part + [{n - 1}]


def congruences_by_partitions(A):
    """Every congruence, by testing all set partitions of the carrier."""
    m, j, t, i, mods = tables(A)
    out = []
    for part in set_partitions(A.n):
        label = [0] * A.n
        for k, block in enumerate(part):
            for x in block:
                label[x] = k
        ok = True
        for x, y in product(range(A.n), repeat=2):
            if label[x] != label[y]:
                continue
            for b in mods.values():
                if label[b[x]] != label[b[y]]:
                    ok = False
            for op in (m, j, t, i):
                for z in range(A.n):
                    if label[op[x][z]] != label[op[y][z]] or label[op[z][x]] != label[op[z][y]]:
                        ok = False
            if not ok:
                break
        if ok:
            out.append(tuple(label))
    return out
