"""The built-in corpus of small algebras used by the property suites."""
from __future__ import annotations

import itertools
from functools import lru_cache

from .algebra import FiniteAlgebra, direct_product, godel_chain, identity_modal, lukasiewicz_chain
from .posetprod import FinitePoset, build_modal_product, conucleus_image

CHAIN_SIZES = (2, 3, 4, 5)
FACTOR_SIZES = (2, 3)


def small_posets():
    """The eight posets with at most three elements, up to isomorphism."""
    return [
        ("1", FinitePoset.chain(1)),
        ("2-chain", FinitePoset.chain(2)),
        ("2-antichain", FinitePoset.antichain(2)),
        ("3-chain", FinitePoset.chain(3)),
        ("3-antichain", FinitePoset.antichain(3)),
        ("V", FinitePoset.from_pairs(3, [(0, 1), (0, 2)])),
        ("Lambda", FinitePoset.from_pairs(3, [(0, 2), (1, 2)])),
        ("2-chain+1", FinitePoset.from_pairs(3, [(0, 1)])),
    ]


@lru_cache(maxsize=None)
def chains():
    return tuple(lukasiewicz_chain(n) for n in CHAIN_SIZES)


@lru_cache(maxsize=None)
def pair_products():
    out = []
    for i, j in itertools.combinations_with_replacement(CHAIN_SIZES, 2):
        out.append(direct_product([lukasiewicz_chain(i), lukasiewicz_chain(j)], name=f"L{i}xL{j}"))
    return tuple(out)


@lru_cache(maxsize=None)
def poset_products():
    """Every small poset with every assignment of L2/L3 factors."""
    out = []
    for pname, P in small_posets():
        for sizes in itertools.product(FACTOR_SIZES, repeat=P.size):
            factors = [lukasiewicz_chain(n) for n in sizes]
            label = ",".join(f"L{n}" for n in sizes)
            out.append(build_modal_product(P, factors, name=f"PP[{pname};{label}]"))
    return tuple(out)


@lru_cache(maxsize=None)
def s4mv_algebras():
    """Modal variants with box = identity on chains and products, box = sigma on poset products."""
    plain = [identity_modal(A, "box", name=A.name + "/id") for A in chains() + pair_products()]
    return tuple(plain + [mp.s4mv for mp in poset_products()])


@lru_cache(maxsize=None)
def s4tmv_algebras():
    """G = H = identity on chains and products; (sigma, ~delta~) on poset products."""
    plain = [identity_modal(A, "G", "H", name=A.name + "/t-id") for A in chains() + pair_products()]
    return tuple(plain + [mp.s4tmv for mp in poset_products()])


@lru_cache(maxsize=None)
def modal_algebras():
    return s4mv_algebras() + s4tmv_algebras()


@lru_cache(maxsize=None)
def gbl_images():
    """Conucleus images of the sigma conucleus; GBL-algebras that are mostly not MV."""
    out = []
    for mp in poset_products():
        if mp.labeled.poset.lt.any():
            out.append(conucleus_image(mp.s4mv, "box", name=mp.s4mv.name + "_box"))
    return tuple(out)


@lru_cache(maxsize=None)
def plain_algebras():
    """Modal-free corpus: chains, products, poset-product carriers, Goedel chains, images."""
    pp = [mp.s4mv.reduct(mp.s4mv.name + "/B") for mp in poset_products()]
    godel = [godel_chain(n) for n in (2, 3, 4)]
    return chains() + pair_products() + tuple(pp) + tuple(godel) + gbl_images()


@lru_cache(maxsize=None)
def all_algebras():
    return plain_algebras() + modal_algebras()


NAMED = {
    "plain": plain_algebras,
    "s4mv": s4mv_algebras,
    "s4tmv": s4tmv_algebras,
    "modal": modal_algebras,
    "all": all_algebras,
}


def by_name(name) -> FiniteAlgebra:
    for A in all_algebras():
        if A.name == name:
            return A
    raise KeyError(name)


def corpus_summary():
    return {k: len(f()) for k, f in NAMED.items()}
