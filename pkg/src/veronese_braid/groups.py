"""Concrete presentations: G_0(9), H_{9,0} and (with t) H_9.

Two readings of the same-index commutator [xi_i, g_i] are supported:

``zeta-primary``
    generators xi_i (infinite) and zeta_i (order 3, central), g_i is the word
    zeta_i xi_i.  Here [xi_i, g_i] = 1 and g_i^3 = xi_i^3 hold exactly.
``literal-4.13``
    generators g_i and xi_i, every non-disjoint pair (including xi_i, g_i)
    commuting up to c.  No torsion relation can be imposed in this reading.
"""
from __future__ import annotations

import itertools

from .cext import INFINITE, CExtElement, CExtPresentation, eval_word
from .tsystem import TSystem

ZETA_PRIMARY = "zeta-primary"
LITERAL = "literal-4.13"
CONVENTIONS = (ZETA_PRIMARY, LITERAL)


def _adjacent_pairs(tsys: TSystem, fam_a: str, fam_b: str, same_index: bool):
    for i, j in itertools.product(tsys.indices, repeat=2):
        if i == j:
            if same_index and fam_a != fam_b:
                yield f"{fam_a}{i}", f"{fam_b}{j}"
            continue
        if tsys.is_adjacent(i, j) and (fam_a != fam_b or i < j):
            yield f"{fam_a}{i}", f"{fam_b}{j}"


def g0_presentation(tsys: TSystem) -> CExtPresentation:
    """G_0(9): g_i with [g_i, g_j] = tau unless T_i, T_j are disjoint."""
    gens = [(f"g{i}", INFINITE) for i in tsys.indices]
    return CExtPresentation.build(gens, _adjacent_pairs(tsys, "g", "g", False), "tau")


def h90_presentation(tsys: TSystem, convention: str = ZETA_PRIMARY) -> CExtPresentation:
    if convention == ZETA_PRIMARY:
        gens = [(f"xi{i}", INFINITE) for i in tsys.indices]
        gens += [(f"zeta{i}", 3) for i in tsys.indices]
        pres = CExtPresentation.build(gens, _adjacent_pairs(tsys, "xi", "xi", False), "c")
        return with_g_aliases(pres, tsys)
    if convention == LITERAL:
        gens = [(f"xi{i}", INFINITE) for i in tsys.indices]
        gens += [(f"g{i}", INFINITE) for i in tsys.indices]
        pairs = list(_adjacent_pairs(tsys, "xi", "xi", False))
        pairs += _adjacent_pairs(tsys, "g", "g", False)
        pairs += _adjacent_pairs(tsys, "xi", "g", True)
        pres = CExtPresentation.build(gens, pairs, "c")
        aliases = {
            f"zeta{i}": eval_word(pres, [(f"g{i}", 1), (f"xi{i}", -1)]) for i in tsys.indices
        }
        return pres.with_aliases(aliases)
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def with_g_aliases(pres: CExtPresentation, tsys: TSystem) -> CExtPresentation:
    aliases = {
        f"g{i}": eval_word(pres, [(f"zeta{i}", 1), (f"xi{i}", 1)]) for i in tsys.indices
    }
    return pres.with_aliases(aliases)


def extend_with_t(base: CExtPresentation, t_pairs: dict[str, int],
                  tsys: TSystem, convention: str) -> CExtPresentation:
    """Prepend t = T_1^2 with the given commutator bits against each generator."""
    names = ("t",) + base.names
    orders = (INFINITE,) + base.orders
    row = tuple(t_pairs.get(g, 0) for g in base.names)
    pairing = ((0,) + row,) + tuple(
        (row[k],) + base.pairing[k] for k in range(base.rank)
    )
    pres = CExtPresentation(names, orders, pairing, base.bit_name)
    if convention == ZETA_PRIMARY:
        return with_g_aliases(pres, tsys)
    aliases = {
        f"zeta{i}": eval_word(pres, [(f"g{i}", 1), (f"xi{i}", -1)]) for i in tsys.indices
    }
    return pres.with_aliases(aliases)


def transport(element: CExtElement, target: CExtPresentation) -> CExtElement:
    """Re-express an element of a sub-presentation inside ``target``."""
    src = element.presentation
    exps = [0] * target.rank
    for name, e in zip(src.names, element.exps):
        exps[target.index(name)] = e
    # generator order is preserved, so no reordering bit arises
    order = [target.index(n) for n in src.names]
    if order != sorted(order):
        raise ValueError("transport requires the source order to be preserved")
    return CExtElement(target, tuple(exps), element.bit)
