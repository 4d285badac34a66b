"""Action of the T-generators on G_0(9)-type groups.

For f_i = g_i or xi_i and an acting generator T_k:

    k = i                 f_i -> f_i^-1 c          (both signs)
    disjoint              f_i -> f_i
    orderly adjacent      T_k: f_k f_i      T_k^-1: f_i f_k
    not orderly adjacent  T_k: f_i f_k^-1   T_k^-1: f_k^-1 f_i

A word w = w_1 w_2 ... acts as x -> (x)_{w_1} -> ((x)_{w_1})_{w_2} -> ...,
i.e. (x)_w = w^-1 x w in the semidirect product.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cext import CExtElement, CExtPresentation, commutator, power
from .groups import ZETA_PRIMARY, extend_with_t, h90_presentation
from .report import ClaimReport
from .tsystem import TSystem, t_relations

RULES = (
    "invert_with_bit",
    "fix",
    "left_mult_by_f_k",
    "right_mult_by_f_k_inverse",
    "right_mult_by_f_k",
    "left_mult_by_f_k_inverse",
)

_DEFAULT = {
    (+1, "same"): "invert_with_bit",
    (+1, "disjoint"): "fix",
    (+1, "orderly"): "left_mult_by_f_k",
    (+1, "non_orderly"): "right_mult_by_f_k_inverse",
    (-1, "same"): "invert_with_bit",
    (-1, "disjoint"): "fix",
    (-1, "orderly"): "right_mult_by_f_k",
    (-1, "non_orderly"): "left_mult_by_f_k_inverse",
}

ASSUMPTIONS = (
    "'weakly disjoint' is read as disjoint in the adjacency table",
    "the bit symbol nu of the inverse table is read as c (tau in G_0(9))",
    "the 'otherwise' case of the G_0(9) action is read as orderly adjacent",
)

_NAME = re.compile(r"^(g|xi|zeta)(\d+)$")


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class ActionTable:
    tsys: TSystem
    overrides: Mapping[tuple[int, int, int], str] = field(default_factory=dict)

    def rule(self, target: int, actor: int, sign: int) -> str:
        key = (target, actor, sign)
        if key in self.overrides:
            return self.overrides[key]
        return _DEFAULT[(sign, self.tsys.relation(target, actor))]

    @classmethod
    def from_tsystem(cls, tsys: TSystem, overrides: dict | None = None) -> ActionTable:
        parsed = {}
        for entry in (overrides or {}).get("rules", []):
            rule = entry["rule"]
            if rule not in RULES:
                raise ValueError(f"unknown rule {rule!r}")
            parsed[(entry["target"], entry["actor"], entry.get("sign", 1))] = rule
        return cls(tsys, parsed)

    @classmethod
    def load(cls, tsys: TSystem, overrides_path: str | None) -> ActionTable:
        if overrides_path is None:
            return cls(tsys)
        with open(overrides_path) as fh:
            return cls.from_tsystem(tsys, json.load(fh))

    def as_rows(self) -> list[dict]:
        rows = []
        for i, k in itertools.product(self.tsys.indices, repeat=2):
            for s in (1, -1):
                rows.append({"target": i, "actor": k, "sign": s, "rule": self.rule(i, k, s)})
        return rows


def _apply_rule(rule: str, f_i: CExtElement, f_k: CExtElement) -> CExtElement:
    p = f_i.presentation
    if rule == "invert_with_bit":
        return power(p, f_i, -1) * p.central()
    if rule == "fix":
        return f_i
    if rule == "left_mult_by_f_k":
        return f_k * f_i
    if rule == "right_mult_by_f_k_inverse":
        return f_i * power(p, f_k, -1)
    if rule == "right_mult_by_f_k":
        return f_i * f_k
    if rule == "left_mult_by_f_k_inverse":
        return power(p, f_k, -1) * f_i
    raise ValueError(rule)


class Action:
    """Caches generator images for one table and one presentation."""

    def __init__(self, table: ActionTable, presentation: CExtPresentation):
        self.table = table
        self.p = presentation
        self._cache: dict[tuple[str, int, int], CExtElement] = {}

    def _family_image(self, fam: str, i: int, k: int, sign: int) -> CExtElement:
        rule = self.table.rule(i, k, sign)
        return _apply_rule(rule, self.p.gen(f"{fam}{i}"), self.p.gen(f"{fam}{k}"))

    def generator_image(self, name: str, k: int, sign: int) -> CExtElement:
        key = (name, k, sign)
        if key in self._cache:
            return self._cache[key]
        m = _NAME.match(name)
        if not m:
            raise ActionError(f"no action rule for generator {name!r}")
        fam, i = m.group(1), int(m.group(2))
        if i not in self.table.tsys.indices:
            raise ActionError(f"{name} is a derived generator; expand it first")
        if fam in ("g", "xi"):
            img = self._family_image(fam, i, k, sign)
        else:
            # zeta_i = g_i xi_i^-1
            img = self._family_image("g", i, k, sign) * power(
                self.p, self._family_image("xi", i, k, sign), -1)
        self._cache[key] = img
        return img

    def act_letter(self, x: CExtElement, letter: int) -> CExtElement:
        k, sign = abs(letter), (1 if letter > 0 else -1)
        if k not in self.table.tsys.indices:
            raise ActionError(
                f"T{k} is not an acting generator; expand it through its conjugation first")
        p = self.p
        result = p.identity()
        for name, e in zip(p.names, x.exps):
            if e:
                result = result * power(p, self.generator_image(name, k, sign), e)
        if x.bit:
            result = result * p.central()
        return result

    def act(self, word: Sequence[int], x: CExtElement) -> CExtElement:
        for letter in word:
            x = self.act_letter(x, letter)
        return x


def act(table: ActionTable, word: Sequence[int], x: CExtElement) -> CExtElement:
    return Action(table, x.presentation).act(word, x)


def conjugated_generator(table: ActionTable, base: str, conjugator: Sequence[int],
                         presentation: CExtPresentation) -> CExtElement:
    """``(base)_{conjugator}``, e.g. xi_4 = (xi_5)_{T8^-1 T7 T3^-1 T2}."""
    if any(abs(k) == 4 for k in conjugator):
        raise ActionError("conjugator must avoid index 4")
    return Action(table, presentation).act(conjugator, presentation.gen(base))


def _word_label(word: Iterable[int]) -> str:
    return " ".join(f"T{k}" if k > 0 else f"T{-k}^-1" for k in word)


def automorphism_failures(action: Action) -> list[str]:
    """Pairs of generators whose product is not preserved by some T_k^{+-1}."""
    p = action.p
    gens = [p.gen(g) for g in p.names if _NAME.match(g)]
    failures = []
    for k in action.table.tsys.indices:
        for sign in (1, -1):
            for x, y in itertools.product(gens, repeat=2):
                lhs = action.act_letter(y * x, sign * k)
                rhs = action.act_letter(y, sign * k) * action.act_letter(x, sign * k)
                if lhs != rhs:
                    failures.append(f"T{k}^{sign:+d} on {y}*{x}")
    return failures


def verify_action_well_defined(table: ActionTable, tsys: TSystem,
                               presentation: CExtPresentation,
                               claim_id: str = "4.6") -> ClaimReport:
    action = Action(table, presentation)
    gens = [g for g in presentation.names if _NAME.match(g)]
    trace = [f"assumption: {a}" for a in ASSUMPTIONS]
    failures = []

    for k in tsys.indices:
        for g in gens:
            x = presentation.gen(g)
            for w in ((k, -k), (-k, k)):
                if action.act(w, x) != x:
                    failures.append(f"{_word_label(w)} moves {g}")
    trace.append(f"inverse consistency T_k T_k^-1 on {len(gens)} generators: "
                 f"{'ok' if not failures else 'FAIL'}")

    auto = automorphism_failures(action)
    trace.append(f"each T_k^(+-1) preserves products of generators: {'ok' if not auto else 'FAIL'}")
    failures += auto[:20]

    for name, word in t_relations(tsys):
        moved = [g for g in gens if action.act(word, presentation.gen(g)) != presentation.gen(g)]
        trace.append(f"{name} ({_word_label(word)}) fixes all generators: "
                     f"{'ok' if not moved else 'FAIL ' + ','.join(moved)}")
        failures += [f"{name} moves {g}" for g in moved]

    return ClaimReport(
        claim_id,
        "FAIL" if failures else "PASS",
        {"presentation": list(presentation.names), "failures": failures},
        "every relation of the T-system acts trivially",
        trace,
    )


def square_commutators(table: ActionTable, presentation: CExtPresentation,
                       family: str = "g") -> dict[tuple[int, int], CExtElement]:
    """[T_k^2, f_j] = (f_j)_{T_k^-2} f_j^-1 for all k, j."""
    action = Action(table, presentation)
    out = {}
    for k, j in itertools.product(table.tsys.indices, repeat=2):
        x = presentation.gen(f"{family}{j}")
        out[(k, j)] = action.act((-k, -k), x) * power(presentation, x, -1)
    return out


def h9_presentation(table: ActionTable, convention: str = ZETA_PRIMARY) -> CExtPresentation:
    """H_9 model: t = T_1^2 prepended, its commutators derived from the action."""
    tsys = table.tsys
    base = h90_presentation(tsys, convention)
    action = Action(table, base)
    first = tsys.indices[0]
    bits = {}
    for g in base.names:
        x = base.gen(g)
        comm = action.act((-first, -first), x) * power(base, x, -1)
        if not (comm.is_identity() or comm.is_central_bit()):
            raise ActionError(f"[t, {g}] = {comm} is not central")
        bits[g] = comm.bit
    return extend_with_t(base, bits, tsys, convention)


def t_commutator_check(table: ActionTable, presentation: CExtPresentation) -> list[str]:
    """Every [t, x] computed in the model agrees with the action of T_1^2."""
    action = Action(table, presentation)
    first = table.tsys.indices[0]
    bad = []
    t = presentation.gen("t")
    for g in presentation.names:
        if g == "t":
            continue
        x = presentation.gen(g)
        via_model = commutator(presentation, t, x)
        via_action = action.act((-first, -first), x) * power(presentation, x, -1)
        if via_model != via_action:
            bad.append(g)
    return bad
