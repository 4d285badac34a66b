"""Replay of the projective relation delta and the quotient series it leaves.

Squares of half-twists are handled symbolically: a ``SquareFact`` records an
identity  X^{2a} Y^{2b} = value  with the value living in the H_9 model.  The
only moves are inversion, swapping two adjacent squares (costs one c) and
chaining through a cancelling middle square.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .action import Action, ActionTable, conjugated_generator, h9_presentation
from .braid_core import HalfTwistWord, Permutation, classify_pair, permutation_of
from .cext import INFINITE, CExtElement, CExtPresentation, commutator, eval_word, format_element, parse_word, power
from .groups import LITERAL, ZETA_PRIMARY, h90_presentation, transport
from .report import ClaimReport
from .snf import AbelianStructure, quotient_structure
from .tsystem import (
    TSystem,
    assignment_permutations,
    derived_half_twist,
    generated_group_is_symmetric,
    word_in_t,
)

UP_TO_C = ("5.9", "5.10")


def load_json(name: str, path: str | Path | None = None) -> dict:
    if path is None:
        return json.loads(resources.files("veronese_braid.data").joinpath(name).read_text())
    return json.loads(Path(path).read_text())


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class SquareFact:
    left: tuple[str, int]
    right: tuple[str, int]
    value: CExtElement

    def label(self) -> str:
        (a, ea), (b, eb) = self.left, self.right
        return f"{a}^{2 * ea} {b}^{2 * eb} = {format_element(self.value)}"


class SquareAlgebra:
    """Moves on SquareFacts, each one appended to ``trace``."""

    def __init__(self, pres: CExtPresentation, half_twists: Mapping[str, HalfTwistWord]):
        self.p = pres
        self.half_twists = half_twists
        self.trace: list[str] = []

    def invert(self, f: SquareFact) -> SquareFact:
        g = SquareFact((f.right[0], -f.right[1]), (f.left[0], -f.left[1]),
                       power(self.p, f.value, -1))
        self.trace.append(f"invert: {g.label()}")
        return g

    def swap(self, f: SquareFact) -> SquareFact:
        a, b = self.half_twists[f.left[0]], self.half_twists[f.right[0]]
        kind = classify_pair(a, b)
        if kind != "adjacent":
            raise DerivationError(f"cannot swap {f.left[0]}, {f.right[0]}: they are {kind}")
        g = SquareFact(f.right, f.left, f.value * self.p.central())
        self.trace.append(f"swap ({f.left[0]}, {f.right[0]} adjacent): {g.label()}")
        return g

    def chain(self, f: SquareFact, g: SquareFact) -> SquareFact:
        if f.right[0] != g.left[0] or f.right[1] != -g.left[1]:
            raise DerivationError(f"cannot chain {f.label()} with {g.label()}")
        h = SquareFact(f.left, g.right, f.value * g.value)
        self.trace.append(f"chain: {h.label()}")
        return h

    def orient(self, f: SquareFact, left: str, right: str) -> SquareFact:
        """Bring f to the shape  left^2 right^-2."""
        want = ((left, 1), (right, -1))
        if (f.left, f.right) == want:
            return f
        if ((f.right[0], -f.right[1]), (f.left[0], -f.left[1])) == want:
            return self.invert(f)
        if (f.right, f.left) == want:
            return self.swap(f)
        if ((f.left[0], -f.left[1]), (f.right[0], -f.right[1])) == want:
            return self.swap(self.invert(f))
        raise DerivationError(f"{f.label()} cannot be oriented as {left}^2 {right}^-2")

    def take(self) -> list[str]:
        out, self.trace = self.trace, []
        return out


def word(pres: CExtPresentation, text: str) -> CExtElement:
    return eval_word(pres, parse_word(text))


def compare(derived: CExtElement, printed: CExtElement) -> str:
    if derived == printed:
        return "PASS"
    if derived.exps == printed.exps:
        return "PASS_MOD_C"
    return "DISCREPANCY"


def _roman(k: int) -> str:
    return ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")[k]


@dataclass
class Model:
    """The H_9 model with xi_4, g_4 and T_4 expanded, shared by all stages."""

    tsys: TSystem
    table: ActionTable
    realization: dict[int, HalfTwistWord]
    assignment: dict[int, tuple[int, int]]
    convention: str = ZETA_PRIMARY
    h90: CExtPresentation = field(init=False)
    pres: CExtPresentation = field(init=False)
    half_twists: dict[int, HalfTwistWord] = field(init=False)

    def __post_init__(self) -> None:
        base, conj = self.tsys.derived[4]
        h90 = h90_presentation(self.tsys, self.convention)
        derived = {
            f"{fam}4": conjugated_generator(self.table, f"{fam}{base}", conj, h90)
            for fam in ("xi", "g")
        }
        self.h90 = h90.with_aliases(derived)
        h9 = h9_presentation(self.table, self.convention)
        self.pres = h9.with_aliases({k: transport(v, h9) for k, v in derived.items()})
        self.half_twists = dict(self.realization)
        self.half_twists[4] = derived_half_twist(self.tsys, self.realization, 4)

    @property
    def t_index(self) -> int:
        return self.tsys.indices[0]


# ---------------------------------------------------------------- xi_4 and g_4

def verify_conjugated_generators(model: Model, reference: dict) -> list[ClaimReport]:
    p = model.h90
    base, conj = model.tsys.derived[4]
    reports = []
    action = Action(model.table, p)
    for item, fam in (("i", "xi"), ("ii", "g")):
        x = p.gen(f"{fam}{base}")
        trace = [f"{fam}4 = ({fam}{base})_{{T8^-1 T7 T3^-1 T2}}"]
        steps_ok = True
        for k in range(1, len(conj) + 1):
            x = action.act_letter(x, conj[k - 1])
            prefix = " ".join(f"T{a}" if a > 0 else f"T{-a}^-1" for a in conj[:k])
            trace.append(f"({fam}{base})_{{{prefix}}} = {format_element(x)}")
            if fam == "xi" and k == 2:
                printed = word(p, reference["xi5_by_T8inv_T7"])
                st = compare(x, printed)
                trace.append(f"printed intermediate {reference['xi5_by_T8inv_T7']}: {st}")
                steps_ok = st in ("PASS", "PASS_MOD_C")
        printed = word(p, reference[f"{fam}4"])
        status = compare(x, printed)
        if not steps_ok and status != "DISCREPANCY":
            status = "DISCREPANCY"
        reports.append(ClaimReport(f"5.8.{item}", status, format_element(x),
                                   reference[f"{fam}4"], trace))
    return reports


# ---------------------------------------------------------------- square ratios

@dataclass
class LemmaResult:
    rules: dict[tuple[int, int], SquareFact]
    reports: list[ClaimReport]


def derive_lemma_5_6(model: Model, axioms: dict, reference: dict) -> LemmaResult:
    p = model.pres
    half_twists: dict[str, HalfTwistWord] = {f"T{i}": h for i, h in model.half_twists.items()}
    for ident in axioms["triangle_identities"]:
        aux = ident["aux"]
        h = model.half_twists[aux["base"]]
        conj = word_in_t(model.half_twists, tuple(aux["by"]), h.n)
        half_twists[aux["name"]] = HalfTwistWord(h.n, h.base, h.conjugator * conj, "disjoint")
    alg = SquareAlgebra(p, half_twists)
    rules: dict[tuple[int, int], SquareFact] = {}
    reports: list[ClaimReport] = []

    for ident in axioms["triangle_identities"]:
        a, b = ident["pair"]
        aux = ident["aux"]["name"]
        facts = [SquareFact(tuple(inst["lhs"][0]), tuple(inst["lhs"][1]), word(p, inst["rhs"]))
                 for inst in ident["instances"]]
        trace = [f"axiom ({inst['case']}): {f.label()}" for inst, f in zip(ident["instances"], facts)]
        trace.append(f"{aux} = {ident['justification']}")
        with_b = next(f for f in facts if f"T{b}" in (f.left[0], f.right[0]))
        with_a = next(f for f in facts if f"T{a}" in (f.left[0], f.right[0]))
        try:
            rule = alg.chain(alg.orient(with_b, f"T{b}", aux), alg.orient(with_a, aux, f"T{a}"))
        except DerivationError as exc:
            trace += alg.take() + [f"derivation failed: {exc}"]
            reports.append(ClaimReport(f"5.5.T{b}T{a}", "FAIL", None, "n/a", trace))
            continue
        trace += alg.take()
        rules[(b, a)] = rule
        reports.append(ClaimReport(
            f"5.5.T{b}T{a}", "ASSUMED", rule.label(),
            [f"{f.label()}" for f in facts], trace))

    def lookup(i: int, j: int) -> SquareFact:
        if (i, j) not in rules:
            if (j, i) not in rules:
                raise DerivationError(f"no identity for T{i}^2 T{j}^-2")
            rules[(i, j)] = alg.invert(rules[(j, i)])
        return rules[(i, j)]

    printed_values = reference["lemma_5_6"]
    for chain in axioms["chains"]:
        item = chain["item"]
        i, j = chain["target"]
        try:
            facts = [lookup(*step) for step in chain["steps"]]
            result = facts[0]
            for f in facts[1:]:
                result = alg.chain(result, f)
        except DerivationError as exc:
            reports.append(ClaimReport(f"5.6.{item}", "FAIL", None, printed_values[item],
                                       alg.take() + [f"derivation failed: {exc}"]))
            continue
        trace = [f"uses {rules[tuple(s)].label()}" for s in chain["steps"]] + alg.take()
        rules[(i, j)] = result
        printed = word(p, printed_values[item])
        status = compare(result.value, printed)
        trace.append(f"exact bit derived: {result.value.bit}, printed: {printed.bit}")
        reports.append(ClaimReport(f"5.6.{item}", status, format_element(result.value),
                                   printed_values[item], trace))
    return LemmaResult(rules, reports)


def square_ratio(rules: Mapping[tuple[int, int], SquareFact], i: int, first: int,
                 pres: CExtPresentation) -> CExtElement:
    """T_i^2 T_first^-2 as an element (identity for i = first)."""
    if i == first:
        return pres.identity()
    return rules[(i, first)].value


def square_element(model: Model, rules, i: int) -> CExtElement:
    """T_i^2 = (T_i^2 T_1^-2) T_1^2 in the H_9 model."""
    p = model.pres
    return square_ratio(rules, i, model.t_index, p) * p.gen("t")


# ---------------------------------------------------------------- square commutators

def verify_square_commutators(model: Model, g0: CExtPresentation) -> ClaimReport:
    from .action import square_commutators

    trace = []
    bad = []
    derived = {}
    for fam, pres in (("g", g0), ("xi", model.h90)):
        comms = square_commutators(model.table, pres, fam)
        for (k, j), val in sorted(comms.items()):
            expect = 1 if (k != j and model.tsys.is_adjacent(k, j)) else 0
            ok = val.is_central_bit() if expect else val.is_identity()
            derived[f"[T{k}^2,{fam}{j}]"] = format_element(val)
            if not ok:
                bad.append(f"[T{k}^2,{fam}{j}] = {format_element(val)}")
        trace.append(f"{fam}-family: {len(comms)} commutators, "
                     f"{sum(1 for v in comms.values() if v.is_central_bit())} equal to the central bit")
    trace += [f"unexpected: {b}" for b in bad]
    return ClaimReport("5.3.ii", "FAIL" if bad else "PASS", derived,
                       "c for adjacent (j,k); 1 for disjoint and j = k", trace)


def verify_squares_in_model(model: Model, rules) -> ClaimReport:
    """Cross-check the square ratios against the adjacency of squares and the action."""
    p = model.pres
    idx = sorted(set(model.tsys.indices) | {4})
    squares = {i: square_element(model, rules, i) for i in idx}
    trace, bad = [], []
    for i, j in itertools.combinations(idx, 2):
        kind = classify_pair(model.half_twists[i], model.half_twists[j])
        val = commutator(p, squares[i], squares[j])
        expect = 1 if kind == "adjacent" else 0
        ok = (val.is_central_bit() if expect else val.is_identity())
        trace.append(f"[T{i}^2, T{j}^2] = {format_element(val)} ({kind}) -> {'ok' if ok else 'FAIL'}")
        if not ok:
            bad.append(f"[T{i}^2,T{j}^2]")
    action = Action(model.table, model.h90)
    for k in model.tsys.indices:
        for name in model.h90.names:
            x = model.h90.gen(name)
            via_action = action.act((-k, -k), x) * power(model.h90, x, -1)
            via_model = commutator(p, squares[k], transport(x, p))
            if transport(via_action, p) != via_model:
                bad.append(f"[T{k}^2,{name}] model/action mismatch")
    trace.append(f"[T_k^2, x] from the model agrees with the action for all k, x: "
                 f"{'ok' if not any('mismatch' in b for b in bad) else 'FAIL'}")
    return ClaimReport("5.3.iii", "FAIL" if bad else "PASS",
                       {f"T{i}^2": format_element(v) for i, v in squares.items()},
                       "[X^2, Y^2] = c for adjacent X, Y", trace)


# ---------------------------------------------------------------- delta

@dataclass
class DeltaResult:
    delta: CExtElement
    factors: dict[int, CExtElement]
    s9_image: Permutation
    reports: list[ClaimReport]


def _torsion_lattice_equal(model: Model, a: CExtElement, b: CExtElement) -> bool:
    """Equality of exponent vectors modulo zeta_i^3 (literal reading only)."""
    p = a.presentation
    diff = [x - y for x, y in zip(a.exps, b.exps)]
    for i in model.tsys.indices:
        dg, dx = diff[p.index(f"g{i}")], diff[p.index(f"xi{i}")]
        if dg % 3 or dg + dx:
            return False
        diff[p.index(f"g{i}")] = diff[p.index(f"xi{i}")] = 0
    return not any(diff)


def _compare_forms(model: Model, derived: CExtElement, printed: CExtElement) -> str:
    status = compare(derived, printed)
    if status == "DISCREPANCY" and model.convention == LITERAL and _torsion_lattice_equal(model, derived, printed):
        return "PASS_MOD_C"
    return status


def assemble_delta(model: Model, rules, axioms: dict, reference: dict) -> DeltaResult:
    p = model.pres
    t = p.gen("t")
    first = model.t_index
    factors: dict[int, CExtElement] = {}
    trace = []
    s9 = Permutation.identity(9)
    delta = p.identity()
    for i in range(9, 0, -1):
        a_i = word(p, axioms["beta_hat"][str(i)])
        ratio = square_ratio(rules, i, first, p)
        factors[i] = a_i * ratio * t
        delta = delta * factors[i]
        sq = model.half_twists[i].word * model.half_twists[i].word
        s9 = s9 * permutation_of(sq)
        trace.append(f"factor {i}: ({axioms['beta_hat'][str(i)]}) (T{i}^2 T{first}^-2 = "
                     f"{format_element(ratio)}) t = {format_element(factors[i])}")
        trace.append(f"running product: {format_element(delta)}")

    beta = ClaimReport("5.4", "ASSUMED",
                       {str(i): axioms["beta_hat"][str(i)] for i in range(1, 10)},
                       "n/a", ["factor i = A_i T_i^2 with A_i as tabulated"] + axioms.get("beta_hat_notes", []))

    ab_degree = 2 * delta.get("t")
    member = ClaimReport(
        "5.1", "PASS" if s9.is_identity() else "FAIL",
        {"s9_image": str(s9), "t_exponent": delta.get("t"), "ab_degree": ab_degree},
        "delta in H_9",
        [f"S9 image of T{i}^2 is trivial" for i in range(1, 10)]
        + [f"Ab(delta) = 2 * t-exponent = {ab_degree} (one per loop, 18 loops)"],
    )

    p59 = word(p, reference["claim_5_9"])
    p510 = word(p, reference["claim_5_10"])
    st59 = _compare_forms(model, delta, p59)
    st510 = _compare_forms(model, delta, p510)
    subst = _compare_forms(model, p59, p510)
    tail = [f"derived: {format_element(delta)}", f"derived bit: {delta.bit}"]
    r59 = ClaimReport("5.9", st59, format_element(delta), reference["claim_5_9"],
                      trace + tail + [f"printed form evaluates to {format_element(p59)}"])
    r510 = ClaimReport("5.10", st510, format_element(delta), reference["claim_5_10"],
                       tail + [f"printed form evaluates to {format_element(p510)}"])
    rsub = ClaimReport("5.10.subst", subst, format_element(p59), format_element(p510),
                       ["substitute g_i = zeta_i xi_i into the printed 5.9 form",
                        "compare with the printed 5.10 form"])
    return DeltaResult(delta, factors, s9, [member, beta, r59, r510, rsub])


# ---------------------------------------------------------------- series

@dataclass(frozen=True)
class SeriesResult:
    q1: str
    q2: AbelianStructure
    q3: AbelianStructure
    q4: AbelianStructure

    def to_dict(self) -> dict:
        return {"q1": self.q1, "q2": list(self.q2.invariant_factors),
                "q3": list(self.q3.invariant_factors), "q4": list(self.q4.invariant_factors)}


class NotInH9(ValueError):
    pass


def _order_mod_torsion(p: CExtPresentation, x: CExtElement) -> int:
    """Order of x modulo the central bit; 0 for infinite."""
    if any(e for e, o in zip(x.exps, p.orders) if o == INFINITE):
        return 0
    return 3 if any(x.exps) else 1


def compute_series(delta: CExtElement, tsys: TSystem, assignment: Mapping[int, tuple[int, int]],
                   s9_image: Permutation | None = None, convention: str = ZETA_PRIMARY) -> SeriesResult:
    if s9_image is not None and not s9_image.is_identity():
        raise NotInH9(f"delta maps to {s9_image} in S9")
    p = delta.presentation
    n = len(tsys.indices) + 1
    q1 = f"S{n}" if generated_group_is_symmetric(assignment_permutations(assignment, n)) else "unknown"

    t_exp = delta.get("t")
    q2 = quotient_structure([0], [[t_exp]])

    rest = [k for k, g in enumerate(p.names) if g != "t"]
    ambient = [p.orders[k] for k in rest]
    relations: list[list[int]] = []
    if convention == LITERAL:
        for i in tsys.indices:
            row = [0] * len(rest)
            row[rest.index(p.index(f"g{i}"))] = 3
            row[rest.index(p.index(f"xi{i}"))] = -3
            relations.append(row)
    if t_exp == 0:
        # delta itself lies in H_{9,0}
        relations.append([delta.exps[k] for k in rest])
    # otherwise <delta> meets H_{9,0} trivially: delta^k has t-exponent k * t_exp
    q3 = quotient_structure(ambient, relations)

    if t_exp != 0:
        q4 = AbelianStructure((2,))
    else:
        m = _order_mod_torsion(p, delta)
        if m == 0:
            q4 = AbelianStructure((2,))
        else:
            q4 = AbelianStructure(() if power(p, delta, m).bit else (2,))
    return SeriesResult(q1, q2, q3, q4)


def series_reports(result: SeriesResult, delta: CExtElement, reference: dict) -> list[ClaimReport]:
    ref = reference["theorem_5_0"]
    t_exp = delta.get("t")
    out = [ClaimReport("thm5.0.q1", "PASS" if result.q1 == ref["q1"] else "FAIL", result.q1, ref["q1"],
                       ["delta lies in H_9, so G/H is untouched",
                        "the T-system transpositions form a spanning tree: transitive and generated by transpositions"])]
    rows = (
        ("q2", result.q2, [f"H_9/H_90 = Z generated by t; delta has t-exponent {t_exp}"]),
        ("q3", result.q3, [f"<delta> meets H_90 trivially since the t-exponent is {t_exp}" if t_exp
                           else "delta lies in H_90 and is added as a relation"]),
        ("q4", result.q4, [f"<c> meets <delta> trivially: delta^k has t-exponent {t_exp}k" if t_exp
                           else "order of delta modulo c decides whether c survives"]),
    )
    for key, val, trace in rows:
        derived = list(val.invariant_factors)
        out.append(ClaimReport(f"thm5.0.{key}", "PASS" if derived == ref[key] else "FAIL",
                               derived, ref[key], trace + [f"structure: {val}"]))
    return out


def verify_delta_centrality_projection(model: Model, delta: CExtElement) -> ClaimReport:
    p = model.pres
    trace, bad = [], []
    for g in p.names + (p.bit_name,):
        val = commutator(p, delta, p.gen(g))
        if not val.is_identity():
            bad.append(f"[delta,{g}] = {format_element(val)}")
    trace.append(f"[delta, x] = 1 for all {p.rank + 1} generators: {'ok' if not bad else 'FAIL'}")

    # xi/zeta part, conjugated by T_k fixing t = T_1^2
    first = model.t_index
    t_exp = delta.get("t")
    body = delta * power(p, p.gen("t"), -t_exp)
    body90 = transport_down(body, model.h90)
    action = Action(model.table, model.h90)
    for k in model.tsys.indices:
        if k != first and model.tsys.is_adjacent(k, first):
            trace.append(f"T{k}: moves t, projection not checkable without the braid word problem")
            continue
        img = action.act((k,), body90)
        ok = img.exps == body90.exps
        trace.append(f"T{k}: ab-image of the xi/zeta part preserved -> {'ok' if ok else 'FAIL'}")
        if not ok:
            bad.append(f"T{k} moves ab-image")
    return ClaimReport("3.2", "FAIL" if bad else "PASS",
                       {"delta": format_element(delta), "failures": bad},
                       "delta is central", trace + ["full centrality is taken from the general argument"])


def transport_down(x: CExtElement, target: CExtPresentation) -> CExtElement:
    p = x.presentation
    if x.get("t"):
        raise ValueError("element has a t component")
    exps = [x.exps[p.index(g)] for g in target.names]
    return CExtElement(target, tuple(exps), x.bit)


# ---------------------------------------------------------------- readings

def compare_readings(tsys: TSystem, table: ActionTable) -> ClaimReport:
    """Which reading of the same-index commutator each identity supports."""
    from .action import automorphism_failures

    rows = {}
    trace = []
    for conv in (ZETA_PRIMARY, LITERAL):
        p = h90_presentation(tsys, conv)
        i = tsys.indices[0]
        g, xi, zeta = p.gen(f"g{i}"), p.gen(f"xi{i}"), p.gen(f"zeta{i}")
        facts = {
            "[xi_i,g_i]": format_element(commutator(p, xi, g)),
            "zeta_i^3": format_element(power(p, zeta, 3)),
            "g_i^3 xi_i^-3": format_element(power(p, g, 3) * power(p, xi, -3)),
            "[zeta_i,xi_i]": format_element(commutator(p, zeta, xi)),
            "action_is_automorphism": not automorphism_failures(Action(table, p)),
        }
        rows[conv] = facts
        trace.append(f"{conv}: " + ", ".join(f"{k} = {v}" for k, v in facts.items()))
    trace.append("g_i^3 = xi_i^3 together with zeta_i^3 = 1 needs [xi_i, g_i] = 1")
    trace.append("the table's 'c otherwise' for i = j makes zeta_i^3 = c and breaks the action")
    status = "PASS" if rows[ZETA_PRIMARY]["action_is_automorphism"] else "FAIL"
    return ClaimReport("4.13", status, rows, "g_i^3 = xi_i^3, zeta_i^3 = 1, [xi_i,g_i] = c otherwise", trace)
