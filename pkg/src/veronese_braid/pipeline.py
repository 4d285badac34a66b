"""Sequential verification run: tsystem -> action -> series."""
from __future__ import annotations

import fnmatch
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .action import ActionTable, verify_action_well_defined
from .braid_core import classify_pair, permutation_of
from .groups import ZETA_PRIMARY, g0_presentation
from .report import ClaimReport, claim_sort_key
from .series import (
    UP_TO_C,
    Model,
    SeriesResult,
    assemble_delta,
    compare_readings,
    compute_series,
    derive_lemma_5_6,
    series_reports,
    verify_conjugated_generators,
    verify_delta_centrality_projection,
    verify_square_commutators,
    verify_squares_in_model,
)
from .tsystem import (
    TSystem,
    assignment_permutations,
    generated_group_is_symmetric,
    realize_in_B9,
    replay_claim_4_4,
    solve_assignment,
)


class ConfigError(ValueError):
    def __init__(self, message: str, diagnostics: list[str] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


def _schema(name: str) -> dict:
    return json.loads(resources.files("veronese_braid.data").joinpath(name).read_text())


def default_config_path() -> Path:
    return Path(str(resources.files("veronese_braid.data").joinpath("config.json")))


@dataclass
class Config:
    tsystem: dict
    axioms: dict
    reference: dict
    action_overrides: dict | None = None
    source: str = "<default>"

    @classmethod
    def load(cls, path: str | Path | None = None) -> Config:
        path = Path(path) if path is not None else default_config_path()
        try:
            raw = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        validator = jsonschema.Draft202012Validator(_schema("config.schema.json"))
        errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
        if errors:
            diags = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
            raise ConfigError(f"invalid config {path}", diags)

        def read(key: str) -> dict | None:
            if key not in raw:
                return None
            target = (path.parent / raw[key]).resolve()
            try:
                return json.loads(target.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read {key} file {target}: {exc}") from exc

        reference = read("reference")
        if reference is None:
            reference = json.loads(resources.files("veronese_braid.data")
                                   .joinpath("reference.json").read_text())
        return cls(read("tsystem"), read("axioms"), reference, read("action_overrides"), str(path))


@dataclass
class RunResult:
    reports: list[ClaimReport]
    series: SeriesResult | None = None
    meta: dict = field(default_factory=dict)

    def exit_code(self, strict: bool = False) -> int:
        for r in self.reports:
            if r.status == "FAIL":
                return 1
            if r.status == "DISCREPANCY" and r.claim_id not in UP_TO_C:
                return 1
            if strict and r.status in ("PASS_MOD_C", "DISCREPANCY"):
                return 1
        return 0


def assignment_report(tsys: TSystem, assignment) -> ClaimReport:
    problems = tsys.validate()
    perms = assignment_permutations(assignment, len(tsys.indices) + 1)
    symmetric = generated_group_is_symmetric(perms)
    trace = [f"T{i} -> ({a} {b})" for i, (a, b) in sorted(assignment.items())]
    trace += problems
    trace.append(f"transpositions generate S{len(tsys.indices) + 1}: {symmetric}")
    ok = not problems and symmetric
    return ClaimReport("4.3", "PASS" if ok else "FAIL",
                       {f"T{i}": list(p) for i, p in sorted(assignment.items())},
                       "adjacency table of the T-system", trace)


def t4_report(model: Model) -> ClaimReport:
    h = model.half_twists[4]
    perm = permutation_of(h.word)
    base, conj = model.tsys.derived[4]
    neighbour = classify_pair(h, model.half_twists[6])
    ok = perm.is_transposition() and neighbour == "adjacent"
    trace = [f"T4 = (T{base})_{{{' '.join(f'T{k}' if k > 0 else f'T{-k}^-1' for k in conj)}}}",
             f"S9 image {perm}", f"endpoints {sorted(h.endpoints)}",
             f"T4 and T6 are {neighbour}"]
    return ClaimReport("5.2", "PASS" if ok else "FAIL", sorted(h.endpoints),
                       "T4 is a half-twist", trace)


def run_pipeline(config: Config, convention: str = ZETA_PRIMARY) -> RunResult:
    reports: list[ClaimReport] = []
    tsys = TSystem.from_dict(config.tsystem)

    # tsystem
    assignment = solve_assignment(tsys)
    reports.append(assignment_report(tsys, assignment))
    realization = realize_in_B9(tsys, assignment)
    reports.append(replay_claim_4_4(tsys, realization))

    # action
    table = ActionTable.from_tsystem(tsys, config.action_overrides)
    g0 = g0_presentation(tsys)
    reports.append(verify_action_well_defined(table, tsys, g0, "4.6"))
    reports.append(compare_readings(tsys, table))
    model = Model(tsys, table, realization, assignment, convention)
    reports.append(verify_action_well_defined(table, tsys, model.h90, "5.7"))
    reports.append(t4_report(model))
    reports.append(verify_square_commutators(model, g0))

    # series
    reports += verify_conjugated_generators(model, config.reference["claim_5_8"])
    lemma = derive_lemma_5_6(model, config.axioms, config.reference)
    reports += lemma.reports
    reports.append(verify_squares_in_model(model, lemma.rules))
    series = None
    if all(r.status != "FAIL" for r in lemma.reports):
        delta = assemble_delta(model, lemma.rules, config.axioms, config.reference)
        reports += delta.reports
        reports.append(verify_delta_centrality_projection(model, delta.delta))
        series = compute_series(delta.delta, tsys, assignment, delta.s9_image, convention)
        reports += series_reports(series, delta.delta, config.reference)

    reports.sort(key=lambda r: claim_sort_key(r.claim_id))
    meta = {"convention": convention, "claims": len(reports)}
    return RunResult(reports, series, meta)


def filter_reports(reports: list[ClaimReport], pattern: str | None) -> list[ClaimReport]:
    if not pattern:
        return list(reports)
    return [r for r in reports if fnmatch.fnmatchcase(r.claim_id, pattern)]


def validate_report(payload: dict) -> None:
    jsonschema.validate(payload, _schema("report.schema.json"))
