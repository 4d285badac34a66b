from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

STATUSES = ("PASS", "PASS_MOD_C", "DISCREPANCY", "ASSUMED", "FAIL")


@dataclass
class ClaimReport:
    claim_id: str
    status: str
    derived: Any = None
    paper: Any = "n/a"
    trace: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status in ("PASS", "PASS_MOD_C", "ASSUMED")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["id"] = d.pop("claim_id")
        return d


def claim_sort_key(claim_id: str) -> tuple:
    """Order ids like 4.4 < 5.5.1-2 < 5.6.ii < 5.6.iii < 5.10 < thm5.0.q2."""
    roman = {"i": 1, "ii": 2, "iii": 3, "iv": 4, "v": 5, "vi": 6, "vii": 7, "viii": 8}
    head, *rest = claim_id.split(".")
    parts: list[tuple[int, Any]] = []
    if head.isdigit():
        parts.append((0, int(head)))
    else:
        parts.append((1, head))
    for r in rest:
        if r.isdigit():
            parts.append((0, int(r)))
        elif r in roman:
            parts.append((0, roman[r]))
        else:
            parts.append((1, r))
    return tuple(parts)


def dumps_reports(reports: list[ClaimReport], meta: dict[str, Any]) -> str:
    payload = {"meta": meta, "claims": [r.to_dict() for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
