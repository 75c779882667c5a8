"""Structured decision reports shared by the weight checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

VERDICT_A2 = "a2"
VERDICT_NOT_A2 = "not_a2"
VERDICT_NOT_PD_AE = "not_positive_definite_ae"
VERDICT_NOT_INTEGRABLE = "not_locally_integrable"
VERDICT_MARGINAL = "marginal"
VERDICT_PD_AE = "positive_definite_ae"
VERDICT_WEIGHT_OK = "locally_integrable_weight"
VERDICT_NECESSARY_PASSED = "inconclusive_necessary_passed"

__all__ = [
    "Finding",
    "A2Report",
    "VERDICT_A2",
    "VERDICT_NOT_A2",
    "VERDICT_NOT_PD_AE",
    "VERDICT_NOT_INTEGRABLE",
    "VERDICT_MARGINAL",
    "VERDICT_PD_AE",
    "VERDICT_WEIGHT_OK",
    "VERDICT_NECESSARY_PASSED",
]


@dataclass(frozen=True)
class Finding:
    """One structured reason behind a verdict.

    kind is a stable machine-readable tag; where holds the 0-based entry or
    index tuple the finding points at (empty when global).
    """

    kind: str
    where: tuple[int, ...]
    detail: str

    def to_payload(self) -> dict:
        return {"kind": self.kind, "where": list(self.where), "detail": self.detail}


@dataclass(frozen=True)
class A2Report:
    """Decision outcome with every violated condition listed, not just the first."""

    verdict: str
    findings: tuple[Finding, ...] = ()
    witness: float | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.verdict in (VERDICT_A2, VERDICT_PD_AE, VERDICT_WEIGHT_OK)

    def to_payload(self) -> dict:
        out: dict = {
            "verdict": self.verdict,
            "findings": [f.to_payload() for f in self.findings],
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out
