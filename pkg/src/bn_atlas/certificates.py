"""Serializable proof objects and findings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

KINDS = (
    "dim-thm34",
    "pointed-divisor-rule",
    "codim2-rule",
    "trivial-containment",
    "serre-identification",
    "prym-schwarz",
    "prym-parity",
    "exp-dim-component",
)


@dataclass(frozen=True)
class Certificate:
    """A claim plus every number needed to re-check it by arithmetic alone.

    ``subject`` names the loci involved; ``witness`` holds the intermediate
    values. ``verified`` is the result of re-checking at construction time.
    """

    kind: str
    subject: dict[str, Any]
    witness: dict[str, Any]
    verified: bool = False

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "subject": self.subject, "witness": self.witness, "verified": self.verified}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Certificate:
        return cls(str(data["kind"]), dict(data["subject"]), dict(data["witness"]), bool(data.get("verified", False)))


@dataclass(frozen=True)
class Finding:
    """A machine-readable negative result, e.g. a hypothesis that fails literally."""

    kind: str
    subject: dict[str, Any]
    failed_clauses: tuple[str, ...] = ()
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "subject": self.subject,
            "failed_clauses": list(self.failed_clauses),
            "details": self.details,
        }
