"""Machine-readable verification certificates."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from . import __version__


@dataclass
class VerificationReport:
    """Outcome of one check on one (graph, partition) pair.

    ``relation`` states how ``lhs`` is compared with ``rhs`` (``">="`` or
    ``"=="``); ``holds`` is the result of that comparison.  ``witness`` holds
    the named scalars the check was computed from.
    """

    check: str
    graph6: str
    partition: list[list[int]] | None
    lhs: int
    rhs: int
    relation: str
    holds: bool
    witness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> VerificationReport:
        return cls(**d)


def compare(lhs: int, rhs: int, relation: str) -> bool:
    if relation == ">=":
        return lhs >= rhs
    if relation == "==":
        return lhs == rhs
    raise ValueError(f"unknown relation {relation!r}")


def report_header(**fields: Any) -> dict[str, Any]:
    """Provenance header stamped on every report stream."""
    return {"tool": "k4tri", "version": __version__, **fields}
