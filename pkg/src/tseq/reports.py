"""Machine-readable certificates.

Integers and fractions are serialized as decimal strings so that arbitrarily
large values survive JSON round trips.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

VERDICTS = ("certified", "refuted", "inconclusive", "tabular")


def encode(value: Any) -> Any:
    """Recursively turn ints/Fractions into strings for JSON."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(doc: Any) -> str:
    return json.dumps(encode(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class WitnessReport:
    claim: str
    params: dict
    evidence: list
    verdict: str
    bounds: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_dict(self) -> dict:
        doc = {
            "claim": self.claim,
            "params": encode(self.params),
            "evidence": encode(self.evidence),
            "verdict": self.verdict,
            "bounds": encode(self.bounds),
        }
        if self.extra:
            doc["extra"] = encode(self.extra)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "WitnessReport":
        doc = json.loads(text)
        return cls(doc["claim"], doc["params"], doc["evidence"], doc["verdict"],
                   doc.get("bounds", {}), doc.get("extra", {}))
