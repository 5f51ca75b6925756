from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from ..core.audit import chain_entry, verify_chain

# Fields kept out of the hash chain
_UNCHAINED = {"wall_time", "prev_hash_hex", "entry_hash_hex"}


class Outcome(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NA = "na"


def _plain(value: Any) -> Any:
    """JSON-ready copy: numpy scalars to Python, tuples to lists, keys to str."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


class VerificationReport(BaseModel):
    check: str
    label: str = ""
    instance: str
    outcome: Outcome
    details: Dict[str, Any] = {}
    witness: Optional[Dict[str, Any]] = None
    wall_time: Optional[float] = None
    prev_hash_hex: str = ""
    entry_hash_hex: str = ""

    @field_validator("details", "witness", mode="before")
    @classmethod
    def json_ready(cls, value: Any) -> Any:
        return None if value is None else _plain(value)

    @model_validator(mode="after")
    def failures_carry_witness(self) -> "VerificationReport":
        if self.outcome is Outcome.FAIL and not self.witness:
            raise ValueError(f"{self.check} on {self.instance}: a fail outcome needs a witness")
        return self

    @property
    def reason(self) -> Optional[str]:
        return self.details.get("reason") if self.outcome is Outcome.NA else None

    def chain_data(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude=_UNCHAINED)


def seal_reports(reports: List[VerificationReport]) -> List[VerificationReport]:
    """Link the reports into a hash chain in their current order"""
    sealed = []
    prev = ""
    for report in reports:
        linked = chain_entry(report.chain_data(), prev)
        sealed.append(
            report.model_copy(
                update={"prev_hash_hex": linked["prev_hash_hex"], "entry_hash_hex": linked["entry_hash_hex"]}
            )
        )
        prev = linked["entry_hash_hex"]
    return sealed


def verify_reports(reports: List[VerificationReport]) -> Optional[int]:
    """Index of the first report whose link is broken, or None"""
    return verify_chain(
        {**r.chain_data(), "prev_hash_hex": r.prev_hash_hex, "entry_hash_hex": r.entry_hash_hex}
        for r in reports
    )
