from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """
    Outcome of one executable statement on one instance. ``details`` holds
    the quantities the statement compares (orders, nil orders, bounds) and,
    when ``holds`` is false, the counterexample.
    """

    holds: bool
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def passed(cls, **details: Any) -> "CheckResult":
        return cls(True, details)

    @classmethod
    def failed(cls, **details: Any) -> "CheckResult":
        return cls(False, details)
