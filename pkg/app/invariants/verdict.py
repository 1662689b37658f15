from dataclasses import dataclass
from enum import Enum
from typing import Optional

from app.exact.linalg import IntMatrix


class VerdictTag(str, Enum):
    EQUIVALENT = "Equivalent"
    INEQUIVALENT = "Inequivalent"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class EquivalenceVerdict:
    """
    Three-valued comparison result. Equivalent verdicts may carry a witness
    matrix, Inequivalent ones name the separating invariant.
    """
    tag: VerdictTag
    witness: Optional[IntMatrix] = None
    separator: Optional[str] = None
    detail: str = ""

    @classmethod
    def equivalent(cls, witness: Optional[IntMatrix] = None, detail: str = "") -> "EquivalenceVerdict":
        return cls(VerdictTag.EQUIVALENT, witness=witness, detail=detail)

    @classmethod
    def inequivalent(cls, separator: str, detail: str = "") -> "EquivalenceVerdict":
        return cls(VerdictTag.INEQUIVALENT, separator=separator, detail=detail)

    @classmethod
    def undetermined(cls, detail: str) -> "EquivalenceVerdict":
        return cls(VerdictTag.UNDETERMINED, detail=detail)

    @property
    def is_equivalent(self) -> bool:
        return self.tag is VerdictTag.EQUIVALENT
