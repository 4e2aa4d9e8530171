from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, LassoStructure, eval_at
from .errors import InvariantViolation


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    method: str
    witness: tuple[LassoStructure, int] | None = None

    def __post_init__(self) -> None:
        if self.witness is not None and not self.satisfiable:
            raise ValueError("an unsatisfiable result cannot carry a witness")

    def check(self, phi: Formula) -> "SatResult":
        """Raise unless the witness (if any) really satisfies ``phi``."""
        if self.witness is not None:
            lasso, i = self.witness
            if not eval_at(lasso, i, phi):
                raise InvariantViolation(f"{self.method}: witness {lasso} at {i} does not satisfy {phi}")
        return self

    def to_json(self) -> dict:
        out = {"satisfiable": self.satisfiable, "method": self.method}
        if self.witness is not None:
            lasso, i = self.witness
            out["witness"] = {"lasso": lasso.to_json(), "index": i}
        return out
