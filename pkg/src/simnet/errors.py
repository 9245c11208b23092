"""Exception hierarchy. Every class carries the CLI exit code it maps to."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from simnet.core.validation import ValidationReport
    from simnet.inference.strict import ConsistencyReport


class SimnetError(Exception):
    exit_code = 1


class ModelFileError(SimnetError):
    """File could not be parsed or does not follow the schema."""


class ModelValidationError(SimnetError):
    def __init__(self, report: ValidationReport, what: str = "model") -> None:
        self.report = report
        lines = "\n".join(f"  - {v.location}: {v.message}" for v in report.violations)
        super().__init__(f"{what} failed validation:\n{lines}")


class AssignmentError(SimnetError):
    """Unassigned node, unknown variable, or value outside the (restricted) domain."""


class ArcReversalError(SimnetError):
    pass


class CycleError(ArcReversalError):
    pass


class BudgetExceededError(SimnetError):
    pass


class NoMatchingCellError(SimnetError):
    pass


class ConversionError(SimnetError):
    pass


class InconsistentNetworkError(SimnetError):
    def __init__(self, report: ConsistencyReport) -> None:
        self.report = report
        super().__init__(
            f"inconsistent similarity network: {len(report.violations)} ratio discrepancies"
        )


class PositivityError(SimnetError):
    exit_code = 2

    def __init__(self, detail: str = "") -> None:
        self.detail = detail
        super().__init__("P is not strictly positive")


class ZeroProbabilityEvidence(SimnetError):
    exit_code = 3


class ZeroProbabilityEvent(SimnetError):
    exit_code = 3


class ImpossibleEvidenceError(SimnetError):
    exit_code = 3


class UnsupportedNetworkError(SimnetError):
    exit_code = 4
