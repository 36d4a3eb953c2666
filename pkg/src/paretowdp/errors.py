"""Exception hierarchy shared by all modules."""


class WdpError(Exception):
    """Base class for every error raised by paretowdp."""


class InstanceError(WdpError, ValueError):
    """An instance violates a structural invariant (bad id, uncoverable contract, ...)."""


class InstanceFormatError(InstanceError):
    """Syntax error in an instance or approximation-set file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleSolutionError(WdpError, ValueError):
    """An infeasible solution was offered where a feasible one is required."""


class ConstructionStallError(WdpError, RuntimeError):
    """Construction ran out of candidate bids before reaching feasibility."""


class RepairStallError(WdpError, RuntimeError):
    """Repair ran out of candidate bids before reaching feasibility."""


class IndicatorError(WdpError, ValueError):
    """Indicator inputs are degenerate or outside the indicator's domain."""


class OracleLimitError(WdpError, ValueError):
    """The exact enumeration was asked to scan more bids than its limit allows."""
