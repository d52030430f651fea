"""
Planner Errors
Exception hierarchy shared by every planning stage and mapped to CLI exit codes
"""

from typing import List, Optional


class PlannerError(Exception):
    """Base class for all planner failures"""

    exit_code = 1


class ConfigError(PlannerError):
    """Scenario configuration could not be parsed or violates an invariant"""

    exit_code = 2

    def __init__(self, violations: List["ConfigViolation"], message: Optional[str] = None):
        self.violations = list(violations)
        if message is None:
            lines = [f"{v.field}: {v.message}" for v in self.violations]
            message = "Invalid scenario configuration:\n  " + "\n  ".join(lines)
        super().__init__(message)


class InfeasibleError(PlannerError):
    """A planning stage has no solution satisfying its constraints"""

    exit_code = 3

    def __init__(self, report: "InfeasibilityReport"):
        self.report = report
        super().__init__(f"[{report.stage}] {report.reason}")


class GeometryInfeasibleError(InfeasibleError):
    """No (altitude, beamwidth, radius) triple satisfies the NIB bounds"""


class QosInfeasibleError(InfeasibleError):
    """Minimum-rate floors of a cell need more than the full power budget"""


class BackhaulInfeasibleError(InfeasibleError):
    """Backhaul rate cannot carry the minimum access rates of backhaul-dependent users"""


class CoverageError(PlannerError):
    """A user lies outside every deployed beam (deployment bug)"""

    def __init__(self, user_ids: List[int]):
        self.user_ids = list(user_ids)
        preview = ", ".join(str(u) for u in self.user_ids[:10])
        super().__init__(f"{len(self.user_ids)} user(s) covered by no NIB: {preview}")


class ExactCoverCapError(PlannerError):
    """Instance too large for the exact disk-cover solver"""

    def __init__(self, n_users: int, cap: int):
        self.n_users = n_users
        self.cap = cap
        super().__init__(
            f"Exact cover refused: K={n_users} exceeds cap {cap}; use the greedy solver"
        )


class ArtifactIOError(PlannerError):
    """Reading or writing run artifacts failed"""

    exit_code = 4

    def __init__(self, path, reason: str):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")

