from dataclasses import dataclass

COVERABLE = "coverable"
NOT_COVERABLE = "not-coverable"
TERMINATING = "terminating"
NON_TERMINATING = "non-terminating"
BOUNDED = "bounded"
UNBOUNDED = "unbounded"
REACHABLE = "reachable"
NOT_REACHABLE = "not-reachable"
NOT_APPLICABLE = "not-applicable"
EXHAUSTED = "resource-exhausted"


@dataclass(frozen=True)
class Limits:
    """Work budgets. Exceeding one yields ``resource-exhausted``, never a negative verdict."""

    max_basis: int = 100_000
    max_iterations: int = 1_000_000
    max_nodes: int = 100_000


class ResourceExhausted(RuntimeError):
    pass
