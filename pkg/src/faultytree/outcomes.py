"""Non-vertex query results."""

import enum


class Outcome(enum.Enum):
    ROOT_REACHED = "NONE"
    ERROR = "ERROR"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __repr__(self):
        return self.name


ROOT_REACHED = Outcome.ROOT_REACHED
ERROR = Outcome.ERROR
INCONCLUSIVE = Outcome.INCONCLUSIVE


def is_vertex(x) -> bool:
    return type(x) is int
