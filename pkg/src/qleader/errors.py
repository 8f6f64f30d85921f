"""Exception types shared across the package."""


class CapacityError(ValueError):
    """A requested register layout exceeds the dense-simulator qubit cap."""


class ProtocolViolation(RuntimeError):
    """An election round produced an outcome the protocol guarantees impossible.

    Raised instead of silently continuing so simulator bugs surface loudly
    (e.g. an empty survivor set, or disagreeing S-register bits).
    """
