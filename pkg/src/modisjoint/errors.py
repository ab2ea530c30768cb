"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class PreconditionError(ValueError):
    """A stated operation precondition does not hold; never silently patched."""


class Undecided(RuntimeError):
    """Precision or search budget exhausted before a certified answer (CLI exit code 3)."""


class SingularPoint(Undecided):
    """The requested evaluation sits on (or indistinguishably near) a pole."""
