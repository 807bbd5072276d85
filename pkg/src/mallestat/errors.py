class MallestatError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(MallestatError, ValueError):
    """A precondition on the arguments of an operation does not hold."""


class ResourceLimitExceeded(MallestatError, RuntimeError):
    """A configured size cap (group order, discriminant bound, ...) was hit."""


class MissingTableEntry(MallestatError, KeyError):
    """Table mode was requested but the local table has no entry for a code pair."""

    def __init__(self, p, code_k, code_l):
        self.p, self.code_k, self.code_l = p, code_k, code_l
        super().__init__(f"no local table entry for p={p}, codes ({code_k!r}, {code_l!r})")

    def __str__(self):
        return self.args[0]
