"""Error taxonomy shared by every module.

InvalidInput  - caller handed us data that fails validation
Unsupported   - request is well formed but outside what we implement
InternalError - an invariant that should hold by theory was violated
"""


class CliffockError(Exception):
    pass


class InvalidInput(CliffockError, ValueError):
    pass


class Unsupported(CliffockError):
    pass


class InternalError(CliffockError):
    pass


class NotBalanced(InternalError):
    """A map that was asked to descend to a quotient does not kill the
    balancing subspace."""
