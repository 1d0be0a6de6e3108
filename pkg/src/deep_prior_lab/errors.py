"""Exception types shared across the package.

Two failure classes are distinguished everywhere: bad arguments raise
ValueError (CLI exit code 2), numerical breakdowns raise NumericsError
(CLI exit code 1).
"""


class NumericsError(RuntimeError):
    """A numerical procedure failed beyond its recovery policy.

    Raised when a Gram factorization exhausts its jitter escalation, an
    iterative solver fails to converge, or a matrix product produces
    non-finite values. The message names the operation (and layer index,
    where one exists) so CLI users can locate the failure.
    """
