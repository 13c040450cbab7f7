"""Error types shared across the package.

The command line layer maps these onto exit codes: certification failures
exit 1, usage errors exit 2, capacity and fuel exhaustion exit 3.
"""


class CapacityError(ValueError):
    """A request exceeds the configured enumeration capacity bound."""


class FuelError(RuntimeError):
    """Rewriting exhausted its fuel budget before reaching a normal form.

    Carries the element being reduced at the moment the budget ran out so
    the caller can report a non-termination witness instead of silently
    truncating.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CertificationError(RuntimeError):
    """An internal cross-check failed.

    Raised when two independent routes to the same quantity disagree
    (relation spans, overlap resolutions, dimension counts).  The witness
    records the first disagreement found.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
