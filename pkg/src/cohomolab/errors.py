"""Shared exception types.

Every validator in the package raises ValidationError with a machine-readable
witness so callers (and the CLI) can report exactly which identity failed and
where.
"""


class CohomolabError(Exception):
    pass


class DimensionMismatch(CohomolabError, ValueError):
    pass


class ValidationError(CohomolabError, ValueError):
    """A structural identity failed.

    kind     short tag of the violated identity, e.g. "antisymmetry", "jacobi"
    witness  tuple of indices (basis positions) exhibiting the failure
    """

    def __init__(self, kind, witness=None, detail=""):
        self.kind = kind
        self.witness = witness
        self.detail = detail
        msg = kind if witness is None else "%s at %r" % (kind, (witness,)[0] if False else witness)
        if detail:
            msg += ": " + detail
        super().__init__(msg)


class CapExceeded(CohomolabError, ValueError):
    """A configured size/degree/memory cap would be exceeded.

    required: human-readable description of the size that was needed.
    """

    def __init__(self, what, required=None):
        self.what = what
        self.required = required
        msg = what if required is None else "%s (required: %s)" % (what, required)
        super().__init__(msg)
