"""Exception types shared across the package."""


class InputFormatError(ValueError):
    """An input file does not satisfy its documented format.

    Raised by the loaders (lexicon CSV, message JSONL, attitude CSV, and
    intermediate artifacts). Kept distinct from plain ``ValueError`` so the
    CLI can map file problems and analysis-precondition problems to
    different exit codes.
    """
