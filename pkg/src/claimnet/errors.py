"""Exception hierarchy shared across the pipeline."""


class ClaimnetError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ClaimnetError):
    """A data file, record, or argument violates its contract."""


class QueryParseError(InputError):
    """Keyword query text could not be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AlignmentError(InputError):
    """Token surfaces could not be aligned against the document text."""


class ConfigError(ClaimnetError):
    """Pipeline configuration is invalid or incomplete."""


class ContractError(ClaimnetError):
    """A provider returned a response that violates its wire contract."""


class TransportError(ClaimnetError):
    """A remote provider was unreachable after bounded retries."""


class MissingStageInput(ClaimnetError):
    """A pipeline stage was requested but a predecessor output is absent."""

    def __init__(self, stage: str, missing: list[str]):
        super().__init__(
            f"stage '{stage}' requires missing input(s): {', '.join(missing)}"
        )
        self.stage = stage
        self.missing = missing
