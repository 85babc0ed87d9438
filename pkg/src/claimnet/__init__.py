"""claimnet: newspaper corpora -> signed actor-claim dyads -> time-sliced
bipartite discourse networks, with an evaluation harness against gold
annotations."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    AlignmentError,
    ClaimnetError,
    ConfigError,
    ContractError,
    InputError,
    MissingStageInput,
    QueryParseError,
    TransportError,
)
