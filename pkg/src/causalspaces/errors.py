"""Semantic exception hierarchy shared across the package."""

from __future__ import annotations


class CausalSpacesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMeasureError(CausalSpacesError, ValueError):
    """A weight table is not a probability measure (negative weight or sum != 1)."""


class KernelMissingError(CausalSpacesError, LookupError):
    """A causal kernel required by an operation is absent from the mechanism."""

    def __init__(self, coords):
        self.coords = frozenset(coords)
        super().__init__(f"no causal kernel for coordinate subset {{{', '.join(sorted(self.coords)) or ''}}}")


class BlockCountExceededError(CausalSpacesError):
    """A partition has more blocks than the configured union-enumeration cap."""

    def __init__(self, blocks: int, cap: int):
        self.blocks = blocks
        self.cap = cap
        super().__init__(f"partition has {blocks} blocks, exceeding the cap of {cap} (2**{blocks} unions)")


class PremiseNotMetError(CausalSpacesError):
    """The hypothesis of a theorem-checking operation does not hold for the inputs."""


class EmptySubjectError(CausalSpacesError, ValueError):
    """The subject event of an effect query or score is empty."""


class MissingNumericVariableError(CausalSpacesError, ValueError):
    """A numeric random variable is required but absent (or a coordinate lacks values)."""


class NonBinaryTreatmentError(CausalSpacesError, ValueError):
    """The treatment coordinate is not labelled exactly {0, 1}."""


class DocumentError(CausalSpacesError, ValueError):
    """A space or query document cannot be parsed; carries a location string."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
