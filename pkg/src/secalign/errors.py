"""Exception types shared across the toolkit."""


class SecalignError(Exception):
    """Base class for all toolkit errors."""


class FullRankInput(SecalignError):
    """Null-space basis requested for vectors that already span the space."""


class SizeOverflow(SecalignError):
    """An enumeration would exceed its configured cap."""


class InvalidEpsilon(SecalignError):
    """PAM shaping exponent eps outside the open interval (0, 1)."""


class AmbiguousConstellation(SecalignError):
    """Nearest-point decoding attempted on a constellation with collisions."""


class DecodeFailure(SecalignError):
    """Received value is inconsistent with the decoder's noise guard."""


class PreconditionFailed(SecalignError):
    """Scheme invoked outside its operating regime."""


class CombinatorialOverflow(SecalignError):
    """A subset enumeration would exceed its cap."""


class DegenerateInput(SecalignError):
    """Input vectors violate the non-degeneracy a rate formula requires."""


class InsufficientSpan(SecalignError):
    """Slope regression needs at least 3 points spanning 2 decades."""


class ConfigError(SecalignError):
    """Invalid experiment configuration (CLI exit code 2)."""
