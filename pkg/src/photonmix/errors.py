"""Exception types raised by photonmix."""


class PhotonmixError(Exception):
    """Base class for all package errors."""


class TruncationError(PhotonmixError):
    """Fock-space truncation discards more probability than allowed."""


class CutoffOverflowError(PhotonmixError):
    """A populated input component would leave the truncated output grid."""


class DegenerateError(PhotonmixError):
    """A quantity is undefined for the given input (e.g. 0/0 visibility)."""


class DegenerateDataError(PhotonmixError):
    """Dataset carries no usable dip information (e.g. flat counts)."""


class ModelValidityError(PhotonmixError):
    """Requested configuration would make the model or sampler invalid."""
