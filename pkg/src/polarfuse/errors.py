"""Exception hierarchy shared by all polarfuse modules."""


class PolarFuseError(Exception):
    """Base class for all polarfuse errors."""


# --- image I/O -------------------------------------------------------------

class MalformedHeader(PolarFuseError):
    """Graymap file is not P2/P5 or declares nonpositive dimensions."""


class TruncatedData(PolarFuseError):
    """Graymap file holds fewer samples than width*height."""


class UnsupportedMaxval(PolarFuseError):
    """Graymap maxval outside (0, 65535]."""


class IoFailure(PolarFuseError):
    """Filesystem read/write failed."""


# --- geometry / shapes -----------------------------------------------------

class DimensionMismatch(PolarFuseError):
    """Operands have incompatible dimensions."""


class ImageTooSmall(PolarFuseError):
    """Image below the minimum size for the requested operation."""


class LengthMismatch(PolarFuseError):
    """Vector length does not match the expected dimension."""


# --- model fitting ---------------------------------------------------------

class TooFewImages(PolarFuseError):
    """Eigenspace fit needs at least two images."""


class DegenerateData(PolarFuseError):
    """Training inputs carry no variance at all."""


class BadArchitecture(PolarFuseError):
    """Network layer specification is unusable."""


class BadTargets(PolarFuseError):
    """Training target outside the tanh output range [-1, 1]."""


# --- dataset / protocols ---------------------------------------------------

class ParseError(PolarFuseError):
    """Manifest text could not be parsed; message carries the line number."""


class DuplicateSample(PolarFuseError):
    """Manifest repeats a (subject_id, sample_id) pair."""


class PairDimensionMismatch(PolarFuseError):
    """A record's visual and thermal images differ in size."""


class MissingFile(PolarFuseError):
    """Manifest references a file that does not exist."""


class TooFewSubjects(PolarFuseError):
    """Pipeline training needs at least two subjects."""


class InsufficientSamples(PolarFuseError):
    """A subject lacks the samples the protocol requires."""


class IndivisibleFolds(PolarFuseError):
    """A subject's sample count is not divisible by the fold count."""
