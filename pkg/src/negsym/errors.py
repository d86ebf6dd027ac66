"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`NegsymError`
and carries the process exit code the CLI maps it to.
"""


class NegsymError(Exception):
    exit_code = 1


class InputError(NegsymError):
    exit_code = 2


class UnsupportedFormat(InputError):
    pass


class MissingImage(InputError):
    pass


class MalformedManifest(InputError):
    pass


class InvalidSpec(InputError):
    pass


class SizeMismatch(InputError):
    pass


class TooFewSamples(InputError):
    pass


class DegenerateImage(NegsymError):
    exit_code = 3


class ZeroVarianceImage(DegenerateImage):
    """Constant image: negentropy is undefined."""


class ZeroVarianceCurve(NegsymError):
    """Flat 1-D curve; callers treat this as a trivially satisfied mirror test."""

    exit_code = 3


class NearGaussianImage(NegsymError):
    """Baseline negentropy below the floor; relative-error tests are meaningless."""

    exit_code = 4
