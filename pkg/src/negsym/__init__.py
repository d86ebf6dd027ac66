"""Global rotational and reflectional symmetry detection from negentropy curves."""
from .detector import (
    DetectorConfig,
    ReflectionalCurve,
    RotationalCurve,
    SymmetryResult,
    candidate_orders,
    detect,
    find_extrema,
    is_periodic,
    neg_tilt_angle,
    reflectional_negentropy,
    rotational_negentropy,
)
from .errors import (
    DegenerateImage,
    NearGaussianImage,
    NegsymError,
    UnsupportedFormat,
    ZeroVarianceCurve,
    ZeroVarianceImage,
)
from .image import GreyImage, disk_mask, load_image, resize, standardize, write_pgm
from .negentropy import curve_negentropy, entropy_approx, negentropy
from .transforms import average, reflect, rotate

__version__ = "0.1.0"
