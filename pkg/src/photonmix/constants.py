"""Physical constants and unit conversions used across the package.

All internal quantities are SI: delays in meters, spectral widths in rad/s,
rates in counts per second.
"""

import math

C_LIGHT = 299_792_458.0  # m/s

UM = 1e-6  # meters per micrometer
FS = 1e-15  # seconds per femtosecond
NM = 1e-9  # meters per nanometer

# ratio between a Gaussian intensity FWHM and its 1/e^2 half-width
FWHM_TO_HALFWIDTH_1E2 = 1.0 / math.sqrt(2.0 * math.log(2.0))


def um_to_m(x):
    return x * UM


def m_to_um(x):
    return x / UM


def delay_m_to_fs(x):
    """Convert a path-length difference in meters to a time delay in fs."""
    return x / C_LIGHT / FS


def delay_fs_to_m(t):
    return t * FS * C_LIGHT
