"""
Complex gamma kernel: log-gamma, reciprocal gamma, rising factorials and sin(pi z).

Every function accepts a scalar or a numpy array. Scalars come back as
Python ``complex``; arrays come back as complex128 arrays of the same shape.
"""

import math
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import PoleError

ArrayLike = Union[complex, float, int, np.ndarray]

LOG_PI = math.log(math.pi)
HALF_LOG_TWO_PI = 0.5 * math.log(2 * math.pi)

# Lanczos coefficients, g = 7, n = 9
LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# beyond this |Im z| sin(pi z) is assembled from its dominant exponential
LOG_SCALE_THRESHOLD = 30.0


def _as_array(z: ArrayLike) -> np.ndarray:
    return np.asarray(z, dtype=np.complex128)


def _unwrap(result: np.ndarray, scalar: bool):
    return complex(result) if scalar else result


def distance_to_integers(z: ArrayLike):
    """Euclidean distance from z to the nearest integer"""
    arr = _as_array(z)
    dist = np.abs(arr - np.round(arr.real))
    return float(dist) if arr.ndim == 0 else dist


def distance_to_nonpositive_integers(z: ArrayLike):
    """Euclidean distance from z to the nearest of 0, -1, -2, ..."""
    arr = _as_array(z)
    nearest = np.minimum(np.round(arr.real), 0.0)
    dist = np.abs(arr - nearest)
    return float(dist) if arr.ndim == 0 else dist


def _principal(log_values: np.ndarray) -> np.ndarray:
    """Fold the imaginary part into (-pi, pi]"""
    imag = math.pi - np.mod(math.pi - log_values.imag, 2 * math.pi)
    return log_values.real + 1j * imag


def _sinpi_real(x: np.ndarray) -> np.ndarray:
    # x in [-1, 1]; exact at the quarter points
    out = np.sin(math.pi * x)
    out = np.where(np.abs(x) == 1.0, 0.0, out)
    out = np.where(x == 0.0, 0.0, out)
    out = np.where(np.abs(x) == 0.5, np.sign(x), out)
    return out


def _cospi_real(x: np.ndarray) -> np.ndarray:
    out = np.cos(math.pi * x)
    out = np.where(np.abs(x) == 0.5, 0.0, out)
    out = np.where(np.abs(x) == 1.0, -1.0, out)
    out = np.where(x == 0.0, 1.0, out)
    return out


def _reduce_period(z: np.ndarray) -> np.ndarray:
    """Shift Re z by an even integer into [-1, 1]; sin(pi z) is unchanged"""
    return z - 2.0 * np.round(z.real / 2.0)


def _sin_pi_direct(z: np.ndarray) -> np.ndarray:
    x, y = z.real, z.imag
    return _sinpi_real(x) * np.cosh(math.pi * y) + 1j * _cospi_real(x) * np.sinh(math.pi * y)


def _log_sin_pi_array(z: np.ndarray) -> np.ndarray:
    zr = _reduce_period(z)
    y = zr.imag
    out = np.empty_like(zr)

    small = np.abs(y) <= LOG_SCALE_THRESHOLD
    if np.any(small):
        out[small] = np.log(_sin_pi_direct(zr[small]))

    upper = y > LOG_SCALE_THRESHOLD
    if np.any(upper):
        w = zr[upper]
        # sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w})
        out[upper] = -1j * math.pi * w + np.log(0.5j) + np.log1p(-np.exp(2j * math.pi * w))

    lower = y < -LOG_SCALE_THRESHOLD
    if np.any(lower):
        w = zr[lower]
        out[lower] = 1j * math.pi * w + np.log(-0.5j) + np.log1p(-np.exp(-2j * math.pi * w))

    return _principal(out)


def _check_poles(z: np.ndarray, tolerance: float) -> None:
    dist = np.atleast_1d(distance_to_nonpositive_integers(z))
    if np.any(dist <= tolerance):
        bad = np.atleast_1d(z)[dist <= tolerance][0]
        raise PoleError(f"gamma has a pole at z = {complex(bad)}")


def _lanczos_log(z: np.ndarray) -> np.ndarray:
    """log Gamma(z) for Re z >= 0.5 (continuous branch, not yet folded)"""
    z1 = z - 1.0
    series = np.full_like(z1, LANCZOS_COEFFICIENTS[0])
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series = series + coefficient / (z1 + i)
    t = z1 + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z1 + 0.5) * np.log(t) - t + np.log(series)


def _log_gamma_array(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_log(z[right])
    left = ~right
    if np.any(left):
        w = z[left]
        out[left] = LOG_PI - _log_sin_pi_array(w) - _lanczos_log(1.0 - w)
    return _principal(out)


def log_gamma(z: ArrayLike, settings: Settings = DEFAULT_SETTINGS):
    """Principal branch of log Gamma(z).

    Raises PoleError when z is within ``settings.pole_tolerance`` of a
    nonpositive integer.
    """
    arr = _as_array(z)
    _check_poles(arr, settings.pole_tolerance)
    return _unwrap(_log_gamma_array(np.atleast_1d(arr)).reshape(arr.shape), arr.ndim == 0)


def gamma(z: ArrayLike, settings: Settings = DEFAULT_SETTINGS):
    arr = _as_array(z)
    return _unwrap(np.exp(_as_array(log_gamma(arr, settings))), arr.ndim == 0)


def reciprocal_gamma(z: ArrayLike, settings: Settings = DEFAULT_SETTINGS):
    """1/Gamma(z), an entire function; exactly 0 at the nonpositive integers"""
    arr = _as_array(z)
    flat = np.atleast_1d(arr).ravel()
    out = np.zeros_like(flat)
    at_pole = np.atleast_1d(distance_to_nonpositive_integers(flat)) <= settings.pole_tolerance
    right = (flat.real >= 0.5) & ~at_pole
    if np.any(right):
        out[right] = np.exp(-_lanczos_log(flat[right]))
    left = (flat.real < 0.5) & ~at_pole
    if np.any(left):
        w = flat[left]
        out[left] = np.exp(_log_sin_pi_array(w) + _lanczos_log(1.0 - w) - LOG_PI)
    return _unwrap(out.reshape(arr.shape), arr.ndim == 0)


def log_reciprocal_gamma_masked(z: np.ndarray, settings: Settings = DEFAULT_SETTINGS):
    """-log Gamma(z) plus a mask of points where 1/Gamma vanishes.

    The log value is 0 where the mask is set; callers zero those entries.
    """
    arr = np.atleast_1d(_as_array(z))
    zeros = np.atleast_1d(distance_to_nonpositive_integers(arr)) <= settings.pole_tolerance
    out = np.zeros_like(arr)
    if np.any(~zeros):
        out[~zeros] = -_log_gamma_array(arr[~zeros])
    return out, zeros


def sin_pi(z: ArrayLike):
    """sin(pi z), exact zero at integers and evaluated in log scale for large |Im z|"""
    arr = _as_array(z)
    flat = _reduce_period(np.atleast_1d(arr).ravel())
    out = np.empty_like(flat)
    small = np.abs(flat.imag) <= LOG_SCALE_THRESHOLD
    if np.any(small):
        out[small] = _sin_pi_direct(flat[small])
    if np.any(~small):
        out[~small] = np.exp(_log_sin_pi_array(flat[~small]))
    return _unwrap(out.reshape(arr.shape), arr.ndim == 0)


def log_sin_pi(z: ArrayLike, settings: Settings = DEFAULT_SETTINGS):
    """log sin(pi z), principal branch; PoleError at the integers"""
    arr = _as_array(z)
    dist = np.atleast_1d(distance_to_integers(arr))
    if np.any(dist <= settings.pole_tolerance):
        raise PoleError(f"sin(pi z) vanishes at z = {complex(np.atleast_1d(arr)[dist <= settings.pole_tolerance][0])}")
    return _unwrap(_log_sin_pi_array(np.atleast_1d(arr).ravel()).reshape(arr.shape), arr.ndim == 0)


def sine_bound_constant(eps: float) -> float:
    """K(eps) with |sin(pi z)| >= K e^{pi |Im z|} whenever dist(z, Z) >= eps"""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return 0.5 * min(math.sin(math.pi * eps / 2), 1 - math.exp(-math.pi * eps))


def pochhammer(a, n: int):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), (a)_0 = 1.

    Fractions stay exact; anything else is returned as complex.
    """
    if n < 0:
        raise ValueError("pochhammer needs a nonnegative integer n")
    result = Fraction(1) if isinstance(a, Fraction) else 1
    for k in range(n):
        result *= a + k
        if result == 0:
            break
    return result if isinstance(a, Fraction) else complex(result)


def gamma_product(numer: Iterable[complex], denom: Iterable[complex], settings: Settings = DEFAULT_SETTINGS) -> complex:
    """prod Gamma(numer) / prod Gamma(denom), exponentiated once.

    Exactly 0 when a denominator argument is a pole; PoleError when a
    numerator argument is.
    """
    numer = [complex(x) for x in numer]
    denom = [complex(x) for x in denom]
    if any(distance_to_nonpositive_integers(x) <= settings.pole_tolerance for x in denom):
        return 0j
    total = 0j
    if numer:
        total += complex(np.sum(_as_array(log_gamma(np.array(numer), settings))))
    if denom:
        total -= complex(np.sum(_log_gamma_array(np.array(denom, dtype=np.complex128))))
    return complex(np.exp(total))
