# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Separable Gaussian point spread function."""

from functools import lru_cache

import numpy as np
from scipy.ndimage import convolve1d

from ..volume import ScalarVolume

# x, y, z in the (z, y, x) array layout
_AXES = (2, 1, 0)


@lru_cache(maxsize=64)
def _kernel(size: int, sigma: float) -> tuple[float, ...]:
	offsets = np.arange(size, dtype=np.float64) - size // 2
	weights = np.exp(-offsets * offsets / (2.0 * sigma * sigma))
	return tuple(weights / weights.sum())


def gaussianKernel1d(size: int, sigma: float) -> np.ndarray:
	"""Normalized, symmetric 1D Gaussian of odd ``size`` centered on the middle tap."""
	if size < 1 or size % 2 == 0:
		raise ValueError(f"kernel size must be odd and positive, got {size}")
	if sigma <= 0:
		raise ValueError(f"sigma must be positive, got {sigma}")
	return np.array(_kernel(int(size), float(sigma)))


def blur(field: np.ndarray, kernel: np.ndarray) -> np.ndarray:
	"""Three 1D passes along x, y and z with mirror borders."""
	result = np.asarray(field, dtype=np.float64)
	for axis in _AXES:
		result = convolve1d(result, kernel, axis=axis, mode="reflect")
	return result


def convolveSeparable(v: ScalarVolume, k: np.ndarray) -> ScalarVolume:
	if abs(float(np.sum(k)) - 1.0) > 1e-9:
		raise ValueError("kernel must be normalized")
	return ScalarVolume(blur(v.data, k))
