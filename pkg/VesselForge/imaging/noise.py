# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import numpy as np

from ..randomStream import RandomStream
from ..volume import ScalarVolume
from .base import NoiseModel

# numpy draws small means by multiplication and large means (>= 10) by PTRS rejection
POISSON_ALGORITHM = "numpy-poisson/multiplication+ptrs"


class PoissonShotNoise(NoiseModel):
	"""Photon counting noise: each voxel becomes Poisson(I * level) / level."""

	name = POISSON_ALGORITHM

	def __init__(self, level: float) -> None:
		if level <= 0:
			raise ValueError(f"noise level must be positive, got {level}")
		self.level = level

	def apply(self, intensity: np.ndarray, rng: RandomStream) -> np.ndarray:
		if np.any(intensity < 0):
			raise ValueError("shot noise needs a non-negative intensity field")
		counts = rng.poisson(intensity * self.level)
		return counts / self.level


class GaussianReadNoise(NoiseModel):
	"""Additive zero-mean electronic noise."""

	name = "gaussian"

	def __init__(self, std: float) -> None:
		if std < 0:
			raise ValueError(f"read noise std must be non-negative, got {std}")
		self.std = std

	def apply(self, intensity: np.ndarray, rng: RandomStream) -> np.ndarray:
		if self.std == 0:
			return intensity.copy()
		return intensity + rng.normal(0.0, self.std, intensity.shape)


def shotNoise(v: ScalarVolume, level: float, rng: RandomStream) -> ScalarVolume:
	return ScalarVolume(PoissonShotNoise(level).apply(v.data.astype(np.float64), rng))


def readNoise(v: ScalarVolume, std: float, rng: RandomStream) -> ScalarVolume:
	return ScalarVolume(GaussianReadNoise(std).apply(v.data.astype(np.float64), rng))
