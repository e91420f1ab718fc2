# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Tissue blob artifacts: curved, elongated clusters of Gaussian lobes."""

from dataclasses import dataclass

import numpy as np

from ..genConfig import BlobConfig
from ..geometry import orthonormalBasis
from ..randomStream import RandomStream
from ..volume import ScalarVolume

_TRUNCATION = 4.0  # lobes are evaluated within this many standard deviations


@dataclass(frozen=True)
class Blob:
	"""One artifact.

	Lobe centers follow the arc c + sigma * elongation * (t * axis + curvature * t^2 * bend)
	for ``complexity`` evenly spaced t in [-1, 1]. Each lobe is a Gaussian with standard
	deviation ``sigma * elongation`` along ``axis`` and ``sigma`` across it, and amplitude
	``intensity / complexity``.
	"""

	center: tuple[float, float, float]
	sigma: float
	axis: tuple[float, float, float] = (0.0, 0.0, 1.0)
	bend: tuple[float, float, float] = (1.0, 0.0, 0.0)
	complexity: int = 1
	elongation: float = 1.0
	curvature: float = 0.0
	intensity: float = 0.1

	def lobeCenters(self) -> np.ndarray:
		ts = np.linspace(-1.0, 1.0, self.complexity) if self.complexity > 1 else np.zeros(1)
		reach = self.sigma * self.elongation
		axis = np.asarray(self.axis)
		bend = np.asarray(self.bend)
		offsets = reach * (ts[:, None] * axis + self.curvature * (ts * ts)[:, None] * bend)
		return np.asarray(self.center) + offsets


def sampleBlob(dims: tuple[int, int, int], cfg: BlobConfig, rng: RandomStream) -> Blob:
	"""Draw one blob with its center anywhere in the volume."""
	upper = np.asarray(dims, dtype=np.float64) - 1.0
	center = rng.uniform(0.0, 1.0, 3) * upper
	size = float(rng.uniform(1.0, cfg.max_size))
	complexity = int(rng.integers(cfg.complexity_range[0], cfg.complexity_range[1], endpoint=True))
	elongation = float(rng.uniform(*cfg.elongation_range))
	curvature = float(rng.uniform(*cfg.curvature_range))
	intensity = float(rng.uniform(*cfg.intensity_range))
	bend, _v, axis = orthonormalBasis(rng.unitVector())
	return Blob(
		center=tuple(center),
		sigma=size / 4.0,
		axis=tuple(axis),
		bend=tuple(bend),
		complexity=complexity,
		elongation=elongation,
		curvature=curvature,
		intensity=intensity,
	)


def renderBlob(field: np.ndarray, blob: Blob) -> None:
	"""Add ``blob`` to the (z, y, x) array ``field`` in place."""
	dz, dy, dx = field.shape
	upper = np.array([dx - 1, dy - 1, dz - 1], dtype=np.float64)
	axis = np.asarray(blob.axis, dtype=np.float64)
	along = blob.sigma * blob.elongation
	across = blob.sigma
	amplitude = blob.intensity / blob.complexity
	extent = _TRUNCATION * max(along, across)
	for center in blob.lobeCenters():
		lo = np.maximum(np.ceil(center - extent), 0.0).astype(int)
		hi = np.minimum(np.floor(center + extent), upper).astype(int)
		if np.any(lo > hi):
			continue
		z, y, x = np.ogrid[lo[2]:hi[2] + 1, lo[1]:hi[1] + 1, lo[0]:hi[0] + 1]
		ex, ey, ez = x - center[0], y - center[1], z - center[2]
		squared = ex * ex + ey * ey + ez * ez
		parallel = ex * axis[0] + ey * axis[1] + ez * axis[2]
		perpendicular = np.maximum(squared - parallel * parallel, 0.0)
		exponent = parallel * parallel / (2.0 * along * along) + perpendicular / (2.0 * across * across)
		field[lo[2]:hi[2] + 1, lo[1]:hi[1] + 1, lo[0]:hi[0] + 1] += amplitude * np.exp(-exponent)


def blobField(shape: tuple[int, int, int], cfg: BlobConfig, rng: RandomStream) -> np.ndarray:
	"""Sum of U{0..max_count} random blobs on a (z, y, x) grid of ``shape``."""
	dz, dy, dx = shape
	field = np.zeros(shape, dtype=np.float64)
	count = int(rng.integers(0, cfg.max_count, endpoint=True)) if cfg.max_count > 0 else 0
	for index in range(count):
		renderBlob(field, sampleBlob((dx, dy, dz), cfg, rng.fork(index)))
	return field


def addBlobs(v: ScalarVolume, cfg: BlobConfig, rng: RandomStream) -> ScalarVolume:
	"""Return ``v`` plus random blobs, clamped at zero."""
	if cfg.max_count == 0:
		return v
	result = v.data.astype(np.float64) + blobField(v.data.shape, cfg, rng)
	return ScalarVolume(np.maximum(result, 0.0))
