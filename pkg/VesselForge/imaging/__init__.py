# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Imaging simulation: turns a binary vessel mask into a microscope-like intensity volume."""

from dataclasses import dataclass

import numpy as np

from ..genConfig import ImagingConfig
from ..logHandler import log
from ..randomStream import RandomStream
from ..volume import ScalarVolume
from .artifacts import blobField
from .base import NoiseModel
from .noise import GaussianReadNoise, PoissonShotNoise
from .perlin import fractalPerlinGrid
from .psf import blur, gaussianKernel1d

# forks of the imaging stream
_BRIGHTEN, _BACKGROUND, _BLOBS, _SHOT, _READ = range(5)
_PERLIN_SEED_LIMIT = 2 ** 32


def noiseModelFactory(cfg: ImagingConfig) -> list[tuple[int, NoiseModel]]:
	"""Noise models applied in order, each paired with the fork index it draws from."""
	models: list[tuple[int, NoiseModel]] = []
	if cfg.shot_noise_enabled:
		models.append((_SHOT, PoissonShotNoise(cfg.noise_level)))
	if cfg.gaussian_std > 0:
		models.append((_READ, GaussianReadNoise(cfg.gaussian_std)))
	return models


@dataclass(frozen=True)
class ImageStages:
	"""Noise-free intermediate fields on the (z, y, x) grid."""

	vessel: np.ndarray
	background: np.ndarray
	blurred: np.ndarray
	combined: np.ndarray


def _axes(shape: tuple[int, int, int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	dz, dy, dx = shape
	return tuple(np.arange(n, dtype=np.float64) for n in (dx, dy, dz))


def _perlinSeed(rng: RandomStream) -> int:
	return int(rng.integers(0, _PERLIN_SEED_LIMIT))


def composeStages(mask: ScalarVolume, cfg: ImagingConfig, rng: RandomStream) -> ImageStages:
	"""Vessel brightening, textured background with blobs, PSF blur and contrast scaling."""
	if not mask.isBinary():
		raise ValueError("imaging needs a binary mask")
	vesselMask = mask.data.astype(np.float64)
	x, y, z = _axes(vesselMask.shape)

	brightenSeed = _perlinSeed(rng.fork(_BRIGHTEN))
	texture = fractalPerlinGrid(
		x / cfg.brighten_scale, y / cfg.brighten_scale, z / cfg.brighten_scale, cfg.octaves, brightenSeed,
	)
	vessel = np.maximum(vesselMask * (1.0 + cfg.brighten_strength * texture), 0.0)

	backgroundRng = rng.fork(_BACKGROUND)
	backgroundSeed = _perlinSeed(backgroundRng)
	pattern = fractalPerlinGrid(
		x / cfg.perlin_scale, y / cfg.perlin_scale, z / cfg.perlin_scale, cfg.octaves, backgroundSeed,
	)
	background = np.maximum(
		0.0, cfg.background_brightness + cfg.perlin_strength * (pattern - cfg.perlin_darkness),
	)
	background = background + backgroundRng.uniform(0.0, cfg.background_noise, vesselMask.shape)
	background[vesselMask == 1.0] = 0.0
	background = np.maximum(background + blobField(vesselMask.shape, cfg.blob, rng.fork(_BLOBS)), 0.0)

	blurred = blur(vessel, gaussianKernel1d(cfg.psf_size, cfg.psf_sigma))
	combined = cfg.alpha * (blurred + background)
	return ImageStages(vessel=vessel, background=background, blurred=blurred, combined=combined)


def composeImage(mask: ScalarVolume, cfg: ImagingConfig, rng: RandomStream) -> ScalarVolume:
	"""Render the final intensity volume in [0, 1]; noise is applied after contrast scaling."""
	intensity = np.maximum(composeStages(mask, cfg, rng).combined, 0.0)
	for forkIndex, model in noiseModelFactory(cfg):
		intensity = model.apply(intensity, rng.fork(forkIndex))
	result = np.clip(intensity, 0.0, 1.0)
	log.debug(f"Composed image mean={result.mean():.4f} max={result.max():.4f}")
	return ScalarVolume(result)
