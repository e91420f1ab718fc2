# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""End-to-end generation of one sample: graph growth, mask building and imaging.

Every stage draws from its own stream forked off (dataset seed, sample index), so a sample
is fully determined by its metadata and can be regenerated bit-exactly anywhere.
"""

from dataclasses import dataclass

import numpy as np

from .genConfig import GenConfig
from .graphGrowth import VesselGraph, growGraph
from .imaging import composeImage
from .imaging.noise import POISSON_ALGORITHM
from .logHandler import log
from .maskBuilder import buildMask
from .randomStream import RNG_ALGORITHM, RandomStream
from .volume import ScalarVolume

GENERATOR_VERSION = "vesselforge/1"

# forks of the dataset root stream
SAMPLE_NAMESPACE = 0
CONFIG_NAMESPACE = 1
HOLDOUT_NAMESPACE = 2
# forks of a sample stream
_GRAPH, _MASK, _IMAGING = range(3)


@dataclass(frozen=True)
class SampleMeta:
	"""Everything needed to regenerate a sample bit-exactly."""

	dataset_seed: int
	sample_index: int
	config: GenConfig
	generator_version: str = GENERATOR_VERSION
	rng_algorithm: str = RNG_ALGORITHM
	poisson_algorithm: str = POISSON_ALGORITHM
	config_id: int | None = None
	stalled: bool = False


@dataclass
class Sample:
	volume: ScalarVolume
	graph: VesselGraph
	meta: SampleMeta


def sampleStream(datasetSeed: int, index: int) -> RandomStream:
	"""Stream owned by sample ``index`` of the dataset."""
	return RandomStream(datasetSeed).fork(SAMPLE_NAMESPACE).fork(index)


def generateSample(cfg: GenConfig, datasetSeed: int, index: int, configId: int | None = None) -> Sample:
	"""Generate sample ``index`` of the dataset seeded with ``datasetSeed``.

	:param cfg: Recipe for this sample.
	:param configId: Varied-dataset configuration the recipe was drawn as, if any.
	:return: The sample; a graph whose growth stalled is kept and flagged in its metadata.
	"""
	if index < 0:
		raise ValueError(f"sample index must be non-negative, got {index}")
	rng = sampleStream(datasetSeed, index)
	graph = growGraph(cfg.graph, rng.fork(_GRAPH))
	if graph.stalled:
		log.warning(f"Sample {index}: growth stalled with {len(graph.nodes)} of {cfg.graph.n_max} nodes")
	mask = buildMask(graph, cfg.dims, cfg.mask, rng.fork(_MASK))
	volume = composeImage(mask, cfg.imaging, rng.fork(_IMAGING))
	meta = SampleMeta(
		dataset_seed=datasetSeed,
		sample_index=index,
		config=cfg,
		config_id=configId,
		stalled=graph.stalled,
	)
	log.debug(f"Sample {index}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
	return Sample(volume=volume, graph=graph, meta=meta)


def regenerateMask(sample: Sample) -> ScalarVolume:
	"""Rebuild the binary mask of a stored sample from its graph and metadata."""
	meta = sample.meta
	rng = sampleStream(meta.dataset_seed, meta.sample_index).fork(_MASK)
	return buildMask(sample.graph, meta.config.dims, meta.config.mask, rng)


def maskOccupancy(mask: ScalarVolume) -> float:
	return float(np.mean(mask.data))
