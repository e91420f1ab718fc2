# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Synthetic 3D blood vessel volumes with exact ground-truth graphs."""

__version__ = "1.0.0"

from .genConfig import GenConfig, genConfigFromDict, genConfigToDict, homogeneousConfig, sampleVariedConfig
from .graphGrowth import VesselEdge, VesselGraph, VesselNode, growGraph, validateGraph
from .maskBuilder import buildMask
from .imaging import composeImage
from .randomStream import RandomStream, forkStream
from .sampleGenerator import Sample, SampleMeta, generateSample
from .sampleStore import readSample, writeSample
from .shardGenerator import ShardGenerator, generateShard
from .volume import ScalarVolume

__all__ = [
	"GenConfig",
	"RandomStream",
	"Sample",
	"SampleMeta",
	"ScalarVolume",
	"ShardGenerator",
	"VesselEdge",
	"VesselGraph",
	"VesselNode",
	"buildMask",
	"composeImage",
	"forkStream",
	"genConfigFromDict",
	"genConfigToDict",
	"generateSample",
	"generateShard",
	"growGraph",
	"homogeneousConfig",
	"readSample",
	"sampleVariedConfig",
	"validateGraph",
	"writeSample",
]
