# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import pytest

from VesselForge import config
from VesselForge.genConfig import BlobConfig, GenConfig, GraphConfig, ImagingConfig, MaskConfig
from VesselForge.graphGrowth import VesselEdge, VesselGraph, VesselNode

SMALL_DIMS = (24, 24, 24)


@pytest.fixture(autouse=True)
def isolatedSettings(tmp_path, monkeypatch):
	"""Keep user settings and worker overrides out of every test."""
	monkeypatch.setenv("VESSELFORGE_CONFIG", str(tmp_path / "no-settings.ini"))
	monkeypatch.delenv("VESSELFORGE_WORKERS", raising=False)
	monkeypatch.setattr(config, "conf", None)


@pytest.fixture
def smallConfig() -> GenConfig:
	"""A scaled-down recipe that generates in a fraction of a second."""
	return GenConfig(
		graph=GraphConfig(n_max=10, d_min=4.0, d_max=10.0, w_min=2.0, w_max=4.0, bounds=SMALL_DIMS),
		mask=MaskConfig(),
		imaging=ImagingConfig(blob=BlobConfig(max_count=2, max_size=8.0)),
		dims=SMALL_DIMS,
	)


@pytest.fixture
def starGraph() -> VesselGraph:
	"""Connected tree with three branches leaving a central node of a 40^3 volume."""
	nodes = [
		VesselNode(0, (20.0, 20.0, 20.0)),
		VesselNode(1, (30.0, 21.0, 20.0)),
		VesselNode(2, (19.0, 30.0, 21.0)),
		VesselNode(3, (20.0, 19.0, 31.0)),
	]
	edges = [VesselEdge(0, 1, 4.0), VesselEdge(0, 2, 4.0), VesselEdge(0, 3, 4.0)]
	return VesselGraph(nodes=nodes, edges=edges)
