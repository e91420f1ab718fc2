# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import numpy as np
import pytest
from scipy.ndimage import label

from VesselForge.genConfig import MaskConfig, homogeneousConfig
from VesselForge.graphGrowth import VesselEdge, VesselGraph, VesselNode, growGraph
from VesselForge.maskBuilder import (
	BezierSegment,
	bezierPoint,
	buildMask,
	controlPoints,
	curveSamples,
	edgeCurve,
	invertMask,
	rasterizeEdge,
)
from VesselForge.randomStream import RandomStream
from VesselForge.volume import ScalarVolume

NO_JITTER = MaskConfig(jitter_amplitude=0.0)


def _ballOracle(dims, centers, radius) -> np.ndarray:
	"""Voxels whose center lies within ``radius`` of any center, by exhaustive check."""
	dx, dy, dz = dims
	z, y, x = np.indices((dz, dy, dx))
	inside = np.zeros((dz, dy, dx), dtype=bool)
	for c in centers:
		ex = x - c[0]
		ey = y - c[1]
		ez = z - c[2]
		inside |= ex * ex + ey * ey + ez * ez <= radius * radius
	return inside


def test_bezierPoint():
	seg = BezierSegment((0, 0, 0), (1, 1, 0), (2, -1, 0), (3, 0, 0))
	assert np.allclose(bezierPoint(seg, 0.0), (0, 0, 0))
	assert np.allclose(bezierPoint(seg, 1.0), (3, 0, 0))
	assert np.allclose(bezierPoint(seg, 0.5), (1.5, 0, 0))
	with pytest.raises(ValueError):
		bezierPoint(seg, 1.5)


def test_bezierPointConstantCurve():
	c = (2.0, -1.0, 4.5)
	seg = BezierSegment(c, c, c, c)
	for t in np.linspace(0.0, 1.0, 11):
		assert np.allclose(bezierPoint(seg, t), c)


def test_controlPointsFormula():
	p1, p2 = controlPoints((0, 0, 0), (3, 0, 0), 1.0, RandomStream(0), normal=(0, 1, 0))
	assert np.allclose(p1, (1, 1, 0))
	assert np.allclose(p2, (2, -1, 0))


def test_controlPointsZeroOffsetIsCollinear():
	p1, p2 = controlPoints((1, 2, 3), (4, 6, 3), 0.0, RandomStream(0))
	chord = np.array([3.0, 4.0, 0.0])
	assert np.allclose(np.cross(p1 - np.array([1, 2, 3]), chord), 0.0)
	assert np.allclose(np.cross(p2 - np.array([1, 2, 3]), chord), 0.0)


def test_controlPointsRandomNormal():
	p0 = np.array([1.0, 1.0, 1.0])
	p3 = np.array([7.0, 3.0, -2.0])
	chord = p3 - p0
	for seed in range(20):
		p1, p2 = controlPoints(p0, p3, 2.0, RandomStream(seed))
		offset = p1 - (p0 + chord / 3.0)
		assert np.linalg.norm(offset) == pytest.approx(2.0)
		assert np.dot(offset, chord) == pytest.approx(0.0, abs=1e-9)
		assert np.allclose(p2 - (p0 + 2.0 * chord / 3.0), -offset)
	with pytest.raises(ValueError):
		controlPoints(p0, p0, 1.0, RandomStream(0))


@pytest.mark.parametrize("radius", [0.6, 1.5, 3.0])
def test_curveSamplesSpacing(radius):
	curves = [
		BezierSegment.straight((0, 0, 0), (12, 3, 1)),
		BezierSegment((0, 0, 0), (4, 4, 0), (8, -4, 0), (12, 0, 0)),
	]
	for curve in curves:
		samples = curveSamples(curve, radius, MaskConfig())
		assert np.allclose(samples[0], curve.p0)
		assert np.allclose(samples[-1], curve.p3)
		steps = np.linalg.norm(np.diff(samples, axis=0), axis=1)
		assert steps.max() <= 0.5 * radius * 1.01


def test_singleSphereMatchesBall():
	center = (8.0, 8.0, 8.0)
	mask = rasterizeEdge(
		ScalarVolume.zeros((16, 16, 16)), BezierSegment.straight(center, center), 2.0, NO_JITTER, RandomStream(0),
	)
	expected = _ballOracle((16, 16, 16), [center], 2.0)
	assert np.array_equal(mask.data == 1, expected)
	assert int(mask.data.sum()) == 33


def test_rasterizeNeverClears():
	start = ScalarVolume.full((8, 8, 8), 1.0)
	mask = rasterizeEdge(start, BezierSegment.straight((1, 1, 1), (6, 6, 6)), 1.0, MaskConfig(), RandomStream(0))
	assert np.all(mask.data == 1.0)


def test_rasterizeOutsideVolumeLeavesMaskUnchanged():
	start = ScalarVolume.zeros((8, 8, 8))
	curve = BezierSegment.straight((-10, -10, -10), (-5, -10, -10))
	mask = rasterizeEdge(start, curve, 0.3, MaskConfig(), RandomStream(0))
	assert mask == start


def test_emptyGraphAndInvert():
	empty = VesselGraph()
	assert np.all(buildMask(empty, (8, 8, 8), MaskConfig(), RandomStream(0)).data == 0.0)
	assert np.all(buildMask(empty, (8, 8, 8), MaskConfig(invert=True), RandomStream(0)).data == 1.0)


def test_invertTwiceIsIdentity(starGraph):
	mask = buildMask(starGraph, (40, 40, 40), MaskConfig(), RandomStream(1))
	assert invertMask(invertMask(mask)) == mask
	inverted = buildMask(starGraph, (40, 40, 40), MaskConfig(invert=True), RandomStream(1))
	assert inverted == invertMask(mask)


def _randomSmallGraph(rng: np.random.Generator) -> VesselGraph:
	points = rng.uniform(2.0, 13.0, (3, 3))
	nodes = [VesselNode(i, tuple(p)) for i, p in enumerate(points)]
	edges = [VesselEdge(0, 1, float(rng.uniform(1.0, 4.0))), VesselEdge(1, 2, float(rng.uniform(1.0, 4.0)))]
	return VesselGraph(nodes=nodes, edges=edges)


@pytest.mark.parametrize("straight", [False, True])
def test_buildMaskMatchesSweptBallOracle(straight):
	cfg = MaskConfig(straight_lines=straight, jitter_amplitude=0.0)
	generator = np.random.default_rng(7)
	for case in range(20):
		g = _randomSmallGraph(generator)
		rng = RandomStream(case)
		mask = buildMask(g, (16, 16, 16), cfg, rng)

		expected = np.zeros((16, 16, 16), dtype=bool)
		for e, edge in enumerate(g.edges):
			curve = edgeCurve(g.nodes[edge.a].pos, g.nodes[edge.b].pos, edge.weight, cfg, rng.fork(e))
			centers = curveSamples(curve, edge.weight / 2.0, cfg)
			expected |= _ballOracle((16, 16, 16), centers, edge.weight / 2.0)
		assert np.array_equal(mask.data == 1, expected), f"case {case}"


def test_widerEdgeNeverRemovesVoxels():
	cfg = MaskConfig(straight_lines=True)
	nodes = [VesselNode(0, (5.0, 6.0, 7.0)), VesselNode(1, (20.0, 14.0, 9.0))]
	thin = buildMask(VesselGraph(nodes, [VesselEdge(0, 1, 2.0)]), (24, 24, 24), cfg, RandomStream(3))
	wide = buildMask(VesselGraph(nodes, [VesselEdge(0, 1, 4.0)]), (24, 24, 24), cfg, RandomStream(3))
	assert np.all(wide.data >= thin.data)
	assert wide.data.sum() > thin.data.sum()


@pytest.mark.parametrize("straight", [False, True])
def test_connectedGraphGivesOneComponent(starGraph, straight):
	mask = buildMask(starGraph, (40, 40, 40), MaskConfig(straight_lines=straight), RandomStream(5))
	_labels, count = label(mask.data, structure=np.ones((3, 3, 3)))
	assert count == 1


def test_nodesLieInsideMask():
	cfg = homogeneousConfig()
	for seed in range(3):
		g = growGraph(cfg.graph, RandomStream(seed))
		mask = buildMask(g, cfg.dims, cfg.mask, RandomStream(seed).fork(1))
		for node in g.nodes:
			x, y, z = (int(round(c)) for c in node.pos)
			assert mask.data[z, y, x] == 1.0


def test_buildMaskIsBinaryAndDeterministic(starGraph):
	a = buildMask(starGraph, (40, 40, 40), MaskConfig(), RandomStream(9))
	b = buildMask(starGraph, (40, 40, 40), MaskConfig(), RandomStream(9))
	assert a == b
	assert a.isBinary()
