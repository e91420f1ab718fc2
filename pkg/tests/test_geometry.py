# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from VesselForge.geometry import (
	angleDegrees,
	orthonormalBasis,
	segmentMinDistance,
	segmentMinDistances,
	segmentsIntersect2d,
)


@pytest.mark.parametrize("segments, expected", [
	(((0, 0), (2, 2), (0, 2), (2, 0)), True),  # crossing
	(((0, 0), (2, 0), (0, 1), (2, 1)), False),  # parallel
	(((0, 0), (1, 1), (1, 1), (2, 0)), True),  # shared endpoint
	(((0, 0), (2, 0), (1, 0), (3, 0)), True),  # collinear overlap
	(((0, 0), (1, 0), (2, 0), (3, 0)), False),  # collinear, disjoint
	(((0, 0), (1, 0), (2, -1), (2, 1)), False),
])
def test_segmentsIntersect2d(segments, expected):
	assert segmentsIntersect2d(*segments) is expected


@pytest.mark.parametrize("a1, a2, b1, b2, expected", [
	((0, 0, 0), (2, 0, 0), (1, -1, 1), (1, 1, 1), 1.0),  # skew
	((0, 0, 0), (1, 0, 0), (0, 2, 0), (1, 2, 0), 2.0),  # parallel
	((0, 0, 0), (1, 0, 0), (3, 0, 0), (5, 0, 0), 2.0),  # collinear gap
	((0, 0, 0), (0, 0, 0), (1, 1, 0), (1, -1, 0), 1.0),  # point to segment
	((0, 0, 0), (2, 2, 0), (0, 2, 0), (2, 0, 0), 0.0),  # intersecting
	((0, 0, 0), (0, 0, 0), (3, 4, 0), (3, 4, 0), 5.0),  # two points
])
def test_segmentMinDistance(a1, a2, b1, b2, expected):
	assert segmentMinDistance(a1, a2, b1, b2) == pytest.approx(expected, abs=1e-12)
	assert segmentMinDistance(b1, b2, a1, a2) == pytest.approx(expected, abs=1e-12)


def test_segmentMinDistanceAgainstDenseSampling():
	generator = np.random.default_rng(0)
	t = np.linspace(0.0, 1.0, 101)[:, None]
	for _ in range(50):
		a1, a2, b1, b2 = generator.uniform(0.0, 2.0, (4, 3))
		exact = segmentMinDistance(a1, a2, b1, b2)
		sampled = cdist(a1 + t * (a2 - a1), b1 + t * (b2 - b1)).min()
		assert exact <= sampled + 1e-12
		assert sampled - exact < 0.05


def _sub(p, q):
	return (p[0] - q[0], p[1] - q[1])


def _cross(p, q):
	return p[0] * q[1] - p[1] * q[0]


def _dot(p, q):
	return p[0] * q[0] + p[1] * q[1]


def _pointOnSegment(p, a, b) -> bool:
	return (
		_cross(_sub(b, a), _sub(p, a)) == 0
		and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
		and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
	)


def _exactIntersect(p1, p2, p3, p4) -> bool:
	"""Rational-arithmetic reference: solve for both segment parameters exactly."""
	p1, p2, p3, p4 = [tuple(Fraction(c) for c in p) for p in (p1, p2, p3, p4)]
	r, s, q = _sub(p2, p1), _sub(p4, p3), _sub(p3, p1)
	denom = _cross(r, s)
	if denom != 0:
		t = _cross(q, s) / denom
		u = _cross(q, r) / denom
		return 0 <= t <= 1 and 0 <= u <= 1
	if r == (0, 0) and s == (0, 0):
		return p1 == p3
	if r == (0, 0):
		return _pointOnSegment(p1, p3, p4)
	if s == (0, 0):
		return _pointOnSegment(p3, p1, p2)
	if _cross(q, r) != 0:
		return False
	rr = _dot(r, r)
	t0 = _dot(q, r) / rr
	t1 = _dot(_sub(p4, p1), r) / rr
	return max(min(t0, t1), 0) <= min(max(t0, t1), 1)


def test_segmentsIntersect2dOnIntegerGrid():
	# a 5x5 grid makes collinear, touching and degenerate pairs common
	points = np.random.default_rng(11).integers(0, 5, size=(1000, 4, 2))
	outcomes = []
	for pair in points:
		p1, p2, p3, p4 = [tuple(int(c) for c in p) for p in pair]
		expected = _exactIntersect(p1, p2, p3, p4)
		assert segmentsIntersect2d(p1, p2, p3, p4) is expected, (p1, p2, p3, p4)
		outcomes.append(expected)
	assert 0 < sum(outcomes) < len(outcomes)


def test_segmentsIntersect2dOnRandomSegments():
	points = np.random.default_rng(12).uniform(0.0, 1.0, size=(1000, 4, 2))
	outcomes = []
	for pair in points:
		p1, p2, p3, p4 = [tuple(float(c) for c in p) for p in pair]
		expected = _exactIntersect(p1, p2, p3, p4)
		assert segmentsIntersect2d(p1, p2, p3, p4) is expected, (p1, p2, p3, p4)
		outcomes.append(expected)
	assert 0 < sum(outcomes) < len(outcomes)


def test_segmentMinDistancesBatch():
	starts = np.array([[0, 2, 0], [3, 0, 0]], dtype=float)
	ends = np.array([[1, 2, 0], [5, 0, 0]], dtype=float)
	assert np.allclose(segmentMinDistances((0, 0, 0), (1, 0, 0), starts, ends), [2.0, 2.0])


def test_orthonormalBasis():
	for direction in ([0, 0, 1], [1, 0, 0], [0.3, -2.0, 0.5]):
		u, v, n = orthonormalBasis(np.array(direction, dtype=float))
		basis = np.array([u, v, n])
		assert np.allclose(basis @ basis.T, np.eye(3), atol=1e-12)
		assert np.allclose(n, np.array(direction) / np.linalg.norm(direction))


def test_angleDegrees():
	assert angleDegrees(np.array([1.0, 0, 0]), np.array([0, 2.0, 0])) == pytest.approx(90.0)
	assert angleDegrees(np.array([1.0, 0, 0]), np.array([1.0, 0, 0])) == pytest.approx(0.0)
