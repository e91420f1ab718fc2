# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Geometry primitives shared by graph growth and rasterization.

Points are anything ``numpy.asarray`` turns into a length-2 or length-3 float vector.
"""

import math
from typing import Sequence

import numpy as np

Vec2 = Sequence[float]
Vec3 = Sequence[float]

_EPS = 1e-12


def unit(v: np.ndarray) -> np.ndarray:
	n = np.linalg.norm(v)
	if n == 0:
		return v
	return v / n


def orthonormalBasis(direction: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Return (u, v, n) with n = unit(direction) and u, v spanning its normal plane."""
	n = unit(np.asarray(direction, dtype=np.float64))
	if abs(n[0]) < 0.9:
		a = np.array([1.0, 0.0, 0.0])
	else:
		a = np.array([0.0, 1.0, 0.0])
	v = unit(np.cross(n, a))
	u = unit(np.cross(v, n))
	return u, v, n


def angleDegrees(a: np.ndarray, b: np.ndarray) -> float:
	d = float(np.clip(np.dot(unit(a), unit(b)), -1.0, 1.0))
	return math.degrees(math.acos(d))


def _orientation(p: Vec2, q: Vec2, r: Vec2) -> int:
	value = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
	if value > 0:
		return 1
	if value < 0:
		return -1
	return 0


def _onSegment(p: Vec2, q: Vec2, r: Vec2) -> bool:
	"""Whether collinear point q lies on segment pr."""
	return (
		min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
		and min(p[1], r[1]) <= q[1] <= max(p[1], r[1])
	)


def segmentsIntersect2d(p1: Vec2, p2: Vec2, p3: Vec2, p4: Vec2) -> bool:
	"""Whether closed segments p1p2 and p3p4 share at least one point.

	Four orientation tests with collinear handling; touching endpoints count.
	"""
	o1 = _orientation(p1, p2, p3)
	o2 = _orientation(p1, p2, p4)
	o3 = _orientation(p3, p4, p1)
	o4 = _orientation(p3, p4, p2)

	if o1 != o2 and o3 != o4:
		return True
	if o1 == 0 and _onSegment(p1, p3, p2):
		return True
	if o2 == 0 and _onSegment(p1, p4, p2):
		return True
	if o3 == 0 and _onSegment(p3, p1, p4):
		return True
	if o4 == 0 and _onSegment(p3, p2, p4):
		return True
	return False


def segmentMinDistances(a1: Vec3, a2: Vec3, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
	"""Minimum distances between segment a1a2 and each segment starts[i]ends[i].

	Closest points between segments, clamped to both parameter ranges; degenerate
	segments are treated as points.

	:param starts: (m, 3) array of segment start points.
	:param ends: (m, 3) array of segment end points.
	:return: (m,) array of distances.
	"""
	p1 = np.asarray(a1, dtype=np.float64)
	q1 = np.asarray(a2, dtype=np.float64)
	p2 = np.atleast_2d(np.asarray(starts, dtype=np.float64))
	q2 = np.atleast_2d(np.asarray(ends, dtype=np.float64))

	d1 = q1 - p1
	d2 = q2 - p2
	r = p1 - p2
	a = float(np.dot(d1, d1))
	e = np.einsum("ij,ij->i", d2, d2)
	f = np.einsum("ij,ij->i", d2, r)
	c = r @ d1
	b = d2 @ d1

	pointB = e <= _EPS
	safeE = np.where(pointB, 1.0, e)

	if a <= _EPS:
		s = np.zeros(len(p2))
		t = np.where(pointB, 0.0, np.clip(f / safeE, 0.0, 1.0))
	else:
		denom = a * e - b * b
		safeDenom = np.where(denom > _EPS * a * safeE, denom, 1.0)
		s = np.where(denom > _EPS * a * safeE, np.clip((b * f - c * e) / safeDenom, 0.0, 1.0), 0.0)
		t = (b * s + f) / safeE
		below = t < 0.0
		above = t > 1.0
		s = np.where(below, np.clip(-c / a, 0.0, 1.0), s)
		s = np.where(above, np.clip((b - c) / a, 0.0, 1.0), s)
		t = np.clip(t, 0.0, 1.0)
		# segment b degenerates to its start point
		s = np.where(pointB, np.clip(-c / a, 0.0, 1.0), s)
		t = np.where(pointB, 0.0, t)

	closestA = p1 + s[:, None] * d1
	closestB = p2 + t[:, None] * d2
	return np.linalg.norm(closestA - closestB, axis=1)


def segmentMinDistance(a1: Vec3, a2: Vec3, b1: Vec3, b2: Vec3) -> float:
	"""Minimum Euclidean distance between closed segments a1a2 and b1b2 (0 iff they meet)."""
	return float(segmentMinDistances(a1, a2, np.asarray([b1]), np.asarray([b2]))[0])
