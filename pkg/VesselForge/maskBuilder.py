# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Conversion of a vessel graph into a binary voxel mask.

Every edge becomes a cubic Bezier center-line (or its chord) along which spheres of the
edge radius are stamped at dense arc-length intervals. Each sphere radius is jittered
independently.
"""

import math
from dataclasses import dataclass

import numpy as np

from .genConfig import MaskConfig
from .geometry import orthonormalBasis, unit
from .graphGrowth import VesselGraph
from .logHandler import log
from .randomStream import RandomStream
from .volume import DTYPE, ScalarVolume

_FLATTEN_STEPS = 256
_MAX_NORMAL_DRAWS = 16


@dataclass(frozen=True)
class BezierSegment:
	p0: tuple[float, float, float]
	p1: tuple[float, float, float]
	p2: tuple[float, float, float]
	p3: tuple[float, float, float]

	def __post_init__(self):
		for name in ("p0", "p1", "p2", "p3"):
			point = tuple(float(c) for c in getattr(self, name))
			if len(point) != 3 or not all(math.isfinite(c) for c in point):
				raise ValueError(f"{name} must be a finite 3D point, got {point}")
			object.__setattr__(self, name, point)

	@classmethod
	def straight(cls, p0, p3) -> "BezierSegment":
		"""Chord p0p3 as a cubic with evenly spaced collinear control points."""
		start = np.asarray(p0, dtype=np.float64)
		chord = np.asarray(p3, dtype=np.float64) - start
		return cls(p0, start + chord / 3.0, start + 2.0 * chord / 3.0, p3)

	def controlArray(self) -> np.ndarray:
		return np.array([self.p0, self.p1, self.p2, self.p3], dtype=np.float64)


def bezierPoints(seg: BezierSegment, ts: np.ndarray) -> np.ndarray:
	"""Evaluate the curve at every parameter of ``ts``; returns an (n, 3) array."""
	t = np.asarray(ts, dtype=np.float64)[:, None]
	s = 1.0 - t
	p = seg.controlArray()
	return s ** 3 * p[0] + 3.0 * s * s * t * p[1] + 3.0 * s * t * t * p[2] + t ** 3 * p[3]


def bezierPoint(seg: BezierSegment, t: float) -> np.ndarray:
	"""Cubic Bernstein evaluation B(t) for t in [0, 1]."""
	if not 0.0 <= t <= 1.0:
		raise ValueError(f"t must be in [0, 1], got {t}")
	return bezierPoints(seg, np.array([t]))[0]


def controlPoints(p0, p3, w: float, rng: RandomStream, normal=None) -> tuple[np.ndarray, np.ndarray]:
	"""Inner control points at one and two thirds of the chord, offset by +/- ``w`` along a normal.

	The first control point moves by +w along ``normal`` and the second by -w, giving an S-bend.

	:param w: Offset magnitude, the edge diameter.
	:param normal: Unit vector perpendicular to the chord; drawn from ``rng`` when omitted.
	"""
	start = np.asarray(p0, dtype=np.float64)
	chord = np.asarray(p3, dtype=np.float64) - start
	if not np.any(chord):
		raise ValueError("control points need distinct end points")
	if normal is None:
		normal = _randomNormal(chord, rng)
	normal = np.asarray(normal, dtype=np.float64)
	p1 = start + chord / 3.0 + w * normal
	p2 = start + 2.0 * chord / 3.0 - w * normal
	return p1, p2


def _randomNormal(chord: np.ndarray, rng: RandomStream) -> np.ndarray:
	"""Random unit vector orthogonalized against ``chord``."""
	direction = unit(chord)
	for _draw in range(_MAX_NORMAL_DRAWS):
		candidate = rng.unitVector()
		candidate = candidate - np.dot(candidate, direction) * direction
		norm = np.linalg.norm(candidate)
		if norm > 1e-6:
			return candidate / norm
	u, _v, _n = orthonormalBasis(chord)
	return u


def curveSamples(curve: BezierSegment, radius: float, cfg: MaskConfig) -> np.ndarray:
	"""Sphere centers at equal arc-length steps of at most ``radius / 2``.

	Both end points are always included.
	"""
	if radius <= 0:
		raise ValueError(f"radius must be positive, got {radius}")
	fine = bezierPoints(curve, np.linspace(0.0, 1.0, _FLATTEN_STEPS + 1))
	cumulative = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(fine, axis=0), axis=1))])
	length = float(cumulative[-1])
	density = max(cfg.samples_per_unit_length, 2.0 / radius)
	count = int(math.ceil(length * density)) + 1
	if length == 0.0:
		return fine[:1]
	ts = np.interp(np.linspace(0.0, length, count), cumulative, np.linspace(0.0, 1.0, _FLATTEN_STEPS + 1))
	ts[0], ts[-1] = 0.0, 1.0
	return bezierPoints(curve, ts)


def _stampSpheres(buffer: np.ndarray, centers: np.ndarray, radii: np.ndarray) -> None:
	"""Set every voxel whose center is within the radius of some sphere. Never clears."""
	dz, dy, dx = buffer.shape
	upper = np.array([dx - 1, dy - 1, dz - 1], dtype=np.float64)
	for center, r in zip(centers, radii):
		lo = np.maximum(np.ceil(center - r), 0.0).astype(int)
		hi = np.minimum(np.floor(center + r), upper).astype(int)
		if np.any(lo > hi):
			continue
		z, y, x = np.ogrid[lo[2]:hi[2] + 1, lo[1]:hi[1] + 1, lo[0]:hi[0] + 1]
		ex = x - center[0]
		ey = y - center[1]
		ez = z - center[2]
		inside = ex * ex + ey * ey + ez * ez <= r * r
		buffer[lo[2]:hi[2] + 1, lo[1]:hi[1] + 1, lo[0]:hi[0] + 1] |= inside


def _edgeSpheres(
	curve: BezierSegment, rBase: float, cfg: MaskConfig, rng: RandomStream,
) -> tuple[np.ndarray, np.ndarray]:
	centers = curveSamples(curve, rBase, cfg)
	amplitude = cfg.jitter_amplitude
	radii = rBase * (1.0 + rng.uniform(-amplitude, amplitude, len(centers)))
	return centers, radii


def rasterizeEdge(
	mask: ScalarVolume, curve: BezierSegment, rBase: float, cfg: MaskConfig, rng: RandomStream,
) -> ScalarVolume:
	"""Return ``mask`` with the jittered tube around ``curve`` added."""
	if rBase <= 0:
		raise ValueError(f"radius must be positive, got {rBase}")
	buffer = mask.data != 0
	centers, radii = _edgeSpheres(curve, rBase, cfg, rng)
	_stampSpheres(buffer, centers, radii)
	return ScalarVolume(buffer.astype(DTYPE))


def edgeCurve(p0, p3, weight: float, cfg: MaskConfig, rng: RandomStream) -> BezierSegment:
	"""Center-line of one edge: the chord, or a Bezier curve through drawn control points."""
	if cfg.straight_lines or np.allclose(p0, p3):
		return BezierSegment.straight(p0, p3)
	p1, p2 = controlPoints(p0, p3, weight, rng)
	return BezierSegment(p0, p1, p2, p3)


def buildMask(g: VesselGraph, dims: tuple[int, int, int], cfg: MaskConfig, rng: RandomStream) -> ScalarVolume:
	"""Binary mask (1 = vessel) of the union of all edge tubes, inverted if configured.

	Edge ``e`` draws its curve and jitter from ``rng.fork(e)``, so edges are independent.
	"""
	dx, dy, dz = dims
	buffer = np.zeros((dz, dy, dx), dtype=bool)
	index = g.indexOf()
	for e, edge in enumerate(g.edges):
		edgeRng = rng.fork(e)
		p0 = g.nodes[index[edge.a]].pos
		p3 = g.nodes[index[edge.b]].pos
		curve = edgeCurve(p0, p3, edge.weight, cfg, edgeRng)
		centers, radii = _edgeSpheres(curve, edge.weight / 2.0, cfg, edgeRng)
		_stampSpheres(buffer, centers, radii)
	if cfg.invert:
		buffer = ~buffer
	log.debug(f"Mask covers {int(buffer.sum())} of {buffer.size} voxels ({len(g.edges)} edges)")
	return ScalarVolume(buffer.astype(DTYPE))


def invertMask(mask: ScalarVolume) -> ScalarVolume:
	return ScalarVolume(1.0 - mask.data)
