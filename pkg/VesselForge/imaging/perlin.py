# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Improved gradient-lattice (Perlin) noise, vectorized over numpy arrays.

The permutation table is derived from the seed, so every seed gives an independent
noise field. Values are zero on integer lattice points.
"""

from functools import lru_cache

import numpy as np

# 12 cube-edge gradients, padded to 16 entries
GRADIENTS = np.array([
	(1, 1, 0), (-1, 1, 0), (1, -1, 0), (-1, -1, 0),
	(1, 0, 1), (-1, 0, 1), (1, 0, -1), (-1, 0, -1),
	(0, 1, 1), (0, -1, 1), (0, 1, -1), (0, -1, -1),
	(1, 1, 0), (0, -1, 1), (-1, 1, 0), (0, -1, -1),
], dtype=np.float64)
GRADIENTS_INT8 = GRADIENTS.astype(np.int8)


@lru_cache(maxsize=32)
def _permutation(seed: int) -> np.ndarray:
	"""Doubled permutation of 0..255 to avoid index wrap-around."""
	table = np.random.Generator(np.random.Philox(seed)).permutation(256)
	doubled = np.concatenate([table, table])
	doubled.setflags(write=False)
	return doubled


def _fade(t: np.ndarray) -> np.ndarray:
	# 6t^5 - 15t^4 + 10t^3
	return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _lerp(a: np.ndarray, b: np.ndarray, t: np.ndarray) -> np.ndarray:
	return a + t * (b - a)


def _grad(h: np.ndarray, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
	g = GRADIENTS[h & 15]
	return g[..., 0] * x + g[..., 1] * y + g[..., 2] * z


def perlinField(x, y, z, seed: int) -> np.ndarray:
	"""Noise at every point of the broadcast coordinate arrays, clipped to [-1, 1]."""
	x, y, z = np.broadcast_arrays(*(np.asarray(c, dtype=np.float64) for c in (x, y, z)))
	p = _permutation(int(seed))

	fx, fy, fz = np.floor(x), np.floor(y), np.floor(z)
	xi = fx.astype(np.int64) & 255
	yi = fy.astype(np.int64) & 255
	zi = fz.astype(np.int64) & 255
	xf, yf, zf = x - fx, y - fy, z - fz
	u, v, w = _fade(xf), _fade(yf), _fade(zf)

	a = p[xi] + yi
	aa = p[a] + zi
	ab = p[a + 1] + zi
	b = p[xi + 1] + yi
	ba = p[b] + zi
	bb = p[b + 1] + zi

	x1 = _lerp(_grad(p[aa], xf, yf, zf), _grad(p[ba], xf - 1, yf, zf), u)
	x2 = _lerp(_grad(p[ab], xf, yf - 1, zf), _grad(p[bb], xf - 1, yf - 1, zf), u)
	y1 = _lerp(x1, x2, v)
	x3 = _lerp(_grad(p[aa + 1], xf, yf, zf - 1), _grad(p[ba + 1], xf - 1, yf, zf - 1), u)
	x4 = _lerp(_grad(p[ab + 1], xf, yf - 1, zf - 1), _grad(p[bb + 1], xf - 1, yf - 1, zf - 1), u)
	y2 = _lerp(x3, x4, v)
	return np.clip(_lerp(y1, y2, w), -1.0, 1.0)


def perlin3(p, seed: int) -> float:
	"""Noise value at the single point ``p``."""
	x, y, z = p
	return float(perlinField(x, y, z, seed))


def fractalPerlinField(x, y, z, octaves: int, seed: int) -> np.ndarray:
	"""Octave sum of 2^-i * noise(2^i * p) for i = 1..octaves."""
	if octaves < 1:
		raise ValueError(f"octaves must be at least 1, got {octaves}")
	x, y, z = (np.asarray(c, dtype=np.float64) for c in (x, y, z))
	total = np.zeros(np.broadcast_shapes(x.shape, y.shape, z.shape))
	for i in range(1, octaves + 1):
		frequency = 2.0 ** i
		total += perlinField(frequency * x, frequency * y, frequency * z, seed) / frequency
	return total


def fractalPerlin(p, n: int, seed: int) -> float:
	x, y, z = p
	return float(fractalPerlinField(x, y, z, n, seed))


def _gridAxis(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
	"""Lower and upper corner slots, wrapped lattice ids of the slots, and fractional parts."""
	floor = np.floor(coords)
	cells = floor.astype(np.int64)
	corners = np.unique(np.concatenate([cells, cells + 1]))
	lower = np.searchsorted(corners, cells)
	upper = np.searchsorted(corners, cells + 1)
	return lower, upper, corners & 255, coords - floor


def perlinGrid(xs, ys, zs, seed: int) -> np.ndarray:
	"""Noise on the axis-aligned grid spanned by 1D coordinate vectors.

	Same values as :func:`perlinField` on the matching mesh. Corner gradients are hashed
	once per lattice point rather than once per sample.

	:return: Array of shape (len(zs), len(ys), len(xs)).
	"""
	xs, ys, zs = (np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in (xs, ys, zs))
	p = _permutation(int(seed))
	x0, x1, xIds, xf = _gridAxis(xs)
	y0, y1, yIds, yf = _gridAxis(ys)
	z0, z1, zIds, zf = _gridAxis(zs)

	# gradient components per lattice point, indexed [z, y, x]
	hashes = p[p[p[xIds][None, :] + yIds[:, None]][None, :, :] + zIds[:, None, None]] & 15
	gx, gy, gz = (GRADIENTS_INT8[:, axis][hashes] for axis in range(3))

	xSlots = (x0[None, None, :], x1[None, None, :])
	ySlots = (y0[None, :, None], y1[None, :, None])
	zSlots = (z0[:, None, None], z1[:, None, None])
	x, y, z = xf[None, None, :], yf[None, :, None], zf[:, None, None]
	u, v, w = _fade(x), _fade(y), _fade(z)

	def corner(i: int, j: int, k: int) -> np.ndarray:
		slot = (zSlots[k], ySlots[j], xSlots[i])
		return gx[slot] * (x - i) + gy[slot] * (y - j) + gz[slot] * (z - k)

	near = _lerp(_lerp(corner(0, 0, 0), corner(1, 0, 0), u), _lerp(corner(0, 1, 0), corner(1, 1, 0), u), v)
	far = _lerp(_lerp(corner(0, 0, 1), corner(1, 0, 1), u), _lerp(corner(0, 1, 1), corner(1, 1, 1), u), v)
	return np.clip(_lerp(near, far, w), -1.0, 1.0)


def fractalPerlinGrid(xs, ys, zs, octaves: int, seed: int) -> np.ndarray:
	"""Octave sum of :func:`perlinGrid`, matching :func:`fractalPerlinField` on the mesh."""
	if octaves < 1:
		raise ValueError(f"octaves must be at least 1, got {octaves}")
	xs, ys, zs = (np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in (xs, ys, zs))
	total = np.zeros((len(zs), len(ys), len(xs)))
	for i in range(1, octaves + 1):
		frequency = 2.0 ** i
		total += perlinGrid(frequency * xs, frequency * ys, frequency * zs, seed) / frequency
	return total
