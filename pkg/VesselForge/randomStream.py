# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Deterministic, splittable random streams.

A stream is identified by its root seed and a fork path. Two streams with the same
identity produce the same draws in every process, and forking never consumes draws
from the parent, so a sample regenerates identically however many siblings exist.
"""

import math

import numpy as np

RNG_ALGORITHM = "numpy-philox4x32-10/seedsequence/v1"


class RandomStream:
	"""Single-owner wrapper around a counter-based numpy generator."""

	algorithm = RNG_ALGORITHM

	def __init__(self, seed: int, path: tuple[int, ...] = ()) -> None:
		"""
		:param seed: Non-negative root seed.
		:param path: Fork indices leading from the root to this stream.
		"""
		if seed < 0:
			raise ValueError(f"seed must be non-negative, got {seed}")
		self.seed = int(seed)
		self.path = tuple(int(i) for i in path)
		seedSequence = np.random.SeedSequence(self.seed, spawn_key=self.path)
		self.generator = np.random.Generator(np.random.Philox(seedSequence))

	def __repr__(self) -> str:
		return f"RandomStream(seed={self.seed}, path={self.path})"

	def fork(self, index: int) -> "RandomStream":
		"""Return the child stream ``index``; the parent state is untouched."""
		if index < 0:
			raise ValueError(f"fork index must be non-negative, got {index}")
		return RandomStream(self.seed, self.path + (index,))

	def random(self, size=None):
		return self.generator.random(size)

	def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
		return self.generator.uniform(low, high, size)

	def integers(self, low: int, high: int, size=None, endpoint: bool = False):
		return self.generator.integers(low, high, size=size, endpoint=endpoint)

	def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
		return self.generator.normal(loc, scale, size)

	def poisson(self, lam, size=None):
		return self.generator.poisson(lam, size)

	def unitVector(self) -> np.ndarray:
		"""Uniformly distributed direction on the unit sphere."""
		u = self.generator.uniform(-1.0, 1.0)
		theta = self.generator.uniform(0.0, 2.0 * math.pi)
		s = math.sqrt(max(0.0, 1.0 - u * u))
		return np.array([s * math.cos(theta), s * math.sin(theta), u])


def forkStream(parent: RandomStream, index: int) -> RandomStream:
	"""Return the child of ``parent`` at ``index``; depends only on (parent identity, index)."""
	return parent.fork(index)
