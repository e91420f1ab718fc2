# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

from abc import ABC, abstractmethod

import numpy as np

from ..randomStream import RandomStream


class NoiseModel(ABC):
	"""Abstract interface for detector noise.

	Supports corrupting an intensity field in place of the ideal signal.
	"""

	#: Identifier recorded in sample metadata.
	name: str = ""

	@abstractmethod
	def apply(self, intensity: np.ndarray, rng: RandomStream) -> np.ndarray:
		"""
		Return a noisy copy of ``intensity``.

		:param intensity: Float64 intensity field of any shape.
		:param rng: Stream all draws come from.
		:return: New array of the same shape.
		"""
		pass
