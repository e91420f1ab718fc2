# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Dense scalar volume container."""

import numpy as np

DTYPE = np.dtype("<f4")
AXIS_ORDER = "zyx"  # z slowest, x fastest


class ScalarVolume:
	"""Dense 3D scalar field stored as float32 with shape (dz, dy, dx).

	Voxel (x, y, z) is ``data[z, y, x]``; its center sits at coordinates (x, y, z).
	"""

	__slots__ = ("data",)

	def __init__(self, data: np.ndarray) -> None:
		data = np.ascontiguousarray(data, dtype=DTYPE)
		if data.ndim != 3 or 0 in data.shape:
			raise ValueError(f"volume data must be a non-empty 3D array, got shape {data.shape}")
		if not np.all(np.isfinite(data)):
			raise ValueError("volume data contains non-finite values")
		data.setflags(write=False)
		self.data = data

	@classmethod
	def zeros(cls, dims: tuple[int, int, int]) -> "ScalarVolume":
		dx, dy, dz = dims
		return cls(np.zeros((dz, dy, dx), dtype=DTYPE))

	@classmethod
	def full(cls, dims: tuple[int, int, int], value: float) -> "ScalarVolume":
		dx, dy, dz = dims
		return cls(np.full((dz, dy, dx), value, dtype=DTYPE))

	@property
	def dims(self) -> tuple[int, int, int]:
		"""Voxel counts as (dx, dy, dz)."""
		dz, dy, dx = self.data.shape
		return (dx, dy, dz)

	@property
	def voxelCount(self) -> int:
		return int(self.data.size)

	def isBinary(self) -> bool:
		return bool(np.all((self.data == 0) | (self.data == 1)))

	def toBytes(self) -> bytes:
		"""Raw little-endian float32 bytes in z-slowest/x-fastest order."""
		return self.data.tobytes(order="C")

	@classmethod
	def fromBytes(cls, raw: bytes, dims: tuple[int, int, int]) -> "ScalarVolume":
		dx, dy, dz = dims
		expected = dx * dy * dz * DTYPE.itemsize
		if len(raw) != expected:
			raise ValueError(f"volume holds {len(raw)} bytes, expected {expected} for dims {dims}")
		return cls(np.frombuffer(raw, dtype=DTYPE).reshape((dz, dy, dx)))

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, ScalarVolume):
			return NotImplemented
		return self.data.shape == other.data.shape and self.toBytes() == other.toBytes()

	def __repr__(self) -> str:
		return f"ScalarVolume(dims={self.dims})"
