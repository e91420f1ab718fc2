# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import numpy as np


def checkSquare(a) -> np.ndarray:
	matrix = np.asarray(a, dtype=np.float64)
	if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
		raise ValueError(f"adjacency must be a square matrix, got shape {matrix.shape}")
	return matrix


def symmetrize(a) -> np.ndarray:
	"""(A + A^T) / 2."""
	matrix = checkSquare(a)
	return (matrix + matrix.T) / 2.0


def _checkPermutation(permutation, size: int) -> np.ndarray:
	perm = np.asarray(permutation, dtype=np.int64)
	if perm.shape != (size,) or not np.array_equal(np.sort(perm), np.arange(size)):
		raise ValueError(f"permutation of length {perm.size} is not valid for a {size}x{size} matrix")
	return perm


def reorderAdjacency(a, permutation) -> np.ndarray:
	"""R A R^T: entry (i, j) of the result is ``a[permutation[i], permutation[j]]``."""
	matrix = checkSquare(a)
	perm = _checkPermutation(permutation, len(matrix))
	return matrix[np.ix_(perm, perm)]


def invertPermutation(permutation) -> np.ndarray:
	perm = np.asarray(permutation, dtype=np.int64)
	return _checkPermutation(np.argsort(perm), len(perm))


def padAdjacency(a, size: int) -> np.ndarray:
	"""Embed ``a`` in the top-left corner of a zero ``size`` x ``size`` matrix."""
	matrix = checkSquare(a) if np.size(a) else np.zeros((0, 0))
	if size < len(matrix):
		raise ValueError(f"cannot pad a {len(matrix)}x{len(matrix)} matrix to {size}")
	padded = np.zeros((size, size))
	padded[:len(matrix), :len(matrix)] = matrix
	return padded
