# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Minimum-cost one-to-one matching of predicted to ground-truth nodes."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class Matching:
	"""Result of node matching.

	``permutation`` has one entry per slot of the padded size N = max(n_pred, n_truth).
	Slot j < n_truth holds the prediction matched to truth j; indices >= n_pred stand for
	padding rows. Unmatched predictions fill the slots past n_truth in ascending order.
	"""

	pairs: tuple[tuple[int, int, float], ...]
	unmatched_pred: tuple[int, ...]
	unmatched_truth: tuple[int, ...]
	permutation: tuple[int, ...]
	n_pred: int
	n_truth: int

	@property
	def size(self) -> int:
		return len(self.permutation)

	@property
	def totalCost(self) -> float:
		return float(sum(d for _p, _t, d in self.pairs))

	def predToTruth(self) -> dict[int, int]:
		return {p: t for p, t, _d in self.pairs}


def asPoints(points) -> np.ndarray:
	array = np.asarray(points, dtype=np.float64)
	if array.size == 0:
		return np.zeros((0, 3))
	if array.ndim != 2 or array.shape[1] != 3 or not np.all(np.isfinite(array)):
		raise ValueError(f"expected a list of finite 3D points, got shape {array.shape}")
	return array


def buildMatching(rows, cols, distances, nPred: int, nTruth: int) -> Matching:
	"""Assemble a :class:`Matching` from assigned (prediction, truth) index pairs."""
	pairs = tuple(sorted(
		((int(p), int(t), float(d)) for p, t, d in zip(rows, cols, distances)),
		key=lambda pair: pair[1],
	))
	matchedPred = {p for p, _t, _d in pairs}
	matchedTruth = {t for _p, t, _d in pairs}
	unmatchedPred = tuple(i for i in range(nPred) if i not in matchedPred)
	unmatchedTruth = tuple(j for j in range(nTruth) if j not in matchedTruth)

	size = max(nPred, nTruth)
	permutation = [-1] * size
	for p, t, _d in pairs:
		permutation[t] = p
	padding = iter(range(nPred, size))
	for t in unmatchedTruth:
		permutation[t] = next(padding)
	for slot, p in zip(range(nTruth, size), unmatchedPred):
		permutation[slot] = p
	return Matching(
		pairs=pairs,
		unmatched_pred=unmatchedPred,
		unmatched_truth=unmatchedTruth,
		permutation=tuple(permutation),
		n_pred=nPred,
		n_truth=nTruth,
	)


def hungarianMatch(pred, truth) -> Matching:
	"""Match ``min(len(pred), len(truth))`` pairs with minimal total Euclidean distance."""
	predPoints = asPoints(pred)
	truthPoints = asPoints(truth)
	nPred, nTruth = len(predPoints), len(truthPoints)
	if nPred == 0 or nTruth == 0:
		return buildMatching([], [], [], nPred, nTruth)
	cost = cdist(predPoints, truthPoints)
	rows, cols = linear_sum_assignment(cost)
	return buildMatching(rows, cols, cost[rows, cols], nPred, nTruth)
