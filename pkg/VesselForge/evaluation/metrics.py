# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

from dataclasses import asdict, dataclass

import numpy as np

from .adjacency import checkSquare
from .matching import Matching


@dataclass(frozen=True)
class Metrics:
	precision: float
	recall: float
	f1: float
	tp: int
	fp: int
	fn: int

	@classmethod
	def fromCounts(cls, tp: int, fp: int, fn: int) -> "Metrics":
		"""Precision, recall and F1 from counts; nothing predicted for nothing expected scores 1."""
		if tp == fp == fn == 0:
			return cls(1.0, 1.0, 1.0, 0, 0, 0)
		precision = tp / (tp + fp) if tp + fp else 0.0
		recall = tp / (tp + fn) if tp + fn else 0.0
		f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
		return cls(precision, recall, f1, tp, fp, fn)

	def toDict(self) -> dict:
		return asdict(self)


def nodeMetrics(m: Matching, tau: float) -> Metrics:
	"""A matched pair within ``tau`` is a hit; one beyond counts as both a false positive and a miss."""
	if tau <= 0:
		raise ValueError(f"tau must be positive, got {tau}")
	tp = sum(1 for _p, _t, d in m.pairs if d <= tau)
	beyond = len(m.pairs) - tp
	return Metrics.fromCounts(tp, len(m.unmatched_pred) + beyond, len(m.unmatched_truth) + beyond)


def edgeMetrics(pred, truth, threshold: float) -> Metrics:
	"""Compare the strict upper triangles of a probability and a binary adjacency matrix."""
	pred = checkSquare(pred)
	truth = checkSquare(truth)
	if pred.shape != truth.shape:
		raise ValueError(f"adjacency sizes differ: {pred.shape} vs {truth.shape}")
	if not 0.0 < threshold < 1.0:
		raise ValueError(f"threshold must be in (0, 1), got {threshold}")
	upper = np.triu_indices(len(pred), k=1)
	predicted = pred[upper] >= threshold
	actual = truth[upper] >= 0.5
	tp = int(np.sum(predicted & actual))
	fp = int(np.sum(predicted & ~actual))
	fn = int(np.sum(~predicted & actual))
	return Metrics.fromCounts(tp, fp, fn)
