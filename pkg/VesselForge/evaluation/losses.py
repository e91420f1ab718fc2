# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Reference implementations of the node and edge training losses.

Node losses see the predictions through a matching: matched pairs are penalized by distance
weighted by (2 - confidence), surplus predictions by their distance to the nearest truth
weighted by confidence, and every confidence is pulled towards exp(-distance).
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .adjacency import checkSquare
from .matching import Matching, asPoints, buildMatching, hungarianMatch

EPSILON = 1e-7
UNMATCHED_DISTANCE = 1.0


def _confidences(conf, count: int) -> np.ndarray:
	values = np.asarray(conf, dtype=np.float64).reshape(-1)
	if len(values) != count:
		raise ValueError(f"expected {count} confidences, got {len(values)}")
	return values


def lossMatching(pred, truth, conf) -> Matching:
	"""Match the n = len(truth) most confident predictions to the truth nodes.

	With no more predictions than truth nodes this is a plain :func:`hungarianMatch`.
	"""
	predPoints = asPoints(pred)
	truthPoints = asPoints(truth)
	values = _confidences(conf, len(predPoints))
	if len(predPoints) <= len(truthPoints):
		return hungarianMatch(predPoints, truthPoints)
	# stable: equal confidences keep prediction order
	selected = np.sort(np.argsort(-values, kind="stable")[:len(truthPoints)])
	subset = hungarianMatch(predPoints[selected], truthPoints)
	rows = [int(selected[p]) for p, _t, _d in subset.pairs]
	cols = [t for _p, t, _d in subset.pairs]
	distances = [d for _p, _t, d in subset.pairs]
	return buildMatching(rows, cols, distances, len(predPoints), len(truthPoints))


def matchedLoss(pred, truth, conf, m: Matching) -> float:
	values = _confidences(conf, m.n_pred)
	return float(sum(d * (2.0 - values[p]) for p, _t, d in m.pairs))


def excessLoss(pred, truth, conf, m: Matching) -> float:
	"""Confidence-weighted distance from every unmatched prediction to its nearest truth node."""
	values = _confidences(conf, m.n_pred)
	truthPoints = asPoints(truth)
	if not m.unmatched_pred or len(truthPoints) == 0:
		return 0.0
	predPoints = asPoints(pred)[list(m.unmatched_pred)]
	nearest = cdist(predPoints, truthPoints).min(axis=1)
	return float(np.sum(nearest * values[list(m.unmatched_pred)]))


def confidenceTargets(m: Matching) -> np.ndarray:
	"""exp(-d) for matched predictions, exp(-1) for unmatched ones."""
	distances = np.full(m.n_pred, UNMATCHED_DISTANCE)
	for p, _t, d in m.pairs:
		distances[p] = d
	return np.exp(-distances)


def _bce(probabilities: np.ndarray, targets: np.ndarray) -> float:
	p = np.clip(probabilities, EPSILON, 1.0 - EPSILON)
	return float(-np.sum(targets * np.log(p) + (1.0 - targets) * np.log(1.0 - p)))


def confidenceLoss(conf, m: Matching) -> float:
	return _bce(_confidences(conf, m.n_pred), confidenceTargets(m))


def edgeBce(pred, truth) -> float:
	"""Binary cross-entropy summed over every entry of the adjacency matrices."""
	predMatrix = checkSquare(pred)
	truthMatrix = checkSquare(truth)
	if predMatrix.shape != truthMatrix.shape:
		raise ValueError(f"adjacency sizes differ: {predMatrix.shape} vs {truthMatrix.shape}")
	return _bce(predMatrix, truthMatrix)


@dataclass(frozen=True)
class LossTerms:
	matched: float
	excess: float
	confidence: float
	total: float

	def toDict(self) -> dict:
		return asdict(self)


def totalLoss(pred, truth, conf, alpha: float = 1.0, beta: float = 1.0, m: Matching | None = None) -> LossTerms:
	"""matched + alpha * excess + beta * confidence, with every term reported."""
	m = m or lossMatching(pred, truth, conf)
	matched = matchedLoss(pred, truth, conf, m)
	excess = excessLoss(pred, truth, conf, m)
	confidence = confidenceLoss(conf, m)
	return LossTerms(matched, excess, confidence, matched + alpha * excess + beta * confidence)
