# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Scoring of predicted vessel graphs against ground truth.

A prediction document is ``{"nodes": [{"pos": [x, y, z], "confidence": c}], "adjacency": [[...]]}``
with a symmetric row-major probability matrix; ground truth is a sample ``graph.json``.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ..graphGrowth import VesselGraph
from ..logHandler import log
from ..sampleStore import GraphSchemaError, graphFromDict
from .adjacency import padAdjacency, reorderAdjacency, symmetrize
from .losses import LossTerms, edgeBce, lossMatching, totalLoss
from .matching import Matching, hungarianMatch
from .metrics import Metrics, edgeMetrics, nodeMetrics

SYMMETRY_TOLERANCE = 1e-6


class SchemaError(ValueError):
	"""An evaluation input does not follow its document schema."""


@dataclass(frozen=True)
class Prediction:
	positions: np.ndarray
	confidence: np.ndarray
	adjacency: np.ndarray

	def __len__(self) -> int:
		return len(self.positions)


def predictionFromDict(document) -> Prediction:
	"""Validate a prediction document; raises :class:`SchemaError` on any violation."""
	if not isinstance(document, dict) or not isinstance(document.get("nodes"), list):
		raise SchemaError("prediction needs a 'nodes' list")
	positions, confidence = [], []
	for i, node in enumerate(document["nodes"]):
		try:
			pos = [float(c) for c in node["pos"]]
			value = float(node.get("confidence", 1.0))
		except (KeyError, TypeError, ValueError) as e:
			raise SchemaError(f"node {i} needs a numeric 'pos' and 'confidence'") from e
		if len(pos) != 3 or not all(np.isfinite(pos)):
			raise SchemaError(f"node {i} position must be three finite numbers")
		if not 0.0 <= value <= 1.0:
			raise SchemaError(f"node {i} confidence {value} outside [0, 1]")
		positions.append(pos)
		confidence.append(value)

	rawAdjacency = document.get("adjacency", [])
	n = len(positions)
	if not isinstance(rawAdjacency, list) or any(not isinstance(row, list) for row in rawAdjacency):
		raise SchemaError("adjacency must be a list of rows")
	if len(rawAdjacency) != n or any(len(row) != n for row in rawAdjacency):
		raise SchemaError(f"adjacency must be a square {n}x{n} matrix")
	try:
		adjacency = np.array(rawAdjacency, dtype=np.float64).reshape(n, n)
	except (TypeError, ValueError) as e:
		raise SchemaError("adjacency entries must be numbers") from e
	if not np.all(np.isfinite(adjacency)) or np.any(adjacency < 0) or np.any(adjacency > 1):
		raise SchemaError("adjacency entries must be probabilities in [0, 1]")
	if n and np.max(np.abs(adjacency - adjacency.T)) > SYMMETRY_TOLERANCE:
		raise SchemaError(f"adjacency is not symmetric within {SYMMETRY_TOLERANCE}")
	return Prediction(
		positions=np.array(positions, dtype=np.float64).reshape(n, 3),
		confidence=np.array(confidence, dtype=np.float64),
		adjacency=symmetrize(adjacency),
	)


def _loadJson(path: str):
	with open(path, "r", encoding="utf-8") as f:
		try:
			return json.load(f)
		except json.JSONDecodeError as e:
			raise SchemaError(f"{path} at byte {e.pos}: {e.msg}") from e


def loadPrediction(path: str) -> Prediction:
	return predictionFromDict(_loadJson(path))


def loadTruth(path: str) -> VesselGraph:
	try:
		return graphFromDict(_loadJson(path), path)
	except GraphSchemaError as e:
		raise SchemaError(str(e)) from e


def filterPredictions(prediction: Prediction, threshold: float) -> Prediction:
	"""Keep the nodes whose confidence is at least ``threshold``, with their adjacency rows."""
	keep = np.flatnonzero(prediction.confidence >= threshold)
	return Prediction(
		positions=prediction.positions[keep],
		confidence=prediction.confidence[keep],
		adjacency=prediction.adjacency[np.ix_(keep, keep)],
	)


def alignAdjacency(predAdjacency, m: Matching) -> np.ndarray:
	"""Pad a prediction adjacency to the matching size and reorder it into truth order."""
	return reorderAdjacency(padAdjacency(predAdjacency, m.size), m.permutation)


@dataclass(frozen=True)
class EvaluationReport:
	nodes: Metrics
	edges: Metrics
	losses: LossTerms
	edge_bce: float
	n_pred: int
	n_truth: int
	settings: dict = field(default_factory=dict)

	def toDict(self) -> dict:
		return {
			"nodes": self.nodes.toDict(),
			"edges": self.edges.toDict(),
			"losses": {**self.losses.toDict(), "edge_bce": self.edge_bce},
			"n_pred": self.n_pred,
			"n_truth": self.n_truth,
			"settings": dict(self.settings),
		}


def evaluatePrediction(
	prediction: Prediction,
	truth: VesselGraph,
	tau: float = 5.0,
	edgeThreshold: float = 0.5,
	minConfidence: float = 0.0,
	alpha: float = 1.0,
	beta: float = 1.0,
) -> EvaluationReport:
	"""Node and edge metrics plus every loss term for one predicted graph."""
	if minConfidence > 0:
		prediction = filterPredictions(prediction, minConfidence)
	truthPositions = truth.positions()
	m = hungarianMatch(prediction.positions, truthPositions)
	aligned = alignAdjacency(prediction.adjacency, m)
	truthAdjacency = padAdjacency(truth.adjacencyMatrix(), m.size)

	losses = totalLoss(
		prediction.positions, truthPositions, prediction.confidence, alpha, beta,
		m=lossMatching(prediction.positions, truthPositions, prediction.confidence),
	)
	report = EvaluationReport(
		nodes=nodeMetrics(m, tau),
		edges=edgeMetrics(aligned, truthAdjacency, edgeThreshold),
		losses=losses,
		edge_bce=edgeBce(aligned, truthAdjacency),
		n_pred=len(prediction),
		n_truth=len(truth.nodes),
		settings={"tau": tau, "edge_threshold": edgeThreshold, "min_confidence": minConfidence, "alpha": alpha, "beta": beta},
	)
	log.debug(f"Node F1 {report.nodes.f1:.4f}, edge F1 {report.edges.f1:.4f}")
	return report
