# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Growth of biologically constrained 3D vessel graphs.

Growth starts from one randomly placed vessel segment and expands active tips in order
of decreasing diameter. A tip either extends (same diameter) or bifurcates into two
daughters whose radii follow Murray's law. Growth ends when the node cap is reached or
no tip can expand any more.
"""

import heapq
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from .genConfig import GraphConfig
from .geometry import angleDegrees, orthonormalBasis, segmentMinDistances
from .logHandler import log
from .randomStream import RandomStream

BRANCH_FLOW_FRACTION = (0.3, 0.7)
_TOLERANCE = 1e-9


@dataclass(frozen=True)
class VesselNode:
	id: int
	pos: tuple[float, float, float]


@dataclass(frozen=True)
class VesselEdge:
	"""Undirected vessel segment; generated graphs orient a (parent) -> b (child)."""

	a: int
	b: int
	weight: float  # diameter in voxels


@dataclass
class VesselGraph:
	"""Ground-truth vessel topology."""

	nodes: list[VesselNode] = field(default_factory=list)
	edges: list[VesselEdge] = field(default_factory=list)
	stalled: bool = False

	def positions(self) -> np.ndarray:
		"""(n, 3) array of node positions in node-list order."""
		if not self.nodes:
			return np.zeros((0, 3))
		return np.array([n.pos for n in self.nodes], dtype=np.float64)

	def indexOf(self) -> dict[int, int]:
		"""Map node id to its position in :attr:`nodes`."""
		return {n.id: i for i, n in enumerate(self.nodes)}

	def adjacencyMatrix(self) -> np.ndarray:
		"""Symmetric binary adjacency in node-list order."""
		index = self.indexOf()
		adjacency = np.zeros((len(self.nodes), len(self.nodes)), dtype=np.float64)
		for e in self.edges:
			i, j = index[e.a], index[e.b]
			adjacency[i, j] = adjacency[j, i] = 1.0
		return adjacency

	def isConnected(self) -> bool:
		if len(self.nodes) <= 1:
			return True
		index = self.indexOf()
		rows = [index[e.a] for e in self.edges]
		cols = [index[e.b] for e in self.edges]
		matrix = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(self.nodes),) * 2)
		count, _labels = connected_components(matrix, directed=False)
		return count == 1

	def childrenOf(self) -> dict[int, list[VesselEdge]]:
		"""Outgoing edges per node, following the growth orientation."""
		children: dict[int, list[VesselEdge]] = {n.id: [] for n in self.nodes}
		for e in self.edges:
			children[e.a].append(e)
		return children

	def parentEdgeOf(self) -> dict[int, VesselEdge]:
		return {e.b: e for e in self.edges}


@dataclass(frozen=True)
class Violation:
	"""One broken constraint; ``kind`` is node-cap, edge-cap, min-distance or edge-length."""

	kind: str
	detail: str


@dataclass
class _Tip:
	node: int
	parentNode: int
	direction: np.ndarray
	weight: float


def branchProbability(w: float, wMin: float, wMax: float) -> float:
	"""Probability that a vessel of diameter ``w`` bifurcates, clamped to [0, 1]."""
	denominator = 0.8 * wMax - wMin
	if denominator <= 0:
		raise ValueError(f"0.8 * w_max must exceed w_min, got w_min={wMin}, w_max={wMax}")
	raw = 0.2 + 0.6 * (w - wMin) / denominator
	return min(1.0, max(0.0, raw))


def murrayDaughters(rParent: float, ratios: list[float]) -> list[float]:
	"""Daughter radii r_i = ratio_i^(1/3) * r_p, so that sum r_i^3 = r_p^3.

	:param rParent: Parent radius, positive.
	:param ratios: Positive flow fractions summing to 1.
	"""
	if rParent <= 0:
		raise ValueError(f"parent radius must be positive, got {rParent}")
	if not ratios or any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > _TOLERANCE:
		raise ValueError(f"ratios must be positive and sum to 1, got {ratios}")
	return [rParent * ratio ** (1.0 / 3.0) for ratio in ratios]


def acceptPosition(candidate, existing, dMin: float, rng: RandomStream) -> bool:
	"""Distance-based acceptance of a new node position.

	Positions closer than ``dMin`` to any existing node are rejected; otherwise the
	candidate is accepted with probability 1 - exp(-d^2 / (2 sigma^2)), sigma = dMin / 3,
	where d is the nearest-node distance.
	"""
	existing = np.asarray(existing, dtype=np.float64).reshape(-1, 3)
	if len(existing) == 0:
		return True
	nearest = float(np.min(np.linalg.norm(existing - np.asarray(candidate, dtype=np.float64), axis=1)))
	if nearest < dMin:
		return False
	sigma = dMin / 3.0
	probability = 1.0 - math.exp(-nearest * nearest / (2.0 * sigma * sigma))
	return bool(rng.random() < probability)


def _inside(p: np.ndarray, bounds: tuple[int, int, int]) -> bool:
	return bool(np.all(p >= 0.0) and np.all(p <= np.asarray(bounds, dtype=np.float64) - 1.0))


def clearanceStart(start: np.ndarray, end: np.ndarray, radius: float) -> np.ndarray:
	"""Point of segment start-end at ``radius`` from its start, or ``end`` if the segment is shorter."""
	start = np.asarray(start, dtype=np.float64)
	end = np.asarray(end, dtype=np.float64)
	length = float(np.linalg.norm(end - start))
	if length <= radius:
		return end
	return start + (end - start) * (radius / length)


def _sampleDirection(rng: RandomStream, axis: np.ndarray, halfAngle: float) -> np.ndarray:
	"""Uniform direction on the spherical cap of ``halfAngle`` degrees around ``axis``."""
	u, v, n = orthonormalBasis(axis)
	cosTheta = rng.uniform(math.cos(math.radians(halfAngle)), 1.0)
	phi = rng.uniform(0.0, 2.0 * math.pi)
	sinTheta = math.sqrt(max(0.0, 1.0 - cosTheta * cosTheta))
	return sinTheta * math.cos(phi) * u + sinTheta * math.sin(phi) * v + cosTheta * n


class _GrowthState:
	"""Nodes and edges of a graph under construction."""

	def __init__(self, cfg: GraphConfig) -> None:
		self.cfg = cfg
		self.positions: list[np.ndarray] = []
		self.edges: list[VesselEdge] = []

	def addNode(self, pos: np.ndarray) -> int:
		self.positions.append(np.asarray(pos, dtype=np.float64))
		return len(self.positions) - 1

	def edgeIsClear(self, start: np.ndarray, end: np.ndarray, weight: float, tip: _Tip) -> bool:
		"""Spatial validity of a new segment from ``tip``.

		Edges at the tip are adjacent and skipped. Every other edge needs a clearance of the
		mean of both diameters; for edges at the tip's parent node that clearance is measured
		beyond the tip's own tube radius, and the whole segment must still be disjoint.
		"""
		if not self.edges:
			return True
		starts = np.array([self.positions[e.a] for e in self.edges])
		ends = np.array([self.positions[e.b] for e in self.edges])
		weights = np.array([e.weight for e in self.edges])
		atTip = np.array([tip.node in (e.a, e.b) for e in self.edges])
		atParent = np.array([tip.parentNode in (e.a, e.b) for e in self.edges])

		required = (weights + weight) / 2.0
		distances = segmentMinDistances(start, end, starts, ends)
		tailDistances = segmentMinDistances(clearanceStart(start, end, tip.weight / 2.0), end, starts, ends)
		tooClose = np.where(
			atParent,
			(distances <= _TOLERANCE) | (tailDistances <= required),
			distances <= required,
		)
		return not bool(np.any(~atTip & tooClose))

	def placeChild(
		self,
		tip: _Tip,
		weight: float,
		rng: RandomStream,
		pending: list[np.ndarray] | None = None,
		avoidDirection: np.ndarray | None = None,
	) -> tuple[np.ndarray, np.ndarray] | None:
		"""Find a valid position for a child of ``tip``; None after ``max_attempts`` rejections."""
		cfg = self.cfg
		origin = self.positions[tip.node]
		existing = np.array(self.positions + (pending or []))
		for _attempt in range(cfg.max_attempts):
			direction = _sampleDirection(rng, tip.direction, cfg.cone_half_angle)
			length = rng.uniform(cfg.d_min, cfg.d_max)
			if avoidDirection is not None and angleDegrees(direction, avoidDirection) < cfg.min_branch_angle:
				continue
			candidate = origin + length * direction
			if not _inside(candidate, cfg.bounds):
				continue
			if not acceptPosition(candidate, existing, cfg.d_min, rng):
				continue
			if not self.edgeIsClear(origin, candidate, weight, tip):
				continue
			return candidate, direction
		return None

	def toGraph(self, stalled: bool) -> VesselGraph:
		nodes = [
			VesselNode(id=i, pos=(float(p[0]), float(p[1]), float(p[2])))
			for i, p in enumerate(self.positions)
		]
		return VesselGraph(nodes=nodes, edges=list(self.edges), stalled=stalled)


def _seedSegment(state: _GrowthState, rng: RandomStream) -> _Tip | None:
	"""Place the initial vessel; its diameter lies in the upper half of the weight range."""
	cfg = state.cfg
	upper = np.asarray(cfg.bounds, dtype=np.float64) - 1.0
	start = rng.uniform(0.0, 1.0, 3) * upper
	weight = float(rng.uniform((cfg.w_min + cfg.w_max) / 2.0, cfg.w_max))
	state.addNode(start)
	for _attempt in range(cfg.max_attempts):
		direction = rng.unitVector()
		end = start + rng.uniform(cfg.d_min, cfg.d_max) * direction
		if _inside(end, cfg.bounds):
			endNode = state.addNode(end)
			state.edges.append(VesselEdge(a=0, b=endNode, weight=weight))
			return _Tip(node=endNode, parentNode=0, direction=direction, weight=weight)
	return None


def growGraph(cfg: GraphConfig, rng: RandomStream) -> VesselGraph:
	"""Grow one vessel tree.

	The result always satisfies the graph constraints; when growth runs out of valid
	expansions before ``n_max`` nodes the graph is returned with ``stalled`` set.
	"""
	state = _GrowthState(cfg)
	seed = _seedSegment(state, rng)
	if seed is None:
		log.warning(f"Could not place an initial segment inside bounds {cfg.bounds}")
		return state.toGraph(stalled=True)

	order = itertools.count()
	queue: list[tuple[float, int, _Tip]] = [(-seed.weight, next(order), seed)]

	def edgeRoom() -> float:
		return cfg.e_max - len(state.edges) if cfg.e_max else math.inf

	while queue and len(state.positions) < cfg.n_max and edgeRoom() > 0:
		_priority, _order, tip = heapq.heappop(queue)
		children: list[tuple[np.ndarray, np.ndarray, float]] = []

		canSplit = cfg.n_max - len(state.positions) >= 2 and edgeRoom() >= 2
		if canSplit and rng.random() < branchProbability(tip.weight, cfg.w_min, cfg.w_max):
			fraction = float(rng.uniform(*BRANCH_FLOW_FRACTION))
			radii = murrayDaughters(tip.weight / 2.0, [fraction, 1.0 - fraction])
			diameters = [2.0 * r for r in radii]
			if min(diameters) < cfg.w_min:
				continue
			first = state.placeChild(tip, diameters[0], rng)
			if first is not None:
				second = state.placeChild(tip, diameters[1], rng, pending=[first[0]], avoidDirection=first[1])
				if second is not None:
					children = [(*first, diameters[0]), (*second, diameters[1])]

		if not children:
			extension = state.placeChild(tip, tip.weight, rng)
			if extension is None:
				continue
			children = [(*extension, tip.weight)]

		for position, direction, weight in children:
			node = state.addNode(position)
			state.edges.append(VesselEdge(a=tip.node, b=node, weight=weight))
			child = _Tip(node=node, parentNode=tip.node, direction=direction, weight=weight)
			heapq.heappush(queue, (-weight, next(order), child))

	stalled = len(state.positions) < cfg.n_max and edgeRoom() > 0
	if stalled:
		log.debug(f"Growth stalled at {len(state.positions)} of {cfg.n_max} nodes")
	return state.toGraph(stalled=stalled)


def validateGraph(g: VesselGraph, cfg: GraphConfig) -> list[Violation]:
	"""Check the node cap, edge cap, pairwise spacing and edge-length constraints."""
	violations: list[Violation] = []
	if len(g.nodes) > cfg.n_max:
		violations.append(Violation("node-cap", f"{len(g.nodes)} nodes exceed n_max={cfg.n_max}"))
	if cfg.e_max and len(g.edges) > cfg.e_max:
		violations.append(Violation("edge-cap", f"{len(g.edges)} edges exceed e_max={cfg.e_max}"))

	positions = g.positions()
	if len(positions) >= 2:
		distances = squareform(pdist(positions))
		rows, cols = np.nonzero(np.triu(distances < cfg.d_min - _TOLERANCE, k=1))
		for i, j in zip(rows, cols):
			violations.append(Violation(
				"min-distance",
				f"nodes {g.nodes[i].id} and {g.nodes[j].id} are {distances[i, j]:.4f} apart (d_min={cfg.d_min})",
			))

	index = g.indexOf()
	for e in g.edges:
		length = float(np.linalg.norm(positions[index[e.a]] - positions[index[e.b]]))
		if length > cfg.d_max + _TOLERANCE:
			violations.append(Violation(
				"edge-length",
				f"edge {e.a}-{e.b} is {length:.4f} long (d_max={cfg.d_max})",
			))
	return violations


def murrayResiduals(g: VesselGraph) -> list[float]:
	"""Relative residual |r_p^3 - sum r_i^3| / r_p^3 at every bifurcation of the growth tree."""
	parents = g.parentEdgeOf()
	residuals = []
	for node, outgoing in g.childrenOf().items():
		if len(outgoing) < 2 or node not in parents:
			continue
		parentCube = (parents[node].weight / 2.0) ** 3
		daughterCubes = sum((e.weight / 2.0) ** 3 for e in outgoing)
		residuals.append(abs(parentCube - daughterCubes) / parentCube)
	return residuals


def graphStatistics(g: VesselGraph) -> dict:
	"""Summary numbers reported by the inspect command."""
	degrees = Counter()
	for e in g.edges:
		degrees[e.a] += 1
		degrees[e.b] += 1
	histogram = Counter(degrees.get(n.id, 0) for n in g.nodes)
	weights = [e.weight for e in g.edges]
	return {
		"nodes": len(g.nodes),
		"edges": len(g.edges),
		"weightMin": min(weights) if weights else None,
		"weightMax": max(weights) if weights else None,
		"degreeHistogram": {str(k): histogram[k] for k in sorted(histogram)},
		"bifurcations": sum(1 for n in g.nodes if degrees.get(n.id, 0) >= 3),
		"stalled": g.stalled,
	}
