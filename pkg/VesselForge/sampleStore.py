# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""On-disk layout of one sample.

A sample directory holds:

* ``volume.raw``: dx*dy*dz little-endian float32 values, z slowest and x fastest
* ``meta.json``: dims, dtype, axis order, seeds, algorithm ids and the config snapshot
* ``graph.json``: ``{"nodes": [{"id", "pos"}], "edges": [{"a", "b", "weight"}]}``
* ``checksum``: hex blake2b-64 digest of ``volume.raw``
"""

import hashlib
import json
import math
import os
from typing import Any

from .genConfig import genConfigFromDict, genConfigToDict
from .graphGrowth import VesselEdge, VesselGraph, VesselNode
from .logHandler import log
from .sampleGenerator import Sample, SampleMeta
from .volume import AXIS_ORDER, ScalarVolume

VOLUME_FILE = "volume.raw"
META_FILE = "meta.json"
GRAPH_FILE = "graph.json"
CHECKSUM_FILE = "checksum"
CHECKSUM_ALGORITHM = "blake2b-64"
DTYPE_NAME = "f32"


class SampleFormatError(ValueError):
	"""A sample file is malformed; ``offset`` is the byte position of the problem when known."""

	def __init__(self, path: str, message: str, offset: int | None = None) -> None:
		self.path = path
		self.offset = offset
		location = f" at byte {offset}" if offset is not None else ""
		super().__init__(f"{path}{location}: {message}")


class ChecksumMismatchError(SampleFormatError):
	pass


class GraphSchemaError(SampleFormatError):
	pass


def sampleDirName(index: int) -> str:
	return f"sample_{index:07d}"


def checksum(raw: bytes) -> str:
	return hashlib.blake2b(raw, digest_size=8).hexdigest()


def _dumpJson(document: Any) -> bytes:
	return (json.dumps(document, indent=2, sort_keys=True) + "\n").encode("utf-8")


def _loadJson(path: str) -> Any:
	with open(path, "rb") as f:
		raw = f.read()
	try:
		return json.loads(raw.decode("utf-8"))
	except UnicodeDecodeError as e:
		raise SampleFormatError(path, "not valid UTF-8", e.start) from e
	except json.JSONDecodeError as e:
		raise SampleFormatError(path, e.msg, e.pos) from e


def graphToDict(g: VesselGraph) -> dict[str, Any]:
	return {
		"nodes": [{"id": n.id, "pos": list(n.pos)} for n in g.nodes],
		"edges": [{"a": e.a, "b": e.b, "weight": e.weight} for e in g.edges],
		"stalled": g.stalled,
	}


def _isNumber(value: Any) -> bool:
	return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def graphFromDict(document: Any, path: str = GRAPH_FILE) -> VesselGraph:
	"""Parse and validate a graph document.

	:raise GraphSchemaError: On missing fields, duplicate ids, self-loops, duplicate edges or edges
		referencing unknown nodes.
	"""
	if not isinstance(document, dict):
		raise GraphSchemaError(path, "graph document must be an object")
	rawNodes = document.get("nodes")
	rawEdges = document.get("edges")
	if not isinstance(rawNodes, list) or not isinstance(rawEdges, list):
		raise GraphSchemaError(path, "graph needs 'nodes' and 'edges' lists")

	nodes = []
	seen: set[int] = set()
	for i, item in enumerate(rawNodes):
		if not isinstance(item, dict) or not isinstance(item.get("id"), int) or isinstance(item.get("id"), bool):
			raise GraphSchemaError(path, f"node {i} needs an integer id")
		pos = item.get("pos")
		if not isinstance(pos, list) or len(pos) != 3 or not all(_isNumber(c) for c in pos):
			raise GraphSchemaError(path, f"node {item['id']} needs a finite [x, y, z] position")
		if item["id"] in seen:
			raise GraphSchemaError(path, f"duplicate node id {item['id']}")
		seen.add(item["id"])
		nodes.append(VesselNode(id=item["id"], pos=tuple(float(c) for c in pos)))

	edges = []
	pairs: set[frozenset[int]] = set()
	for i, item in enumerate(rawEdges):
		if not isinstance(item, dict):
			raise GraphSchemaError(path, f"edge {i} must be an object")
		a, b, weight = item.get("a"), item.get("b"), item.get("weight")
		if not all(isinstance(v, int) and not isinstance(v, bool) for v in (a, b)) or a not in seen or b not in seen:
			raise GraphSchemaError(path, f"edge {i} references missing node ({a}, {b})")
		if a == b:
			raise GraphSchemaError(path, f"edge {i} is a self-loop on node {a}")
		if frozenset((a, b)) in pairs:
			raise GraphSchemaError(path, f"edge {i} duplicates edge ({a}, {b})")
		pairs.add(frozenset((a, b)))
		if not _isNumber(weight) or weight <= 0:
			raise GraphSchemaError(path, f"edge {i} needs a positive weight")
		edges.append(VesselEdge(a=a, b=b, weight=float(weight)))
	return VesselGraph(nodes=nodes, edges=edges, stalled=bool(document.get("stalled", False)))


def metaToDict(meta: SampleMeta) -> dict[str, Any]:
	return {
		"dims": list(meta.config.dims),
		"dtype": DTYPE_NAME,
		"byte_order": "little",
		"axis_order": AXIS_ORDER,
		"dataset_seed": meta.dataset_seed,
		"sample_index": meta.sample_index,
		"config_id": meta.config_id,
		"rng_algorithm": meta.rng_algorithm,
		"poisson_algorithm": meta.poisson_algorithm,
		"generator_version": meta.generator_version,
		"checksum_algorithm": CHECKSUM_ALGORITHM,
		"stalled": meta.stalled,
		"config": genConfigToDict(meta.config),
	}


def metaFromDict(document: Any, path: str = META_FILE) -> SampleMeta:
	if not isinstance(document, dict):
		raise SampleFormatError(path, "metadata must be an object")
	try:
		if document["dtype"] != DTYPE_NAME or document["axis_order"] != AXIS_ORDER:
			raise SampleFormatError(path, f"unsupported layout {document['dtype']}/{document['axis_order']}")
		config = genConfigFromDict(document["config"])
		if list(config.dims) != list(document["dims"]):
			raise SampleFormatError(path, f"dims {document['dims']} disagree with config dims {config.dims}")
		return SampleMeta(
			dataset_seed=int(document["dataset_seed"]),
			sample_index=int(document["sample_index"]),
			config=config,
			generator_version=document["generator_version"],
			rng_algorithm=document["rng_algorithm"],
			poisson_algorithm=document.get("poisson_algorithm", SampleMeta.poisson_algorithm),
			config_id=document.get("config_id"),
			stalled=bool(document.get("stalled", False)),
		)
	except KeyError as e:
		raise SampleFormatError(path, f"missing field {e.args[0]!r}") from e
	except (TypeError, ValueError) as e:
		if isinstance(e, SampleFormatError):
			raise
		raise SampleFormatError(path, f"invalid metadata: {e}") from e


def writeSample(s: Sample, directory: str) -> str:
	"""Write ``s`` into ``directory`` (created if needed).

	:return: The volume checksum.
	"""
	os.makedirs(directory, exist_ok=True)
	raw = s.volume.toBytes()
	digest = checksum(raw)
	with open(os.path.join(directory, VOLUME_FILE), "wb") as f:
		f.write(raw)
	with open(os.path.join(directory, META_FILE), "wb") as f:
		f.write(_dumpJson(metaToDict(s.meta)))
	with open(os.path.join(directory, GRAPH_FILE), "wb") as f:
		f.write(_dumpJson(graphToDict(s.graph)))
	# written last: a sample without checksum is incomplete
	with open(os.path.join(directory, CHECKSUM_FILE), "w", encoding="ascii") as f:
		f.write(digest + "\n")
	return digest


def readChecksum(directory: str) -> str:
	path = os.path.join(directory, CHECKSUM_FILE)
	with open(path, "r", encoding="ascii", errors="replace") as f:
		text = f.read()
	digest = text.strip()
	for offset, char in enumerate(digest):
		if char not in "0123456789abcdef":
			raise SampleFormatError(path, f"unexpected character {char!r} in checksum", offset)
	if len(digest) != 16:
		raise SampleFormatError(path, f"checksum must have 16 hex digits, got {len(digest)}", len(digest))
	return digest


def readSample(directory: str, verify: bool = True) -> Sample:
	"""Load a sample written by :func:`writeSample`.

	:param verify: Compare the volume bytes against the stored checksum.
	:raise SampleFormatError: On malformed files, with the byte offset where known.
	:raise OSError: If a file cannot be read.
	"""
	meta = metaFromDict(_loadJson(os.path.join(directory, META_FILE)), os.path.join(directory, META_FILE))
	volumePath = os.path.join(directory, VOLUME_FILE)
	with open(volumePath, "rb") as f:
		raw = f.read()

	dx, dy, dz = meta.config.dims
	expected = dx * dy * dz * 4
	if len(raw) != expected:
		raise SampleFormatError(volumePath, f"volume holds {len(raw)} bytes, expected {expected}", min(len(raw), expected))
	if verify:
		stored = readChecksum(directory)
		actual = checksum(raw)
		if stored != actual:
			log.error(f"Checksum mismatch in {directory}: stored {stored}, computed {actual}")
			raise ChecksumMismatchError(
				os.path.join(directory, CHECKSUM_FILE),
				f"stored checksum {stored} does not match volume checksum {actual}",
				0,
			)
	try:
		volume = ScalarVolume.fromBytes(raw, meta.config.dims)
	except ValueError as e:
		raise SampleFormatError(volumePath, str(e)) from e

	graphPath = os.path.join(directory, GRAPH_FILE)
	graph = graphFromDict(_loadJson(graphPath), graphPath)
	return Sample(volume=volume, graph=graph, meta=meta)
