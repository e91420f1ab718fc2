# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""
Multi-process shard generator
"""

import json
import math
import os
import threading
import time
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .genConfig import GenConfig, sampleVariedConfig
from .logHandler import log
from .randomStream import RNG_ALGORITHM, RandomStream
from .sampleGenerator import CONFIG_NAMESPACE, GENERATOR_VERSION, HOLDOUT_NAMESPACE, generateSample
from .sampleStore import checksum, readChecksum, sampleDirName, writeSample, VOLUME_FILE

# Type definitions
ProgressCallback = Callable[[int, int, int], None]  # completed, planned, sample index

# Constants
INDEX_FILE = "index.json"
MANIFEST_FILE = "shard.json"
INDEX_KEYS = ("sample_dir", "seed", "index", "checksum")
INDEX_VERSION = 1
VARIED = "varied"
IN_FLIGHT_PER_WORKER = 4


@dataclass(frozen=True)
class SampleTask:
	index: int
	config: GenConfig
	configId: int | None = None


@dataclass
class ShardResult:
	index: list[dict[str, Any]]
	manifest: dict[str, Any]
	elapsed: float = 0.0

	@property
	def samplesPerSecond(self) -> float:
		return len(self.index) / self.elapsed if self.elapsed > 0 else 0.0


@dataclass
class ShardPlan:
	"""What a shard will contain, before any sample is generated."""

	mode: str
	count: int
	perConfig: int | None = None
	heldOut: list[int] = field(default_factory=list)
	configs: dict[int, GenConfig] = field(default_factory=dict)
	fixedConfig: GenConfig | None = None

	@property
	def configCount(self) -> int:
		return math.ceil(self.count / self.perConfig) if self.perConfig else 1

	@property
	def planned(self) -> int:
		if not self.heldOut:
			return self.count
		held = set(self.heldOut)
		return sum(1 for i in range(self.count) if i // self.perConfig not in held)

	def tasks(self) -> Iterator[SampleTask]:
		held = set(self.heldOut)
		for i in range(self.count):
			if self.mode == VARIED:
				configId = i // self.perConfig
				if configId in held:
					continue
				yield SampleTask(index=i, config=self.configs[configId], configId=configId)
			else:
				yield SampleTask(index=i, config=self.fixedConfig)


def plannedSampleCount(configs: int, perConfig: int) -> int:
	"""Size of a varied dataset with ``configs`` parameter draws of ``perConfig`` samples each."""
	if configs < 1 or perConfig < 1:
		raise ValueError(f"configs and perConfig must be positive, got {configs}, {perConfig}")
	return configs * perConfig


def variedConfig(datasetSeed: int, configId: int) -> GenConfig:
	"""Configuration ``configId`` of the varied dataset seeded with ``datasetSeed``."""
	return sampleVariedConfig(RandomStream(datasetSeed).fork(CONFIG_NAMESPACE).fork(configId))


def isHeldOut(datasetSeed: int, configId: int, fraction: float) -> bool:
	if fraction <= 0:
		return False
	return bool(RandomStream(datasetSeed).fork(HOLDOUT_NAMESPACE).fork(configId).random() < fraction)


def planShard(
	source: GenConfig | str,
	count: int,
	datasetSeed: int,
	perConfig: int | None = None,
	holdout: float = 0.0,
) -> ShardPlan:
	"""Decide which samples a shard holds.

	:param source: A fixed recipe, or ``"varied"`` for per-configuration draws.
	:param perConfig: Samples per varied configuration; defaults to the square-root split
		of ``count``, mirroring an equal configs-by-samples structure.
	:param holdout: Fraction of varied configurations left out of the shard.
	"""
	if count < 1:
		raise ValueError(f"count must be at least 1, got {count}")
	if datasetSeed < 0:
		raise ValueError(f"seed must be non-negative, got {datasetSeed}")
	if not 0.0 <= holdout < 1.0:
		raise ValueError(f"holdout must be in [0, 1), got {holdout}")
	if isinstance(source, GenConfig):
		return ShardPlan(mode="fixed", count=count, fixedConfig=source)
	if source != VARIED:
		raise ValueError(f"unknown shard source {source!r}")

	perConfig = perConfig or max(1, math.isqrt(count))
	if perConfig < 1:
		raise ValueError(f"perConfig must be positive, got {perConfig}")
	plan = ShardPlan(mode=VARIED, count=count, perConfig=perConfig)
	for configId in range(plan.configCount):
		if isHeldOut(datasetSeed, configId, holdout):
			plan.heldOut.append(configId)
		else:
			plan.configs[configId] = variedConfig(datasetSeed, configId)
	return plan


def _generateAndWrite(task: SampleTask, datasetSeed: int, outDir: str) -> dict[str, Any]:
	"""Worker entry point: generate one sample and write it; returns its shard record."""
	sample = generateSample(task.config, datasetSeed, task.index, task.configId)
	directory = sampleDirName(task.index)
	digest = writeSample(sample, os.path.join(outDir, directory))
	return {
		"sample_dir": directory,
		"seed": datasetSeed,
		"index": task.index,
		"checksum": digest,
		"config_id": task.configId,
		"stalled": sample.meta.stalled,
	}


class ShardGenerator:
	"""Multi-process shard generator with progress tracking and cancellation."""

	def __init__(self, maxWorkers: int = 1) -> None:
		if maxWorkers < 1:
			raise ValueError(f"maxWorkers must be at least 1, got {maxWorkers}")
		self.maxWorkers = maxWorkers

		# Worker control
		self.cancelRequested = False
		self.shardLock = threading.Lock()
		self.activeFutures: set[Future] = set()

	def requestCancel(self) -> None:
		"""Stop scheduling samples and cancel queued ones; running samples finish."""
		log.warning("Shard cancellation requested")
		self.cancelRequested = True

		with self.shardLock:
			for future in self.activeFutures:
				if not future.done():
					future.cancel()

	def resetCancellation(self) -> None:
		with self.shardLock:
			self.cancelRequested = False
			self.activeFutures.clear()

	def _reportProgress(
		self,
		callback: ProgressCallback | None,
		completed: int,
		planned: int,
		sampleIndex: int,
	) -> None:
		if callback and not self.cancelRequested:
			callback(completed, planned, sampleIndex)

	def _runInline(self, plan, datasetSeed, outDir, records, progressCallback) -> None:
		for task in plan.tasks():
			if self.cancelRequested:
				break
			records.append(_generateAndWrite(task, datasetSeed, outDir))
			self._reportProgress(progressCallback, len(records), plan.planned, task.index)

	def _runPool(self, plan, datasetSeed, outDir, records, progressCallback) -> None:
		tasks = plan.tasks()
		limit = self.maxWorkers * IN_FLIGHT_PER_WORKER
		with ProcessPoolExecutor(max_workers=self.maxWorkers) as executor:
			pending: dict[Future, int] = {}

			def refill() -> None:
				while len(pending) < limit and not self.cancelRequested:
					task = next(tasks, None)
					if task is None:
						return
					future = executor.submit(_generateAndWrite, task, datasetSeed, outDir)
					pending[future] = task.index
					with self.shardLock:
						self.activeFutures.add(future)

			refill()
			while pending:
				done, _notDone = wait(pending, return_when=FIRST_COMPLETED)
				for future in done:
					index = pending.pop(future)
					with self.shardLock:
						self.activeFutures.discard(future)
					if future.cancelled():
						continue
					records.append(future.result())
					self._reportProgress(progressCallback, len(records), plan.planned, index)
				refill()

	def generateShard(
		self,
		source: GenConfig | str,
		count: int,
		datasetSeed: int,
		out: str,
		perConfig: int | None = None,
		holdout: float = 0.0,
		progressCallback: ProgressCallback | None = None,
	) -> ShardResult:
		"""Generate a shard of samples plus its ``index.json`` and ``shard.json``.

		Both files are written even when generation fails or is cancelled; the index then lists
		the completed samples and the manifest has ``complete`` set to false.
		"""
		plan = planShard(source, count, datasetSeed, perConfig, holdout)
		self.resetCancellation()
		try:
			os.makedirs(out, exist_ok=True)
		except OSError as err:
			raise OSError(f"Failed to create shard directory {out}: {err}") from err
		log.info(f"Generating {plan.planned} samples into {out} with {self.maxWorkers} worker(s)")

		records: list[dict[str, Any]] = []
		start = time.perf_counter()
		try:
			if self.maxWorkers == 1:
				self._runInline(plan, datasetSeed, out, records, progressCallback)
			else:
				self._runPool(plan, datasetSeed, out, records, progressCallback)
		except Exception:
			log.exception(f"Shard generation failed after {len(records)} samples")
			raise
		finally:
			index = buildIndex(plan, records)
			manifest = buildManifest(plan, datasetSeed, records)
			writeIndex(out, index, manifest)
		elapsed = time.perf_counter() - start
		if not manifest["complete"]:
			log.warning(f"Shard {out} is incomplete: {manifest['completed']} of {manifest['planned']} samples")
		return ShardResult(index=index, manifest=manifest, elapsed=elapsed)


def buildIndex(plan: ShardPlan, records: list[dict[str, Any]]) -> list[dict[str, Any]]:
	"""The ``index.json`` list: one entry per completed sample, ordered by sample index."""
	index = []
	for record in sorted(records, key=lambda r: r["index"]):
		entry = {key: record[key] for key in INDEX_KEYS}
		if plan.mode == VARIED:
			entry["config_id"] = record["config_id"]
		index.append(entry)
	return index


def buildManifest(plan: ShardPlan, datasetSeed: int, records: list[dict[str, Any]]) -> dict[str, Any]:
	return {
		"version": INDEX_VERSION,
		"generator_version": GENERATOR_VERSION,
		"rng_algorithm": RNG_ALGORITHM,
		"dataset_seed": datasetSeed,
		"mode": plan.mode,
		"per_config": plan.perConfig,
		"configs": plan.configCount if plan.mode == VARIED else None,
		"held_out": list(plan.heldOut),
		"planned": plan.planned,
		"completed": len(records),
		"complete": len(records) == plan.planned,
		"stalled": sorted(r["index"] for r in records if r["stalled"]),
	}


def _writeJson(path: str, document: Any) -> None:
	temporary = path + ".tmp"
	with open(temporary, "w", encoding="utf-8") as f:
		json.dump(document, f, indent=2, sort_keys=True)
		f.write("\n")
	os.replace(temporary, path)


def writeIndex(out: str, index: list[dict[str, Any]], manifest: dict[str, Any]) -> None:
	_writeJson(os.path.join(out, INDEX_FILE), index)
	_writeJson(os.path.join(out, MANIFEST_FILE), manifest)


def readIndex(out: str) -> list[dict[str, Any]]:
	with open(os.path.join(out, INDEX_FILE), "r", encoding="utf-8") as f:
		return json.load(f)


def readManifest(out: str) -> dict[str, Any]:
	with open(os.path.join(out, MANIFEST_FILE), "r", encoding="utf-8") as f:
		return json.load(f)


def verifyShard(out: str) -> list[str]:
	"""Recompute every volume checksum listed in the index; returns the mismatching sample dirs."""
	mismatched = []
	for entry in readIndex(out):
		directory = os.path.join(out, entry["sample_dir"])
		with open(os.path.join(directory, VOLUME_FILE), "rb") as f:
			actual = checksum(f.read())
		if actual != entry["checksum"] or readChecksum(directory) != actual:
			mismatched.append(entry["sample_dir"])
	return mismatched


def generateShard(
	source: GenConfig | str,
	count: int,
	datasetSeed: int,
	workers: int,
	out: str,
	**kwargs,
) -> list[dict[str, Any]]:
	"""Generate a shard and return its index."""
	return ShardGenerator(maxWorkers=workers).generateShard(source, count, datasetSeed, out, **kwargs).index
