# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import json
import os

import pytest

from VesselForge import shardGenerator
from VesselForge.sampleStore import GRAPH_FILE, VOLUME_FILE, readSample, sampleDirName
from VesselForge.shardGenerator import (
	INDEX_FILE,
	INDEX_KEYS,
	MANIFEST_FILE,
	ShardGenerator,
	buildIndex,
	buildManifest,
	generateShard,
	isHeldOut,
	planShard,
	plannedSampleCount,
	readIndex,
	readManifest,
	variedConfig,
	verifyShard,
)


def _fileBytes(out: str, index: int, name: str = VOLUME_FILE) -> bytes:
	with open(os.path.join(out, sampleDirName(index), name), "rb") as f:
		return f.read()


def test_plannedSampleCount():
	assert plannedSampleCount(1024, 1024) == 1048576
	assert plannedSampleCount(3, 2) == 6
	with pytest.raises(ValueError):
		plannedSampleCount(0, 5)


def test_fixedShard(smallConfig, tmp_path):
	out = str(tmp_path / "shard")
	index = generateShard(smallConfig, 3, 42, 1, out)
	assert [entry["index"] for entry in index] == [0, 1, 2]
	assert index == readIndex(out)
	manifest = readManifest(out)
	assert manifest["complete"]
	assert manifest["planned"] == manifest["completed"] == 3
	assert manifest["mode"] == "fixed"
	assert verifyShard(out) == []
	s = readSample(os.path.join(out, "sample_0000001"))
	assert s.meta.sample_index == 1
	assert s.meta.dataset_seed == 42


def test_indexFileIsListOfEntries(smallConfig, tmp_path):
	out = str(tmp_path / "shard")
	generateShard(smallConfig, 2, 8, 1, out)
	with open(os.path.join(out, INDEX_FILE), "r", encoding="utf-8") as f:
		document = json.load(f)
	assert isinstance(document, list)
	assert [sorted(entry) for entry in document] == [sorted(INDEX_KEYS)] * 2
	assert [entry["sample_dir"] for entry in document] == ["sample_0000000", "sample_0000001"]
	assert {entry["seed"] for entry in document} == {8}
	assert isinstance(readManifest(out), dict)


def test_variedIndexRecordsConfigIds():
	plan = planShard("varied", 4, 5, perConfig=2)
	records = [
		{
			"sample_dir": sampleDirName(i), "seed": 5, "index": i, "checksum": "0" * 16,
			"config_id": i // 2, "stalled": i == 3,
		}
		for i in (3, 1, 0, 2)
	]
	index = buildIndex(plan, records)
	assert [entry["index"] for entry in index] == [0, 1, 2, 3]
	assert [entry["config_id"] for entry in index] == [0, 0, 1, 1]
	assert set(index[0]) == {*INDEX_KEYS, "config_id"}
	assert buildManifest(plan, 5, records)["stalled"] == [3]


def test_workerCountDoesNotChangeBytes(smallConfig, tmp_path):
	serial = str(tmp_path / "serial")
	parallel = str(tmp_path / "parallel")
	a = generateShard(smallConfig, 16, 7, 1, serial)
	b = generateShard(smallConfig, 16, 7, 8, parallel)
	assert a == b
	for i in range(16):
		assert _fileBytes(serial, i) == _fileBytes(parallel, i)
		assert _fileBytes(serial, i, GRAPH_FILE) == _fileBytes(parallel, i, GRAPH_FILE)


def test_sampleDoesNotDependOnShardSize(smallConfig, tmp_path):
	generateShard(smallConfig, 2, 9, 1, str(tmp_path / "small"))
	generateShard(smallConfig, 4, 9, 1, str(tmp_path / "large"))
	assert _fileBytes(str(tmp_path / "small"), 1) == _fileBytes(str(tmp_path / "large"), 1)


def test_cancelLeavesPartialIndex(smallConfig, tmp_path):
	out = str(tmp_path / "shard")
	generator = ShardGenerator(maxWorkers=1)
	calls = []

	def onProgress(completed, planned, sampleIndex):
		calls.append((completed, planned, sampleIndex))
		generator.requestCancel()

	result = generator.generateShard(smallConfig, 5, 1, out, progressCallback=onProgress)
	assert calls == [(1, 5, 0)]
	assert not result.manifest["complete"]
	assert result.manifest["completed"] == 1
	assert len(result.index) == 1
	assert readManifest(out)["completed"] == 1

	# a cancelled generator can run again
	again = generator.generateShard(smallConfig, 2, 1, str(tmp_path / "again"))
	assert again.manifest["complete"]


def test_failureStillWritesIndex(smallConfig, tmp_path, monkeypatch):
	real = shardGenerator.generateSample

	def failing(cfg, datasetSeed, index, configId=None):
		if index == 2:
			raise RuntimeError("boom")
		return real(cfg, datasetSeed, index, configId)

	monkeypatch.setattr(shardGenerator, "generateSample", failing)
	out = str(tmp_path / "shard")
	with pytest.raises(RuntimeError):
		generateShard(smallConfig, 4, 3, 1, out)
	assert [entry["index"] for entry in readIndex(out)] == [0, 1]
	manifest = readManifest(out)
	assert manifest["completed"] == 2
	assert not manifest["complete"]
	for name in (INDEX_FILE, MANIFEST_FILE):
		assert not os.path.exists(os.path.join(out, name + ".tmp"))


def test_verifyShardFindsCorruption(smallConfig, tmp_path):
	out = str(tmp_path / "shard")
	generateShard(smallConfig, 2, 4, 1, out)
	path = os.path.join(out, sampleDirName(1), VOLUME_FILE)
	with open(path, "r+b") as f:
		value = f.read(1)
		f.seek(0)
		f.write(bytes([value[0] ^ 0x01]))
	assert verifyShard(out) == [sampleDirName(1)]


def test_variedPlan():
	plan = planShard("varied", 10, 5, perConfig=3)
	assert plan.configCount == 4
	tasks = list(plan.tasks())
	assert [t.configId for t in tasks] == [0, 0, 0, 1, 1, 1, 2, 2, 2, 3]
	assert tasks[4].config == variedConfig(5, 1)
	assert variedConfig(5, 1) != variedConfig(5, 2)


def test_defaultPerConfigIsSquareRoot():
	plan = planShard("varied", 16, 1)
	assert plan.perConfig == 4
	assert plan.configCount == 4


def test_holdout():
	plan = planShard("varied", 20, 11, perConfig=1, holdout=0.5)
	assert 0 < len(plan.heldOut) < 20
	assert plan.planned == 20 - len(plan.heldOut)
	assert all(isHeldOut(11, c, 0.5) for c in plan.heldOut)
	assert not set(plan.heldOut) & {t.configId for t in plan.tasks()}
	assert plan.heldOut == planShard("varied", 20, 11, perConfig=1, holdout=0.5).heldOut
	assert planShard("varied", 20, 11, perConfig=1).heldOut == []


@pytest.mark.parametrize("kwargs", [
	{"count": 0},
	{"holdout": 1.0},
	{"holdout": -0.1},
])
def test_invalidPlans(kwargs):
	arguments = {"source": "varied", "count": 4, "datasetSeed": 1, **kwargs}
	with pytest.raises(ValueError):
		planShard(**arguments)


def test_unknownSource():
	with pytest.raises(ValueError):
		planShard("uniform", 4, 1)


def test_invalidWorkerCount():
	with pytest.raises(ValueError):
		ShardGenerator(maxWorkers=0)


@pytest.mark.slow
def test_variedShardAtDeskScale(tmp_path):
	out = str(tmp_path / "varied")
	index = generateShard("varied", 16, 2, 4, out, perConfig=4)
	manifest = readManifest(out)
	assert manifest["complete"]
	assert manifest["configs"] == 4
	assert [entry["config_id"] for entry in index] == [i // 4 for i in range(16)]
	configs = {}
	for entry in index:
		configs.setdefault(entry["config_id"], readSample(os.path.join(out, entry["sample_dir"])).meta.config)
	assert len(set(configs.values())) == 4
	for cfg in configs.values():
		assert 3.0 <= cfg.graph.d_min <= 10.0
		assert 2.0 <= cfg.graph.w_min <= 8.0
		assert 0.8 * cfg.graph.w_max > cfg.graph.w_min
		assert cfg.imaging.psf_size in (3, 5, 7)
		assert 0.5 <= cfg.imaging.psf_sigma <= 5.0
		assert 200.0 <= cfg.imaging.noise_level <= 2000.0
		assert 2 <= cfg.imaging.blob.max_count <= 15
