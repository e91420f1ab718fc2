# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime or I/O error, 3 validation failure.
"""

import argparse
import json
import sys
from typing import Sequence

import numpy as np
from PIL import Image

from . import config, logHandler
from .evaluation import SchemaError, evaluatePrediction, loadPrediction, loadTruth
from .genConfig import genConfigFromDict, homogeneousConfig
from .graphGrowth import graphStatistics, validateGraph
from .logHandler import log
from .sampleGenerator import maskOccupancy, regenerateMask
from .sampleStore import SampleFormatError, readSample
from .shardGenerator import VARIED, ShardGenerator, plannedSampleCount

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_VALIDATION = 3

HISTOGRAM_BINS = 16
PRESETS = ("homogeneous", VARIED)
# (z, y, x) array axis collapsed by each projection
PROJECTION_AXES = {"z": 0, "y": 1, "x": 2}


class ValidationFailed(Exception):
	"""A command ran but its input failed validation."""


class _ArgumentParser(argparse.ArgumentParser):
	def error(self, message: str):
		self.print_usage(sys.stderr)
		self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positiveInt(text: str) -> int:
	try:
		value = int(text)
	except ValueError:
		raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
	if value < 1:
		raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
	return value


def _nonNegativeInt(text: str) -> int:
	try:
		value = int(text)
	except ValueError:
		raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
	if value < 0:
		raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
	return value


def _positiveFloat(text: str) -> float:
	try:
		value = float(text)
	except ValueError:
		raise argparse.ArgumentTypeError(f"{text!r} is not a number")
	if not value > 0:
		raise argparse.ArgumentTypeError(f"must be positive, got {value}")
	return value


def _fraction(text: str) -> float:
	try:
		value = float(text)
	except ValueError:
		raise argparse.ArgumentTypeError(f"{text!r} is not a number")
	if not 0.0 <= value < 1.0:
		raise argparse.ArgumentTypeError(f"must be in [0, 1), got {value}")
	return value


def _openUnit(text: str) -> float:
	value = _fraction(text)
	if value == 0.0:
		raise argparse.ArgumentTypeError("must be in (0, 1)")
	return value


def _print(document: dict, fmt: str, lines: list[str]) -> None:
	if fmt == "json":
		print(json.dumps(document, indent=2, sort_keys=True))
	else:
		print("\n".join(lines))


def _metricsLine(name: str, metrics: dict) -> str:
	return (
		f"{name}: precision={metrics['precision']:.4f} recall={metrics['recall']:.4f} "
		f"f1={metrics['f1']:.4f} (tp={metrics['tp']} fp={metrics['fp']} fn={metrics['fn']})"
	)


def _progress(completed: int, planned: int, sampleIndex: int) -> None:
	log.debug(f"Sample {sampleIndex} done ({completed}/{planned})")


def _runShard(args, source, count: int, **kwargs) -> int:
	workers = args.workers or config.get("workers")
	generator = ShardGenerator(maxWorkers=workers)
	try:
		result = generator.generateShard(
			source, count, args.seed, args.out, progressCallback=_progress, **kwargs,
		)
	except KeyboardInterrupt:
		generator.requestCancel()
		log.warning("Interrupted; the shard index lists the completed samples")
		return EXIT_RUNTIME
	manifest = result.manifest
	rate = result.samplesPerSecond
	document = {
		"samples": manifest["completed"],
		"planned": manifest["planned"],
		"configs": manifest["configs"],
		"per_config": manifest["per_config"],
		"held_out": manifest["held_out"],
		"wall_time": result.elapsed,
		"samples_per_second": rate,
		"samples_per_minute_per_worker": rate * 60.0 / workers,
		"out": args.out,
	}
	_print(document, args.format, [
		f"samples: {manifest['completed']} of {manifest['planned']}",
		f"wall time: {result.elapsed:.2f} s",
		f"samples/sec: {rate:.2f} ({rate * 60.0 / workers:.1f} per minute per worker)",
	])
	return EXIT_OK if manifest["complete"] else EXIT_RUNTIME


def cmdGenerate(args) -> int:
	if args.config:
		with open(args.config, "r", encoding="utf-8") as f:
			try:
				snapshot = json.load(f)
			except json.JSONDecodeError as e:
				raise ValidationFailed(f"{args.config} at byte {e.pos}: {e.msg}") from e
		try:
			source = genConfigFromDict(snapshot)
		except (TypeError, ValueError) as e:
			raise ValidationFailed(f"{args.config}: {e}") from e
	elif args.preset == VARIED:
		source = VARIED
	else:
		source = homogeneousConfig()
	return _runShard(args, source, args.count)


def cmdVaried(args) -> int:
	planned = plannedSampleCount(args.configs, args.per_config)
	message = f"planned samples: {planned} ({args.configs} configs x {args.per_config} samples)"
	# json mode keeps stdout to the summary document
	if args.format == "json":
		log.info(message)
	else:
		print(message)
		sys.stdout.flush()
	return _runShard(args, VARIED, planned, perConfig=args.per_config, holdout=args.holdout)


def cmdEval(args) -> int:
	prediction = loadPrediction(args.pred)
	truth = loadTruth(args.truth)
	report = evaluatePrediction(
		prediction,
		truth,
		tau=args.tau if args.tau is not None else config.get("tau"),
		edgeThreshold=args.edge_threshold if args.edge_threshold is not None else config.get("edgeThreshold"),
		minConfidence=args.min_confidence if args.min_confidence is not None else config.get("minConfidence"),
		alpha=args.alpha,
		beta=args.beta,
	)
	document = report.toDict()
	losses = document["losses"]
	_print(document, args.format, [
		_metricsLine("nodes", document["nodes"]),
		_metricsLine("edges", document["edges"]),
		(
			f"losses: matched={losses['matched']:.6f} excess={losses['excess']:.6f} "
			f"confidence={losses['confidence']:.6f} edge_bce={losses['edge_bce']:.6f} total={losses['total']:.6f}"
		),
	])
	return EXIT_OK


def projectVolume(data: np.ndarray, axis: str) -> np.ndarray:
	"""Maximum-intensity projection as 8-bit values, rounding half up."""
	mip = np.max(data, axis=PROJECTION_AXES[axis]).astype(np.float64)
	return np.floor(np.clip(mip, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def cmdProject(args) -> int:
	sample = readSample(args.sample)
	image = Image.fromarray(projectVolume(sample.volume.data, args.axis))
	# Pillow writes 8-bit grayscale "PPM" output as a binary portable graymap (P5)
	image.save(args.out, format="PPM")
	log.info(f"Wrote {args.axis} projection of {args.sample} to {args.out}")
	return EXIT_OK


def cmdInspect(args) -> int:
	sample = readSample(args.sample)
	stats = graphStatistics(sample.graph)
	occupancy = maskOccupancy(regenerateMask(sample))
	counts, _edges = np.histogram(sample.volume.data, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
	violations = validateGraph(sample.graph, sample.meta.config.graph)
	document = {
		**stats,
		"mask_occupancy": occupancy,
		"histogram": [int(c) for c in counts],
		"voxels": sample.volume.voxelCount,
		"dataset_seed": sample.meta.dataset_seed,
		"sample_index": sample.meta.sample_index,
		"config_id": sample.meta.config_id,
		"violations": [{"kind": v.kind, "detail": v.detail} for v in violations],
	}
	lines = [
		f"sample: {args.sample} (seed {sample.meta.dataset_seed}, index {sample.meta.sample_index})",
		f"nodes: {stats['nodes']}",
		f"edges: {stats['edges']}",
		f"weight range: {stats['weightMin']} .. {stats['weightMax']}",
		f"stalled: {stats['stalled']}",
		f"mask occupancy: {occupancy:.4f}",
		"histogram: " + " ".join(str(int(c)) for c in counts),
		f"validation: {'ok' if not violations else f'{len(violations)} violation(s)'}",
	]
	lines += [f"  {v.kind}: {v.detail}" for v in violations]
	_print(document, args.format, lines)
	return EXIT_VALIDATION if violations else EXIT_OK


def buildParser() -> argparse.ArgumentParser:
	parser = _ArgumentParser(prog="vesselforge", description="Synthetic 3D vessel dataset generator.")
	parser.add_argument("--settings", help="settings file (default $VESSELFORGE_CONFIG or ~/.vesselforge.ini)")
	parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
	subparsers = parser.add_subparsers(dest="command", required=True)

	def addFormat(sub):
		sub.add_argument("--format", choices=("text", "json"), default=None)

	def addShardOptions(sub):
		sub.add_argument("--seed", type=_nonNegativeInt, default=0)
		sub.add_argument("--workers", type=_positiveInt, default=None, help="default $VESSELFORGE_WORKERS or settings")
		sub.add_argument("--out", required=True)
		addFormat(sub)

	generate = subparsers.add_parser("generate", help="generate a shard from one recipe")
	source = generate.add_mutually_exclusive_group()
	source.add_argument("--config", help="JSON config snapshot")
	source.add_argument("--preset", choices=PRESETS, default="homogeneous")
	generate.add_argument("--count", type=_positiveInt, required=True)
	addShardOptions(generate)
	generate.set_defaults(handler=cmdGenerate)

	varied = subparsers.add_parser("varied", help="generate configs x samples of the varied dataset")
	varied.add_argument("--configs", type=_positiveInt, required=True)
	varied.add_argument("--per-config", type=_positiveInt, required=True)
	varied.add_argument("--holdout", type=_fraction, default=0.0, help="fraction of configs left out")
	addShardOptions(varied)
	varied.set_defaults(handler=cmdVaried)

	evaluate = subparsers.add_parser("eval", help="score a predicted graph")
	evaluate.add_argument("--pred", required=True)
	evaluate.add_argument("--truth", required=True)
	evaluate.add_argument("--tau", type=_positiveFloat, default=None)
	evaluate.add_argument("--edge-threshold", type=_openUnit, default=None)
	evaluate.add_argument("--min-confidence", type=_fraction, default=None)
	evaluate.add_argument("--alpha", type=float, default=1.0)
	evaluate.add_argument("--beta", type=float, default=1.0)
	addFormat(evaluate)
	evaluate.set_defaults(handler=cmdEval)

	project = subparsers.add_parser("project", help="maximum-intensity projection to PGM")
	project.add_argument("--sample", required=True)
	project.add_argument("--axis", choices=tuple(PROJECTION_AXES), default="z")
	project.add_argument("--out", required=True)
	project.set_defaults(handler=cmdProject, format="text")

	inspect = subparsers.add_parser("inspect", help="summarize a stored sample")
	inspect.add_argument("--sample", required=True)
	addFormat(inspect)
	inspect.set_defaults(handler=cmdInspect)
	return parser


def main(argv: Sequence[str] | None = None) -> int:
	parser = buildParser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return e.code if isinstance(e.code, int) else EXIT_USAGE

	try:
		config.initialize(args.settings)
	except (OSError, ValueError) as e:
		print(f"vesselforge: error: {e}", file=sys.stderr)
		return EXIT_USAGE
	logHandler.initialize(args.log_level or config.get("logLevel"))
	if getattr(args, "format", None) is None:
		args.format = config.get("reportFormat")

	try:
		return args.handler(args)
	except (SampleFormatError, OSError) as e:
		print(f"vesselforge: {e}", file=sys.stderr)
		return EXIT_RUNTIME
	except (SchemaError, ValidationFailed) as e:
		print(f"vesselforge: invalid input: {e}", file=sys.stderr)
		return EXIT_VALIDATION
	except ValueError as e:
		log.exception("Unexpected failure")
		print(f"vesselforge: {e}", file=sys.stderr)
		return EXIT_RUNTIME


if __name__ == "__main__":
	sys.exit(main())
