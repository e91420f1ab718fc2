# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Generation recipes: graph, mask and imaging parameters plus the dataset presets."""

from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Type, TypeVar

from .logHandler import log
from .randomStream import RandomStream

T = TypeVar("T")

STRAIGHT_LINES_PROBABILITY = 0.1
INVERT_PROBABILITY = 0.1
_MAX_WEIGHT_REDRAWS = 100


def _checkRange(name: str, bounds: tuple) -> None:
	if len(bounds) != 2 or bounds[0] > bounds[1]:
		raise ValueError(f"{name} must be an ordered (low, high) pair, got {bounds}")


@dataclass(frozen=True)
class GraphConfig:
	"""Parameters of vessel graph growth. Distances and diameters are in voxels."""

	n_max: int = 32
	e_max: int = 0  # 0 = uncapped
	d_min: float = 5.0
	d_max: float = 30.0
	w_min: float = 3.0
	w_max: float = 10.0
	bounds: tuple[int, int, int] = (64, 64, 64)
	cone_half_angle: float = 60.0
	min_branch_angle: float = 30.0
	max_attempts: int = 64

	def __post_init__(self):
		object.__setattr__(self, "bounds", tuple(int(b) for b in self.bounds))
		if self.n_max < 2:
			raise ValueError(f"n_max must be at least 2, got {self.n_max}")
		if self.e_max < 0:
			raise ValueError(f"e_max must be non-negative, got {self.e_max}")
		if not 0 < self.d_min < self.d_max:
			raise ValueError(f"need 0 < d_min < d_max, got {self.d_min}, {self.d_max}")
		if not 0 < self.w_min < self.w_max:
			raise ValueError(f"need 0 < w_min < w_max, got {self.w_min}, {self.w_max}")
		if 0.8 * self.w_max <= self.w_min:
			raise ValueError(
				f"branch probability undefined: 0.8 * w_max ({0.8 * self.w_max}) must exceed w_min ({self.w_min})",
			)
		if len(self.bounds) != 3 or min(self.bounds) < 1:
			raise ValueError(f"bounds must be three positive voxel counts, got {self.bounds}")
		if not 0 < self.cone_half_angle <= 180:
			raise ValueError(f"cone_half_angle must be in (0, 180], got {self.cone_half_angle}")
		if self.max_attempts < 1:
			raise ValueError(f"max_attempts must be positive, got {self.max_attempts}")


@dataclass(frozen=True)
class MaskConfig:
	"""Parameters of graph-to-mask conversion."""

	straight_lines: bool = False
	invert: bool = False
	samples_per_unit_length: float = 2.0
	jitter_amplitude: float = 0.1

	def __post_init__(self):
		if self.samples_per_unit_length < 2:
			raise ValueError(f"samples_per_unit_length must be at least 2, got {self.samples_per_unit_length}")
		if not 0 <= self.jitter_amplitude < 1:
			raise ValueError(f"jitter_amplitude must be in [0, 1), got {self.jitter_amplitude}")


@dataclass(frozen=True)
class BlobConfig:
	"""Tissue blob artifacts."""

	max_count: int = 5
	max_size: float = 20.0
	complexity_range: tuple[int, int] = (1, 4)
	elongation_range: tuple[float, float] = (1.0, 3.0)
	curvature_range: tuple[float, float] = (0.0, 1.0)
	intensity_range: tuple[float, float] = (0.01, 0.2)

	def __post_init__(self):
		for name in ("complexity_range", "elongation_range", "curvature_range", "intensity_range"):
			object.__setattr__(self, name, tuple(getattr(self, name)))
			_checkRange(name, getattr(self, name))
		if self.max_count < 0:
			raise ValueError(f"max_count must be non-negative, got {self.max_count}")
		if self.max_size < 1:
			raise ValueError(f"max_size must be at least 1, got {self.max_size}")
		if self.complexity_range[0] < 1:
			raise ValueError(f"complexity must be at least 1, got {self.complexity_range}")
		if self.elongation_range[0] <= 0:
			raise ValueError(f"elongation must be positive, got {self.elongation_range}")
		if self.intensity_range[0] < 0:
			raise ValueError(f"intensity must be non-negative, got {self.intensity_range}")


@dataclass(frozen=True)
class ImagingConfig:
	"""Parameters of the imaging simulation."""

	psf_size: int = 3
	psf_sigma: float = 2.0
	noise_level: float = 800.0
	background_noise: float = 0.05
	gaussian_std: float = 0.005
	background_brightness: float = 0.01
	perlin_scale: float = 20.0
	perlin_strength: float = 0.3
	perlin_darkness: float = 0.1
	brighten_scale: float = 50.0
	brighten_strength: float = 0.8
	octaves: int = 4
	blob: BlobConfig = field(default_factory=BlobConfig)
	alpha: float = 1.0
	shot_noise_enabled: bool = True

	def __post_init__(self):
		if self.psf_size < 1 or self.psf_size % 2 == 0:
			raise ValueError(f"psf_size must be odd and positive, got {self.psf_size}")
		if self.psf_sigma <= 0:
			raise ValueError(f"psf_sigma must be positive, got {self.psf_sigma}")
		if self.noise_level <= 0:
			raise ValueError(f"noise_level must be positive, got {self.noise_level}")
		if self.gaussian_std < 0 or self.background_noise < 0:
			raise ValueError("noise amplitudes must be non-negative")
		if self.perlin_scale <= 0 or self.brighten_scale <= 0:
			raise ValueError("Perlin scales must be positive")
		if self.octaves < 1:
			raise ValueError(f"octaves must be at least 1, got {self.octaves}")
		if self.alpha <= 0:
			raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class GenConfig:
	"""Complete recipe for one sample."""

	graph: GraphConfig = field(default_factory=GraphConfig)
	mask: MaskConfig = field(default_factory=MaskConfig)
	imaging: ImagingConfig = field(default_factory=ImagingConfig)
	dims: tuple[int, int, int] = (64, 64, 64)

	def __post_init__(self):
		object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
		if len(self.dims) != 3 or min(self.dims) < 1:
			raise ValueError(f"dims must be three positive voxel counts, got {self.dims}")
		if self.graph.bounds != self.dims:
			raise ValueError(f"graph bounds {self.graph.bounds} differ from volume dims {self.dims}")


def _createConfigFromDict(
	configClass: Type[T],
	configDict: dict[str, Any],
	defaultConfig: T,
) -> T:
	"""Create a dataclass instance from a dictionary with automatic field mapping.

	Unknown keys are ignored; missing keys keep the value of ``defaultConfig``.
	"""
	fieldNames = {f.name for f in fields(configClass)}
	validUpdates = {
		fieldName: tuple(value) if isinstance(value, list) else value
		for fieldName, value in configDict.items()
		if fieldName in fieldNames
	}
	return replace(defaultConfig, **validUpdates)


def genConfigFromDict(configDict: dict[str, Any], defaultConfig: GenConfig | None = None) -> GenConfig:
	"""Rebuild a :class:`GenConfig` from a (possibly partial) snapshot dictionary."""
	default = defaultConfig or homogeneousConfig()
	imagingDict = dict(configDict.get("imaging", {}))
	blob = _createConfigFromDict(BlobConfig, imagingDict.pop("blob", {}), default.imaging.blob)
	imaging = _createConfigFromDict(ImagingConfig, imagingDict, replace(default.imaging, blob=blob))
	dims = tuple(configDict.get("dims", default.dims))
	graphDict = dict(configDict.get("graph", {}))
	graphDict.setdefault("bounds", dims)
	return GenConfig(
		graph=_createConfigFromDict(GraphConfig, graphDict, default.graph),
		mask=_createConfigFromDict(MaskConfig, configDict.get("mask", {}), default.mask),
		imaging=imaging,
		dims=dims,
	)


def genConfigToDict(config: GenConfig) -> dict[str, Any]:
	"""JSON-ready snapshot of ``config``."""
	return asdict(config)


def homogeneousConfig() -> GenConfig:
	"""The single parameter set tuned to resemble real two-photon vessel scans."""
	return GenConfig()


def _sampleWeightRange(rng: RandomStream) -> tuple[float, float]:
	wMin = float(rng.uniform(2.0, 8.0))
	high = min(24.0, wMin + 16.0)
	for _ in range(_MAX_WEIGHT_REDRAWS):
		wMax = float(rng.uniform(wMin + 2.0, high))
		if 0.8 * wMax > wMin:
			return wMin, wMax
		log.debug(f"Redrawing w_max={wMax:.3f} for w_min={wMin:.3f}")
	log.warning(f"No valid w_max drawn for w_min={wMin:.3f}; using {high}")
	return wMin, high


def sampleVariedConfig(rng: RandomStream) -> GenConfig:
	"""Draw one configuration of the Varied dataset.

	Every varied parameter is drawn uniformly from its range; all others keep the
	homogeneous values.
	"""
	base = homogeneousConfig()

	dMin = float(rng.uniform(3.0, 10.0))
	dMax = float(rng.uniform(dMin + 5.0, min(64.0, dMin + 25.0)))
	wMin, wMax = _sampleWeightRange(rng)
	graph = replace(base.graph, d_min=dMin, d_max=dMax, w_min=wMin, w_max=wMax)

	mask = replace(
		base.mask,
		straight_lines=bool(rng.random() < STRAIGHT_LINES_PROBABILITY),
		invert=bool(rng.random() < INVERT_PROBABILITY),
	)

	psfSize = int(rng.integers(2, 7, endpoint=True))
	if psfSize % 2 == 0:
		psfSize += 1
	blob = replace(
		base.imaging.blob,
		max_count=int(rng.integers(2, 15, endpoint=True)),
		max_size=float(rng.uniform(10.0, 40.0)),
		intensity_range=(0.01, float(rng.uniform(0.01, 0.4))),
	)
	imaging = replace(
		base.imaging,
		psf_size=psfSize,
		psf_sigma=float(rng.uniform(0.5, 5.0)),
		noise_level=float(rng.uniform(200.0, 2000.0)),
		perlin_scale=float(rng.uniform(10.0, 100.0)),
		perlin_strength=float(rng.uniform(0.1, 0.8)),
		perlin_darkness=float(rng.uniform(0.05, 0.3)),
		brighten_scale=float(rng.uniform(20.0, 100.0)),
		brighten_strength=float(rng.uniform(0.3, 1.2)),
		blob=blob,
	)
	return GenConfig(graph=graph, mask=mask, imaging=imaging, dims=base.dims)
