# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Tool settings (worker count, evaluation defaults, report format).

Generation recipes are not settings; they live in :mod:`genConfig`.
"""

import os

from configobj import ConfigObj

try:
	from configobj.validate import Validator
except ImportError:
	from validate import Validator

from .logHandler import log

SECTION = "vesselForge"

CONFSPEC = {
	"workers": "integer(default=1, min=1)",
	"tau": "float(default=5.0, min=0.0)",
	"edgeThreshold": "float(default=0.5, min=0.0, max=1.0)",
	"minConfidence": "float(default=0.0, min=0.0, max=1.0)",
	"reportFormat": "option('text', 'json', default='text')",
	"logLevel": "option('DEBUG', 'INFO', 'WARNING', 'ERROR', default='WARNING')",
}

conf: ConfigObj | None = None


def _settingsPath() -> str:
	return os.environ.get("VESSELFORGE_CONFIG") or os.path.join(os.path.expanduser("~"), ".vesselforge.ini")


def initialize(path: str | None = None) -> ConfigObj:
	"""Load and validate the settings file, then apply environment overrides.

	A missing file yields the defaults of :data:`CONFSPEC`.

	:param path: Settings file; defaults to ``$VESSELFORGE_CONFIG`` or ``~/.vesselforge.ini``.
	:return: The loaded settings, also stored in :data:`conf`.
	"""
	global conf
	path = path or _settingsPath()
	spec = [f"[{SECTION}]"] + [f"{key} = {value}" for key, value in CONFSPEC.items()]
	loaded = ConfigObj(path if os.path.isfile(path) else None, configspec=spec, encoding="utf-8")
	result = loaded.validate(Validator(), preserve_errors=True)
	if result is not True:
		raise ValueError(f"Invalid settings in {path}: {result}")

	workers = os.environ.get("VESSELFORGE_WORKERS")
	if workers:
		try:
			value = int(workers)
		except ValueError:
			log.warning(f"Ignoring VESSELFORGE_WORKERS={workers!r}: not an integer")
		else:
			if value >= 1:
				loaded[SECTION]["workers"] = value
			else:
				log.warning(f"Ignoring VESSELFORGE_WORKERS={workers!r}: must be at least 1")
	conf = loaded
	log.debug(f"Loaded settings from {path if os.path.isfile(path) else 'defaults'}")
	return conf


def get(key: str):
	"""Return one setting, loading the settings on first use."""
	if conf is None:
		initialize()
	return conf[SECTION][key]
