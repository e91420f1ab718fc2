# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

"""Package logger.

Every module logs through ``from .logHandler import log``.
"""

import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

log = logging.getLogger("VesselForge")
log.addHandler(logging.NullHandler())

_handler: logging.Handler | None = None


def initialize(level: str | int = "INFO") -> None:
	"""Attach a single stderr handler to the package logger.

	Calling it again only changes the level.

	:param level: Level name or number.
	"""
	global _handler
	if isinstance(level, str):
		level = logging.getLevelName(level.upper())
	if _handler is None:
		_handler = logging.StreamHandler()
		_handler.setFormatter(logging.Formatter(LOG_FORMAT))
		log.addHandler(_handler)
	log.setLevel(level)
