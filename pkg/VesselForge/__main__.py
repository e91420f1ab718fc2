# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import sys

from .cli import main

sys.exit(main())
