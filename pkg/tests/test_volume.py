# -*- coding: UTF-8 -*-
# VesselForge: synthetic vessel dataset generator
# This file is covered by the GNU General Public License, version 2 or later.

import numpy as np
import pytest

from VesselForge.volume import ScalarVolume


def test_layout():
	v = ScalarVolume.zeros((4, 3, 2))
	assert v.data.shape == (2, 3, 4)
	assert v.dims == (4, 3, 2)
	assert v.voxelCount == 24
	assert v.data.dtype == np.dtype("<f4")


def test_bytesAreXFastest():
	data = np.zeros((2, 2, 3), dtype=np.float32)
	data[0, 0, 1] = 1.0
	raw = ScalarVolume(data).toBytes()
	assert len(raw) == 12 * 4
	assert np.frombuffer(raw, dtype="<f4")[1] == 1.0
	assert ScalarVolume.fromBytes(raw, (3, 2, 2)) == ScalarVolume(data)


def test_fromBytesLengthMismatch():
	with pytest.raises(ValueError):
		ScalarVolume.fromBytes(b"\0" * 10, (2, 2, 2))


def test_readOnlyAndFinite():
	v = ScalarVolume.full((2, 2, 2), 0.5)
	with pytest.raises(ValueError):
		v.data[0, 0, 0] = 1.0
	with pytest.raises(ValueError):
		ScalarVolume(np.full((2, 2, 2), np.nan))
	with pytest.raises(ValueError):
		ScalarVolume(np.zeros((2, 2)))


def test_isBinary():
	assert ScalarVolume.zeros((2, 2, 2)).isBinary()
	assert not ScalarVolume.full((2, 2, 2), 0.5).isBinary()
