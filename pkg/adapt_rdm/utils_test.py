import numpy as np
import pytest
from adapt_rdm.utils import load_tensors, save_tensors


def test_save_and_load_tensors(tmp_path, rng):
  path = str(tmp_path / "trace.h5")
  amplitudes = rng.randn(8) + 1j * rng.randn(8)
  theta = rng.randn(3)
  save_tensors({"amplitudes": amplitudes, "theta": theta},
               path,
               labels=["S(0;1)", "D(0,1;2,3)", "d(3,2;1,0)"],
               attrs={"energy": -1.137, "variant": "adapt"})
  tensors, attrs = load_tensors(path)
  np.testing.assert_allclose(tensors["amplitudes"], amplitudes)
  np.testing.assert_allclose(tensors["theta"], theta)
  assert tensors["labels"] == ["S(0;1)", "D(0,1;2,3)", "d(3,2;1,0)"]
  assert attrs["energy"] == -1.137
  assert attrs["variant"] == "adapt"


def test_save_without_labels(tmp_path):
  path = str(tmp_path / "plain.h5")
  save_tensors({"d1": np.eye(4)}, path)
  tensors, attrs = load_tensors(path)
  assert set(tensors) == {"d1"}
  assert attrs == {}


def test_save_nothing_raises(tmp_path):
  with pytest.raises(ValueError, match="empty"):
    save_tensors({}, str(tmp_path / "empty.h5"))
