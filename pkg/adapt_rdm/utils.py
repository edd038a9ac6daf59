# Copyright 2020 The adapt-rdm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import h5py
from typing import Any, BinaryIO, Dict, Mapping, Optional, Sequence, Text, Tuple, Union
import numpy as np
string_type = h5py.special_dtype(vlen=str)
Tensor = Any


def save_tensors(tensors: Mapping[Text, Tensor],
                 path: Union[Text, BinaryIO],
                 labels: Optional[Sequence[Text]] = None,
                 attrs: Optional[Mapping[Text, Any]] = None) -> None:
  """Save named arrays into hdf5 format.

  Args:
    tensors: Arrays to store, keyed by dataset name.
    path: path to file where the arrays are saved.
    labels: Optional list of strings stored alongside (e.g. operator labels).
    attrs: Optional scalar metadata stored as file attributes.
  """
  if not tensors:
    raise ValueError("Nothing to save: `tensors` is empty.")
  with h5py.File(path, 'w') as f:
    group = f.create_group('tensors')
    for name, tensor in tensors.items():
      group.create_dataset(name, data=np.asarray(tensor))
    if labels is not None:
      f.create_dataset(
          'labels',
          dtype=string_type,
          data=np.array(list(labels), dtype=object))
    for key, value in (attrs or {}).items():
      f.attrs[key] = value


def load_tensors(
    path: Union[Text, BinaryIO]) -> Tuple[Dict[Text, Tensor], Dict[Text, Any]]:
  """Load arrays saved by `save_tensors`.

  Args:
    path: path to file where the arrays are saved.
  Returns:
    The arrays keyed by name (plus `labels` if present) and the file
    attributes.
  """
  with h5py.File(path, 'r') as f:
    tensors = {name: f['tensors/' + name][()] for name in f['tensors'].keys()}
    if 'labels' in f:
      tensors['labels'] = [
          v.decode() if isinstance(v, bytes) else v for v in f['labels'][()]
      ]
    attrs = dict(f.attrs.items())
  return tensors, attrs
