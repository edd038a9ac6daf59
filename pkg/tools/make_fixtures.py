#!/usr/bin/env python
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
"""Regenerate `<system>_<R>.fcidump` fixtures with pyscf.

  python tools/make_fixtures.py --system h6 --out adapt_rdm/data
"""
import argparse
import logging
import sys
from adapt_rdm import fixtures
from adapt_rdm.cli import parse_grid


def main(argv=None) -> int:
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument("--system", required=True, choices=sorted(fixtures.GRIDS))
  parser.add_argument(
      "--grid",
      default="all",
      help="'all', 'start:stop:step' (inclusive) or a comma-separated list.")
  parser.add_argument("--out", default=None, help="Defaults to the fixture "
                      "directory.")
  args = parser.parse_args(argv)
  logging.basicConfig(level=logging.INFO)
  grid = parse_grid(args.grid, args.system)
  if not grid:
    print("make_fixtures: empty grid", file=sys.stderr)
    return 1
  fixtures.make_fixtures(args.system, grid, args.out)
  return 0


if __name__ == "__main__":
  sys.exit(main())
