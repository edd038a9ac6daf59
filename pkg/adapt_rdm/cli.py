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
"""Command-line driver: `adapt-rdm {run,compare,resources,fci,pool}`.

Examples:
  adapt-rdm run --system h6 --r 1.5 --variant adapt --nu 1 --eps 1e-4
  adapt-rdm compare --system h6 --r-grid all \
      --variant "adapt_v(30)" --variant "adapt_v(10)" \
      --variant "adapt_vx(30,10)" --variant adapt --jobs 4
  adapt-rdm resources --variant adapt --variant adapt_rdm --variant adapt_v
"""
import argparse
import concurrent.futures
import datetime
import json
import logging
import os
import re
import sys
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Text, Tuple
import numpy as np
import pandas as pd
from adapt_rdm import config
from adapt_rdm import fixtures
from adapt_rdm.adapt_engine import (VARIANTS, AdaptConfig, AnsatzTrace,
                                    measurement_cost, run_adapt, scaling_fit,
                                    trace_to_frame)
from adapt_rdm.integrals import load_fcidump, to_spin_hamiltonian
from adapt_rdm.operator_algebra import (POOL_KINDS, SPIN_ADAPTED_GSD,
                                        build_pool, dump_pool,
                                        qubit_hamiltonian)
from adapt_rdm.spectra import (PENALTY_MODES, PENALTY, VqdConfig,
                               VqdConvergenceError, curve_errors, fci_solve,
                               named_reference, npe, run_excited_states)
from adapt_rdm.version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_STALLED = 2

SUMMARY_COLUMNS = ("R", "variant", "N_u", "N_m", "E", "E_FCI", "error_mHa",
                   "N_s", "N_k", "variance", "ham_terms", "residual_terms")
COMPARE_COLUMNS = ("R", "variant", "E", "E_FCI", "error_kcal_mol",
                   "abs_error_kcal_mol")
RESOURCE_COLUMNS = ("R", "variant", "N", "pool_size", "ham_terms",
                    "residual_terms", "N_s", "N_k")
SWEEP_COLUMNS = ("variant", "N", "ham_terms", "residual_terms")

_VARIANT_PATTERN = re.compile(
    r"^(?P<variant>[a-z_]+)(?:\((?P<first>\d+)(?:,(?P<second>\d+))?\))?$")

# Run-file keys holding lists.
_LIST_FLAGS = ("variant", "fcidump", "r", "refs", "sizes")


class RunSpec(NamedTuple):
  """Everything a subcommand needs, resolved from flags and the run file.

  Attributes:
    points: `(R, fcidump path)` per geometry, sorted by `R`.
    variants: One `AdaptConfig` per variant.
    target_root: 0 for the ground state, `k` for the k-th excited root.
    references: Reference labels for excited roots (`homo->lumo`, ...).
    vqd_mode: `penalty` or `projector`.
    beta: Penalty weight; None selects the default.
    jobs: Worker processes over geometries.
    out: Output directory.
    seed: Recorded in the summary header; the algorithms are deterministic.
  """
  points: Tuple[Tuple[float, Text], ...]
  variants: Tuple[AdaptConfig, ...]
  target_root: int = 0
  references: Tuple[Text, ...] = ()
  vqd_mode: Text = PENALTY
  beta: Optional[float] = None
  jobs: int = 1
  out: Text = "."
  seed: int = 0

  def validate(self) -> None:
    if not self.points:
      raise ValueError("The geometry grid is empty.")
    for _, path in self.points:
      if not os.path.isfile(path):
        raise FileNotFoundError("FCIDUMP file {} does not exist.".format(path))
    if not self.variants:
      raise ValueError("No variant requested.")
    for cfg in self.variants:
      cfg.validate()
    if self.target_root < 0:
      raise ValueError("target_root = {} must be non-negative.".format(
          self.target_root))
    if self.vqd_mode not in PENALTY_MODES:
      raise ValueError("Unknown VQD mode {!r}.".format(self.vqd_mode))
    if self.beta is not None and self.beta <= 0:
      raise ValueError("beta = {} must be positive.".format(self.beta))
    if self.jobs < 1:
      raise ValueError("jobs = {} must be at least 1.".format(self.jobs))


def parse_variant(text: Text, base: AdaptConfig) -> AdaptConfig:
  """`adapt`, `adapt_v(30)` or `adapt_vx(30,10)` on top of `base`.

  Counts in parentheses override `base.n_update` (and `base.n_aux` for
  `adapt_vx`, written `adapt_vx(N_m,N_u)`).
  """
  match = _VARIANT_PATTERN.match(text.strip().lower())
  if not match or match.group("variant") not in VARIANTS:
    raise ValueError("Cannot parse variant {!r}; expected one of {} with an "
                     "optional count such as adapt_v(30).".format(
                         text, VARIANTS))
  variant = match.group("variant")
  first, second = match.group("first"), match.group("second")
  cfg = base._replace(variant=variant)
  if variant == "adapt_vx":
    if second is not None:
      cfg = cfg._replace(n_aux=int(first), n_update=int(second))
    elif first is not None:
      cfg = cfg._replace(n_aux=int(first))
  else:
    if second is not None:
      raise ValueError("Variant {!r} takes a single count.".format(text))
    if first is not None:
      cfg = cfg._replace(n_update=int(first))
    cfg = cfg._replace(n_aux=None)
  return cfg


def parse_grid(text: Text, system: Optional[Text]) -> List[float]:
  """`all`, `start:stop:step` (inclusive) or a comma-separated list."""
  text = text.strip()
  if text == "all":
    if system is None or system.lower() not in fixtures.GRIDS:
      raise ValueError("--r-grid all needs a known --system.")
    return [float(r) for r in fixtures.GRIDS[system.lower()]]
  if ":" in text:
    start, stop, step = (float(v) for v in text.split(":"))
    if step <= 0:
      raise ValueError("Grid step {} must be positive.".format(step))
    return [float(r) for r in np.round(np.arange(start, stop + step / 2,
                                                 step), 6)]
  return [float(v) for v in text.split(",") if v.strip()]


def _fcidump_length(path: Text, position: int) -> float:
  match = fixtures._FIXTURE_PATTERN.match(os.path.basename(path))  # pylint: disable=protected-access
  return float(match.group("r")) if match else float(position)


def resolve_points(args: argparse.Namespace) -> List[Tuple[float, Text]]:
  """Geometries requested on the command line, as `(R, path)`."""
  if args.fcidump:
    return sorted(
        (_fcidump_length(path, i), path) for i, path in enumerate(args.fcidump))
  if not args.system:
    raise ValueError("Either --system or --fcidump is required.")
  grid = []  # type: List[float]
  if args.r:
    grid.extend(args.r)
  if args.r_grid:
    grid.extend(parse_grid(args.r_grid, args.system))
  if args.r is None and args.r_grid is None:
    grid = [float(r) for r in fixtures.GRIDS.get(args.system.lower(), ())]
  return [(r, fixtures.find_fixture(args.system, r)) for r in sorted(set(grid))]


def build_run_spec(args: argparse.Namespace) -> RunSpec:
  """Resolve and validate a `RunSpec` from parsed arguments."""
  base = AdaptConfig(
      n_update=args.nu,
      n_aux=args.nm,
      epsilon=args.eps,
      criterion=args.criterion,
      max_iterations=args.max_iter,
      pool_kind=args.pool)
  variants = tuple(parse_variant(v, base) for v in (args.variant or ["adapt"]))
  spec = RunSpec(
      points=tuple(resolve_points(args)),
      variants=variants,
      target_root=args.target_root,
      references=tuple(args.refs or ()),
      vqd_mode=args.vqd_mode,
      beta=args.beta,
      jobs=args.jobs,
      out=args.out,
      seed=args.seed)
  spec.validate()
  return spec


class GeometryResult(NamedTuple):
  """Rows produced for one geometry."""
  r: float
  rows: Tuple[Dict[Text, Any], ...]
  stalled: bool


def _excited_trace(cfg: AdaptConfig, spec: RunSpec, ham, pool, qubit_h,
                   n_alpha: int, n_beta: int, n_spatial: int) -> AnsatzTrace:
  labels = spec.references or ("homo->lumo",)
  candidates = tuple(
      named_reference(label, n_alpha, n_beta, n_spatial) for label in labels)
  beta = () if spec.beta is None else (spec.beta,) * spec.target_root
  vqd_cfg = VqdConfig(
      penalty_mode=spec.vqd_mode,
      beta=beta,
      reference_candidates=candidates,
      epsilon=cfg.epsilon)
  try:
    traces = run_excited_states(cfg, ham, pool, spec.target_root + 1, vqd_cfg,
                                qubit_h=qubit_h)
  except VqdConvergenceError as e:
    logger.warning("%s: %s", cfg.name, e)
    return e.best.trace
  return traces[-1]


def run_geometry(r: float, path: Text, spec: RunSpec) -> GeometryResult:
  """Run every variant of `spec` on one geometry, logging to `trace_<R>.log`."""
  handler = logging.FileHandler(
      os.path.join(spec.out, "trace_{}.log".format(fixtures.format_length(r))),
      mode="w")
  handler.setFormatter(logging.Formatter("%(name)s %(levelname)s %(message)s"))
  package_logger = logging.getLogger("adapt_rdm")
  previous_level = package_logger.level
  package_logger.addHandler(handler)
  package_logger.setLevel(logging.INFO)
  try:
    mi = load_fcidump(path)
    ham = to_spin_hamiltonian(mi)
    qubit_h = qubit_hamiltonian(ham)
    exact = fci_solve(ham, k=spec.target_root + 1, qubit_h=qubit_h)
    e_fci = float(exact.energies[spec.target_root])
    logger.info("R=%s fcidump=%s E_FCI=%.12f", fixtures.format_length(r), path,
                e_fci)
    pools = {}
    rows = []
    stalled = False
    for cfg in spec.variants:
      if cfg.pool_kind not in pools:
        pools[cfg.pool_kind] = build_pool(mi.n_spatial, cfg.pool_kind)
      pool = pools[cfg.pool_kind]
      if spec.target_root == 0:
        trace = run_adapt(cfg, ham, pool, qubit_h=qubit_h)
      else:
        trace = _excited_trace(cfg, spec, ham, pool, qubit_h, mi.n_alpha,
                               mi.n_beta, mi.n_spatial)
      stalled |= not trace.converged
      cost = measurement_cost(cfg, ham.n_spin_orbitals, trace,
                              pool_size=len(pool), ham_terms=len(qubit_h))
      logger.info("%s iterations:\n%s", cfg.name,
                  trace_to_frame(trace).to_string(index=False))
      rows.append({
          "R": r,
          "variant": cfg.name,
          "N_u": cfg.n_update,
          "N_m": cfg.n_aux if cfg.n_aux is not None else "",
          "E": trace.energy,
          "E_FCI": e_fci,
          "error_mHa": (trace.energy - e_fci) * config.HARTREE_TO_MILLIHARTREE,
          "N_s": trace.n_parameters,
          "N_k": trace.n_iterations,
          "variance": trace.variance,
          "ham_terms": cost.ham_terms,
          "residual_terms": cost.residual_terms,
      })
    return GeometryResult(r, tuple(rows), stalled)
  finally:
    package_logger.removeHandler(handler)
    package_logger.setLevel(previous_level)
    handler.close()


def run_points(spec: RunSpec) -> List[GeometryResult]:
  """All geometries, on up to `spec.jobs` processes, sorted by `R`."""
  os.makedirs(spec.out, exist_ok=True)
  if spec.jobs == 1 or len(spec.points) == 1:
    results = [run_geometry(r, path, spec) for r, path in spec.points]
  else:
    with concurrent.futures.ProcessPoolExecutor(max_workers=spec.jobs) as pool:
      futures = [
          pool.submit(run_geometry, r, path, spec) for r, path in spec.points
      ]
      results = [f.result() for f in futures]
  return sorted(results, key=lambda g: g.r)


def write_table(frame: pd.DataFrame, path: Text, spec: RunSpec) -> None:
  """CSV with a one-line `#` header carrying the timestamp."""
  with open(path, "w") as f:
    f.write("# adapt-rdm {} {} seed={}\n".format(
        __version__,
        datetime.datetime.now().isoformat(timespec="seconds"), spec.seed))
    frame.to_csv(f, index=False, float_format="%.12g")


def read_table(path: Text) -> pd.DataFrame:
  """Inverse of `write_table`."""
  return pd.read_csv(path, comment="#")


def summary_frame(results: Sequence[GeometryResult]) -> pd.DataFrame:
  rows = [row for result in results for row in result.rows]
  frame = pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))
  return frame.sort_values(["R", "variant"], kind="mergesort").reset_index(
      drop=True)


def cmd_run(spec: RunSpec) -> int:
  """Run, write `summary.csv`; exit 2 if any geometry stalled."""
  results = run_points(spec)
  write_table(summary_frame(results), os.path.join(spec.out, "summary.csv"),
              spec)
  stalled = [g.r for g in results if g.stalled]
  if stalled:
    logger.warning("runs stalled at R = %s", stalled)
    return EXIT_STALLED
  return EXIT_OK


def compare_frame(summary: pd.DataFrame) -> pd.DataFrame:
  """Long-format energy and error curves keyed by `(variant, R)`."""
  errors = curve_errors(summary["E"], summary["E_FCI"])
  frame = pd.DataFrame({
      "R": summary["R"],
      "variant": summary["variant"],
      "E": summary["E"],
      "E_FCI": summary["E_FCI"],
      "error_kcal_mol": errors,
      "abs_error_kcal_mol": np.abs(errors),
  }, columns=list(COMPARE_COLUMNS))
  return frame.sort_values(["variant", "R"], kind="mergesort").reset_index(
      drop=True)


def npe_frame(compare: pd.DataFrame) -> pd.DataFrame:
  """Non-parallelity error per variant in kcal/mol."""
  rows = []
  for variant, group in compare.groupby("variant", sort=True):
    rows.append({
        "variant": variant,
        "npe_kcal_mol": npe(group["error_kcal_mol"]),
        "max_abs_error_kcal_mol": float(group["abs_error_kcal_mol"].max()),
        "points": len(group),
    })
  return pd.DataFrame(
      rows,
      columns=["variant", "npe_kcal_mol", "max_abs_error_kcal_mol", "points"])


def cmd_compare(spec: RunSpec) -> int:
  """Run every variant on the same grid and write `compare.csv`/`npe.csv`."""
  results = run_points(spec)
  summary = summary_frame(results)
  compare = compare_frame(summary)
  write_table(summary, os.path.join(spec.out, "summary.csv"), spec)
  write_table(compare, os.path.join(spec.out, "compare.csv"), spec)
  write_table(npe_frame(compare), os.path.join(spec.out, "npe.csv"), spec)
  return EXIT_STALLED if any(g.stalled for g in results) else EXIT_OK


def resource_frames(variants: Sequence[AdaptConfig], sizes: Sequence[int],
                    unique: bool = False) -> Tuple[pd.DataFrame, pd.DataFrame]:
  """Dense term counts per variant and size, and their log-log slopes."""
  rows = []
  slopes = []
  for cfg in variants:
    counts = []
    for n in sizes:
      cost = measurement_cost(cfg, n, unique=unique)
      rows.append({
          "variant": cfg.name,
          "N": n,
          "ham_terms": cost.ham_terms,
          "residual_terms": cost.residual_terms
      })
      counts.append(cost.residual_terms)
    slope = scaling_fit(sizes, counts) if len(sizes) > 1 and min(
        counts) > 0 else float("nan")
    slopes.append({"variant": cfg.name, "slope": slope})
  return (pd.DataFrame(rows, columns=list(SWEEP_COLUMNS)),
          pd.DataFrame(slopes, columns=["variant", "slope"]))


def system_resource_frame(variants: Sequence[AdaptConfig],
                          points: Sequence[Tuple[float, Text]],
                          iterations: Optional[int] = None,
                          unique: bool = False) -> pd.DataFrame:
  """Term counts and `N_s` of every variant on each geometry.

  Without `iterations` every variant is run to obtain `N_s` and `N_k`;
  otherwise `N_s` is estimated as `N_u * iterations`.
  """
  rows = []
  for r, path in points:
    mi = load_fcidump(path)
    ham = to_spin_hamiltonian(mi)
    qubit_h = qubit_hamiltonian(ham)
    pools = {}
    for cfg in variants:
      if cfg.pool_kind not in pools:
        pools[cfg.pool_kind] = build_pool(mi.n_spatial, cfg.pool_kind)
      pool = pools[cfg.pool_kind]
      trace = None
      if iterations is None:
        trace = run_adapt(cfg, ham, pool, qubit_h=qubit_h)
      cost = measurement_cost(
          cfg,
          ham.n_spin_orbitals,
          trace,
          pool_size=len(pool),
          ham_terms=len(qubit_h),
          unique=unique,
          n_iterations=iterations)
      rows.append({
          "R": r,
          "variant": cfg.name,
          "N": cost.n_spin_orbitals,
          "pool_size": len(pool),
          "ham_terms": cost.ham_terms,
          "residual_terms": cost.residual_terms,
          "N_s": cost.n_parameters,
          "N_k": cost.n_iterations,
      })
  frame = pd.DataFrame(rows, columns=list(RESOURCE_COLUMNS))
  return frame.sort_values(["R", "variant"], kind="mergesort").reset_index(
      drop=True)


def cmd_resources(args: argparse.Namespace) -> int:
  """Counts for the requested system, then the size sweep and its slopes."""
  base = AdaptConfig(
      n_update=args.nu,
      n_aux=args.nm,
      epsilon=args.eps,
      criterion=args.criterion,
      max_iterations=args.max_iter,
      pool_kind=args.pool)
  variants = [
      parse_variant(v, base)
      for v in (args.variant or ["adapt", "adapt_rdm", "adapt_v", "adapt_vx"])
  ]
  variants = [
      cfg._replace(n_aux=cfg.n_update)
      if cfg.variant == "adapt_vx" and cfg.n_aux is None else cfg
      for cfg in variants
  ]
  for cfg in variants:
    cfg.validate()
  if args.iterations is not None and args.iterations < 0:
    raise ValueError("iterations = {} must be non-negative.".format(
        args.iterations))
  system = None
  if args.system or args.fcidump:
    points = resolve_points(args)
    if not points:
      raise ValueError("The geometry grid is empty.")
    system = system_resource_frame(variants, points, args.iterations,
                                   args.unique)
    print(system.to_csv(index=False, float_format="%.12g"), end="")
  counts, slopes = resource_frames(variants, args.sizes, args.unique)
  print(counts.to_csv(index=False), end="")
  print(slopes.to_csv(index=False), end="")
  if args.out:
    spec = RunSpec(points=(), variants=tuple(variants), out=args.out)
    os.makedirs(args.out, exist_ok=True)
    if system is not None:
      write_table(system, os.path.join(args.out, "resources.csv"), spec)
    write_table(counts, os.path.join(args.out, "sweep.csv"), spec)
    write_table(slopes, os.path.join(args.out, "scaling.csv"), spec)
  return EXIT_OK


def cmd_fci(args: argparse.Namespace) -> int:
  points = resolve_points(args)
  if not points:
    raise ValueError("The geometry grid is empty.")
  rows = []
  for r, path in points:
    ham = to_spin_hamiltonian(load_fcidump(path))
    solution = fci_solve(ham, k=args.roots)
    for root, energy in enumerate(solution.energies):
      rows.append({"R": r, "root": root, "E_FCI": float(energy)})
  print(pd.DataFrame(rows, columns=["R", "root", "E_FCI"]).to_csv(
      index=False, float_format="%.12g"), end="")
  return EXIT_OK


def cmd_pool(args: argparse.Namespace) -> int:
  if args.n_spatial is not None:
    n_spatial = args.n_spatial
  else:
    points = resolve_points(args)
    if not points:
      raise ValueError("The geometry grid is empty.")
    n_spatial = load_fcidump(points[0][1]).n_spatial
  pool = build_pool(n_spatial, args.pool)
  print("# {} pool, {} elements".format(pool.kind, len(pool)))
  print(dump_pool(pool))
  return EXIT_OK


def _add_geometry_flags(parser: argparse.ArgumentParser) -> None:
  parser.add_argument(
      "--system", help="Bundled fixture family, e.g. h2, h4, h6, n2.")
  parser.add_argument(
      "--fcidump", nargs="+", help="Explicit FCIDUMP files, one per geometry.")
  parser.add_argument(
      "--r", type=float, nargs="+", help="Bond lengths in Angstrom.")
  parser.add_argument(
      "--r-grid",
      help="'all', 'start:stop:step' (inclusive) or a comma-separated list.")


def _add_adapt_flags(parser: argparse.ArgumentParser) -> None:
  parser.add_argument(
      "--variant",
      action="append",
      help="adapt, adapt_rdm, adapt_v or adapt_vx, optionally with counts "
      "such as adapt_v(30) or adapt_vx(30,10). Repeatable.")
  parser.add_argument("--nu", type=int, default=1, help="Operators added per "
                      "iteration.")
  parser.add_argument("--nm", type=int, default=None, help="Screened "
                      "candidates per iteration for adapt_vx.")
  parser.add_argument(
      "--eps", type=float, default=config.DEFAULT_EPSILON,
      help="Convergence threshold.")
  parser.add_argument(
      "--criterion", choices=["variance", "residual_norm"], default="variance")
  parser.add_argument(
      "--max-iter", type=int, default=config.DEFAULT_MAX_ITERATIONS)
  parser.add_argument("--pool", choices=POOL_KINDS, default=SPIN_ADAPTED_GSD)


def build_parser(
) -> Tuple[argparse.ArgumentParser, Dict[Text, argparse.ArgumentParser]]:
  """The top-level parser and its subcommand parsers by name."""
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument(
      "--config", help="JSON run file whose keys mirror the long flags.")
  common.add_argument(
      "--log-level",
      default="warning",
      choices=["debug", "info", "warning", "error"])

  parser = argparse.ArgumentParser(
      prog="adapt-rdm",
      description="Adaptive VQE with RDM-based operator selection.",
      formatter_class=argparse.RawDescriptionHelpFormatter,
      epilog=__doc__)
  parser.add_argument("--version", action="version", version=__version__)
  subparsers = parser.add_subparsers(dest="command")
  commands = {}

  for name, help_text in (("run", "Run one variant over a geometry grid."),
                          ("compare", "Run several variants on one grid.")):
    sub = subparsers.add_parser(name, parents=[common], help=help_text)
    _add_geometry_flags(sub)
    _add_adapt_flags(sub)
    sub.add_argument(
        "--target-root",
        type=int,
        default=0,
        help="0 for the ground state, k for the k-th excited root.")
    sub.add_argument(
        "--refs",
        nargs="+",
        help="Excited-root references: hf, homo->lumo, homo->lumo+1, ...")
    sub.add_argument("--vqd-mode", choices=PENALTY_MODES, default=PENALTY)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--out", default=".")
    sub.add_argument("--seed", type=int, default=0)
    commands[name] = sub

  sub = subparsers.add_parser(
      "resources", parents=[common], help="Measurement-cost report.")
  _add_geometry_flags(sub)
  _add_adapt_flags(sub)
  sub.add_argument(
      "--iterations",
      type=int,
      default=None,
      help="Estimate N_s as N_u times this N_k instead of running ADAPT.")
  sub.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 16, 20])
  sub.add_argument(
      "--unique",
      action="store_true",
      help="Count symmetry-unique RDM elements.")
  sub.add_argument("--out", default=None)
  commands["resources"] = sub

  sub = subparsers.add_parser(
      "fci", parents=[common], help="Exact roots of each geometry.")
  _add_geometry_flags(sub)
  sub.add_argument("--roots", type=int, default=1)
  commands["fci"] = sub

  sub = subparsers.add_parser(
      "pool", parents=[common], help="Print the operator pool.")
  _add_geometry_flags(sub)
  sub.add_argument("--n-spatial", type=int, default=None)
  sub.add_argument("--pool", choices=POOL_KINDS, default=SPIN_ADAPTED_GSD)
  commands["pool"] = sub
  return parser, commands


def parse_args(argv: Optional[Sequence[Text]] = None) -> argparse.Namespace:
  """Parse flags, filling unset ones from the `--config` run file."""
  parser, commands = build_parser()
  args = parser.parse_args(argv)
  if args.command is None:
    parser.error("a subcommand is required")
  if args.config:
    with open(args.config) as f:
      values = json.load(f)
    if not isinstance(values, dict):
      raise ValueError("Run file {} must hold a JSON object.".format(
          args.config))
    values = {key.replace("-", "_"): value for key, value in values.items()}
    unknown = sorted(set(values) - set(vars(args)))
    if unknown:
      raise KeyError("Unknown keys in run file {}: {}.".format(
          args.config, ", ".join(unknown)))
    values.pop("config", None)
    lists = {}
    for key in _LIST_FLAGS:
      if key in values:
        value = values.pop(key)
        lists[key] = value if isinstance(value, list) else [value]
    command = commands[args.command]
    command.set_defaults(**values)
    args = parser.parse_args(argv)
    # A list flag given on the command line replaces the file value.
    for key, value in lists.items():
      if getattr(args, key, None) == command.get_default(key):
        setattr(args, key, value)
  return args


def _configure_logging(level: Text) -> None:
  level = getattr(logging, level.upper())
  logging.basicConfig(
      level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")
  for handler in logging.getLogger().handlers:
    handler.setLevel(level)


def main(argv: Optional[Sequence[Text]] = None) -> int:
  """Entry point; returns the process exit code."""
  try:
    try:
      args = parse_args(argv)
    except SystemExit as e:
      return EXIT_OK if not e.code else EXIT_INPUT_ERROR
    _configure_logging(args.log_level)
    logger.info("adapt-rdm %s: %s", __version__, vars(args))
    if args.command == "run":
      return cmd_run(build_run_spec(args))
    if args.command == "compare":
      return cmd_compare(build_run_spec(args))
    if args.command == "resources":
      return cmd_resources(args)
    if args.command == "fci":
      return cmd_fci(args)
    return cmd_pool(args)
  except (FileNotFoundError, ValueError, KeyError) as e:
    print("adapt-rdm: error: {}".format(e), file=sys.stderr)
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
  sys.exit(main())
