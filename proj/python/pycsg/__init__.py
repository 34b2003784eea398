# Copyright 2026 The csg-solver Authors
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

"""Python bindings for the csg solver.

Games, strategies and reports cross the boundary as JSON documents in the
same layout the command-line tool reads and writes.
"""

import json

from . import _core
from ._core import InvalidArgument, SolverError, __version__

__all__ = [
    "InvalidArgument",
    "SolverError",
    "__version__",
    "validate",
    "evaluate",
    "evaluate_mc",
    "solve_cop",
    "solve_nash",
    "nash_gap",
    "example1_drift",
    "example1_tail_bound",
    "run_cli",
]


def _text(obj):
  return obj if isinstance(obj, str) else json.dumps(obj)


def validate(spec):
  return json.loads(_core.validate(_text(spec)))


def evaluate(spec, profile):
  return json.loads(_core.evaluate(_text(spec), _text(profile)))


def evaluate_mc(spec, profile, episodes, seed=0, threads=1):
  return json.loads(
      _core.evaluate_mc(_text(spec), _text(profile), episodes, seed, threads))


def solve_cop(spec, player, opponents=None):
  opp = None if opponents is None else _text(opponents)
  return json.loads(_core.solve_cop(_text(spec), player, opp))


def solve_nash(spec, **options):
  return json.loads(_core.solve_nash(_text(spec), **options))


def nash_gap(spec, profile):
  return json.loads(_core.nash_gap(_text(spec), _text(profile)))


def example1_drift(**params):
  return json.loads(_core.example1_drift(**params))


example1_tail_bound = _core.example1_tail_bound


def run_cli(args):
  """Runs the command-line tool in-process; returns (code, stdout, stderr)."""
  return _core.run_cli(list(args))
