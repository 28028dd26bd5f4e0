# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.
"""
CLI to generate, check and solve double TSP instances with k LIFO stacks.
"""
import argparse
import logging
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from shutil import get_terminal_size
from typing import Callable, Dict, List, Optional, Sequence

import colorama
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich_argparse import RichHelpFormatter

from . import _build_version
from ._internal.utilities import (DumpModelToYAML, DumpYaml, ReadText,
                                  TryParseAsModel, WriteText)
from .compat import BuildConflictGraph, MinColoring, StackingFromTours
from .errors import CapExceeded, KStackError
from .families import (FamilyParams, GenFamily, GenRandomInstance,
                       VerifyFamilyClaims)
from .limits import SolverLimits
from .model import (CheckTripleFeasible, DumpInstance, DumpSolution, Instance,
                    LoadInstance, LoadSolutionDocument, SimulateTriple,
                    Solution, StackingOrder, Tour, TourCost)
from .solve import (ComputeBoundsReport, ExactOraclePairs, ExactOracleStacks,
                    TWD, TWS)
from .stackdp import OptimalToursGivenStacks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_INTERNAL_ERROR = 4

METHODS = ('dp-stacks', 'oracle-pairs', 'oracle-stacks', 'tws', 'twd')
# The limit that --cap overrides, per solve method.
_CAP_FIELDS: Dict[str, Optional[str]] = {
    'dp-stacks': None,
    'oracle-pairs': 'pairs_max_n',
    'oracle-stacks': 'stack_arrangements_cap',
    'tws': 'fixed_tour_assignments_cap',
    'twd': 'held_karp_max_n',
    'bounds': 'pairs_max_n',
    'experiment': 'family_exact_max_n',
}


def _GetProgramName() -> str:
  if __package__:
    # Use __package__ to get the base package name
    base_module_path = __package__
    # Infer the module name from the file path, with assumptions about the structure
    module_name = Path(__file__).stem
    # Construct what might be the intended full module path
    full_module_path = f'{base_module_path}.{module_name}' if base_module_path else module_name
    return f'python -m {full_module_path}'
  else:
    return sys.argv[0]


class _CustomRichHelpFormatter(RichHelpFormatter):

  def __init__(self, *args, **kwargs):
    if kwargs.get('width') is None:
      width, _ = get_terminal_size()
      if width == 0:
        warnings.warn('Terminal width was set to 0, using default width of 80.',
                      RuntimeWarning,
                      stacklevel=0)
        # This is the default in get_terminal_size().
        width = 80
      # This is what HelpFormatter does to the width returned by
      # `get_terminal_size()`.
      width -= 2
      kwargs['width'] = width
    super().__init__(*args, **kwargs)


################################################################################
def ParseTour(text: str) -> Tour:
  """"1,2,3" or "[1, 2, 3]" as a tour."""
  body = text.strip().strip('[]')
  return Tour(seq=tuple(int(part) for part in body.split(',') if part.strip()))


def ParseNRange(text: str) -> List[int]:
  """"4..8" (inclusive), "4,6,8" or "6"."""
  if '..' in text:
    lo, hi = text.split('..', 1)
    return list(range(int(lo), int(hi) + 1))
  return [int(part) for part in text.split(',') if part.strip()]


def _Limits(args: argparse.Namespace, key: str) -> SolverLimits:
  limits = SolverLimits.FromEnv()
  field = _CAP_FIELDS.get(key)
  if args.cap is not None and field is not None:
    limits = limits._replace(**{field: args.cap})
  return limits


def _AddCap(p: argparse.ArgumentParser) -> None:
  p.add_argument(
      '--cap',
      type=int,
      default=None,
      help='Override the enumeration cap of the chosen solver'
      ' (defaults come from SolverLimits and KSTACK_TSP_* variables).')


def _AddOutput(p: argparse.ArgumentParser, what: str) -> None:
  p.add_argument('-o',
                 '--output',
                 type=str,
                 default='-',
                 help=f'Where to write the {what}, "-" for stdout.')


def _BuildParser() -> argparse.ArgumentParser:
  p = argparse.ArgumentParser(prog=_GetProgramName(),
                              description=__doc__,
                              formatter_class=_CustomRichHelpFormatter)
  p.add_argument('--version', action='version', version=_build_version)
  p.add_argument('-v',
                 '--verbose',
                 action='store_true',
                 help='Log solver details at DEBUG level.')

  sub_p = p.add_subparsers(dest='command',
                           title='commands',
                           description='Choose a command to run.',
                           required=True)

  p_generate = sub_p.add_parser('generate',
                                help='Write an instance JSON.',
                                formatter_class=_CustomRichHelpFormatter)
  p_generate.add_argument('--family',
                          choices=['I', 'J', 'H'],
                          default=None,
                          help='Adversarial family; random if omitted.')
  p_generate.add_argument('--n', type=int, required=True, help='Item count.')
  p_generate.add_argument('--k',
                          type=int,
                          default=None,
                          help='Stack count (default 2).')
  p_generate.add_argument('--unit', type=int, default=1000)
  p_generate.add_argument('--eps', type=int, default=1)
  p_generate.add_argument('--seed', type=int, default=0)
  p_generate.add_argument('--lo', type=int, default=1)
  p_generate.add_argument('--hi', type=int, default=100)
  p_generate.add_argument('--symmetric',
                          action='store_true',
                          help='Random instances with d(a, b) == d(b, a).')
  _AddOutput(p_generate, 'instance')

  p_check_triple = sub_p.add_parser('check-triple',
                                    help='Check a solution against the LIFO rule.',
                                    formatter_class=_CustomRichHelpFormatter)
  p_check_triple.add_argument('--instance', type=str, required=True)
  p_check_triple.add_argument('--solution', type=str, required=True)

  p_check_pair = sub_p.add_parser(
      'check-pair',
      help='Chromatic number of a tour pair and a stacking order for it.',
      formatter_class=_CustomRichHelpFormatter)
  p_check_pair.add_argument('--instance', type=str, default=None)
  p_check_pair.add_argument('--t1', type=str, required=True,
                            help='Pickup tour, e.g. "1,2,3".')
  p_check_pair.add_argument('--t2', type=str, required=True,
                            help='Delivery tour, e.g. "3,2,1".')
  p_check_pair.add_argument('--k',
                            type=int,
                            default=None,
                            help='Stack count; defaults to the instance k.')

  p_solve = sub_p.add_parser('solve',
                             help='Solve an instance.',
                             formatter_class=_CustomRichHelpFormatter)
  p_solve.add_argument('--instance', type=str, required=True)
  p_solve.add_argument('--method', choices=METHODS, required=True)
  p_solve.add_argument('--stacks',
                       type=str,
                       default=None,
                       help='Stacking order JSON {"stacks": [[...]]}, for dp-stacks.')
  p_solve.add_argument('--objective', choices=['min', 'max'], default='min',
                       help='For oracle-pairs.')
  p_solve.add_argument('--side',
                       choices=['pickup', 'delivery'],
                       default='pickup',
                       help='Which tour TWS fixes.')
  p_solve.add_argument('--fix-tour',
                       action='store_true',
                       help='TWS fixes (1, ..., n) instead of the TSP optimum.')
  p_solve.add_argument('--alpha', type=str, default='1/2',
                       help='TWD weight of the pickup distances.')
  p_solve.add_argument('--scale', type=int, default=None,
                       help='TWD integer scale of the aggregate distance.')
  _AddCap(p_solve)
  _AddOutput(p_solve, 'solution')

  p_bounds = sub_p.add_parser('bounds',
                              help='Single-city TSP bounds vs the k-stack optimum.',
                              formatter_class=_CustomRichHelpFormatter)
  p_bounds.add_argument('--instance', type=str, required=True)
  _AddCap(p_bounds)

  p_experiment = sub_p.add_parser(
      'experiment',
      help='Recompute the claims about a family over a range of n.',
      formatter_class=_CustomRichHelpFormatter)
  p_experiment.add_argument('--family', choices=['I', 'J', 'H'], required=True)
  p_experiment.add_argument('--n',
                            type=str,
                            required=True,
                            help='"4..8", "4,6,8" or "6".')
  p_experiment.add_argument('--unit', type=int, default=1000)
  p_experiment.add_argument('--eps', type=int, default=1)
  p_experiment.add_argument('--fix-tour',
                            action='store_true',
                            help='TWS fixes (1, ..., n) instead of the TSP optimum.')
  _AddCap(p_experiment)
  _AddOutput(p_experiment, 'CSV report')
  return p


################################################################################
def _Generate(args: argparse.Namespace, console: Console) -> int:
  instance: Instance
  if args.family is not None:
    instance = GenFamily(
        FamilyParams(family=args.family, n=args.n, unit=args.unit, eps=args.eps))
    if args.k is not None:
      instance = instance.WithK(args.k)
  else:
    instance = GenRandomInstance(n=args.n,
                                 k=args.k if args.k is not None else 2,
                                 lo=args.lo,
                                 hi=args.hi,
                                 seed=args.seed,
                                 symmetric=args.symmetric)
  WriteText(args.output, DumpInstance(instance))
  console.print(f'Generated n={instance.n}, k={instance.k}', style='bold green')
  return EXIT_OK


def _CheckTriple(args: argparse.Namespace, console: Console) -> int:
  instance = LoadInstance(ReadText(args.instance))
  document = LoadSolutionDocument(ReadText(args.solution))
  t1, t2, stacking = document.Parts()
  value = TourCost(tour=t1, d=instance.d1) + TourCost(tour=t2, d=instance.d2)
  order_ok = CheckTripleFeasible(t1=t1, t2=t2, stacking=stacking)
  replay_ok = SimulateTriple(t1=t1, t2=t2, stacking=stacking)
  used = len(stacking.NonEmpty())
  console.print(
      DumpYaml({
          'order_check': order_ok,
          'simulation': replay_ok,
          'stacks_used': used,
          'k': instance.k,
          'value': value,
          'declared_value': document.value,
      }))
  feasible = order_ok and replay_ok and used <= instance.k
  if order_ok != replay_ok:
    logger.error('order check and simulation disagree')
  if value != document.value:
    console.print(f'VALUE MISMATCH: declared {document.value}, computed {value}',
                  style='bold red')
  console.print('FEASIBLE' if feasible else 'INFEASIBLE',
                style='bold green' if feasible else 'bold red')
  return EXIT_OK if feasible and value == document.value else EXIT_INFEASIBLE


def _CheckPair(args: argparse.Namespace, console: Console) -> int:
  t1 = ParseTour(args.t1)
  t2 = ParseTour(args.t2)
  instance = (LoadInstance(ReadText(args.instance))
              if args.instance is not None else None)
  k = args.k
  if k is None:
    if instance is None:
      raise ValueError('check-pair needs --k or --instance')
    k = instance.k

  coloring = MinColoring(BuildConflictGraph(t1=t1, t2=t2))
  result = StackingFromTours(t1=t1, t2=t2, k=k)
  console.print(f'chi={coloring.chi}')
  if instance is not None:
    value = TourCost(tour=t1, d=instance.d1) + TourCost(tour=t2, d=instance.d2)
    console.print(f'value={value}')
  if not isinstance(result, StackingOrder):
    console.print(f'INFEASIBLE: needs {result.chi} stacks, k={k}',
                  style='bold red')
    return EXIT_INFEASIBLE
  console.print(f'FEASIBLE with k={k}', style='bold green')
  console.print(DumpModelToYAML(result))
  return EXIT_OK


def _Solve(args: argparse.Namespace, console: Console) -> int:
  instance = LoadInstance(ReadText(args.instance))
  limits = _Limits(args, args.method)
  solution: Solution
  if args.method == 'dp-stacks':
    if args.stacks is None:
      raise ValueError('--method dp-stacks needs --stacks')
    stacking = TryParseAsModel(json_text=ReadText(args.stacks),
                               model_type=StackingOrder)
    solution = OptimalToursGivenStacks(instance=instance, stacking=stacking)
  elif args.method == 'oracle-pairs':
    solution = ExactOraclePairs(instance=instance,
                                objective=args.objective,
                                limits=limits)
  elif args.method == 'oracle-stacks':
    solution = ExactOracleStacks(instance=instance, limits=limits)
  elif args.method == 'tws':
    fixed = Tour(seq=tuple(range(1, instance.n + 1))) if args.fix_tour else None
    solution = TWS(instance=instance,
                   side=args.side,
                   fixed_tour=fixed,
                   limits=limits)
  else:
    solution = TWD(instance=instance,
                   alpha=Fraction(args.alpha),
                   scale=args.scale,
                   limits=limits)
  WriteText(args.output, DumpSolution(solution))
  console.print(f'value={solution.value}', style='bold green')
  return EXIT_OK


def _Bounds(args: argparse.Namespace, console: Console) -> int:
  instance = LoadInstance(ReadText(args.instance))
  report = ComputeBoundsReport(instance=instance,
                               limits=_Limits(args, 'bounds'))
  console.print(DumpModelToYAML(report))
  return EXIT_OK if report.chain_ok else EXIT_INFEASIBLE


def _Experiment(args: argparse.Namespace, console: Console) -> int:
  report = VerifyFamilyClaims(family=args.family,
                              ns=ParseNRange(args.n),
                              unit=args.unit,
                              eps=args.eps,
                              fix_tour=args.fix_tour,
                              limits=_Limits(args, 'experiment'))
  WriteText(args.output, report.ToCSV())

  table = Table(title=f'Family {args.family}')
  for column in ('n', 'claim_id', 'claimed_value', 'computed_value', 'status'):
    table.add_column(column)
  styles = {'OK': 'green', 'MISMATCH': 'bold red', 'SKIPPED': 'yellow'}
  for row in report.rows:
    table.add_row(str(row.n),
                  row.claim_id,
                  row.claimed_value,
                  row.computed_value,
                  row.status,
                  style=styles.get(row.status))
  console.print(table)
  return EXIT_INFEASIBLE if report.HasMismatch() else EXIT_OK


_COMMANDS: Dict[str, Callable[[argparse.Namespace, Console], int]] = {
    'generate': _Generate,
    'check-triple': _CheckTriple,
    'check-pair': _CheckPair,
    'solve': _Solve,
    'bounds': _Bounds,
    'experiment': _Experiment,
}


def Run(argv: Optional[Sequence[str]] = None,
        *,
        console: Optional[Console] = None) -> int:
  """Runs one command and returns its exit code.

  0 success or feasible, 1 infeasible or a claim mismatch, 2 usage or input
  error, 3 enumeration cap exceeded, 4 unexpected internal error.
  """
  if console is None:
    console = Console(file=sys.stderr)
  p = _BuildParser()
  try:
    args = p.parse_args(argv)
  except SystemExit as e:
    # --help and --version exit 0, parse errors exit 2.
    return e.code if isinstance(e.code, int) else EXIT_OK

  logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                      format='%(message)s',
                      handlers=[RichHandler(console=console, show_path=False)],
                      force=True)
  try:
    return _COMMANDS[args.command](args, console)
  except CapExceeded as e:
    logger.error(str(e))
    console.print('Raise --cap or the KSTACK_TSP_* limit to run it anyway.',
                  style='bold red')
    return EXIT_CAP
  except (KStackError, ValueError, OSError) as e:
    console.print(f'error: {e}', style='bold red', markup=False)
    return EXIT_USAGE
  except Exception:
    console.print_exception()
    console.print('args:', args._get_kwargs(), style='bold red')
    return EXIT_INTERNAL_ERROR


def main():
  # Windows<10 requires this.
  colorama.init()
  sys.exit(Run())


if __name__ == '__main__':
  main()
