# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.
"""Exact TSP, exact k-stack oracles, and the TWS/TWD heuristics.

Everything here enumerates an exponential space and is meant for desk-scale
instances; each entry point checks its enumeration size against
`SolverLimits` before starting.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from .compat import (ChromaticNumberOfSequences, Infeasible,
                     StackingFromTours)
from .errors import CapExceeded, ItemSetMismatch, NonIntegralAggregate
from .limits import DEFAULT_LIMITS, SolverLimits
from .model import (DEPOT, DistanceMatrix, Instance, MakeSolution, Solution,
                    StackingOrder, Tour, TourCost)
from .stackdp import LabelDP

logger = logging.getLogger(__name__)

Objective = Literal['min', 'max']
Side = Literal['pickup', 'delivery']

# Larger than any tour this module is allowed to price.
_UNREACHED = np.iinfo(np.int64).max // 4


################################################################################
def HeldKarp(*,
             d: DistanceMatrix,
             mode: Objective = 'min',
             limits: SolverLimits = DEFAULT_LIMITS) -> Tuple[Tour, int]:
  """Optimal (or, with mode='max', worst) tour by subset dynamic programming.

  dp[S, j] is the best path leaving the depot, visiting exactly the items of
  bitmask S and ending at item j + 1. Ties go to the smallest predecessor
  item at every step and to the smallest last item at the end.
  """
  w = np.array(d, dtype=np.int64)
  n = w.shape[0] - 1
  # The diagonal is never read.
  np.fill_diagonal(w, 0)
  if n > limits.held_karp_max_n:
    raise CapExceeded(what='HeldKarp item count',
                      size=n,
                      cap=limits.held_karp_max_n)
  if np.abs(w).sum() >= _UNREACHED // 2:
    raise ValueError('distances too large for exact int64 tour sums')
  if n == 1:
    return Tour(seq=(1, )), int(w[DEPOT, 1] + w[1, DEPOT])

  sign = 1 if mode == 'min' else -1
  w = w * sign
  between = w[1:, 1:]
  full = 1 << n
  dp = np.full((full, n), _UNREACHED, dtype=np.int64)
  parent = np.full((full, n), -1, dtype=np.int64)
  for j in range(n):
    dp[1 << j, j] = w[DEPOT, j + 1]

  members = ((np.arange(full)[:, None] >> np.arange(n)) & 1).astype(bool)
  for mask in range(1, full):
    if mask & (mask - 1) == 0:
      continue
    ends = np.flatnonzero(members[mask])
    prev = mask ^ (1 << ends)
    # candidates[r, c]: reach ends[r] from ends[c].
    candidates = dp[prev][:, ends] + between[np.ix_(ends, ends)].T
    best = np.argmin(candidates, axis=1)
    rows = np.arange(len(ends))
    dp[mask, ends] = np.minimum(candidates[rows, best], _UNREACHED)
    parent[mask, ends] = ends[best]

  totals = dp[full - 1] + w[1:, DEPOT]
  last = int(np.argmin(totals))
  value = int(totals[last]) * sign

  seq: List[int] = []
  mask = full - 1
  while last >= 0:
    seq.append(last + 1)
    prev_last = int(parent[mask, last])
    mask ^= 1 << last
    last = prev_last
  seq.reverse()
  logger.debug(f'HeldKarp({mode}) n={n}: {seq} -> {value}')
  return Tour(seq=tuple(seq)), value


################################################################################
def _BlockLabelings(n: int, k: int) -> Iterator[Tuple[int, ...]]:
  """Labelings of n positions with at most k labels, up to renaming labels.

  Labels appear in order of first use (restricted growth strings).
  """

  def _Extend(prefix: List[int], used: int) -> Iterator[Tuple[int, ...]]:
    if len(prefix) == n:
      yield tuple(prefix)
      return
    for label in range(min(used + 1, k)):
      prefix.append(label)
      yield from _Extend(prefix, max(used, label + 1))
      prefix.pop()

  yield from _Extend([], 0)


def _Blocks(order: Sequence[int], labels: Sequence[int]) -> List[List[int]]:
  blocks: List[List[int]] = [[] for _ in range(max(labels) + 1)]
  for item, label in zip(order, labels):
    blocks[label].append(item)
  return blocks


def _Padded(stacks: Sequence[Sequence[int]], k: int) -> StackingOrder:
  padded = [tuple(stack) for stack in stacks]
  padded += [()] * (k - len(padded))
  return StackingOrder(stacks=tuple(padded))


def StackArrangementCount(*, n: int, k: int) -> int:
  """Ordered placements of n items into k stacks: k (k+1) ... (k+n-1)."""
  return math.prod(range(k, k + n))


def _StackArrangements(n: int, k: int) -> Iterator[List[Tuple[int, ...]]]:
  """Every stacking order, once per renaming of the stacks."""
  for labels in _BlockLabelings(n, k):
    blocks = _Blocks(range(1, n + 1), labels)
    for ordered in itertools.product(*(itertools.permutations(block)
                                       for block in blocks)):
      yield list(ordered)


def ExactOracleStacks(*,
                      instance: Instance,
                      limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
  """Optimum over every stacking order, each completed by both label DPs."""
  n, k = instance.n, instance.k
  count = StackArrangementCount(n=n, k=k)
  if count > limits.stack_arrangements_cap:
    raise CapExceeded(what='stack arrangements',
                      size=count,
                      cap=limits.stack_arrangements_cap)

  best_key: Optional[Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = None
  best_stacks: List[Tuple[int, ...]] = []
  visited = 0
  for stacks in _StackArrangements(n, k):
    visited += 1
    seq1, cost1 = LabelDP(stacks, instance.d1)
    seq2, cost2 = LabelDP([tuple(reversed(s)) for s in stacks], instance.d2)
    key = (cost1 + cost2, seq1, seq2)
    if best_key is None or key < best_key:
      best_key, best_stacks = key, stacks
  assert best_key is not None
  logger.debug(
      f'stacks oracle: {visited} arrangements up to renaming -> {best_key[0]}')

  _, seq1, seq2 = best_key
  return MakeSolution(instance=instance,
                      t1=Tour(seq=seq1),
                      t2=Tour(seq=seq2),
                      stacking=_Padded(best_stacks, k))


def ExactOraclePairs(*,
                     instance: Instance,
                     objective: Objective = 'min',
                     limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
  """Best (or worst) pair of tours whose conflict graph is k-colorable.

  Tours are scanned by increasing signed cost so the scan stops as soon as no
  remaining pair can beat the incumbent. Ties go to the lexicographically
  smallest (t1, t2).
  """
  n, k = instance.n, instance.k
  if n > limits.pairs_max_n:
    raise CapExceeded(what='tour-pair oracle item count',
                      size=n,
                      cap=limits.pairs_max_n)
  sign = 1 if objective == 'min' else -1
  tours = list(itertools.permutations(range(1, n + 1)))
  tour_objs = [Tour(seq=seq) for seq in tours]
  ranks = [tour.Ranks() for tour in tour_objs]
  cost1 = [sign * TourCost(tour=tour, d=instance.d1) for tour in tour_objs]
  cost2 = [sign * TourCost(tour=tour, d=instance.d2) for tour in tour_objs]
  order1 = sorted(range(len(tours)), key=lambda i: (cost1[i], tours[i]))
  order2 = sorted(range(len(tours)), key=lambda j: (cost2[j], tours[j]))
  cheapest2 = cost2[order2[0]]

  best_key: Optional[Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = None
  for i in order1:
    if best_key is not None and cost1[i] + cheapest2 > best_key[0]:
      break
    for j in order2:
      value = cost1[i] + cost2[j]
      if best_key is not None and value > best_key[0]:
        break
      key = (value, tours[i], tours[j])
      if best_key is not None and key >= best_key:
        continue
      if ChromaticNumberOfSequences(ranks[i], tours[j]) <= k:
        best_key = key
  # The tour paired with its own reversal is always feasible.
  assert best_key is not None

  _, seq1, seq2 = best_key
  t1, t2 = Tour(seq=seq1), Tour(seq=seq2)
  stacking = StackingFromTours(t1=t1, t2=t2, k=k)
  assert not isinstance(stacking, Infeasible)
  solution = MakeSolution(instance=instance, t1=t1, t2=t2, stacking=stacking)
  logger.debug(f'pairs oracle ({objective}): {solution.value}')
  return solution


################################################################################
def _CheckFixedTour(instance: Instance, tour: Tour, what: str) -> None:
  if tour.Items() != instance.Items():
    raise ItemSetMismatch(what=what, expected=instance.Items(),
                          got=tour.Items())


def _CheckAssignments(instance: Instance, limits: SolverLimits) -> None:
  count = instance.k**instance.n
  if count > limits.fixed_tour_assignments_cap:
    raise CapExceeded(what='stack-label assignments',
                      size=count,
                      cap=limits.fixed_tour_assignments_cap)


def BestGivenPickup(*,
                    instance: Instance,
                    t1: Tour,
                    limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
  """Best solution whose pickup tour is t1.

  Each stack is filled in t1 order, so only the split of the items into
  stacks is enumerated; the delivery tour comes from the label DP.
  """
  _CheckFixedTour(instance, t1, 'pickup tour')
  _CheckAssignments(instance, limits)
  best: Optional[Tuple[int, Tuple[int, ...]]] = None
  best_blocks: List[List[int]] = []
  for labels in _BlockLabelings(instance.n, instance.k):
    blocks = _Blocks(t1.seq, labels)
    seq2, cost2 = LabelDP([block[::-1] for block in blocks], instance.d2)
    if best is None or (cost2, seq2) < best:
      best, best_blocks = (cost2, seq2), blocks
  assert best is not None
  return MakeSolution(instance=instance,
                      t1=t1,
                      t2=Tour(seq=best[1]),
                      stacking=_Padded(best_blocks, instance.k))


def BestGivenDelivery(*,
                      instance: Instance,
                      t2: Tour,
                      limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
  """Best solution whose delivery tour is t2 (stacks emptied in t2 order)."""
  _CheckFixedTour(instance, t2, 'delivery tour')
  _CheckAssignments(instance, limits)
  best: Optional[Tuple[int, Tuple[int, ...]]] = None
  best_stacks: List[List[int]] = []
  for labels in _BlockLabelings(instance.n, instance.k):
    stacks = [block[::-1] for block in _Blocks(t2.seq, labels)]
    seq1, cost1 = LabelDP(stacks, instance.d1)
    if best is None or (cost1, seq1) < best:
      best, best_stacks = (cost1, seq1), stacks
  assert best is not None
  return MakeSolution(instance=instance,
                      t1=Tour(seq=best[1]),
                      t2=t2,
                      stacking=_Padded(best_stacks, instance.k))


def TWS(*,
        instance: Instance,
        side: Side = 'pickup',
        fixed_tour: Optional[Tour] = None,
        limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
  """Fix one tour at its single-city optimum, solve the other side exactly.

  `fixed_tour` replaces the Held-Karp tour, e.g. to force (1, ..., n).
  """
  if side == 'pickup':
    t1 = (fixed_tour if fixed_tour is not None else HeldKarp(
        d=instance.d1, mode='min', limits=limits)[0])
    return BestGivenPickup(instance=instance, t1=t1, limits=limits)
  t2 = (fixed_tour if fixed_tour is not None else HeldKarp(
      d=instance.d2, mode='min', limits=limits)[0])
  return BestGivenDelivery(instance=instance, t2=t2, limits=limits)


def AggregateDistance(*,
                      instance: Instance,
                      alpha: Union[Fraction, str] = Fraction(1, 2),
                      scale: Optional[int] = None) -> np.ndarray:
  """scale * 2 * (alpha d1(a, b) + (1 - alpha) d2(b, a)), exactly.

  With alpha = 1/2 this is d1(a, b) + d2(b, a), the cost of using arc (a, b)
  in the pickup tour and (b, a) in the reversed delivery tour.
  """
  alpha = Fraction(alpha)
  if not 0 < alpha < 1:
    raise ValueError(f'alpha must lie strictly between 0 and 1, got {alpha}')
  factor = scale if scale is not None else 1
  if factor <= 0:
    raise ValueError(f'scale must be positive, got {scale}')
  c1 = 2 * alpha * factor
  c2 = 2 * (1 - alpha) * factor
  # c1 + c2 == 2 * factor is an integer, so both share one denominator.
  denominator = c1.denominator
  numerators = (int(c1 * denominator) * instance.D1() +
                int(c2 * denominator) * instance.D2().T)
  off_diagonal = ~np.eye(instance.n + 1, dtype=bool)
  if np.any(numerators[off_diagonal] % denominator != 0):
    raise NonIntegralAggregate(alpha=str(alpha), scale=scale)
  aggregate = numerators // denominator
  np.fill_diagonal(aggregate, 0)
  return aggregate


def TWD(*,
        instance: Instance,
        alpha: Union[Fraction, str] = Fraction(1, 2),
        scale: Optional[int] = None,
        limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
  """One TSP on the aggregate distance; deliver along the reversed tour.

  A single stack filled in pickup order makes the pair feasible. The value is
  priced with the original distances.
  """
  aggregate = AggregateDistance(instance=instance, alpha=alpha, scale=scale)
  t1, aggregate_value = HeldKarp(d=aggregate, mode='min', limits=limits)
  logger.debug(f'TWD aggregate optimum {list(t1.seq)} -> {aggregate_value}')
  return MakeSolution(instance=instance,
                      t1=t1,
                      t2=t1.Reversed(),
                      stacking=_Padded([t1.seq], instance.k))


################################################################################
class BoundsReport(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  opt_tsp1: int
  opt_tsp2: int
  wor_tsp1: int
  wor_tsp2: int
  opt_kstsp: int
  wor_kstsp: int
  chain_ok: bool


def ComputeBoundsReport(*,
                        instance: Instance,
                        limits: SolverLimits = DEFAULT_LIMITS) -> BoundsReport:
  """Single-city TSP extremes against the k-stack extremes.

  Checked: opt1 + opt2 <= opt_k, wor_k <= wor1 + wor2, and both opt1 + wor2
  and wor1 + opt2 lie in [opt_k, wor_k].
  """
  _, opt1 = HeldKarp(d=instance.d1, mode='min', limits=limits)
  _, opt2 = HeldKarp(d=instance.d2, mode='min', limits=limits)
  _, wor1 = HeldKarp(d=instance.d1, mode='max', limits=limits)
  _, wor2 = HeldKarp(d=instance.d2, mode='max', limits=limits)
  opt_k = ExactOraclePairs(instance=instance, objective='min',
                           limits=limits).value
  wor_k = ExactOraclePairs(instance=instance, objective='max',
                           limits=limits).value
  mixed = (opt1 + wor2, wor1 + opt2)
  chain_ok = (opt1 + opt2 <= opt_k and wor_k <= wor1 + wor2
              and opt_k <= min(mixed) and max(mixed) <= wor_k)
  if not chain_ok:
    logger.warning(f'bound chain violated: opt=({opt1}, {opt2}, {opt_k}),'
                   f' wor=({wor1}, {wor2}, {wor_k})')
  return BoundsReport(opt_tsp1=opt1,
                      opt_tsp2=opt2,
                      wor_tsp1=wor1,
                      wor_tsp2=wor2,
                      opt_kstsp=opt_k,
                      wor_kstsp=wor_k,
                      chain_ok=chain_ok)
