# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.
"""Optimal tours for a fixed stacking order.

Once the stacking order is fixed the pickup and delivery tours decouple. The
pickup tour must take every stack bottom to top, so a partial pickup tour is
described by how many items it has taken from each stack: the state
e = (e_1, ..., e_k) with 0 <= e_l <= q_l. The label E(e, l) is the cheapest way
to pick the items of e when the last one came from stack l. Labels of states
with |e| = p only read labels with |e| = p - 1, so states are processed layer
by layer.
"""

import itertools
import logging
import math
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, ItemSetMismatch, TooManyStacks
from .model import (DEPOT, DistanceMatrix, Instance, MakeSolution, Solution,
                    StackingOrder, Tour)

logger = logging.getLogger(__name__)

# None is the +infinity label: the state cannot end on that stack.
Label = Optional[int]


def CountStates(stacking: StackingOrder) -> int:
  """Number of nonzero DP states, prod(q_l + 1) - 1."""
  return math.prod(len(stack) + 1 for stack in stacking.NonEmpty()) - 1


def _LayeredStates(heights: Sequence[int]) -> List[List[Tuple[int, ...]]]:
  layers: List[List[Tuple[int, ...]]] = [[] for _ in range(sum(heights) + 1)]
  for e in itertools.product(*(range(q + 1) for q in heights)):
    layers[sum(e)].append(e)
  return layers


def LabelDP(stacks: Sequence[Sequence[int]],
            d: DistanceMatrix) -> Tuple[Tuple[int, ...], int]:
  """Cheapest sequence taking every stack in listed order, depot to depot.

  Ties are broken on item ids (the smaller last item wins), never on stack
  positions, so listing the stacks in another order returns the same
  sequence.
  """
  stacks = [tuple(stack) for stack in stacks if len(stack) > 0]
  heights = [len(stack) for stack in stacks]
  n = sum(heights)
  k = len(stacks)
  if n == 1:
    item = stacks[0][0]
    return (item, ), int(d[DEPOT][item] + d[item][DEPOT])

  # Mixed radix: index(e) = sum e_l * stride_l.
  strides = [math.prod(q + 1 for q in heights[:l]) for l in range(k)]
  size = math.prod(q + 1 for q in heights)
  cost: List[Label] = [None] * (size * k)
  parent: List[int] = [-1] * (size * k)

  layers = _LayeredStates(heights)
  for l in range(k):
    cost[strides[l] * k + l] = int(d[DEPOT][stacks[l][0]])

  for layer in layers[2:]:
    for e in layer:
      index = sum(e_l * stride for e_l, stride in zip(e, strides))
      for l in range(k):
        if e[l] == 0:
          continue
        item = stacks[l][e[l] - 1]
        prev = index - strides[l]
        best: Label = None
        best_from = -1
        best_last = 0
        for lp in range(k):
          height = e[lp] - (1 if lp == l else 0)
          prev_cost = cost[prev * k + lp]
          if height == 0 or prev_cost is None:
            continue
          last = stacks[lp][height - 1]
          candidate = prev_cost + int(d[last][item])
          if best is None or candidate < best or (candidate == best
                                                  and last < best_last):
            best, best_from, best_last = candidate, lp, last
        cost[index * k + l] = best
        parent[index * k + l] = best_from

  final = size - 1
  best_total: Label = None
  best_l = -1
  for l in range(k):
    label = cost[final * k + l]
    if label is None:
      continue
    total = label + int(d[stacks[l][-1]][DEPOT])
    if (best_total is None or total < best_total
        or (total == best_total and stacks[l][-1] < stacks[best_l][-1])):
      best_total, best_l = total, l
  assert best_total is not None

  seq: List[int] = []
  e = list(heights)
  index, l = final, best_l
  while l >= 0:
    seq.append(stacks[l][e[l] - 1])
    next_l = parent[index * k + l]
    e[l] -= 1
    index -= strides[l]
    l = next_l
  seq.reverse()
  return tuple(seq), best_total


def _CheckStacking(stacking: StackingOrder, d: DistanceMatrix) -> None:
  if len(d) != stacking.n + 1:
    raise DimensionMismatch(tour_len=stacking.n, side=len(d))


def OptimalPickupTour(*, stacking: StackingOrder,
                      d1: DistanceMatrix) -> Tuple[Tour, int]:
  """Cheapest pickup tour that fills every stack bottom to top."""
  _CheckStacking(stacking, d1)
  seq, value = LabelDP(stacking.NonEmpty(), d1)
  logger.debug(
      f'pickup DP over {CountStates(stacking)} states: {list(seq)} -> {value}')
  return Tour(seq=seq), value


def OptimalDeliveryTour(*, stacking: StackingOrder,
                        d2: DistanceMatrix) -> Tuple[Tour, int]:
  """Cheapest delivery tour that empties every stack top to bottom."""
  _CheckStacking(stacking, d2)
  seq, value = LabelDP(stacking.Reversed().NonEmpty(), d2)
  logger.debug(
      f'delivery DP over {CountStates(stacking)} states: {list(seq)} -> {value}'
  )
  return Tour(seq=seq), value


def OptimalToursGivenStacks(*, instance: Instance,
                            stacking: StackingOrder) -> Solution:
  used = len(stacking.NonEmpty())
  if used > instance.k:
    raise TooManyStacks(used=used, k=instance.k)
  if stacking.Items() != instance.Items():
    raise ItemSetMismatch(what='stacking order', expected=instance.Items(),
                          got=stacking.Items())
  t1, _ = OptimalPickupTour(stacking=stacking, d1=instance.d1)
  t2, _ = OptimalDeliveryTour(stacking=stacking, d2=instance.d2)
  return MakeSolution(instance=instance, t1=t1, t2=t2, stacking=stacking)
