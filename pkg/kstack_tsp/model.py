# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.
"""Instances, tours, stacking orders and solutions of the k-stack double TSP.

An instance has n items, each picked up at a house in the pickup city and
delivered at a house in the delivery city. Index 0 of both distance matrices is
the depot. The pickup tour loads items into k LIFO stacks, the delivery tour
can only unload the item currently on top of a stack.
"""

import logging
from typing import Dict, FrozenSet, List, NamedTuple, Sequence, Tuple, Union

import numpy as np
from pydantic import (BaseModel, ConfigDict, Field, StrictInt,
                      field_validator, model_validator)
from typing_extensions import Annotated

from ._internal.utilities import CanonicalJSON, TryParseAsModel
from .errors import DimensionMismatch, ItemSetMismatch

logger = logging.getLogger(__name__)

ItemID = Annotated[int, 'ItemID']
DEPOT: ItemID = 0
DistanceMatrix = Union[Sequence[Sequence[int]], np.ndarray]
MatrixRows = Tuple[Tuple[StrictInt, ...], ...]


def _ItemRange(n: int) -> FrozenSet[int]:
  return frozenset(range(1, n + 1))


################################################################################
class Tour(BaseModel):
  """A visiting order of the items; the depot is implicit at both ends."""
  model_config = ConfigDict(frozen=True, extra='forbid')

  seq: Tuple[StrictInt, ...]

  @field_validator('seq')
  @classmethod
  def _IsPermutation(cls, seq: Tuple[int, ...]) -> Tuple[int, ...]:
    if len(seq) == 0:
      raise ValueError('a tour visits at least one item')
    if sorted(seq) != list(range(1, len(seq) + 1)):
      raise ValueError(f'seq {list(seq)} is not a permutation of 1..{len(seq)}')
    return seq

  @property
  def n(self) -> int:
    return len(self.seq)

  def Items(self) -> FrozenSet[int]:
    return frozenset(self.seq)

  def Reversed(self) -> 'Tour':
    return Tour(seq=tuple(reversed(self.seq)))

  def Ranks(self) -> Tuple[int, ...]:
    """rank[u] is the position of u in (0, u1, ..., un, 0); rank[0] == 0."""
    rank = [0] * (self.n + 1)
    for position, item in enumerate(self.seq, start=1):
      rank[item] = position
    return tuple(rank)

  def Arcs(self) -> List[Tuple[int, int]]:
    full = (DEPOT, ) + self.seq + (DEPOT, )
    return list(zip(full[:-1], full[1:]))


class StackInfo(NamedTuple):
  stack: int
  height: int


class StackingOrder(BaseModel):
  """The items distributed over k stacks, each listed bottom to top."""
  model_config = ConfigDict(frozen=True, extra='forbid')

  stacks: Tuple[Tuple[StrictInt, ...], ...]

  @field_validator('stacks')
  @classmethod
  def _IsPartition(
      cls, stacks: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[int, ...], ...]:
    if len(stacks) == 0:
      raise ValueError('a stacking order has at least one stack')
    items = [item for stack in stacks for item in stack]
    if len(items) == 0:
      raise ValueError('a stacking order holds at least one item')
    if sorted(items) != list(range(1, len(items) + 1)):
      raise ValueError(
          f'stacks {[list(s) for s in stacks]} do not partition 1..{len(items)}'
      )
    return stacks

  @property
  def n(self) -> int:
    return sum(len(stack) for stack in self.stacks)

  @property
  def k(self) -> int:
    return len(self.stacks)

  def Items(self) -> FrozenSet[int]:
    return frozenset(item for stack in self.stacks for item in stack)

  def NonEmpty(self) -> Tuple[Tuple[int, ...], ...]:
    return tuple(stack for stack in self.stacks if len(stack) > 0)

  def Reversed(self) -> 'StackingOrder':
    """Every stack read top to bottom; the delivery side of the same order."""
    return StackingOrder(stacks=tuple(
        tuple(reversed(stack)) for stack in self.stacks))

  def StackOf(self) -> Dict[int, StackInfo]:
    return {
        item: StackInfo(stack=index, height=height)
        for index, stack in enumerate(self.stacks)
        for height, item in enumerate(stack)
    }


class Instance(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  n: StrictInt = Field(..., ge=1, description='Number of items.')
  k: StrictInt = Field(..., ge=1, description='Number of stacks.')
  d1: MatrixRows = Field(
      ..., description='(n+1)x(n+1) distances in the pickup city.')
  d2: MatrixRows = Field(
      ..., description='(n+1)x(n+1) distances in the delivery city.')

  @model_validator(mode='after')
  def _CheckMatrices(self) -> 'Instance':
    side = self.n + 1
    for name, d in (('d1', self.d1), ('d2', self.d2)):
      if len(d) != side or any(len(row) != side for row in d):
        raise ValueError(f'{name} must be a {side}x{side} matrix')
      if any(value < 0 for row in d for value in row):
        raise ValueError(f'{name} has a negative entry')
    return self

  @classmethod
  def FromArrays(cls, *, k: int, d1: DistanceMatrix,
                 d2: DistanceMatrix) -> 'Instance':
    rows1 = tuple(tuple(int(v) for v in row) for row in np.asarray(d1))
    rows2 = tuple(tuple(int(v) for v in row) for row in np.asarray(d2))
    return cls(n=len(rows1) - 1, k=k, d1=rows1, d2=rows2)

  def D1(self) -> np.ndarray:
    return np.asarray(self.d1, dtype=np.int64)

  def D2(self) -> np.ndarray:
    return np.asarray(self.d2, dtype=np.int64)

  def Items(self) -> FrozenSet[int]:
    return _ItemRange(self.n)

  def Scaled(self, c: int) -> 'Instance':
    return Instance.FromArrays(k=self.k, d1=self.D1() * c, d2=self.D2() * c)

  def WithK(self, k: int) -> 'Instance':
    return Instance.model_validate({**self.model_dump(), 'k': k})


class Solution(BaseModel):
  """A feasible (T1, T2, P) triple with its total cost d1(T1) + d2(T2)."""
  model_config = ConfigDict(frozen=True, extra='forbid')

  t1: Tour
  t2: Tour
  stacking: StackingOrder
  value: StrictInt = Field(..., ge=0)

  @model_validator(mode='after')
  def _CheckFeasible(self) -> 'Solution':
    if not CheckTripleFeasible(t1=self.t1, t2=self.t2, stacking=self.stacking):
      raise ValueError('the (t1, t2, stacking) triple violates the LIFO rule')
    return self


################################################################################
def TourCost(*, tour: Tour, d: DistanceMatrix) -> int:
  """d(0,u1) + sum d(ui,ui+1) + d(un,0)."""
  if len(d) != tour.n + 1:
    raise DimensionMismatch(tour_len=tour.n, side=len(d))
  return int(sum(d[u][v] for u, v in tour.Arcs()))


def _CheckSameItems(*, t1: Tour, t2: Tour, stacking: StackingOrder) -> None:
  if t2.Items() != t1.Items():
    raise ItemSetMismatch(what='delivery tour', expected=t1.Items(),
                          got=t2.Items())
  if stacking.Items() != t1.Items():
    raise ItemSetMismatch(what='stacking order', expected=t1.Items(),
                          got=stacking.Items())


def CheckTripleFeasible(*, t1: Tour, t2: Tour, stacking: StackingOrder) -> bool:
  """Order-based check: a stacked below b needs a picked before b and b
  delivered before a.

  Both conditions are transitive along a stack, so only consecutive items of
  each stack are compared, which makes the check linear.
  """
  _CheckSameItems(t1=t1, t2=t2, stacking=stacking)
  pickup_rank = t1.Ranks()
  delivery_rank = t2.Ranks()
  for stack in stacking.stacks:
    for below, above in zip(stack[:-1], stack[1:]):
      if pickup_rank[below] > pickup_rank[above]:
        return False
      if delivery_rank[below] < delivery_rank[above]:
        return False
  return True


def SimulateTriple(*, t1: Tour, t2: Tour, stacking: StackingOrder) -> bool:
  """Replays the pickup tour as pushes and the delivery tour as pops."""
  _CheckSameItems(t1=t1, t2=t2, stacking=stacking)
  stack_of = stacking.StackOf()
  piles: List[List[int]] = [[] for _ in stacking.stacks]

  for item in t1.seq:
    stack, height = stack_of[item]
    if len(piles[stack]) != height:
      logger.debug(f'push of {item} out of order on stack {stack}')
      return False
    piles[stack].append(item)

  for item in t2.seq:
    stack, _ = stack_of[item]
    if not piles[stack] or piles[stack][-1] != item:
      logger.debug(f'delivery of {item} blocked on stack {stack}')
      return False
    piles[stack].pop()
  return True


def MakeSolution(*, instance: Instance, t1: Tour, t2: Tour,
                 stacking: StackingOrder) -> Solution:
  if t1.Items() != instance.Items():
    raise ItemSetMismatch(what='pickup tour', expected=instance.Items(),
                          got=t1.Items())
  value = TourCost(tour=t1, d=instance.d1) + TourCost(tour=t2, d=instance.d2)
  return Solution(t1=t1, t2=t2, stacking=stacking, value=value)


################################################################################
class SolutionDocument(BaseModel):
  """Wire format of a solution; not checked for feasibility."""
  model_config = ConfigDict(frozen=True, extra='forbid')

  t1: Tuple[StrictInt, ...]
  t2: Tuple[StrictInt, ...]
  stacks: Tuple[Tuple[StrictInt, ...], ...]
  value: StrictInt

  def Parts(self) -> Tuple[Tour, Tour, StackingOrder]:
    return (Tour(seq=self.t1), Tour(seq=self.t2),
            StackingOrder(stacks=self.stacks))


def DumpInstance(instance: Instance) -> str:
  return CanonicalJSON(instance.model_dump(mode='json'))


def LoadInstance(json_text: str) -> Instance:
  return TryParseAsModel(json_text=json_text, model_type=Instance)


def DumpSolution(solution: Solution) -> str:
  document = SolutionDocument(t1=solution.t1.seq,
                              t2=solution.t2.seq,
                              stacks=solution.stacking.stacks,
                              value=solution.value)
  return CanonicalJSON(document.model_dump(mode='json'))


def LoadSolutionDocument(json_text: str) -> SolutionDocument:
  return TryParseAsModel(json_text=json_text, model_type=SolutionDocument)
