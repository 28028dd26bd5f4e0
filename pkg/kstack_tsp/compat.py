# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.
"""Which stacking orders fit a given pair of tours.

Two items conflict when the delivery tour visits them in the same relative
order as the pickup tour: whichever is stacked first ends up below the other
and blocks it. A pair of tours admits a stacking order with k stacks iff the
conflict graph can be colored with k colors. The conflict graph is a
comparability graph (orient every edge along the pickup order), so its
chromatic number is the length of its longest chain.
"""

import bisect
import logging
from typing import Dict, FrozenSet, List, Sequence, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidStackCount, ItemSetMismatch
from .model import StackingOrder, Tour

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class ConflictGraph(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  vertices: FrozenSet[int]
  edges: FrozenSet[Edge] = Field(
      ..., description='Unordered pairs, stored as (smaller, larger).')
  pickup_rank: Tuple[int, ...]
  delivery_rank: Tuple[int, ...]

  def Graph(self) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(self.vertices)
    g.add_edges_from(self.edges)
    return g

  def Orientation(self) -> nx.DiGraph:
    """Every edge directed from the item picked first to the one picked last."""
    f = nx.DiGraph()
    f.add_nodes_from(self.vertices)
    for a, b in self.edges:
      if self.pickup_rank[a] < self.pickup_rank[b]:
        f.add_edge(a, b)
      else:
        f.add_edge(b, a)
    return f


class Coloring(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  chi: int = Field(..., ge=0)
  color: Dict[int, int]

  @model_validator(mode='after')
  def _CheckRange(self) -> 'Coloring':
    used = set(self.color.values())
    if used != set(range(1, self.chi + 1)):
      raise ValueError(f'colors {sorted(used)} are not exactly 1..{self.chi}')
    return self


class Infeasible(BaseModel):
  """No stacking order with k stacks fits the tour pair."""
  model_config = ConfigDict(frozen=True, extra='forbid')

  chi: int
  k: int


def _CheckTourPair(t1: Tour, t2: Tour) -> None:
  if t1.Items() != t2.Items():
    raise ItemSetMismatch(what='delivery tour', expected=t1.Items(),
                          got=t2.Items())


def BuildConflictGraph(*, t1: Tour, t2: Tour) -> ConflictGraph:
  _CheckTourPair(t1, t2)
  pickup_rank = t1.Ranks()
  delivery_rank = t2.Ranks()
  edges = set()
  for a in range(1, t1.n + 1):
    for b in range(a + 1, t1.n + 1):
      same_order = ((pickup_rank[a] - pickup_rank[b]) *
                    (delivery_rank[a] - delivery_rank[b]) > 0)
      if same_order:
        edges.add((a, b))
  vertices = frozenset(v for edge in edges for v in edge)
  return ConflictGraph(vertices=vertices,
                       edges=frozenset(edges),
                       pickup_rank=pickup_rank,
                       delivery_rank=delivery_rank)


def IsTransitiveOrientation(g: ConflictGraph) -> bool:
  f = g.Orientation()
  if not nx.is_directed_acyclic_graph(f):
    return False
  closure = nx.transitive_closure_dag(f)
  return set(closure.edges()) == set(f.edges())


def MinColoring(g: ConflictGraph) -> Coloring:
  """Colors each vertex by the length of the longest chain ending at it.

  Two adjacent vertices lie on a common chain, so they get different colors;
  the number of colors is the longest chain, i.e. the largest clique.
  """
  f = g.Orientation()
  color: Dict[int, int] = {}
  for v in nx.topological_sort(f):
    color[v] = 1 + max((color[u] for u in f.predecessors(v)), default=0)
  return Coloring(chi=max(color.values(), default=0), color=color)


def LCSOracle(*, t1: Tour, t2: Tour) -> int:
  """Length of the longest common subsequence of the two visiting orders."""
  _CheckTourPair(t1, t2)
  a, b = t1.seq, t2.seq
  table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
  for i in range(1, len(a) + 1):
    for j in range(1, len(b) + 1):
      if a[i - 1] == b[j - 1]:
        table[i][j] = table[i - 1][j - 1] + 1
      else:
        table[i][j] = max(table[i - 1][j], table[i][j - 1])
  return table[len(a)][len(b)]


def _LongestIncreasing(values: Sequence[int]) -> int:
  # Patience sorting: piles[i] is the smallest tail of an increasing run of
  # length i + 1.
  piles: List[int] = []
  for value in values:
    index = bisect.bisect_left(piles, value)
    if index == len(piles):
      piles.append(value)
    else:
      piles[index] = value
  return len(piles)


def ChromaticNumberOfSequences(pickup_rank: Sequence[int],
                               delivery_seq: Sequence[int]) -> int:
  """chi of the conflict graph, without building it.

  No validation; `pickup_rank` is `Tour.Ranks()` of the pickup tour.
  """
  longest = _LongestIncreasing([pickup_rank[item] for item in delivery_seq])
  return longest if longest >= 2 else 0


def ChromaticNumber(*, t1: Tour, t2: Tour) -> int:
  _CheckTourPair(t1, t2)
  return ChromaticNumberOfSequences(t1.Ranks(), t2.seq)


def StackingFromTours(*, t1: Tour, t2: Tour,
                      k: int) -> Union[StackingOrder, Infeasible]:
  """Builds a k-stack order compatible with both tours, if one exists.

  Every item goes to the stack of its color, conflict-free items to stack 1,
  and each stack is filled in pickup order.
  """
  if k < 1:
    raise InvalidStackCount(k=k)
  g = BuildConflictGraph(t1=t1, t2=t2)
  coloring = MinColoring(g)
  if coloring.chi > k:
    logger.debug(f'tour pair needs {coloring.chi} stacks, only {k} available')
    return Infeasible(chi=coloring.chi, k=k)

  stacks: List[List[int]] = [[] for _ in range(k)]
  for item in t1.seq:
    stacks[coloring.color.get(item, 1) - 1].append(item)
  return StackingOrder(stacks=tuple(tuple(stack) for stack in stacks))
