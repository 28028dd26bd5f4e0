# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.

import itertools
import unittest
from pathlib import Path
from typing import List, Set, Tuple

import numpy as np
import pydantic

from .errors import DimensionMismatch, ItemSetMismatch
from .model import (CheckTripleFeasible, DumpInstance, DumpSolution, Instance,
                    LoadInstance, LoadSolutionDocument, MakeSolution,
                    SimulateTriple, Solution, StackingOrder, Tour, TourCost)

CYCLIC_UNIT = [[1 if v == (u + 1) % 4 else 5 for v in range(4)]
               for u in range(4)]


def _RandomStacking(rng: np.random.Generator, n: int, k: int) -> StackingOrder:
  labels = rng.integers(0, k, size=n)
  order = rng.permutation(np.arange(1, n + 1))
  stacks: List[List[int]] = [[] for _ in range(k)]
  for item in order:
    stacks[labels[item - 1]].append(int(item))
  return StackingOrder(stacks=tuple(tuple(stack) for stack in stacks))


def _RandomTour(rng: np.random.Generator, n: int) -> Tour:
  return Tour(seq=tuple(int(x) for x in rng.permutation(np.arange(1, n + 1))))


def _AllStackings(n: int, k: int) -> List[StackingOrder]:
  """Every stacking order of n items on k stacks, empty stacks included."""
  stackings: Set[Tuple[Tuple[int, ...], ...]] = set()
  for order in itertools.permutations(range(1, n + 1)):
    for cuts in itertools.combinations_with_replacement(range(n + 1), k - 1):
      bounds = (0, ) + cuts + (n, )
      stackings.add(
          tuple(order[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])))
  return [StackingOrder(stacks=stacks) for stacks in sorted(stackings)]


class TestTour(unittest.TestCase):

  def test_Validation(self):
    _ = Tour(seq=(2, 1, 3))
    bad: List[Tuple[int, ...]] = [(), (1, 1, 3), (0, 1, 2), (1, 2, 4)]
    for seq in bad:
      with self.subTest(seq=seq):
        with self.assertRaises(pydantic.ValidationError):
          Tour(seq=seq)

  def test_RanksAndArcs(self):
    tour = Tour(seq=(3, 1, 2))
    self.assertEqual(tour.Ranks(), (0, 2, 3, 1))
    self.assertEqual(tour.Arcs(), [(0, 3), (3, 1), (1, 2), (2, 0)])
    self.assertEqual(tour.Reversed().seq, (2, 1, 3))


class TestStackingOrder(unittest.TestCase):

  def test_Validation(self):
    _ = StackingOrder(stacks=((1, 3), (), (2, )))
    bad = [(), ((), ()), ((1, 2), (2, 3)), ((1, 3), )]
    for stacks in bad:
      with self.subTest(stacks=stacks):
        with self.assertRaises(pydantic.ValidationError):
          StackingOrder(stacks=stacks)

  def test_Helpers(self):
    stacking = StackingOrder(stacks=((1, 3), (), (2, )))
    self.assertEqual(stacking.n, 3)
    self.assertEqual(stacking.k, 3)
    self.assertEqual(stacking.NonEmpty(), ((1, 3), (2, )))
    self.assertEqual(stacking.Reversed().stacks, ((3, 1), (), (2, )))
    self.assertEqual(stacking.StackOf()[3], (0, 1))


class TestInstance(unittest.TestCase):

  def test_Validation(self):
    with self.assertRaises(pydantic.ValidationError):
      Instance(n=3, k=2, d1=((0, 1), (1, 0)), d2=((0, 1), (1, 0)))
    negative = [row[:] for row in CYCLIC_UNIT]
    negative[1][2] = -1
    with self.assertRaises(pydantic.ValidationError):
      Instance.FromArrays(k=1, d1=negative, d2=CYCLIC_UNIT)
    with self.assertRaises(pydantic.ValidationError):
      Instance.FromArrays(k=0, d1=CYCLIC_UNIT, d2=CYCLIC_UNIT)

  def test_WithKValidates(self):
    instance = Instance.FromArrays(k=2, d1=CYCLIC_UNIT, d2=CYCLIC_UNIT)
    self.assertEqual(instance.WithK(3).k, 3)
    self.assertEqual(instance.WithK(3).d1, instance.d1)
    for k in (0, -1):
      with self.subTest(k=k):
        with self.assertRaises(pydantic.ValidationError):
          instance.WithK(k)

  def test_ScaledCosts(self):
    instance = Instance.FromArrays(k=1, d1=CYCLIC_UNIT, d2=CYCLIC_UNIT)
    scaled = instance.Scaled(7)
    for seq in itertools.permutations((1, 2, 3)):
      tour = Tour(seq=seq)
      with self.subTest(seq=seq):
        self.assertEqual(TourCost(tour=tour, d=scaled.d1),
                         7 * TourCost(tour=tour, d=instance.d1))


class TestTourCost(unittest.TestCase):

  def test_TourCost(self):
    self.assertEqual(TourCost(tour=Tour(seq=(1, 2, 3)), d=CYCLIC_UNIT), 4)
    self.assertEqual(TourCost(tour=Tour(seq=(3, 2, 1)), d=CYCLIC_UNIT), 20)
    d = [[0, 7], [11, 0]]
    self.assertEqual(TourCost(tour=Tour(seq=(1, )), d=d), 18)
    self.assertEqual(TourCost(tour=Tour(seq=(1, 2, 3)), d=np.array(CYCLIC_UNIT)),
                     4)

  def test_DimensionMismatch(self):
    with self.assertRaises(DimensionMismatch):
      TourCost(tour=Tour(seq=(1, 2)), d=CYCLIC_UNIT)


class TestFeasibility(unittest.TestCase):

  def test_Examples(self):
    cases = [
        ((1, 2, 3), (3, 2, 1), ((1, 2, 3), ), True, True),
        ((1, 2, 3), (1, 2, 3), ((1, 2, 3), ), False, False),
        ((1, 2, 3), (2, 3, 1), ((1, 3), (2, )), True, True),
        ((1, 2, 3), (2, 3, 1), ((1, ), (2, 3)), False, False),
        # Replays cleanly: push 2, 1, 3 then pop 3, 1, 2.
        ((2, 1, 3), (3, 1, 2), ((2, 1, 3), ), True, True),
    ]
    for t1, t2, stacks, check, replay in cases:
      parts = dict(t1=Tour(seq=t1),
                   t2=Tour(seq=t2),
                   stacking=StackingOrder(stacks=stacks))
      with self.subTest(t1=t1, t2=t2, stacks=stacks):
        self.assertEqual(CheckTripleFeasible(**parts), check)
        self.assertEqual(SimulateTriple(**parts), replay)

  def test_ItemSetMismatch(self):
    with self.assertRaises(ItemSetMismatch):
      CheckTripleFeasible(t1=Tour(seq=(1, 2, 3)),
                          t2=Tour(seq=(1, 2)),
                          stacking=StackingOrder(stacks=((1, 2, 3), )))
    with self.assertRaises(ItemSetMismatch):
      SimulateTriple(t1=Tour(seq=(1, 2)),
                     t2=Tour(seq=(2, 1)),
                     stacking=StackingOrder(stacks=((1, 2, 3), )))

  def test_CheckAgreesWithReplay(self):
    rng = np.random.default_rng(20240515)
    for trial in range(400):
      n = int(rng.integers(1, 8))
      k = int(rng.integers(1, 4))
      t1 = _RandomTour(rng, n)
      t2 = _RandomTour(rng, n)
      stacking = _RandomStacking(rng, n, k)
      with self.subTest(trial=trial):
        self.assertEqual(
            CheckTripleFeasible(t1=t1, t2=t2, stacking=stacking),
            SimulateTriple(t1=t1, t2=t2, stacking=stacking))

  def test_CheckAgreesWithReplayExhaustively(self):
    for n in range(1, 6):
      tours = [Tour(seq=seq) for seq in itertools.permutations(range(1, n + 1))]
      # Both checks only compare ranks, so at n = 5 relabeling the items
      # reduces every triple to one whose pickup tour is the identity.
      pickups = tours if n <= 4 else tours[:1]
      for k in range(1, 4):
        stackings = _AllStackings(n, k)
        with self.subTest(n=n, k=k):
          for t1, t2, stacking in itertools.product(pickups, tours, stackings):
            check = CheckTripleFeasible(t1=t1, t2=t2, stacking=stacking)
            replay = SimulateTriple(t1=t1, t2=t2, stacking=stacking)
            if check != replay:
              self.fail(f'{t1.seq} {t2.seq} {stacking.stacks}: '
                        f'check={check} replay={replay}')

  def test_SingleStackIsPureLIFO(self):
    n = 4
    for seq1 in itertools.permutations(range(1, n + 1)):
      t1 = Tour(seq=seq1)
      stacking = StackingOrder(stacks=(seq1, ))
      for seq2 in itertools.permutations(range(1, n + 1)):
        feasible = CheckTripleFeasible(t1=t1,
                                       t2=Tour(seq=seq2),
                                       stacking=stacking)
        self.assertEqual(feasible, seq2 == tuple(reversed(seq1)))

  def test_RelabelingInvariance(self):
    rng = np.random.default_rng(7)
    for trial in range(100):
      n = 5
      t1 = _RandomTour(rng, n)
      t2 = _RandomTour(rng, n)
      stacking = _RandomStacking(rng, n, 2)
      relabel = [0] + [int(x) for x in rng.permutation(np.arange(1, n + 1))]
      moved = dict(
          t1=Tour(seq=tuple(relabel[x] for x in t1.seq)),
          t2=Tour(seq=tuple(relabel[x] for x in t2.seq)),
          stacking=StackingOrder(stacks=tuple(
              tuple(relabel[x] for x in stack) for stack in stacking.stacks)))
      with self.subTest(trial=trial):
        self.assertEqual(CheckTripleFeasible(t1=t1, t2=t2, stacking=stacking),
                         CheckTripleFeasible(**moved))


class TestSolution(unittest.TestCase):

  def test_RejectsInfeasible(self):
    with self.assertRaises(pydantic.ValidationError):
      Solution(t1=Tour(seq=(1, 2)),
               t2=Tour(seq=(1, 2)),
               stacking=StackingOrder(stacks=((1, 2), )),
               value=0)

  def test_Fixtures(self):
    text = Path('test_data/instance_a.json').read_text()
    instance = LoadInstance(text)
    self.assertEqual((instance.n, instance.k), (3, 2))
    self.assertEqual(DumpInstance(instance), text)

    solution_text = Path('test_data/solution_a.json').read_text()
    document = LoadSolutionDocument(solution_text)
    t1, t2, stacking = document.Parts()
    solution = MakeSolution(instance=instance, t1=t1, t2=t2, stacking=stacking)
    self.assertEqual(solution.value, 8)
    self.assertEqual(DumpSolution(solution), solution_text)

  def test_LoadRejectsMalformed(self):
    with self.assertRaises(ValueError):
      LoadInstance('{"n": 1, "k": 1, "d1": [[0, 1], [1, 0]]}')
    with self.assertRaises(ValueError):
      LoadInstance('not json')


if __name__ == '__main__':
  unittest.main()
