# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.

import itertools
import time
import unittest
from typing import List, Optional

import numpy as np

from .errors import DimensionMismatch, ItemSetMismatch, TooManyStacks
from .model import (CheckTripleFeasible, Instance, SimulateTriple,
                    StackingOrder, TourCost)
from .solve import HeldKarp
from .stackdp import (CountStates, OptimalDeliveryTour, OptimalPickupTour,
                      OptimalToursGivenStacks)

CYCLIC_UNIT = [[1 if v == (u + 1) % 4 else 5 for v in range(4)]
               for u in range(4)]
REVERSE_CYCLIC_UNIT = [[1 if u == (v + 1) % 4 else 5 for v in range(4)]
                       for u in range(4)]
INSTANCE_A = Instance.FromArrays(k=2, d1=CYCLIC_UNIT, d2=REVERSE_CYCLIC_UNIT)


def _RandomStacking(rng: np.random.Generator, n: int, k: int) -> StackingOrder:
  labels = rng.integers(0, k, size=n)
  stacks: List[List[int]] = [[] for _ in range(k)]
  for item in rng.permutation(np.arange(1, n + 1)):
    stacks[labels[item - 1]].append(int(item))
  return StackingOrder(stacks=tuple(tuple(stack) for stack in stacks))


def _BrutePickup(stacking: StackingOrder, d: np.ndarray) -> int:
  """Cheapest pickup tour among permutations that respect every stack."""
  rows = d.tolist()
  pairs = [(a, b)
           for stack in stacking.stacks
           for a, b in zip(stack[:-1], stack[1:])]
  best: Optional[int] = None
  for seq in itertools.permutations(range(1, stacking.n + 1)):
    position = {item: index for index, item in enumerate(seq)}
    if any(position[a] > position[b] for a, b in pairs):
      continue
    full = (0, ) + seq + (0, )
    cost = sum(rows[u][v] for u, v in zip(full[:-1], full[1:]))
    if best is None or cost < best:
      best = cost
  assert best is not None
  return best


class TestOptimalPickupTour(unittest.TestCase):

  def test_Examples(self):
    tour, cost = OptimalPickupTour(stacking=StackingOrder(stacks=((1, 2, 3), )),
                                   d1=CYCLIC_UNIT)
    self.assertEqual((tour.seq, cost), ((1, 2, 3), 4))

    tour, cost = OptimalPickupTour(stacking=StackingOrder(stacks=((1, ),
                                                                  (2, 3))),
                                   d1=CYCLIC_UNIT)
    self.assertEqual((tour.seq, cost), ((1, 2, 3), 4))

    d = [[10, 1, 10], [10, 10, 1], [1, 10, 10]]
    tour, cost = OptimalPickupTour(stacking=StackingOrder(stacks=((1, ), (2, ))),
                                   d1=d)
    self.assertEqual((tour.seq, cost), ((1, 2), 3))

  def test_SingleItem(self):
    tour, cost = OptimalPickupTour(stacking=StackingOrder(stacks=((), (1, ))),
                                   d1=[[0, 4], [6, 0]])
    self.assertEqual((tour.seq, cost), ((1, ), 10))

  def test_DimensionMismatch(self):
    with self.assertRaises(DimensionMismatch):
      OptimalPickupTour(stacking=StackingOrder(stacks=((1, 2), )),
                        d1=CYCLIC_UNIT)

  def test_MatchesLinearExtensionEnumeration(self):
    rng = np.random.default_rng(99)
    for trial in range(100):
      n = 1 + trial % 8
      k = 1 + (trial // 8) % 3
      stacking = _RandomStacking(rng, n, k)
      d = rng.integers(0, 50, size=(n + 1, n + 1))
      tour, cost = OptimalPickupTour(stacking=stacking, d1=d)
      brute_cost = _BrutePickup(stacking, d)
      with self.subTest(trial=trial, n=n, k=k):
        self.assertEqual(cost, brute_cost)
        self.assertEqual(TourCost(tour=tour, d=d), cost)
        # Both DP tours together form a feasible triple.
        delivery, _ = OptimalDeliveryTour(stacking=stacking, d2=d)
        self.assertTrue(
            CheckTripleFeasible(t1=tour, t2=delivery, stacking=stacking))
        self.assertTrue(SimulateTriple(t1=tour, t2=delivery, stacking=stacking))

  def test_FourteenItemsTwoStacks(self):
    rng = np.random.default_rng(14)
    stacking = _RandomStacking(rng, 14, 2)
    d = rng.integers(1, 101, size=(15, 15))
    start = time.perf_counter()
    tour, cost = OptimalPickupTour(stacking=stacking, d1=d)
    elapsed = time.perf_counter() - start
    self.assertEqual(TourCost(tour=tour, d=d), cost)
    self.assertLess(elapsed, 1.0)

  def test_StackPermutationInvariance(self):
    rng = np.random.default_rng(5)
    for trial in range(30):
      n = int(rng.integers(2, 8))
      stacking = _RandomStacking(rng, n, 3)
      # Small range, so ties are common.
      d = rng.integers(0, 3, size=(n + 1, n + 1))
      expected = OptimalPickupTour(stacking=stacking, d1=d)
      for order in itertools.permutations(range(3)):
        permuted = StackingOrder(stacks=tuple(stacking.stacks[i] for i in order))
        with self.subTest(trial=trial, order=order):
          self.assertEqual(OptimalPickupTour(stacking=permuted, d1=d), expected)

  def test_StateBound(self):
    rng = np.random.default_rng(8)
    for trial in range(20):
      n = int(rng.integers(1, 10))
      k = int(rng.integers(1, 4))
      stacking = _RandomStacking(rng, n, k)
      with self.subTest(trial=trial):
        self.assertLessEqual(CountStates(stacking), (n + 1)**k - 1)


class TestOptimalDeliveryTour(unittest.TestCase):

  def test_Examples(self):
    tour, _ = OptimalDeliveryTour(stacking=StackingOrder(stacks=((1, 2, 3), )),
                                  d2=CYCLIC_UNIT)
    self.assertEqual(tour.seq, (3, 2, 1))

    tour, cost = OptimalDeliveryTour(stacking=StackingOrder(stacks=((1, ),
                                                                    (2, 3))),
                                     d2=REVERSE_CYCLIC_UNIT)
    self.assertEqual((tour.seq, cost), ((3, 2, 1), 4))

  def test_SingletonStacksIsPlainTSP(self):
    rng = np.random.default_rng(21)
    for trial in range(10):
      n = int(rng.integers(1, 7))
      d = rng.integers(0, 40, size=(n + 1, n + 1))
      stacking = StackingOrder(stacks=tuple((item, ) for item in range(1, n + 1)))
      _, cost = OptimalDeliveryTour(stacking=stacking, d2=d)
      _, optimum = HeldKarp(d=d)
      with self.subTest(trial=trial):
        self.assertEqual(cost, optimum)


class TestOptimalToursGivenStacks(unittest.TestCase):

  def test_InstanceA(self):
    for stacks in [((1, 2, 3), ()), ((1, ), (2, 3))]:
      with self.subTest(stacks=stacks):
        solution = OptimalToursGivenStacks(
            instance=INSTANCE_A, stacking=StackingOrder(stacks=stacks))
        self.assertEqual(solution.value, 8)

  def test_Errors(self):
    with self.assertRaises(TooManyStacks):
      OptimalToursGivenStacks(instance=INSTANCE_A,
                              stacking=StackingOrder(stacks=((1, ), (2, ),
                                                             (3, ))))
    with self.assertRaises(ItemSetMismatch):
      OptimalToursGivenStacks(instance=INSTANCE_A,
                              stacking=StackingOrder(stacks=((1, 2), )))


if __name__ == '__main__':
  unittest.main()
