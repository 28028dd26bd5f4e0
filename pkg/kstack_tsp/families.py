# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.
"""Instance generators and the adversarial families I, J and H.

On I (asymmetric) and J (symmetric) the TWS heuristic, with the pickup tour
fixed at (1, ..., n), is off by a factor that grows with n. On H the TWD
heuristic is. Each family comes with an explicit good solution, and
`VerifyFamilyClaims` recomputes every checkable number about them.

Every "1" of the closed forms is `unit`, every epsilon is `eps`, so all
arithmetic stays in integers.
"""

import csv
import io
import logging
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import UnsupportedParity
from .limits import DEFAULT_LIMITS, SolverLimits
from .model import (CheckTripleFeasible, Instance, MakeSolution, SimulateTriple,
                    Solution, StackingOrder, Tour, TourCost)
from .solve import AggregateDistance, ExactOracleStacks, HeldKarp, TWD, TWS

logger = logging.getLogger(__name__)

FamilyName = Literal['I', 'J', 'H']
ClaimStatus = Literal['OK', 'MISMATCH', 'SKIPPED', 'INFO']
MIN_N: Dict[str, int] = {'I': 3, 'J': 6, 'H': 3}
CSV_COLUMNS = ('family', 'n', 'claim_id', 'paper_value', 'computed_value',
               'status')


class FamilyParams(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  family: FamilyName
  n: int
  unit: int = Field(1000, ge=1, description='Integer standing for distance 1.')
  eps: int = Field(1,
                   ge=0,
                   description='Integer standing for epsilon; unused by H.')

  @model_validator(mode='after')
  def _CheckRanges(self) -> 'FamilyParams':
    if self.n < MIN_N[self.family]:
      raise ValueError(
          f'family {self.family} needs n >= {MIN_N[self.family]}, got {self.n}')
    if self.eps >= self.unit:
      raise ValueError(f'eps ({self.eps}) must be smaller than unit ({self.unit})')
    return self


################################################################################
def _Cyclic(n: int) -> Tuple[np.ndarray, ...]:
  u, v = np.indices((n + 1, n + 1))
  successor = v == (u + 1) % (n + 1)
  neighbor = successor | (u == (v + 1) % (n + 1))
  return u, v, successor, neighbor


def GenFamily(params: FamilyParams) -> Instance:
  """Dense matrices of the family; indices wrap modulo n + 1 for the +-1
  neighbors, so (n, 0) is a neighbor arc."""
  n, unit, eps = params.n, params.unit, params.eps
  u, v, successor, neighbor = _Cyclic(n)
  if params.family == 'I':
    d1 = np.where(successor, unit, unit + eps)
    d2 = np.where(successor, unit, n * unit)
  elif params.family == 'J':
    d1 = np.where(neighbor, unit, unit + eps)
    d2 = np.where((u + v == n) | (u + v == n + 1), unit, n * unit)
  else:
    second = np.abs(u - v) == 2
    mirrored = (u + v == n + 1) | (u + v == n + 3)
    conditions = [neighbor, second, mirrored]
    d1 = np.select(conditions, [unit, unit, (n + 1) * unit], (n + 1) * unit)
    d2 = np.select(conditions, [n * unit, (n + 1) * unit, unit],
                   (n + 1) * unit)
  return Instance.FromArrays(k=2, d1=d1, d2=d2)


def GenRandomInstance(*,
                      n: int,
                      k: int,
                      lo: int = 1,
                      hi: int = 100,
                      seed: int = 0,
                      symmetric: bool = False) -> Instance:
  """Uniform integer distances in [lo, hi], the two cities independent."""
  if not 0 <= lo <= hi:
    raise ValueError(f'need 0 <= lo <= hi, got lo={lo}, hi={hi}')
  rng = np.random.default_rng(seed)
  matrices = []
  for _ in range(2):
    d = rng.integers(lo, hi + 1, size=(n + 1, n + 1), dtype=np.int64)
    if symmetric:
      d = np.triu(d, 1) + np.triu(d, 1).T
    np.fill_diagonal(d, 0)
    matrices.append(d)
  return Instance.FromArrays(k=k, d1=matrices[0], d2=matrices[1])


################################################################################
def _HDeliveryListing(n: int) -> List[int]:
  # Consecutive items alternately sum to n + 1 and n + 3: 1, n, 3, n - 2, ...
  seq = [1]
  while len(seq) < n:
    target = n + 1 if len(seq) % 2 == 1 else n + 3
    seq.append(target - seq[-1])
  return seq


def ListedDelivery(params: FamilyParams) -> Optional[Tour]:
  """The delivery tour exactly as the J and H constructions print it.

  Both listings start with an item at the bottom of a stack, so they are
  infeasible in the printed direction; the instances are symmetric, and
  `ReferenceSolution` delivers along the reversed listing at the same cost.
  """
  n = params.n
  if params.family == 'J' and n % 2 == 0:
    return Tour(seq=tuple(x for i in range(1, n // 2 + 1)
                          for x in (n + 1 - i, i)))
  if params.family == 'H' and n % 2 == 0:
    return Tour(seq=tuple(_HDeliveryListing(n)))
  return None


def ReferenceSolution(params: FamilyParams) -> Solution:
  """The explicit good solution of the family, priced on `GenFamily`."""
  n = params.n
  instance = GenFamily(params)
  if params.family == 'I':
    # Odd and even items in decreasing order on separate stacks.
    stacks = (tuple(range(n, 0, -2)), tuple(range(n - 1, 0, -2)))
    pickup: List[int] = []
    i = n - 1
    while i >= 1:
      pickup += [i, i + 1]
      i -= 2
    if n % 2 == 1:
      pickup.append(1)
    t1 = Tour(seq=tuple(pickup))
    t2 = Tour(seq=tuple(range(1, n + 1)))
  elif n % 2 == 1:
    raise UnsupportedParity(family=params.family, n=n)
  elif params.family == 'J':
    stacks = (tuple(range(1, n // 2 + 1)), tuple(range(n, n // 2, -1)))
    t1 = Tour(seq=stacks[0] + stacks[1])
    listed = ListedDelivery(params)
    assert listed is not None
    t2 = listed.Reversed()
  else:
    stacks = (tuple(range(1, n, 2)), tuple(range(n, 0, -2)))
    t1 = Tour(seq=stacks[0] + stacks[1])
    listed = ListedDelivery(params)
    assert listed is not None
    t2 = listed.Reversed()
  return MakeSolution(instance=instance,
                      t1=t1,
                      t2=t2,
                      stacking=StackingOrder(stacks=stacks))


################################################################################
class ClaimRow(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  family: FamilyName
  n: int
  claim_id: str
  claimed_value: str
  computed_value: str
  status: ClaimStatus


class FamilyReport(BaseModel):
  model_config = ConfigDict(frozen=True, extra='forbid')

  rows: Tuple[ClaimRow, ...]

  def HasMismatch(self) -> bool:
    return any(row.status == 'MISMATCH' for row in self.rows)

  def Find(self, *, n: int, claim_id: str) -> ClaimRow:
    for row in self.rows:
      if row.n == n and row.claim_id == claim_id:
        return row
    raise KeyError(f'no claim {claim_id!r} for n={n}')

  def ToCSV(self) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for row in self.rows:
      writer.writerow([
          row.family, row.n, row.claim_id, row.claimed_value,
          row.computed_value, row.status
      ])
    return buffer.getvalue()


def _Ratio(a: int, b: int) -> str:
  return f'{float(Fraction(a, b)):.6f}'


class _Claims:
  """Collects the rows of one (family, n)."""

  def __init__(self, family: FamilyName, n: int):
    self._family = family
    self._n = n
    self.rows: List[ClaimRow] = []

  def Add(self, claim_id: str, claimed_value: object, computed_value: object,
          status: ClaimStatus) -> None:
    if status == 'MISMATCH':
      logger.warning(f'{self._family}_{self._n} {claim_id}:'
                     f' claimed {claimed_value} vs computed {computed_value}')
    self.rows.append(
        ClaimRow(family=self._family,
                 n=self._n,
                 claim_id=claim_id,
                 claimed_value=str(claimed_value),
                 computed_value=str(computed_value),
                 status=status))

  def Equal(self, claim_id: str, claimed_value: int, computed_value: int) -> None:
    self.Add(claim_id, claimed_value, computed_value,
             'OK' if claimed_value == computed_value else 'MISMATCH')

  def AtLeast(self, claim_id: str, bound: Fraction, computed_value: int) -> None:
    self.Add(claim_id, f'>= {bound}', computed_value,
             'OK' if computed_value >= bound else 'MISMATCH')


def _ExactOptimum(instance: Instance, claims: _Claims,
                  claimed_value: Optional[int],
                  limits: SolverLimits) -> Tuple[Optional[int], bool]:
  """Exact optimum when small enough, else the given feasible value.

  Without a feasible value from an explicit solution there is nothing to
  stand in for the optimum, and None is returned.
  """
  claimed = 'n/a' if claimed_value is None else claimed_value
  if instance.n > limits.family_exact_max_n:
    claims.Add('exact_opt', claimed, f'n > {limits.family_exact_max_n}',
               'SKIPPED')
    return claimed_value, False
  opt = ExactOracleStacks(instance=instance, limits=limits).value
  if claimed_value is None:
    claims.Add('exact_opt', claimed, opt, 'INFO')
  else:
    claims.Equal('exact_opt', claimed_value, opt)
  return opt, True


def _RatioClaim(claims: _Claims, claim_id: str, heuristic: int,
                opt: Optional[int]) -> Optional[Fraction]:
  if opt is None:
    claims.Add(claim_id, '-> +inf', 'no optimum or upper bound', 'SKIPPED')
    return None
  claims.Add(claim_id, '-> +inf', _Ratio(heuristic, opt), 'INFO')
  return Fraction(heuristic, opt)


def _VerifyI(params: FamilyParams, claims: _Claims, fix_tour: bool,
             limits: SolverLimits) -> Optional[Fraction]:
  n, unit, eps = params.n, params.unit, params.eps
  instance = GenFamily(params)
  _, opt1 = HeldKarp(d=instance.d1, limits=limits)
  _, opt2 = HeldKarp(d=instance.d2, limits=limits)
  _, wor2 = HeldKarp(d=instance.d2, mode='max', limits=limits)
  claims.Equal('hk_min_d1', (n + 1) * unit, opt1)
  claims.Equal('hk_min_d2', (n + 1) * unit, opt2)
  claims.Equal('opt_d1_plus_wor_d2', (n + 1)**2 * unit, opt1 + wor2)

  solution = ReferenceSolution(params)
  claims.Equal('reference_solution_feasible', 1, int(_BothChecks(solution)))
  closed_form = 2 * (n + 1) * unit + ((n + 1) // 2 + 1) * eps
  claims.Equal('reference_solution_value', closed_form, solution.value)

  fixed = Tour(seq=tuple(range(1, n + 1))) if fix_tour else None
  tws = TWS(instance=instance, fixed_tour=fixed, limits=limits).value
  claims.AtLeast('tws_lower_bound',
                 Fraction((n + 1) * unit + n * (n + 3) * unit // 2), tws)
  claims.Add('tws_over_tsp_sum', '-> 1/2', _Ratio(tws, opt1 + wor2), 'INFO')

  opt, _ = _ExactOptimum(instance, claims, solution.value, limits)
  return _RatioClaim(claims, 'ratio_tws_over_opt', tws, opt)


def _VerifyJ(params: FamilyParams, claims: _Claims, fix_tour: bool,
             limits: SolverLimits) -> Optional[Fraction]:
  n, unit, eps = params.n, params.unit, params.eps
  instance = GenFamily(params)
  _, opt1 = HeldKarp(d=instance.d1, limits=limits)
  _, opt2 = HeldKarp(d=instance.d2, limits=limits)
  claims.Equal('hk_min_d1', (n + 1) * unit, opt1)
  claims.Equal('hk_min_d2', 2 * n * unit, opt2)

  fixed = Tour(seq=tuple(range(1, n + 1))) if fix_tour else None
  tws = TWS(instance=instance, fixed_tour=fixed, limits=limits).value
  sharp = Fraction((n + 1) * 4 + (n - 4) * (3 + n) + 20, 4) * unit
  claims.AtLeast('tws_lower_bound_sharp', sharp, tws)
  claims.AtLeast('tws_lower_bound', Fraction(n * n, 4) * unit, tws)

  if n % 2 == 1:
    claims.Add('reference_solution_value', '3n+2eps-1', 'odd n', 'SKIPPED')
    opt, _ = _ExactOptimum(instance, claims, None, limits)
  else:
    _CheckListing(params, instance, claims)
    solution = ReferenceSolution(params)
    claims.Equal('reference_solution_feasible', 1, int(_BothChecks(solution)))
    claims.Equal('reference_solution_value', (3 * n - 1) * unit + 2 * eps,
                 solution.value)
    opt, _ = _ExactOptimum(instance, claims, solution.value, limits)
  return _RatioClaim(claims, 'ratio_tws_over_opt', tws, opt)


def _VerifyH(params: FamilyParams, claims: _Claims,
             limits: SolverLimits) -> Optional[Fraction]:
  n, unit = params.n, params.unit
  instance = GenFamily(params)
  _, opt1 = HeldKarp(d=instance.d1, limits=limits)
  _, opt2 = HeldKarp(d=instance.d2, limits=limits)
  claims.Equal('hk_min_d1', (n + 1) * unit, opt1)
  claimed_opt2 = ((n - 3) + 5 * (n + 1) if n % 2 == 0 else (n - 4) + 6 *
                (n + 1)) * unit
  claims.Equal('hk_min_d2', claimed_opt2, opt2)

  aggregate = AggregateDistance(instance=instance)
  identity = Tour(seq=tuple(range(1, n + 1)))
  claims.Equal('aggregate_identity_value', (n + 1)**2 * unit,
               TourCost(tour=identity, d=aggregate))
  _, aggregate_opt = HeldKarp(d=aggregate, limits=limits)
  claims.Equal('aggregate_optimum', (n + 1)**2 * unit, aggregate_opt)
  twd = TWD(instance=instance, limits=limits).value

  if n % 2 == 1:
    claims.Add('reference_solution_value', '{7n+2,8n+2}', 'odd n', 'SKIPPED')
    opt, _ = _ExactOptimum(instance, claims, None, limits)
  else:
    _CheckListing(params, instance, claims)
    solution = ReferenceSolution(params)
    claims.Equal('reference_solution_feasible', 1, int(_BothChecks(solution)))
    candidates = sorted({(7 * n + 2) * unit, (8 * n + 2) * unit})
    claims.Add(
        'reference_solution_value', '{7n+2,8n+2}', solution.value,
        'OK' if solution.value in candidates else 'MISMATCH')
    opt, exact = _ExactOptimum(instance, claims, solution.value, limits)
    if exact:
      verdict = {(7 * n + 2) * unit: '7n+2',
                 (7 * n + 3) * unit: '7n+3',
                 (8 * n + 2) * unit: '8n+2'}.get(opt, 'none')
      claims.Add('exact_opt_form', '{7n+2,7n+3,8n+2}', f'{opt} ({verdict})',
                 'OK' if verdict != 'none' else 'MISMATCH')
  return _RatioClaim(claims, 'ratio_twd_over_opt', twd, opt)


def _BothChecks(solution: Solution) -> bool:
  parts = dict(t1=solution.t1, t2=solution.t2, stacking=solution.stacking)
  return CheckTripleFeasible(**parts) and SimulateTriple(**parts)


def _CheckListing(params: FamilyParams, instance: Instance,
                  claims: _Claims) -> None:
  listed = ListedDelivery(params)
  solution = ReferenceSolution(params)
  assert listed is not None
  feasible = CheckTripleFeasible(t1=solution.t1,
                                 t2=listed,
                                 stacking=solution.stacking)
  claims.Equal('listed_delivery_feasible', 1, int(feasible))
  claims.Equal('listed_delivery_cost', TourCost(tour=listed, d=instance.d2),
               TourCost(tour=solution.t2, d=instance.d2))


def VerifyFamilyClaims(*,
                       family: FamilyName,
                       ns: Sequence[int],
                       unit: int = 1000,
                       eps: int = 1,
                       fix_tour: bool = True,
                       limits: SolverLimits = DEFAULT_LIMITS) -> FamilyReport:
  """Recomputes every checkable claim about a family over several n.

  Disagreements are reported with both numbers, never reconciled. Where the
  exact optimum is out of reach the family's explicit solution stands in for
  it, which can only underestimate the heuristic's ratio. An n with neither
  (odd n of J and H past the exact limit) is left out of the ratio
  trajectory.
  """
  rows: List[ClaimRow] = []
  ratios: List[Tuple[int, Fraction]] = []
  for n in sorted(ns):
    params = FamilyParams(family=family, n=n, unit=unit, eps=eps)
    claims = _Claims(family, n)
    if family == 'I':
      ratio = _VerifyI(params, claims, fix_tour, limits)
    elif family == 'J':
      ratio = _VerifyJ(params, claims, fix_tour, limits)
    else:
      ratio = _VerifyH(params, claims, limits)
    if ratio is not None:
      ratios.append((n, ratio))
    rows.extend(claims.rows)
    logger.info(f'{family}_{n}: {len(claims.rows)} claims checked')

  skipped = sorted(set(ns) - {n for n, _ in ratios})
  if skipped:
    logger.info(f'{family}: no optimum or upper bound for n in {skipped},'
                ' left out of the ratio trajectory')
  if len(ratios) >= 2:
    increasing = all(a[1] < b[1] for a, b in zip(ratios[:-1], ratios[1:]))
    last = _Claims(family, ratios[-1][0])
    last.Add('ratio_strictly_increasing', 'True', str(increasing),
             'OK' if increasing else 'MISMATCH')
    rows.extend(last.rows)
  return FamilyReport(rows=tuple(rows))
