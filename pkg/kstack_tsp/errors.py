# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.

import json
from typing import AbstractSet, Optional


class KStackError(RuntimeError):
  pass


class ItemSetMismatch(KStackError, ValueError):

  def __init__(self, *, what: str, expected: AbstractSet[int],
               got: AbstractSet[int]):
    missing = sorted(set(expected) - set(got))
    extra = sorted(set(got) - set(expected))
    super().__init__(
        f'{what}: item sets differ, missing=={json.dumps(missing)}, extra=={json.dumps(extra)}'
    )
    self.what = what
    self.missing = missing
    self.extra = extra


class DimensionMismatch(KStackError, ValueError):

  def __init__(self, *, tour_len: int, side: int):
    super().__init__(
        f'Tour of length {tour_len} does not fit a distance matrix of side {side}'
        f' (expected side {tour_len + 1})')
    self.tour_len = tour_len
    self.side = side


class InvalidStackCount(KStackError, ValueError):

  def __init__(self, *, k: int):
    super().__init__(f'Stack count must be >= 1, got k=={k}')
    self.k = k


class TooManyStacks(KStackError, ValueError):

  def __init__(self, *, used: int, k: int):
    super().__init__(
        f'Stacking order uses {used} nonempty stacks, instance allows k=={k}')
    self.used = used
    self.k = k


class CapExceeded(KStackError):

  def __init__(self, *, what: str, size: int, cap: int):
    super().__init__(
        f'{what}: enumeration size {size} exceeds the configured cap {cap}')
    self.what = what
    self.size = size
    self.cap = cap


class UnsupportedParity(KStackError, ValueError):

  def __init__(self, *, family: str, n: int):
    super().__init__(
        f'Family {family}: no explicit solution is known for n=={n}')
    self.family = family
    self.n = n


class NonIntegralAggregate(KStackError, ValueError):

  def __init__(self, *, alpha: str, scale: Optional[int]):
    super().__init__(
        f'Aggregate distance with alpha=={alpha} and scale=={scale} is not integral;'
        ' supply a scale that clears the denominator')
    self.alpha = alpha
    self.scale = scale
