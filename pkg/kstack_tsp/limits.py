# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.

import logging
import os
from typing import Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

ENV_PREFIX = 'KSTACK_TSP_'


class SolverLimits(BaseModel):
  """Caps on the enumerations done by the exact solvers and oracles.

  Every solver that enumerates an exponential space checks its size against
  one of these before starting, and raises `CapExceeded` instead of running
  for hours.
  """
  model_config = ConfigDict(frozen=True, extra='forbid')

  held_karp_max_n: int = Field(
      16, ge=1, description='Largest item count accepted by HeldKarp.')
  pairs_max_n: int = Field(
      7,
      ge=1,
      description='Largest item count accepted by the tour-pair oracle.')
  stack_arrangements_cap: int = Field(
      1_000_000,
      ge=1,
      description=
      'Largest number of ordered stack placements enumerated by the stacks oracle.'
  )
  fixed_tour_assignments_cap: int = Field(
      2**20,
      ge=1,
      description=
      'Largest k**n stack-label assignment count for BestGivenPickup/Delivery.'
  )
  family_exact_max_n: int = Field(
      6,
      ge=1,
      description=
      'Largest n for which the family report computes the exact optimum.')

  @classmethod
  def FromEnv(cls,
              environ: Optional[Mapping[str, str]] = None) -> 'SolverLimits':
    """Defaults, overridden by KSTACK_TSP_<FIELD_NAME> environment variables."""
    if environ is None:
      environ = os.environ
    overrides: Dict[str, int] = {}
    for name in cls.model_fields:
      value = environ.get(ENV_PREFIX + name.upper())
      if value is None or value == '':
        continue
      overrides[name] = int(value)
      logger.debug(f'Limit {name} overridden from environment: {value}')
    return cls(**overrides)

  def _replace(self, **kwargs) -> 'SolverLimits':
    return self.model_validate({**self.model_dump(), **kwargs})


DEFAULT_LIMITS = SolverLimits()
