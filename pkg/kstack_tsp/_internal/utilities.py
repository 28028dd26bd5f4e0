# -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
# The kstack_tsp project requires contributions made to this file be licensed
# under the MIT license or a compatible open source license. See LICENSE.md for
# the license text.

import json
import logging
import sys
import textwrap
from pathlib import Path
from typing import Any, Dict, Literal, Type, TypeVar

import pydantic_core
import yaml
from pydantic import BaseModel

_BaseModelT = TypeVar('_BaseModelT', bound=BaseModel)
logger = logging.getLogger(__name__)


class _CustomDumper(yaml.Dumper):

  def represent_tuple(self, data):
    return self.represent_list(data)


_CustomDumper.add_representer(tuple, _CustomDumper.represent_tuple)


def DumpModelToDict(model: BaseModel, **kwargs) -> Dict[str, Any]:
  if 'by_alias' not in kwargs:
    kwargs['by_alias'] = True
  if 'mode' not in kwargs:
    kwargs['mode'] = 'json'
  return model.model_dump(**kwargs)


def DumpYaml(data: Any) -> str:
  return yaml.dump(data, indent=2, Dumper=_CustomDumper, sort_keys=False)


def DumpModelToYAML(model: BaseModel, **kwargs) -> str:
  return DumpYaml(DumpModelToDict(model, **kwargs))


def CanonicalJSON(data: Any) -> str:
  """Sorted keys, no insignificant whitespace, newline terminated.

  Two equal documents always serialize to the same bytes.
  """
  return json.dumps(data, sort_keys=True, separators=(',', ':')) + '\n'


def ReadText(path: str) -> str:
  """Reads a file, or stdin if path is "-"."""
  if path == '-':
    return sys.stdin.read()
  return Path(path).read_text()


def WriteText(path: str, text: str) -> None:
  """Writes a file, or stdout if path is "-"."""
  if path == '-':
    sys.stdout.write(text)
    return
  Path(path).parent.mkdir(parents=True, exist_ok=True)
  Path(path).write_text(text)


def TryParseAsModel(
    *,
    json_text: str,
    model_type: Type[_BaseModelT],
    strict: Literal['yes', 'no', 'warn'] = 'warn') -> _BaseModelT:
  """Validates the JSON document `json_text` as `model_type`.

  With strict='warn', a document that only validates in lax mode (e.g. a
  string where an int is expected) is accepted but logged.
  """
  try:
    try:
      return model_type.model_validate_json(json_text,
                                             strict=strict in ['yes', 'warn'])
    except pydantic_core.ValidationError as e:
      if strict == 'yes':
        raise
      model = model_type.model_validate_json(json_text, strict=False)
      if strict == 'warn':
        logger.warning(
            f'Parsed {model_type.__name__} only in lax mode:'
            f'\n{textwrap.indent(str(e), prefix="  ")}')
      return model
  except pydantic_core.ValidationError as e:
    msg_summary = f'Error parsing {model_type.__name__}: {e.error_count()} error(s)'
    msg = (f'{msg_summary}'
           f'\nError details\n{textwrap.indent(DumpYaml(e.errors()), "  ")}'
           f'\n{msg_summary}')
    raise ValueError(msg) from e
