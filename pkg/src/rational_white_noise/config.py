#
# Copyright The rational-white-noise Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
import importlib
from pathlib import Path
from types import ModuleType
from typing import Union

import yaml
from pydantic import BaseModel, ConfigDict, Field

ENTRY_POINT_MODULES = {
    'general': 'rational_white_noise',
    'series': 'rational_white_noise.series',
    'realization': 'rational_white_noise.realization',
    'fueter': 'rational_white_noise.fueter',
    'kernels': 'rational_white_noise.kernels',
    'whitenoise': 'rational_white_noise.whitenoise',
}


class CalculusEntryPoint(BaseModel):
    """
    Configuration of one calculus of the package. Every subpackage defines a subclass
    with its tunables and exposes an instance as its `configuration` attribute.
    """

    model_config = ConfigDict(validate_assignment=True, extra='forbid')

    name: str = Field(description='Human readable name of the calculus.')
    description: str = Field(
        default='', description='Short description of what the calculus provides.'
    )

    def load(self) -> ModuleType:
        """
        Import and return the module implementing the operations of the calculus.
        """
        raise NotImplementedError


class Config:
    """
    Registry of the entry points of all calculi.
    """

    def __init__(self, modules: dict[str, str] = None) -> None:
        self._modules = dict(ENTRY_POINT_MODULES if modules is None else modules)

    def keys(self) -> list[str]:
        return list(self._modules)

    def get_entry_point(self, key: str) -> CalculusEntryPoint:
        """
        Returns the configuration of the calculus registered under `key`.

        Args:
            key (str): One of the registered calculus keys, e.g. 'series'.

        Raises:
            KeyError: If no calculus is registered under `key`.
        """
        if key not in self._modules:
            raise KeyError(f'No calculus is registered under "{key}".')
        module = importlib.import_module(self._modules[key])
        return module.configuration

    def update(self, values: dict[str, dict]) -> None:
        """
        Overrides configuration fields. Unknown calculi or fields are rejected; values
        are validated by the pydantic models of the entry points.
        """
        for key, fields in (values or {}).items():
            entry_point = self.get_entry_point(key)
            for field, value in (fields or {}).items():
                if field not in type(entry_point).model_fields:
                    raise ValueError(
                        f'"{field}" is not a configuration field of "{key}".'
                    )
                setattr(entry_point, field, value)

    def load_yaml(self, path: Union[str, Path]) -> None:
        """
        Reads a YAML file mapping calculus keys to field overrides and applies it.
        """
        with open(path, encoding='utf-8') as file:
            values = yaml.safe_load(file)
        if values is not None and not isinstance(values, dict):
            raise ValueError(f'{path} does not contain a mapping of calculi.')
        self.update(values)


config = Config()
