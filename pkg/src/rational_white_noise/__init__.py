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
from pydantic import Field

from rational_white_noise.config import CalculusEntryPoint


class GeneralEntryPoint(CalculusEntryPoint):
    degree: int = Field(6, ge=0, description='Default truncation degree.')
    max_var: int = Field(4, ge=0, description='Default number of variables.')
    tolerance: float = Field(
        1e-12, gt=0, description='Default tolerance of identity checks.'
    )

    def load(self):
        from rational_white_noise import multiindex

        return multiindex


configuration = GeneralEntryPoint(
    name='General',
    description="""Multi-indices and the defaults shared by the command line
    interface.""",
)
