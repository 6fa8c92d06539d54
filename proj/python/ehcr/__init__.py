# Copyright 2026 The ehcr Authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

"""Energy-harvesting cognitive radio access analysis."""

from ._ehcr import *  # noqa: F401,F403
from ._ehcr import cli

__all__ = [name for name in dir() if not name.startswith("_")]


def preset_profile():
    """Outage profile used by the bundled figure presets."""
    return OutageProfile.from_ratios(0.7, 0.14, 0.6065, 0.182, 0.9782, 0.8)  # noqa: F405
