# Copyright (c) 2026 The tsot Authors. All Rights Reserved.
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

"""Joint serialized-output streams for streaming transcription and translation."""

from ._tsot import *  # noqa: F401,F403
from ._tsot import inter_gamma as _inter_gamma


def inter_gamma(utterance, gamma):
    """Count-ratio interleaving; gamma may be a number or a string like "1/3"."""
    return _inter_gamma(utterance, gamma if isinstance(gamma, str) else repr(gamma))
