# Copyright 2026 The mvsgd Authors. All Rights Reserved.
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

"""Majority-vote sparse distributed SGD simulator."""

from mvsgd._core import (  # noqa: F401
    ConfigError,
    CorruptStream,
    ProtocolViolation,
    analytic_budget,
    codec_selftest,
    decode_mask,
    encode_mask,
    majority_vote,
    quantize_roundtrip,
    run_experiment,
    table,
    top_k,
)
