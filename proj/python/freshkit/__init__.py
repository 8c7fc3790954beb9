# Copyright 2026 The freshkit Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Freshness-classification evaluation toolkit (C++ core)."""

import json as _json

from ._core import (
    DEFAULT_TAUS,
    FreshkitError,
    apply_mask,
    auroc,
    bootstrap_mean,
    chi2_sf_df1,
    class_weights,
    cluster_near_duplicates,
    confusion,
    cross_entropy,
    energy_score,
    grabcut,
    hamming,
    logsumexp,
    mask_metrics,
    mcnemar,
    msp_score,
    ood_metrics,
    paired_outcomes,
    phash64,
    prf,
    pseudomask,
    rgb_to_lab,
    run_cli,
    softmax,
    stratified_split,
    threshold_sweep,
)

__version__ = "0.1.0"


def demo(seed=42):
    """Runs the synthetic end-to-end pipeline and returns its report as a dict."""
    from ._core import demo_json

    return _json.loads(demo_json(seed))


__all__ = [name for name in dir() if not name.startswith("_")]
