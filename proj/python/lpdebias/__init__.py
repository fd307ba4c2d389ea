# Copyright 2026 The lpdebias Authors. All Rights Reserved.
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
# ==============================================================================
"""Debiasing and bias metrics for multilingual word embeddings."""

from ._core import (
    BiasSubspace,
    EmbeddingSpace,
    IoError,
    Lexicon,
    ValidationError,
    __version__,
    align,
    cross_scores,
    debias,
    extrinsic,
    format_vec,
    gender_direction,
    inbias,
    load_corpus,
    load_lexicon,
    load_vec,
    merge,
    normalize,
    parse_vec,
    pca,
    ppa,
    procrustes,
    project_out,
    save_vec,
    split_pairs,
    synthesize_corpus,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
