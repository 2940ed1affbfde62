# Copyright 2026 The QSBM Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Scrambling Born machine: statevector simulator, trainers and sweep runner."""

from ._core import (
    BornMachine,
    ConfigError,
    OutputError,
    bivariate_gaussian_2d,
    four_mode_mixture_2d,
    kld,
    multimodal_1d,
    nll,
    page_entropy,
    parse_config,
    run_experiment,
    shannon_entropy,
    summarize,
    sweep_table,
    train_rbm,
)

__all__ = [
    "BornMachine",
    "ConfigError",
    "OutputError",
    "bivariate_gaussian_2d",
    "four_mode_mixture_2d",
    "kld",
    "multimodal_1d",
    "nll",
    "page_entropy",
    "parse_config",
    "run_experiment",
    "shannon_entropy",
    "summarize",
    "sweep_table",
    "train_rbm",
]
