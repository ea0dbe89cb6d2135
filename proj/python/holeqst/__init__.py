# Copyright 2026 The holeqst Authors
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

from ._core import (
    ChainSpec,
    DisorderAverage,
    EffectiveTwoLevel,
    FidelitySeries,
    InstanceTooLarge,
    NumericalError,
    TransportDoublet,
    __version__,
    chain_hamiltonian,
    channel_hamiltonian,
    commensurate_angles,
    config_hash,
    detuning_delta,
    disorder_averaged_fidelity,
    fidelity_at,
    fidelity_series,
    rotation_exchange,
    rotation_matrix,
    run_sweep,
    two_spin_closed_form,
    van_vleck_effective,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
