// SPDX-License-Identifier: Apache-2.0
//
// waveform-lab: filtered-OFDM link-level waveform simulation
// Copyright (C) 2026 The waveform-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace wlab::fft {

using cdouble = std::complex<double>;

/// Unnormalised forward DFT, X[k] = sum x[n] e^{-j2πkn/N}. `in` and `out`
/// must have equal length; they may alias.
void forward(std::span<const cdouble> in, std::span<cdouble> out);

/// Unnormalised inverse DFT, x[n] = sum X[k] e^{+j2πkn/N}.
void inverse(std::span<const cdouble> in, std::span<cdouble> out);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

} // namespace wlab::fft
