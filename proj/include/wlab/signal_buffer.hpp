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
#include <vector>

namespace wlab {

using cdouble = std::complex<double>;

/// Complex baseband samples tagged with their sample rate.
struct SignalBuffer {
    std::vector<cdouble> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double energy() const;
    double mean_power() const;
};

/// Throws SignalError unless both tags are identical.
void require_same_rate(const SignalBuffer& a, const SignalBuffer& b);

} // namespace wlab
