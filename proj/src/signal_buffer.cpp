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

#include "wlab/signal_buffer.hpp"

#include <sstream>

#include "wlab/error.hpp"

namespace wlab {

double SignalBuffer::energy() const {
    double e = 0.0;
    for (const auto& s : samples) e += std::norm(s);
    return e;
}

double SignalBuffer::mean_power() const {
    return samples.empty() ? 0.0 : energy() / static_cast<double>(samples.size());
}

void require_same_rate(const SignalBuffer& a, const SignalBuffer& b) {
    if (a.sample_rate_hz != b.sample_rate_hz) {
        std::ostringstream os;
        os << "sample rate mismatch: " << a.sample_rate_hz << " Hz vs " << b.sample_rate_hz << " Hz";
        throw SignalError(os.str());
    }
}

} // namespace wlab
