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

#include "wlab/numerology.hpp"

#include <cmath>
#include <sstream>

#include "wlab/error.hpp"

namespace wlab {

bool is_consistent(const Numerology& n, double sample_rate_hz) {
    if (!(n.scs_hz > 0.0) || n.fft_size == 0 || !(sample_rate_hz > 0.0)) {
        return false;
    }
    // Integer-valued Hz products are exact in double, so equality is exact.
    if (n.scs_hz * static_cast<double>(n.fft_size) != sample_rate_hz) {
        return false;
    }
    return n.cp_samples < n.fft_size && n.symbols_per_tti > 0;
}

SymbolTiming derive_timing(const Numerology& n, double sample_rate_hz) {
    if (!is_consistent(n, sample_rate_hz)) {
        std::ostringstream os;
        os << "numerology scs=" << n.scs_hz << " Hz fft=" << n.fft_size << " cp=" << n.cp_samples
           << " does not run at " << sample_rate_hz << " Hz";
        throw ConfigError(os.str());
    }
    SymbolTiming t;
    t.symbol_duration_s = 1.0 / n.scs_hz;
    t.cp_duration_s = static_cast<double>(n.cp_samples) / sample_rate_hz;
    t.samples_per_symbol = n.samples_per_symbol();
    return t;
}

} // namespace wlab
