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

#include <cstdint>

namespace wlab {

/// Spacing of the reference tone lattice that all placement and guard
/// accounting is expressed in.
inline constexpr double kReferenceToneHz = 15e3;

/// Reference tones per resource block.
inline constexpr int kTonesPerRb = 12;

struct Numerology {
    double scs_hz = kReferenceToneHz;
    std::uint32_t fft_size = 512;
    std::uint32_t cp_samples = 36;
    std::uint32_t symbols_per_tti = 14;

    double sample_rate_hz() const { return scs_hz * static_cast<double>(fft_size); }
    std::uint32_t samples_per_symbol() const { return fft_size + cp_samples; }

    bool operator==(const Numerology&) const = default;
};

struct SymbolTiming {
    double symbol_duration_s = 0.0;
    double cp_duration_s = 0.0;
    std::uint32_t samples_per_symbol = 0;
};

/// True when scs × fft reproduces the sample rate exactly and the CP is
/// shorter than the FFT.
bool is_consistent(const Numerology& n, double sample_rate_hz);

/// Throws ConfigError if `n` does not run at `sample_rate_hz`.
SymbolTiming derive_timing(const Numerology& n, double sample_rate_hz);

} // namespace wlab
