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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlab/numerology.hpp"

namespace wlab {

enum class Modulation { Qpsk, Qam16, Qam64 };

int bits_per_symbol(Modulation m);
std::string_view to_string(Modulation m);
/// Accepts "QPSK", "QAM16"/"16QAM", "QAM64"/"64QAM" (case-insensitive).
std::optional<Modulation> parse_modulation(std::string_view text);

/// Placement and waveform of one subband. Tone indices live on the 15 kHz
/// reference lattice: reference tone r is centred at r × 15 kHz.
struct SubbandSpec {
    int start_tone = 0;
    int width_tones = 12;
    int guard_tones_left = 0;
    int guard_tones_right = 0;
    Numerology numerology;
    Modulation modulation = Modulation::Qpsk;
    double power_offset_db = 0.0;
    std::int64_t timing_offset_samples = 0;

    int end_tone() const { return start_tone + width_tones; }
    int span_begin() const { return start_tone - guard_tones_left; }
    int span_end() const { return end_tone() + guard_tones_right; }
    double low_edge_hz() const { return (start_tone - 0.5) * kReferenceToneHz; }
    double high_edge_hz() const { return (end_tone() - 0.5) * kReferenceToneHz; }

    bool operator==(const SubbandSpec&) const = default;
};

enum class ChannelKind { Ideal, Tdl };

struct ChannelConfig {
    ChannelKind kind = ChannelKind::Ideal;
    std::string profile;

    bool operator==(const ChannelConfig&) const = default;
};

struct PaConfig {
    bool enabled = false;
    double input_backoff_db = 9.6;
    double smoothness = 2.0;

    bool operator==(const PaConfig&) const = default;
};

struct ImpairmentConfig {
    std::optional<double> snr_db;  // nullopt = noise off
    ChannelConfig channel;
    PaConfig pa;

    bool operator==(const ImpairmentConfig&) const = default;
};

enum class WindowKind { Hann, Rrc, External };

std::string_view to_string(WindowKind w);

/// Subband filter design knobs shared by every subband of a scenario.
struct FilterSettings {
    std::uint32_t order = 256;
    WindowKind window = WindowKind::Hann;
    double rolloff = 0.6;
    // Passband widening (reference tones) on sides that face open spectrum.
    double excess_tones = 3.0;
    std::uint32_t max_taps = 4097;
    std::optional<double> prune_below_db;

    bool operator==(const FilterSettings&) const = default;
};

struct ScenarioConfig {
    std::string name;
    double sample_rate_hz = 7.68e6;
    double total_bandwidth_hz = 6.0e6;
    std::vector<SubbandSpec> subbands;
    ImpairmentConfig impairments;
    FilterSettings filter;
    std::uint64_t seed = 1;

    bool operator==(const ScenarioConfig&) const = default;
};

struct Violation {
    std::optional<std::size_t> subband;
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(std::string_view code) const;
    std::string summary() const;
};

/// Checks every scenario invariant and reports all violations; never throws.
ValidationReport validate_scenario(const ScenarioConfig& cfg);

/// Throws ConfigError carrying the report summary unless `cfg` validates.
void require_valid(const ScenarioConfig& cfg);

/// Shortest FFT size across the subbands (the shortest symbol duration).
std::uint32_t shortest_fft(const ScenarioConfig& cfg);

} // namespace wlab
