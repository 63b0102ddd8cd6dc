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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wlab/metrics.hpp"
#include "wlab/subband_engine.hpp"

namespace wlab {

struct CommonOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
};

struct PsdOptions : CommonOptions {
    bool pa_on = false;
    std::size_t ttis = 20;
    std::size_t segment_size = 4096;
};

struct PsdOutcome {
    PsdEstimate ofdm;
    PsdEstimate fofdm;
    FrequencyBand allocated;
    std::vector<double> offsets_hz;
    std::vector<double> oobe_ofdm_dbr;
    std::vector<double> oobe_fofdm_dbr;
};

/// Offsets from the allocation edge equivalent to 0.5/1/2 MHz on the
/// 30.72 MHz reference profile, scaled by sample rate; those past Nyquist
/// are dropped.
std::vector<double> oobe_offsets_for(double sample_rate_hz, const FrequencyBand& allocated);

/// Plain OFDM and f-OFDM over the same payload; writes psd_ofdm.csv,
/// psd_fofdm.csv and oobe_summary.csv.
PsdOutcome cmd_psd(const PsdOptions& opts);

struct GuardtoneOptions : CommonOptions {
    std::vector<int> guards{0, 1, 2};
    std::vector<double> offsets_db{0.0, 10.0};
    std::vector<Modulation> modulations{Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64};
    double snr_db = 30.0;
    std::size_t trials = 20;
};

/// Writes guardtone.csv (one row per sweep cell) and guardtone_baseline.csv.
SweepResult cmd_guardtone(const GuardtoneOptions& opts);

struct ThroughputPreset {
    std::string name;
    std::vector<ThroughputEntry> baseline;
    std::vector<ThroughputEntry> fofdm;
};

ThroughputPreset parse_throughput_preset(std::string_view text);

inline constexpr std::string_view kThroughputCaveat =
    "overhead arithmetic only (guard fraction x CP efficiency); gains from coded link "
    "adaptation are not modelled, so a total near 46% is an upper reference, not a "
    "reproduction target";

/// Writes throughput.csv (per-subband rows and totals) and throughput_caveat.txt.
ThroughputReport cmd_throughput(const CommonOptions& opts);

struct SelftestOptions {
    bool corrupt_taps = false;  // test hook: perturbs one overlap-save tap
    std::size_t jobs = 1;
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    double seconds = 0.0;

    bool all_passed() const;
    std::string table() const;
};

SelftestReport cmd_selftest(const SelftestOptions& opts = {});

} // namespace wlab
