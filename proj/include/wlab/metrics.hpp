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
#include <span>
#include <string>
#include <vector>

#include "wlab/signal_buffer.hpp"

namespace wlab {

struct FrequencyBand {
    double low_hz = 0.0;
    double high_hz = 0.0;

    bool contains(double f) const { return f >= low_hz && f < high_hz; }
};

struct PsdEstimate {
    std::vector<double> freqs_hz;      // [-fs/2, fs/2), strictly increasing
    std::vector<double> power_linear;  // per bin; sums to the mean signal power
    std::vector<double> power_dbr;     // relative to the in-band mean
    std::size_t segment_size = 0;
    double overlap_fraction = 0.0;
    double sample_rate_hz = 0.0;
};

/// Welch estimate with Hann segments. dBr is relative to the mean bin power
/// inside `in_band` (the whole span when empty). A zero signal gives -inf.
PsdEstimate psd_welch(const SignalBuffer& sig, std::size_t segment_size = 4096,
                      double overlap_fraction = 0.5, std::span<const FrequencyBand> in_band = {});

/// Mean dBr over `window_hz` windows centred `offset` beyond each edge of
/// `allocated` (both sides pooled in linear power), one value per offset.
std::vector<double> oobe(const PsdEstimate& psd, const FrequencyBand& allocated,
                         std::span<const double> offsets_hz, double window_hz = 15e3);

std::string psd_csv(const PsdEstimate& psd);

struct ThroughputEntry {
    std::string name;
    double scs_hz = 15e3;
    double cp_duration_s = 0.0;
    double data_tone_fraction = 1.0;
    double bandwidth_share = 1.0;
};

struct ThroughputRow {
    std::string name;
    double bandwidth_share = 1.0;
    double data_tone_fraction = 1.0;
    double cp_overhead_fraction = 0.0;
    double normalized_throughput = 0.0;
};

struct ThroughputReport {
    std::vector<ThroughputRow> baseline;
    std::vector<ThroughputRow> fofdm;
    double baseline_total = 0.0;
    double fofdm_total = 0.0;
    double gain_percent = 0.0;
};

/// data_tone_fraction × T_sym / (T_sym + T_cp) with T_sym = 1/scs.
ThroughputRow throughput_row(const ThroughputEntry& e);

/// Totals are bandwidth-share-weighted sums; gain is (f-OFDM - OFDM) / OFDM.
ThroughputReport normalized_throughput(std::span<const ThroughputEntry> baseline,
                                       std::span<const ThroughputEntry> fofdm);

std::string throughput_csv(const ThroughputReport& r);

} // namespace wlab
