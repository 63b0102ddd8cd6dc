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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlab/rng.hpp"
#include "wlab/signal_buffer.hpp"

namespace wlab {

/// AWGN at measured-input-power / 10^(snr/10). nullopt SNR is the identity.
/// A zero-power input with a finite SNR is a SignalError.
SignalBuffer awgn(const SignalBuffer& sig, std::optional<double> snr_db, RngStream& rng);

/// Adds circular complex Gaussian noise of the given per-sample variance.
SignalBuffer add_noise(const SignalBuffer& sig, double variance, RngStream& rng);

struct TdlTap {
    double delay_ns = 0.0;
    double power_db = 0.0;
};

/// Tapped-delay-line power delay profile; powers sum to 1 after loading.
struct TdlProfile {
    std::string name;
    std::vector<TdlTap> taps;

    double total_linear_power() const;
    double max_delay_ns() const;
};

/// Text format: header "tdl v1 <name>", then "delay_ns power_db" rows.
/// Blank lines and '#' comments are ignored.
TdlProfile parse_tdl_profile(std::string_view text);
TdlProfile load_tdl_profile(const std::filesystem::path& path);
/// Looks up <data_dir>/profiles/<lowercase name>.tdl.
TdlProfile find_tdl_profile(std::string_view name);
bool tdl_profile_exists(std::string_view name);

/// One static realisation of a TDL channel on the sample grid.
struct ChannelSnapshot {
    std::vector<std::size_t> delays_samples;
    std::vector<cdouble> gains;
    std::vector<double> rounding_error_samples;  // exact - rounded delay
    bool exceeds_cp_budget = false;

    std::size_t max_delay() const;
    /// sum_d g_d e^{-j2π f d / fs}
    cdouble response_at(double f_hz, double sample_rate_hz) const;
};

ChannelSnapshot draw_tdl(const TdlProfile& profile, double sample_rate_hz, RngStream& rng,
                         std::optional<std::size_t> cp_budget_samples = std::nullopt);

/// Sparse convolution with the snapshot; output length grows by max_delay.
SignalBuffer apply_channel(const SignalBuffer& sig, const ChannelSnapshot& ch);

struct TdlResult {
    SignalBuffer signal;
    ChannelSnapshot channel;
};

TdlResult apply_tdl(const SignalBuffer& sig, const TdlProfile& profile, RngStream& rng,
                    std::optional<std::size_t> cp_budget_samples = std::nullopt);

/// Rapp solid-state PA: |y| = |x| / (1 + (|x|/A)^{2p})^{1/2p}, phase kept.
/// A is set so the mean input power sits `input_backoff_db` below A^2.
SignalBuffer pa_rapp(const SignalBuffer& sig, double input_backoff_db, double smoothness);

/// Memoryless Rapp AM/AM for a single amplitude.
double rapp_amplitude(double amplitude, double saturation, double smoothness);

} // namespace wlab
