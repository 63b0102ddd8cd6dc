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
#include <span>
#include <vector>

#include "wlab/scenario.hpp"
#include "wlab/signal_buffer.hpp"

namespace wlab {

inline constexpr std::size_t kDefaultMaxTaps = 4097;

struct FilterSpec {
    std::uint32_t order = 256;          // tap count is order + 1
    double passband_width_hz = 0.0;     // two-sided
    double center_offset_hz = 0.0;
    WindowKind window = WindowKind::Hann;
    double rolloff = 0.6;               // Rrc only
};

struct FirFilter {
    std::vector<cdouble> taps;
    FilterSpec spec;
    std::size_t mainlobe_samples = 1;
    bool mainlobe_bounded = true;

    /// Group delay of the linear-phase design, in samples.
    std::size_t delay() const { return taps.empty() ? 0 : (taps.size() - 1) / 2; }

    /// Response at `f_hz` with the group delay removed:
    /// sum_n taps[n] e^{-j2π f (n - delay) / fs}.
    cdouble response_at(double f_hz, double sample_rate_hz) const;
};

/// Window sample w[n] for n in [0, order], symmetric around order/2.
std::vector<double> hann_window(std::uint32_t order);
/// Flat over the central (1 - rolloff) fraction, quarter-cosine
/// (root-raised-cosine) tapers to zero at both ends.
std::vector<double> rrc_window(std::uint32_t order, double rolloff);

/// Soft-truncated sinc low-pass, shifted to `center_offset_hz`, normalised
/// to unit gain at the passband centre.
FirFilter design_windowed_sinc(const FilterSpec& spec, double sample_rate_hz,
                               std::size_t max_taps = kDefaultMaxTaps);

/// Single unit tap; the identity filter.
FirFilter unit_filter();

struct FrequencyResponse {
    std::vector<double> freqs_hz;      // [-fs/2, fs/2), increasing
    std::vector<double> magnitude_db;
    std::vector<double> phase_rad;
};

FrequencyResponse frequency_response(const FirFilter& f, std::size_t n_points,
                                     double sample_rate_hz);

struct Mainlobe {
    std::size_t samples = 1;
    bool bounded = true;  // false when no minimum was found on some side
};

/// Distance between the first |tap| minima on either side of the peak tap.
Mainlobe mainlobe_width(std::span<const cdouble> taps);

/// Precomputed frequency-domain filter for repeated overlap-save runs.
class OverlapSaveKernel {
public:
    OverlapSaveKernel(std::span<const cdouble> taps, std::size_t block_fft_size,
                      std::optional<double> prune_below_db = std::nullopt);

    /// Linear convolution; output length x.size() + taps - 1.
    SignalBuffer apply(const SignalBuffer& x) const;

    std::size_t block_size() const { return block_; }
    std::size_t tap_count() const { return taps_; }
    /// Frequency bins left nonzero after pruning (== block size unpruned).
    std::size_t kept_bins() const { return kept_; }

private:
    std::size_t block_;
    std::size_t taps_;
    std::size_t kept_;
    std::vector<cdouble> spectrum_;
};

/// Smallest power of two >= max(2 * taps, 256) with at least 2 * taps of hop.
std::size_t default_block_size(std::size_t tap_count);

SignalBuffer overlap_save_convolve(const SignalBuffer& x, const FirFilter& f,
                                   std::size_t block_fft_size);

/// Textbook O(N·L) linear convolution; reference for overlap-save.
SignalBuffer direct_convolve(const SignalBuffer& x, std::span<const cdouble> taps);
SignalBuffer direct_convolve(const SignalBuffer& x, const FirFilter& f);

/// Tap file: header "taps v1 <count>", then one "re im" pair per line.
void export_taps(const std::filesystem::path& path, const FirFilter& f);
FirFilter import_taps(const std::filesystem::path& path);
FirFilter parse_taps(std::string_view text);

/// Number of |H| bins within `threshold_db` of the peak on an n-point grid.
std::size_t resolvable_bins(const FirFilter& f, std::size_t n_points, double threshold_db);

} // namespace wlab
