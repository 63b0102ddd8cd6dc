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
#include <span>
#include <vector>

#include "wlab/numerology.hpp"
#include "wlab/resource_grid.hpp"
#include "wlab/scenario.hpp"
#include "wlab/signal_buffer.hpp"

namespace wlab {

/// Gray-labelled points indexed by label (first bit is the MSB), unit
/// average power.
const std::vector<cdouble>& constellation(Modulation m);

std::vector<cdouble> qam_map(std::span<const std::uint8_t> bits, Modulation m);

/// Hard decisions. Ties on a decision boundary resolve to the lower label.
std::vector<std::uint8_t> qam_demap(std::span<const cdouble> symbols, Modulation m);

/// Where a grid's tones sit in the FFT: tone t -> bin first_bin + t (mod N).
struct ToneLayout {
    std::size_t tones = 0;
    std::int64_t first_bin = 0;

    static ToneLayout centered(std::size_t tones);
    std::int64_t bin(std::size_t tone) const { return first_bin + static_cast<std::int64_t>(tone); }
};

/// IFFT (1/√N) per symbol plus cyclic prefix; symbols concatenated.
SignalBuffer ofdm_modulate(const ResourceGrid& grid, const Numerology& n, const ToneLayout& layout);
SignalBuffer ofdm_modulate(const ResourceGrid& grid, const Numerology& n);

/// Inverse of ofdm_modulate. The FFT window of every symbol starts
/// `window_advance` samples before the end of its cyclic prefix; the
/// resulting per-bin phase ramp is left in the output.
ResourceGrid ofdm_demodulate(const SignalBuffer& sig, const Numerology& n,
                             const ToneLayout& layout, std::size_t window_advance = 0);

/// e^{-j2π k a / N} for every tone: what a window advance of `a` multiplies bin k by.
std::vector<cdouble> window_advance_response(const ToneLayout& layout, std::uint32_t fft_size,
                                             std::size_t window_advance);

struct EqualizerState {
    std::vector<cdouble> estimates;  // one per tone
};

struct EqualizedGrid {
    ResourceGrid grid;
    std::vector<bool> erased;  // tones whose estimate was zero
};

EqualizedGrid equalize(const ResourceGrid& grid, const EqualizerState& eq);

/// Pools error and reference power so several trials give one EVM figure.
struct EvmAccumulator {
    double error_power = 0.0;
    double reference_power = 0.0;
    std::size_t cells = 0;

    /// Adds nonzero reference cells of tones where `tone_mask` is true
    /// (all tones when the mask is empty).
    void add(const ResourceGrid& reference, const ResourceGrid& received,
             std::span<const bool> tone_mask = {});
    void merge(const EvmAccumulator& other);
    double db() const;
};

inline constexpr double kEvmFloorDb = -100.0;

/// 10·log10(sum|rx - ref|^2 / sum|ref|^2) over nonzero reference cells,
/// floored at kEvmFloorDb.
double evm_db(const ResourceGrid& reference, const ResourceGrid& received);

struct BitErrorCount {
    std::size_t errors = 0;
    std::size_t total = 0;

    double ratio() const { return total == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(total); }
    BitErrorCount& operator+=(const BitErrorCount& o) {
        errors += o.errors;
        total += o.total;
        return *this;
    }
};

BitErrorCount ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

} // namespace wlab
