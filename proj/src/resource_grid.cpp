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

#include "wlab/resource_grid.hpp"

#include "wlab/error.hpp"

namespace wlab {

ResourceGrid::ResourceGrid(std::size_t tones, std::size_t symbols)
    : tones_(tones), symbols_(symbols), cells_(tones * symbols) {
    if (tones == 0 || symbols == 0) {
        throw ConfigError("resource grid dimensions must be positive");
    }
}

cdouble& ResourceGrid::at(std::size_t tone, std::size_t symbol) {
    if (tone >= tones_ || symbol >= symbols_) throw SignalError("resource grid index out of range");
    return cells_[symbol * tones_ + tone];
}

const cdouble& ResourceGrid::at(std::size_t tone, std::size_t symbol) const {
    if (tone >= tones_ || symbol >= symbols_) throw SignalError("resource grid index out of range");
    return cells_[symbol * tones_ + tone];
}

std::span<cdouble> ResourceGrid::symbol(std::size_t s) {
    if (s >= symbols_) throw SignalError("resource grid symbol out of range");
    return std::span<cdouble>(cells_).subspan(s * tones_, tones_);
}

std::span<const cdouble> ResourceGrid::symbol(std::size_t s) const {
    if (s >= symbols_) throw SignalError("resource grid symbol out of range");
    return std::span<const cdouble>(cells_).subspan(s * tones_, tones_);
}

double ResourceGrid::mean_nonzero_power() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& c : cells_) {
        const double p = std::norm(c);
        if (p > 0.0) {
            sum += p;
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

double ResourceGrid::energy() const {
    double sum = 0.0;
    for (const auto& c : cells_) sum += std::norm(c);
    return sum;
}

} // namespace wlab
