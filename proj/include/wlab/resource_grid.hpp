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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wlab {

using cdouble = std::complex<double>;

/// Tones × symbols matrix of constellation points for one subband.
/// Stored symbol-major so that one OFDM symbol is a contiguous span.
class ResourceGrid {
public:
    ResourceGrid(std::size_t tones, std::size_t symbols);

    std::size_t tones() const { return tones_; }
    std::size_t symbols() const { return symbols_; }

    cdouble& at(std::size_t tone, std::size_t symbol);
    const cdouble& at(std::size_t tone, std::size_t symbol) const;

    std::span<cdouble> symbol(std::size_t s);
    std::span<const cdouble> symbol(std::size_t s) const;

    std::span<cdouble> cells() { return cells_; }
    std::span<const cdouble> cells() const { return cells_; }

    /// Mean |cell|^2 over nonzero cells (0 for an empty grid).
    double mean_nonzero_power() const;
    double energy() const;

private:
    std::size_t tones_;
    std::size_t symbols_;
    std::vector<cdouble> cells_;
};

} // namespace wlab
