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
#include <cstdint>
#include <random>
#include <string_view>

namespace wlab {

/// Deterministic random stream keyed by (seed, label).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard; uniform and Gaussian variates are derived here rather than with
/// the <random> distributions (whose algorithms are implementation-defined),
/// so a stream is bit-identical across compilers and platforms.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();
    /// Circular complex Gaussian with E|z|^2 == variance.
    std::complex<double> complex_normal(double variance);
    std::uint8_t bit();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

RngStream seeded_rng(std::uint64_t seed, std::string_view label);

/// 64-bit FNV-1a, used for label mixing and output hashing.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

} // namespace wlab
