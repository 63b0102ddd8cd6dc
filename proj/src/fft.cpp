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

#include "wlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "wlab/error.hpp"

namespace wlab::fft {

namespace {

// fftw_plan_* is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, sign) and never destroyed.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<cdouble> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw Error("fftw planning failed");
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(std::span<const cdouble> in, std::span<cdouble> out, int sign) {
    if (in.size() != out.size()) throw SignalError("fft: input and output lengths differ");
    const std::size_t n = in.size();
    if (n == 0) return;
    fftw_plan p = cache().get(n, sign);
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    if (src == dst) {
        thread_local std::vector<cdouble> scratch;
        scratch.assign(in.begin(), in.end());
        src = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_execute_dft(p, src, dst);
        return;
    }
    fftw_execute_dft(p, src, dst);
}

} // namespace

void forward(std::span<const cdouble> in, std::span<cdouble> out) { run(in, out, FFTW_FORWARD); }

void inverse(std::span<const cdouble> in, std::span<cdouble> out) { run(in, out, FFTW_BACKWARD); }

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace wlab::fft
