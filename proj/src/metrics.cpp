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

#include "wlab/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "wlab/error.hpp"
#include "wlab/fft.hpp"

namespace wlab {

namespace {

std::string fmt(const char* f, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double to_db(double ratio) {
    return ratio > 0.0 ? 10.0 * std::log10(ratio) : -std::numeric_limits<double>::infinity();
}

} // namespace

PsdEstimate psd_welch(const SignalBuffer& sig, std::size_t segment_size, double overlap_fraction,
                      std::span<const FrequencyBand> in_band) {
    if (segment_size < 2) throw ConfigError("PSD segment must hold at least two samples");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
        throw ConfigError("PSD overlap must lie in [0, 1)");
    }
    if (!(sig.sample_rate_hz > 0.0)) throw SignalError("PSD needs a tagged sample rate");
    if (sig.size() < 2 * segment_size) throw SignalError("signal is shorter than two PSD segments");

    const std::size_t n = segment_size;
    std::vector<double> w(n);
    double w2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Periodic Hann.
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
        w2 += w[i] * w[i];
    }
    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(n * (1.0 - overlap_fraction))));
    std::vector<double> acc(n, 0.0);
    std::vector<cdouble> buf(n);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n <= sig.size(); start += hop) {
        for (std::size_t i = 0; i < n; ++i) buf[i] = sig.samples[start + i] * w[i];
        fft::forward(buf, buf);
        for (std::size_t k = 0; k < n; ++k) acc[k] += std::norm(buf[k]);
        ++segments;
    }

    PsdEstimate p;
    p.segment_size = n;
    p.overlap_fraction = overlap_fraction;
    p.sample_rate_hz = sig.sample_rate_hz;
    p.freqs_hz.resize(n);
    p.power_linear.resize(n);
    p.power_dbr.resize(n);
    const double norm = 1.0 / (static_cast<double>(segments) * static_cast<double>(n) * w2);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + n - half) % n;
        p.freqs_hz[i] = (static_cast<double>(i) - static_cast<double>(half)) * sig.sample_rate_hz / static_cast<double>(n);
        p.power_linear[i] = acc[k] * norm;
    }
    double ref = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool inside = in_band.empty();
        for (const auto& b : in_band) inside = inside || b.contains(p.freqs_hz[i]);
        if (inside) {
            ref += p.power_linear[i];
            ++count;
        }
    }
    if (count == 0) throw ConfigError("in-band reference holds no PSD bins");
    ref /= static_cast<double>(count);
    for (std::size_t i = 0; i < n; ++i) {
        p.power_dbr[i] = ref > 0.0 ? to_db(p.power_linear[i] / ref) : -std::numeric_limits<double>::infinity();
    }
    return p;
}

std::vector<double> oobe(const PsdEstimate& psd, const FrequencyBand& allocated,
                         std::span<const double> offsets_hz, double window_hz) {
    if (!(window_hz > 0.0)) throw ConfigError("OOBE window must be positive");
    const double nyq = 0.5 * psd.sample_rate_hz;
    std::vector<double> out;
    out.reserve(offsets_hz.size());
    for (double off : offsets_hz) {
        if (!(off >= 0.0)) throw ConfigError("OOBE offsets must lie outside the band");
        const double hi = allocated.high_hz + off;
        const double lo = allocated.low_hz - off;
        if (hi + 0.5 * window_hz > nyq || lo - 0.5 * window_hz < -nyq) {
            throw ConfigError("OOBE offset reaches beyond Nyquist");
        }
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) {
            const double f = psd.freqs_hz[i];
            if (std::abs(f - hi) <= 0.5 * window_hz || std::abs(f - lo) <= 0.5 * window_hz) {
                sum += std::pow(10.0, psd.power_dbr[i] / 10.0);
                ++count;
            }
        }
        if (count == 0) throw ConfigError("OOBE window is narrower than one PSD bin");
        out.push_back(to_db(sum / static_cast<double>(count)));
    }
    return out;
}

std::string psd_csv(const PsdEstimate& psd) {
    std::string s = "freq_hz,power_dbr\n";
    for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) {
        s += fmt("%.3f,%.6f\n", psd.freqs_hz[i], psd.power_dbr[i]);
    }
    return s;
}

ThroughputRow throughput_row(const ThroughputEntry& e) {
    if (!(e.scs_hz > 0.0)) throw ConfigError("throughput entry '" + e.name + "' needs a positive scs");
    if (!(e.cp_duration_s >= 0.0)) throw ConfigError("throughput entry '" + e.name + "' has a negative CP");
    if (!(e.data_tone_fraction >= 0.0 && e.data_tone_fraction <= 1.0)) {
        throw ConfigError("data_tone_fraction of '" + e.name + "' must lie in [0, 1]");
    }
    if (!(e.bandwidth_share >= 0.0 && e.bandwidth_share <= 1.0)) {
        throw ConfigError("bandwidth_share of '" + e.name + "' must lie in [0, 1]");
    }
    const double t = 1.0 / e.scs_hz;
    ThroughputRow r;
    r.name = e.name;
    r.bandwidth_share = e.bandwidth_share;
    r.data_tone_fraction = e.data_tone_fraction;
    r.cp_overhead_fraction = e.cp_duration_s / (t + e.cp_duration_s);
    r.normalized_throughput = e.data_tone_fraction * t / (t + e.cp_duration_s);
    return r;
}

ThroughputReport normalized_throughput(std::span<const ThroughputEntry> baseline,
                                       std::span<const ThroughputEntry> fofdm) {
    ThroughputReport r;
    for (const auto& e : baseline) {
        r.baseline.push_back(throughput_row(e));
        r.baseline_total += e.bandwidth_share * r.baseline.back().normalized_throughput;
    }
    for (const auto& e : fofdm) {
        r.fofdm.push_back(throughput_row(e));
        r.fofdm_total += e.bandwidth_share * r.fofdm.back().normalized_throughput;
    }
    if (!(r.baseline_total > 0.0)) throw ConfigError("baseline throughput is zero");
    r.gain_percent = 100.0 * (r.fofdm_total - r.baseline_total) / r.baseline_total;
    return r;
}

std::string throughput_csv(const ThroughputReport& r) {
    std::string s = "scheme,subband,bandwidth_share,data_tone_fraction,cp_overhead_fraction,normalized_throughput\n";
    char buf[256];
    auto rows = [&](const char* scheme, const std::vector<ThroughputRow>& v) {
        for (const auto& row : v) {
            std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%.6f\n", scheme, row.name.c_str(),
                          row.bandwidth_share, row.data_tone_fraction, row.cp_overhead_fraction,
                          row.normalized_throughput);
            s += buf;
        }
    };
    rows("ofdm", r.baseline);
    rows("fofdm", r.fofdm);
    std::snprintf(buf, sizeof buf, "ofdm,total,,,,%.6f\nfofdm,total,,,,%.6f\ngain_percent,total,,,,%.4f\n",
                  r.baseline_total, r.fofdm_total, r.gain_percent);
    s += buf;
    return s;
}

} // namespace wlab
