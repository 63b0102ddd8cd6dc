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

#include "wlab/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wlab/error.hpp"
#include "wlab/fft.hpp"
#include "wlab/scenario_io.hpp"

namespace wlab {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double a = kPi * x;
    return std::sin(a) / a;
}

cdouble phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

} // namespace

cdouble FirFilter::response_at(double f_hz, double sample_rate_hz) const {
    const double m = static_cast<double>(delay());
    cdouble acc{0.0, 0.0};
    for (std::size_t n = 0; n < taps.size(); ++n) {
        acc += taps[n] * phasor(-2.0 * kPi * f_hz * (static_cast<double>(n) - m) / sample_rate_hz);
    }
    return acc;
}

std::vector<double> hann_window(std::uint32_t order) {
    std::vector<double> w(order + 1, 1.0);
    if (order == 0) return w;
    const double m = 0.5 * order;
    for (std::uint32_t n = 0; n <= order; ++n) {
        w[n] = 0.5 * (1.0 + std::cos(kPi * (n - m) / m));
    }
    return w;
}

std::vector<double> rrc_window(std::uint32_t order, double rolloff) {
    if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ConfigError("rrc rolloff must lie in (0, 1]");
    std::vector<double> w(order + 1, 1.0);
    if (order == 0) return w;
    const double m = 0.5 * order;
    const double flat = 1.0 - rolloff;
    for (std::uint32_t n = 0; n <= order; ++n) {
        const double x = std::abs((n - m) / m);
        if (x > flat) w[n] = std::cos(0.5 * kPi * (x - flat) / rolloff);
    }
    return w;
}

FirFilter design_windowed_sinc(const FilterSpec& spec, double sample_rate_hz, std::size_t max_taps) {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("filter sample rate must be positive");
    if (!(spec.passband_width_hz > 0.0)) throw ConfigError("filter passband width must be positive");
    if (spec.passband_width_hz >= sample_rate_hz) {
        throw ConfigError("filter passband width must be below the sample rate");
    }
    if (spec.order == 0 || spec.order % 2 != 0) throw ConfigError("filter order must be even and positive");
    if (static_cast<std::size_t>(spec.order) + 1 > max_taps) {
        std::ostringstream os;
        os << "filter order " << spec.order << " needs more than " << max_taps << " taps";
        throw ConfigError(os.str());
    }
    std::vector<double> w;
    switch (spec.window) {
    case WindowKind::Hann: w = hann_window(spec.order); break;
    case WindowKind::Rrc: w = rrc_window(spec.order, spec.rolloff); break;
    case WindowKind::External: throw ConfigError("external window cannot be designed");
    }
    const double fc = spec.passband_width_hz / sample_rate_hz;
    const double m = 0.5 * spec.order;
    FirFilter f;
    f.spec = spec;
    f.taps.resize(spec.order + 1);
    for (std::uint32_t n = 0; n <= spec.order; ++n) {
        const double k = n - m;
        f.taps[n] = fc * sinc(fc * k) * w[n] * phasor(2.0 * kPi * spec.center_offset_hz * k / sample_rate_hz);
    }
    const cdouble g = f.response_at(spec.center_offset_hz, sample_rate_hz);
    if (std::abs(g) == 0.0) throw SignalError("filter has zero gain at its centre");
    for (auto& t : f.taps) t /= g;
    const auto ml = mainlobe_width(f.taps);
    f.mainlobe_samples = ml.samples;
    f.mainlobe_bounded = ml.bounded;
    return f;
}

FirFilter unit_filter() {
    FirFilter f;
    f.taps = {cdouble{1.0, 0.0}};
    f.spec.order = 0;
    f.spec.window = WindowKind::External;
    f.mainlobe_samples = 1;
    return f;
}

FrequencyResponse frequency_response(const FirFilter& f, std::size_t n_points, double sample_rate_hz) {
    if (n_points == 0) throw ConfigError("frequency response needs at least one point");
    std::vector<cdouble> buf(n_points);
    // Taps beyond n_points fold; sampling a DTFT on an n-point grid aliases in time.
    for (std::size_t n = 0; n < f.taps.size(); ++n) buf[n % n_points] += f.taps[n];
    fft::forward(buf, buf);
    FrequencyResponse r;
    r.freqs_hz.resize(n_points);
    r.magnitude_db.resize(n_points);
    r.phase_rad.resize(n_points);
    const double m = static_cast<double>(f.delay());
    const std::size_t half = n_points / 2;
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::size_t k = (i + n_points - half) % n_points;
        const double kk = static_cast<double>(i) - static_cast<double>(half);
        const double fr = kk * sample_rate_hz / static_cast<double>(n_points);
        const cdouble h = buf[k] * phasor(2.0 * kPi * kk * m / static_cast<double>(n_points));
        r.freqs_hz[i] = fr;
        r.magnitude_db[i] = 20.0 * std::log10(std::max(std::abs(h), 1e-300));
        r.phase_rad[i] = std::arg(h);
    }
    return r;
}

Mainlobe mainlobe_width(std::span<const cdouble> taps) {
    Mainlobe out;
    if (taps.empty()) return {0, false};
    std::size_t peak = 0;
    for (std::size_t i = 1; i < taps.size(); ++i) {
        if (std::abs(taps[i]) > std::abs(taps[peak])) peak = i;
    }
    std::size_t lo = peak;
    while (lo > 0 && std::abs(taps[lo - 1]) < std::abs(taps[lo])) --lo;
    std::size_t hi = peak;
    while (hi + 1 < taps.size() && std::abs(taps[hi + 1]) < std::abs(taps[hi])) ++hi;
    if (lo == 0 || hi + 1 == taps.size()) {
        out.samples = taps.size();
        out.bounded = false;
        return out;
    }
    out.samples = hi - lo;
    out.bounded = true;
    return out;
}

OverlapSaveKernel::OverlapSaveKernel(std::span<const cdouble> taps, std::size_t block_fft_size,
                                     std::optional<double> prune_below_db)
    : block_(block_fft_size), taps_(taps.size()), kept_(block_fft_size), spectrum_(block_fft_size) {
    if (taps.empty()) throw ConfigError("overlap-save needs at least one tap");
    if (block_ < 2 * taps_) throw ConfigError("overlap-save block must hold at least twice the taps");
    std::copy(taps.begin(), taps.end(), spectrum_.begin());
    fft::forward(spectrum_, spectrum_);
    if (prune_below_db) {
        double peak = 0.0;
        for (const auto& h : spectrum_) peak = std::max(peak, std::abs(h));
        const double floor = peak * std::pow(10.0, *prune_below_db / 20.0);
        kept_ = 0;
        for (auto& h : spectrum_) {
            if (std::abs(h) < floor) {
                h = 0.0;
            } else {
                ++kept_;
            }
        }
    }
    // Fold the 1/N of the inverse transform into the kernel.
    const double inv = 1.0 / static_cast<double>(block_);
    for (auto& h : spectrum_) h *= inv;
}

SignalBuffer OverlapSaveKernel::apply(const SignalBuffer& x) const {
    SignalBuffer y;
    y.sample_rate_hz = x.sample_rate_hz;
    if (x.empty()) return y;
    const std::size_t out_len = x.size() + taps_ - 1;
    const std::size_t hop = block_ - taps_ + 1;
    const std::size_t history = taps_ - 1;
    y.samples.resize(out_len);
    std::vector<cdouble> buf(block_);
    for (std::size_t start = 0; start < out_len; start += hop) {
        // Block covers input indices [start - history, start - history + block).
        for (std::size_t i = 0; i < block_; ++i) {
            const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(start + i) - static_cast<std::ptrdiff_t>(history);
            buf[i] = (idx >= 0 && static_cast<std::size_t>(idx) < x.size()) ? x.samples[idx] : cdouble{};
        }
        fft::forward(buf, buf);
        for (std::size_t k = 0; k < block_; ++k) buf[k] *= spectrum_[k];
        fft::inverse(buf, buf);
        const std::size_t n = std::min(hop, out_len - start);
        std::copy_n(buf.begin() + static_cast<std::ptrdiff_t>(history), n, y.samples.begin() + static_cast<std::ptrdiff_t>(start));
    }
    return y;
}

std::size_t default_block_size(std::size_t tap_count) {
    return fft::next_power_of_two(std::max<std::size_t>(3 * tap_count, 256));
}

SignalBuffer overlap_save_convolve(const SignalBuffer& x, const FirFilter& f, std::size_t block_fft_size) {
    return OverlapSaveKernel(f.taps, block_fft_size).apply(x);
}

SignalBuffer direct_convolve(const SignalBuffer& x, std::span<const cdouble> taps) {
    SignalBuffer y;
    y.sample_rate_hz = x.sample_rate_hz;
    if (x.empty() || taps.empty()) return y;
    y.samples.assign(x.size() + taps.size() - 1, cdouble{});
    for (std::size_t n = 0; n < x.size(); ++n) {
        for (std::size_t k = 0; k < taps.size(); ++k) y.samples[n + k] += x.samples[n] * taps[k];
    }
    return y;
}

SignalBuffer direct_convolve(const SignalBuffer& x, const FirFilter& f) { return direct_convolve(x, f.taps); }

void export_taps(const std::filesystem::path& path, const FirFilter& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write tap file " + path.string());
    os << "taps v1 " << f.taps.size() << '\n';
    char line[96];
    for (const auto& t : f.taps) {
        std::snprintf(line, sizeof line, "%.17g %.17g\n", t.real(), t.imag());
        os << line;
    }
    if (!os) throw Error("write failed for tap file " + path.string());
}

FirFilter parse_taps(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string magic, version;
    long long count = -1;
    if (!(is >> magic >> version >> count) || magic != "taps" || version != "v1") {
        throw ParseError("tap file must start with 'taps v1 <count>'");
    }
    if (count <= 0) throw ParseError("tap count must be positive");
    if (static_cast<unsigned long long>(count) > kDefaultMaxTaps) {
        throw ConfigError("tap file has " + std::to_string(count) + " taps, more than " +
                          std::to_string(kDefaultMaxTaps));
    }
    if (count % 2 == 0) throw ParseError("tap count must be odd (linear-phase, integer delay)");
    FirFilter f;
    f.taps.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        double re = 0.0, im = 0.0;
        if (!(is >> re >> im)) {
            throw ParseError("tap file truncated at tap " + std::to_string(i));
        }
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw ParseError("non-finite value at tap " + std::to_string(i));
        }
        f.taps.emplace_back(re, im);
    }
    std::string extra;
    if (is >> extra) throw ParseError("trailing data after the last tap");
    f.spec.order = static_cast<std::uint32_t>(count - 1);
    f.spec.window = WindowKind::External;
    const auto ml = mainlobe_width(f.taps);
    f.mainlobe_samples = ml.samples;
    f.mainlobe_bounded = ml.bounded;
    return f;
}

FirFilter import_taps(const std::filesystem::path& path) {
    FirFilter f = parse_taps(read_text_file(path));
    // Lag-1 autocorrelation rotates by 2π·fc/fs for a frequency-shifted low-pass.
    cdouble r1{};
    for (std::size_t n = 0; n + 1 < f.taps.size(); ++n) r1 += f.taps[n + 1] * std::conj(f.taps[n]);
    const double fs = 1.0;
    const double centre = std::abs(r1) > 0.0 ? std::arg(r1) / (2.0 * kPi) : 0.0;
    const cdouble g = f.response_at(centre, fs);
    if (std::abs(g) == 0.0) throw SignalError("imported filter has zero gain at its centre");
    for (auto& t : f.taps) t /= g;
    f.spec.center_offset_hz = centre;  // normalised frequency, cycles per sample
    return f;
}

std::size_t resolvable_bins(const FirFilter& f, std::size_t n_points, double threshold_db) {
    const auto r = frequency_response(f, n_points, 1.0);
    const double peak = *std::max_element(r.magnitude_db.begin(), r.magnitude_db.end());
    return static_cast<std::size_t>(std::count_if(r.magnitude_db.begin(), r.magnitude_db.end(),
                                                  [&](double m) { return m >= peak - threshold_db; }));
}

} // namespace wlab
