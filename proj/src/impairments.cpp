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

#include "wlab/impairments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wlab/error.hpp"
#include "wlab/scenario_io.hpp"

namespace wlab {

SignalBuffer awgn(const SignalBuffer& sig, std::optional<double> snr_db, RngStream& rng) {
    if (!snr_db) return sig;
    if (!std::isfinite(*snr_db)) throw ConfigError("snr_db must be finite");
    const double p = sig.mean_power();
    if (!(p > 0.0)) throw SignalError("cannot calibrate noise against a zero-power signal");
    return add_noise(sig, p * std::pow(10.0, -*snr_db / 10.0), rng);
}

SignalBuffer add_noise(const SignalBuffer& sig, double variance, RngStream& rng) {
    if (!(variance >= 0.0)) throw ConfigError("noise variance must be nonnegative");
    SignalBuffer out = sig;
    if (variance == 0.0) return out;
    for (auto& s : out.samples) s += rng.complex_normal(variance);
    return out;
}

double TdlProfile::total_linear_power() const {
    double sum = 0.0;
    for (const auto& t : taps) sum += std::pow(10.0, t.power_db / 10.0);
    return sum;
}

double TdlProfile::max_delay_ns() const {
    double m = 0.0;
    for (const auto& t : taps) m = std::max(m, t.delay_ns);
    return m;
}

TdlProfile parse_tdl_profile(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    TdlProfile p;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (!header) {
            std::string version;
            if (first != "tdl" || !(ls >> version >> p.name) || version != "v1") {
                throw ParseError("profile must start with 'tdl v1 <name>'");
            }
            header = true;
            continue;
        }
        TdlTap tap;
        std::istringstream row(line);
        std::string extra;
        if (!(row >> tap.delay_ns >> tap.power_db) || (row >> extra)) {
            throw ParseError("profile line " + std::to_string(lineno) + " is not 'delay_ns power_db'");
        }
        if (!std::isfinite(tap.delay_ns) || !std::isfinite(tap.power_db) || tap.delay_ns < 0.0) {
            throw ParseError("profile line " + std::to_string(lineno) + " has an invalid value");
        }
        if (!p.taps.empty() && tap.delay_ns < p.taps.back().delay_ns) {
            throw ParseError("profile delays must be nondecreasing");
        }
        p.taps.push_back(tap);
    }
    if (!header) throw ParseError("empty profile");
    if (p.taps.empty()) throw ParseError("profile '" + p.name + "' has no taps");
    const double norm_db = 10.0 * std::log10(p.total_linear_power());
    for (auto& t : p.taps) t.power_db -= norm_db;
    return p;
}

TdlProfile load_tdl_profile(const std::filesystem::path& path) {
    return parse_tdl_profile(read_text_file(path));
}

namespace {

std::filesystem::path profile_path(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return data_dir() / "profiles" / (lower + ".tdl");
}

} // namespace

TdlProfile find_tdl_profile(std::string_view name) {
    const auto path = profile_path(name);
    if (!std::filesystem::exists(path)) {
        throw ConfigError("unknown channel profile '" + std::string(name) + "'");
    }
    return load_tdl_profile(path);
}

bool tdl_profile_exists(std::string_view name) {
    return !name.empty() && std::filesystem::exists(profile_path(name));
}

std::size_t ChannelSnapshot::max_delay() const {
    std::size_t m = 0;
    for (auto d : delays_samples) m = std::max(m, d);
    return m;
}

cdouble ChannelSnapshot::response_at(double f_hz, double sample_rate_hz) const {
    cdouble acc{};
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const double ph = -2.0 * std::numbers::pi * f_hz * static_cast<double>(delays_samples[i]) / sample_rate_hz;
        acc += gains[i] * cdouble{std::cos(ph), std::sin(ph)};
    }
    return acc;
}

ChannelSnapshot draw_tdl(const TdlProfile& profile, double sample_rate_hz, RngStream& rng,
                         std::optional<std::size_t> cp_budget_samples) {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("channel sample rate must be positive");
    if (profile.taps.empty()) throw ConfigError("channel profile has no taps");
    const double total = profile.total_linear_power();
    ChannelSnapshot ch;
    for (const auto& t : profile.taps) {
        const double exact = t.delay_ns * 1e-9 * sample_rate_hz;
        const double rounded = std::round(exact);
        ch.delays_samples.push_back(static_cast<std::size_t>(rounded));
        ch.rounding_error_samples.push_back(exact - rounded);
        ch.gains.push_back(rng.complex_normal(std::pow(10.0, t.power_db / 10.0) / total));
    }
    if (cp_budget_samples) ch.exceeds_cp_budget = ch.max_delay() > *cp_budget_samples;
    return ch;
}

SignalBuffer apply_channel(const SignalBuffer& sig, const ChannelSnapshot& ch) {
    SignalBuffer out;
    out.sample_rate_hz = sig.sample_rate_hz;
    if (sig.empty()) return out;
    out.samples.assign(sig.size() + ch.max_delay(), cdouble{});
    for (std::size_t i = 0; i < ch.gains.size(); ++i) {
        const std::size_t d = ch.delays_samples[i];
        const cdouble g = ch.gains[i];
        for (std::size_t n = 0; n < sig.size(); ++n) out.samples[n + d] += g * sig.samples[n];
    }
    return out;
}

TdlResult apply_tdl(const SignalBuffer& sig, const TdlProfile& profile, RngStream& rng,
                    std::optional<std::size_t> cp_budget_samples) {
    TdlResult r;
    r.channel = draw_tdl(profile, sig.sample_rate_hz, rng, cp_budget_samples);
    r.signal = apply_channel(sig, r.channel);
    return r;
}

double rapp_amplitude(double amplitude, double saturation, double smoothness) {
    if (!(smoothness > 0.0)) throw ConfigError("Rapp smoothness must be positive");
    if (amplitude == 0.0) return 0.0;
    const double two_p = 2.0 * smoothness;
    return amplitude / std::pow(1.0 + std::pow(amplitude / saturation, two_p), 1.0 / two_p);
}

SignalBuffer pa_rapp(const SignalBuffer& sig, double input_backoff_db, double smoothness) {
    if (!(smoothness > 0.0)) throw ConfigError("Rapp smoothness must be positive");
    SignalBuffer out = sig;
    const double p = sig.mean_power();
    if (!(p > 0.0)) return out;
    const double sat = std::sqrt(p * std::pow(10.0, input_backoff_db / 10.0));
    for (auto& s : out.samples) {
        const double a = std::abs(s);
        if (a > 0.0) s *= rapp_amplitude(a, sat, smoothness) / a;
    }
    return out;
}

} // namespace wlab
