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

#include "wlab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "wlab/error.hpp"

namespace wlab {

int bits_per_symbol(Modulation m) {
    switch (m) {
    case Modulation::Qpsk: return 2;
    case Modulation::Qam16: return 4;
    case Modulation::Qam64: return 6;
    }
    return 0;
}

std::string_view to_string(Modulation m) {
    switch (m) {
    case Modulation::Qpsk: return "QPSK";
    case Modulation::Qam16: return "QAM16";
    case Modulation::Qam64: return "QAM64";
    }
    return "?";
}

std::optional<Modulation> parse_modulation(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "QPSK") return Modulation::Qpsk;
    if (s == "QAM16" || s == "16QAM") return Modulation::Qam16;
    if (s == "QAM64" || s == "64QAM") return Modulation::Qam64;
    return std::nullopt;
}

std::string_view to_string(WindowKind w) {
    switch (w) {
    case WindowKind::Hann: return "hann";
    case WindowKind::Rrc: return "rrc";
    case WindowKind::External: return "external";
    }
    return "?";
}

bool ValidationReport::has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        if (i) os << "; ";
        if (v.subband) os << "subband " << *v.subband << ": ";
        os << v.code << " (" << v.message << ")";
    }
    return os.str();
}

namespace {

void add(ValidationReport& r, std::optional<std::size_t> idx, std::string code, std::string msg) {
    r.violations.push_back({idx, std::move(code), std::move(msg)});
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

ValidationReport validate_scenario(const ScenarioConfig& cfg) {
    ValidationReport r;
    const double fs = cfg.sample_rate_hz;
    if (!(finite(fs) && fs > 0.0)) {
        add(r, std::nullopt, "sample_rate", "sample_rate_hz must be positive");
    }
    if (!(finite(cfg.total_bandwidth_hz) && cfg.total_bandwidth_hz > 0.0)) {
        add(r, std::nullopt, "bandwidth", "total_bandwidth_hz must be positive");
    } else if (finite(fs) && fs > 0.0 && cfg.total_bandwidth_hz > fs) {
        add(r, std::nullopt, "bandwidth", "total_bandwidth_hz exceeds the sample rate");
    }
    if (cfg.subbands.empty()) {
        add(r, std::nullopt, "no_subbands", "scenario has no subbands");
    }
    const auto& fset = cfg.filter;
    if (fset.order == 0 || fset.order % 2 != 0) {
        add(r, std::nullopt, "filter_order", "filter order must be even and positive");
    }
    if (static_cast<std::uint64_t>(fset.order) + 1 > fset.max_taps) {
        add(r, std::nullopt, "filter_order", "filter order + 1 exceeds max_taps");
    }
    if (fset.window == WindowKind::Rrc && !(fset.rolloff > 0.0 && fset.rolloff <= 1.0)) {
        add(r, std::nullopt, "filter_rolloff", "rolloff must lie in (0, 1]");
    }
    if (fset.window == WindowKind::External) {
        add(r, std::nullopt, "filter_window", "external taps cannot be designed per subband");
    }
    if (!(finite(fset.excess_tones) && fset.excess_tones >= 0.0)) {
        add(r, std::nullopt, "filter_excess", "excess_tones must be nonnegative");
    }
    const auto& imp = cfg.impairments;
    if (imp.snr_db && !finite(*imp.snr_db)) {
        add(r, std::nullopt, "snr", "snr_db must be finite or off");
    }
    if (imp.pa.enabled && !(imp.pa.smoothness > 0.0 && finite(imp.pa.smoothness))) {
        add(r, std::nullopt, "pa_smoothness", "Rapp smoothness must be positive");
    }
    if (imp.pa.enabled && !finite(imp.pa.input_backoff_db)) {
        add(r, std::nullopt, "pa_backoff", "input backoff must be finite");
    }
    if (imp.channel.kind == ChannelKind::Tdl && imp.channel.profile.empty()) {
        add(r, std::nullopt, "channel_profile", "TDL channel needs a profile name");
    }

    const double half_bw = 0.5 * cfg.total_bandwidth_hz;
    for (std::size_t i = 0; i < cfg.subbands.size(); ++i) {
        const auto& sb = cfg.subbands[i];
        const auto& n = sb.numerology;
        if (sb.width_tones <= 0) {
            add(r, i, "width", "width_tones must be positive");
            continue;
        }
        if (sb.guard_tones_left < 0 || sb.guard_tones_right < 0) {
            add(r, i, "guard", "guard tones must be nonnegative");
        }
        if (!(finite(sb.power_offset_db))) {
            add(r, i, "power_offset", "power_offset_db must be finite");
        }
        if (!(n.scs_hz > 0.0 && finite(n.scs_hz)) || n.fft_size == 0) {
            add(r, i, "numerology", "scs_hz and fft_size must be positive");
            continue;
        }
        if (n.scs_hz * static_cast<double>(n.fft_size) != fs) {
            std::ostringstream os;
            os << "scs×fft ≠ fs: " << n.scs_hz << " × " << n.fft_size << " = "
               << n.scs_hz * n.fft_size << " vs " << fs;
            add(r, i, "scs_fft_mismatch", os.str());
        }
        if (n.cp_samples >= n.fft_size) {
            add(r, i, "cp_length", "cp_samples must be shorter than fft_size");
        }
        if (n.symbols_per_tti == 0) {
            add(r, i, "symbols_per_tti", "symbols_per_tti must be positive");
        }
        const double occupied = sb.width_tones * kReferenceToneHz;
        const double ratio = occupied / n.scs_hz;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
            add(r, i, "width_lattice", "width_tones × 15 kHz is not a multiple of scs_hz");
        } else if (std::round(ratio) > n.fft_size) {
            add(r, i, "width_fft", "subband has more tones than its FFT");
        }
        const double lo = (sb.span_begin() - 0.5) * kReferenceToneHz;
        const double hi = (sb.span_end() - 0.5) * kReferenceToneHz;
        if (finite(half_bw) && (lo < -half_bw - 1e-6 || hi > half_bw + 1e-6)) {
            add(r, i, "out_of_band", "subband (with guards) lies outside total_bandwidth_hz");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const auto& o = cfg.subbands[j];
            if (o.width_tones <= 0) continue;
            if (sb.span_begin() < o.span_end() && o.span_begin() < sb.span_end()) {
                std::ostringstream os;
                os << "overlap with subband " << j;
                add(r, i, "overlap", os.str());
            }
        }
    }
    return r;
}

void require_valid(const ScenarioConfig& cfg) {
    auto report = validate_scenario(cfg);
    if (!report.ok()) {
        throw ConfigError("invalid scenario: " + report.summary());
    }
}

std::uint32_t shortest_fft(const ScenarioConfig& cfg) {
    std::uint32_t best = 0;
    for (const auto& sb : cfg.subbands) {
        if (best == 0 || sb.numerology.fft_size < best) best = sb.numerology.fft_size;
    }
    return best;
}

} // namespace wlab
