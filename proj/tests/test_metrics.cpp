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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "wlab/error.hpp"
#include "wlab/experiments.hpp"
#include "wlab/metrics.hpp"
#include "wlab/rng.hpp"
#include "wlab/scenario_io.hpp"

using namespace wlab;

namespace {

SignalBuffer tone(double f, double fs, std::size_t n, double amp = 1.0) {
    SignalBuffer x{std::vector<cdouble>(n), fs};
    for (std::size_t i = 0; i < n; ++i) x.samples[i] = std::polar(amp, 2 * oracle::kPi * f * i / fs);
    return x;
}

std::size_t peak_bin(const PsdEstimate& p) {
    return static_cast<std::size_t>(std::max_element(p.power_linear.begin(), p.power_linear.end()) -
                                    p.power_linear.begin());
}

} // namespace

TEST_CASE("PSD of a tone peaks at the tone frequency") {
    const double fs = 7.68e6;
    const double f = 100 * fs / 1024;
    const auto p = psd_welch(tone(f, fs, 16384, 2.0), 1024);
    REQUIRE(p.freqs_hz.size() == 1024);
    CHECK(p.freqs_hz[peak_bin(p)] == doctest::Approx(f));
    CHECK(p.freqs_hz.front() == doctest::Approx(-fs / 2));
    const double total = std::accumulate(p.power_linear.begin(), p.power_linear.end(), 0.0);
    CHECK(total == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(p.power_dbr[peak_bin(p) + 10] < -100.0);
}

TEST_CASE("white noise gives a flat PSD whose bins sum to its power") {
    RngStream rng(1, "psd");
    SignalBuffer x{std::vector<cdouble>(1 << 18), 7.68e6};
    for (auto& s : x.samples) s = rng.complex_normal(0.5);
    const auto p = psd_welch(x, 512);
    const double total = std::accumulate(p.power_linear.begin(), p.power_linear.end(), 0.0);
    CHECK(total == doctest::Approx(x.mean_power()).epsilon(0.01));
    double worst = 0.0;
    for (double d : p.power_dbr) worst = std::max(worst, std::abs(d));
    CHECK(worst < 1.0);
    for (std::size_t i = 1; i < p.freqs_hz.size(); ++i) REQUIRE(p.freqs_hz[i] > p.freqs_hz[i - 1]);
}

TEST_CASE("PSD input checks") {
    SignalBuffer zero{std::vector<cdouble>(4096), 7.68e6};
    const auto p = psd_welch(zero, 1024);
    CHECK(std::isinf(p.power_dbr[0]));
    CHECK(p.power_dbr[0] < 0);
    CHECK_THROWS_AS(psd_welch(zero, 4096), SignalError);
    CHECK_THROWS_AS(psd_welch(zero, 1), ConfigError);
    CHECK_THROWS_AS(psd_welch(zero, 1024, 1.0), ConfigError);
    CHECK_THROWS_AS(psd_welch(SignalBuffer{std::vector<cdouble>(4096), 0.0}, 1024), SignalError);
    const FrequencyBand nowhere[] = {{1e9, 2e9}};
    CHECK_THROWS_AS(psd_welch(tone(1e5, 7.68e6, 4096), 1024, 0.5, nowhere), ConfigError);
}

TEST_CASE("OOBE pools both sides and respects Nyquist") {
    PsdEstimate p;
    p.sample_rate_hz = 1000.0;
    for (int i = -500; i < 500; i += 10) {
        p.freqs_hz.push_back(i);
        p.power_dbr.push_back(i == 200 ? 0.0 : (i == -200 ? -100.0 : -300.0));
        p.power_linear.push_back(0.0);
    }
    const FrequencyBand band{-100, 100};
    const double off[] = {100.0};
    const auto v = oobe(p, band, off, 5.0);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == doctest::Approx(10 * std::log10((1.0 + 1e-10) / 2)));
    const double far[] = {399.0};
    CHECK_THROWS_AS(oobe(p, band, far, 5.0), ConfigError);
    const double neg[] = {-1.0};
    CHECK_THROWS_AS(oobe(p, band, neg, 5.0), ConfigError);
    CHECK_THROWS_AS(oobe(p, band, off, 0.0), ConfigError);
    const double between[] = {105.0};
    CHECK_THROWS_AS(oobe(p, band, between, 1.0), ConfigError);
}

TEST_CASE("OOBE offsets scale with the sample rate") {
    const FrequencyBand b30{-10e6, 10e6};
    const auto full = oobe_offsets_for(30.72e6, b30);
    CHECK(full == std::vector<double>{0.5e6, 1e6, 2e6});
    const FrequencyBand b7{-3.5e6, 3.5e6};
    const auto desk = oobe_offsets_for(7.68e6, b7);
    REQUIRE(desk.size() == 2);
    CHECK(desk[0] == doctest::Approx(0.125e6));
    CHECK(desk[1] == doctest::Approx(0.25e6));
}

TEST_CASE("PSD CSV format") {
    const auto p = psd_welch(tone(1e5, 7.68e6, 4096), 1024);
    const auto csv = psd_csv(p);
    CHECK(csv.rfind("freq_hz,power_dbr\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1025);
    CHECK(csv.find("-3840000.000,") != std::string::npos);
}

TEST_CASE("throughput arithmetic") {
    const ThroughputEntry lte{"lte", 15e3, 512 / 30.72e6, 0.9, 1.0};
    CHECK(throughput_row(lte).normalized_throughput == doctest::Approx(0.72).epsilon(1e-12));
    CHECK(throughput_row(lte).cp_overhead_fraction == doctest::Approx(0.2).epsilon(1e-12));
    const ThroughputEntry ped{"ped", 3.75e3, 2.6e-6, 1.0, 0.25};
    CHECK(std::abs(throughput_row(ped).normalized_throughput - 0.99035) < 1e-5);

    const ThroughputEntry same[] = {lte};
    const auto flat = normalized_throughput(same, same);
    CHECK(flat.gain_percent == 0.0);

    // Monotone: longer CP, lower throughput.
    double prev = 1.0;
    for (double cp_us : {0.0, 1.0, 2.0, 5.0, 10.0}) {
        const double t = throughput_row({"x", 15e3, cp_us * 1e-6, 1.0, 1.0}).normalized_throughput;
        REQUIRE(t <= prev);
        prev = t;
    }
    CHECK_THROWS_AS(throughput_row({"x", 0.0, 0.0, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(throughput_row({"x", 15e3, -1.0, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(throughput_row({"x", 15e3, 0.0, 1.5, 1.0}), ConfigError);
    CHECK_THROWS_AS(throughput_row({"x", 15e3, 0.0, 1.0, -0.1}), ConfigError);
    const ThroughputEntry none[] = {{"z", 15e3, 0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(normalized_throughput(none, same), ConfigError);
}

TEST_CASE("shipped throughput preset") {
    const auto preset = parse_throughput_preset(read_text_file(preset_dir() / "throughput-four-scenario.json"));
    REQUIRE(preset.baseline.size() == 1);
    REQUIRE(preset.fofdm.size() == 4);
    const auto r = normalized_throughput(preset.baseline, preset.fofdm);
    CHECK(r.baseline_total == doctest::Approx(0.72).epsilon(1e-9));
    CHECK(r.gain_percent >= 25.0);
    CHECK(r.gain_percent <= 46.0);
    // Oracle: share-weighted sum of T/(T+cp).
    double want = 0.0;
    for (const auto& e : preset.fofdm) want += e.bandwidth_share * (1 / e.scs_hz) / (1 / e.scs_hz + e.cp_duration_s);
    CHECK(r.fofdm_total == doctest::Approx(want).epsilon(1e-12));
    const auto csv = throughput_csv(r);
    CHECK(csv.rfind("scheme,subband,bandwidth_share,data_tone_fraction,cp_overhead_fraction,normalized_throughput\n", 0) == 0);
    CHECK(csv.find("gain_percent,total") != std::string::npos);
    CHECK_THROWS_AS(parse_throughput_preset("{\"name\":\"x\",\"baseline\":[],\"fofdm\":[],\"extra\":1}"), ParseError);
    CHECK_THROWS_AS(parse_throughput_preset("not json"), ParseError);
}
