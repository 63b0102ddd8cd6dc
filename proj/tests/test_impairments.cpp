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

#include "oracles.hpp"
#include "wlab/error.hpp"
#include "wlab/impairments.hpp"
#include "wlab/metrics.hpp"
#include "wlab/modem.hpp"
#include "wlab/rng.hpp"

using namespace wlab;

namespace {

SignalBuffer ofdm_burst(std::size_t tones, std::size_t symbols, const Numerology& n, std::uint64_t seed) {
    RngStream rng(seed, "bits");
    std::vector<std::uint8_t> bits(tones * symbols * 2);
    for (auto& b : bits) b = rng.bit();
    ResourceGrid g(tones, symbols);
    const auto pts = qam_map(bits, Modulation::Qpsk);
    std::copy(pts.begin(), pts.end(), g.cells().begin());
    return ofdm_modulate(g, n);
}

} // namespace

TEST_CASE("AWGN hits the requested SNR against measured power") {
    const Numerology n{15e3, 512, 36, 14};
    const auto sig = ofdm_burst(300, 140, n, 1);
    for (double snr : {0.0, 10.0, 30.0}) {
        CAPTURE(snr);
        RngStream rng(7, "noise");
        const auto noisy = awgn(sig, snr, rng);
        REQUIRE(noisy.size() == sig.size());
        double np = 0.0;
        for (std::size_t i = 0; i < sig.size(); ++i) np += std::norm(noisy.samples[i] - sig.samples[i]);
        np /= static_cast<double>(sig.size());
        const double measured = 10 * std::log10(sig.mean_power() / np);
        CHECK(std::abs(measured - snr) < 0.1);
    }
    RngStream rng(7, "noise");
    const auto same = awgn(sig, std::nullopt, rng);
    CHECK(same.samples == sig.samples);
    SignalBuffer silent{std::vector<cdouble>(64), 7.68e6};
    CHECK_THROWS_AS(awgn(silent, 10.0, rng), SignalError);
    CHECK_THROWS_AS(add_noise(sig, -1.0, rng), ConfigError);
}

TEST_CASE("noise is reproducible per seed") {
    SignalBuffer x{std::vector<cdouble>(1000, 1.0), 7.68e6};
    RngStream a(3, "noise"), b(3, "noise"), c(4, "noise");
    CHECK(awgn(x, 5.0, a).samples == awgn(x, 5.0, b).samples);
    CHECK(awgn(x, 5.0, a).samples != awgn(x, 5.0, c).samples);
}

TEST_CASE("TDL profile parsing") {
    const auto p = parse_tdl_profile("tdl v1 Two\n# comment\n\n0 0\n1000 -3.0103\n");
    CHECK(p.name == "Two");
    REQUIRE(p.taps.size() == 2);
    CHECK(p.max_delay_ns() == 1000.0);
    CHECK_THROWS_AS(parse_tdl_profile(""), ParseError);
    CHECK_THROWS_AS(parse_tdl_profile("tdl v1 X\n"), ParseError);
    CHECK_THROWS_AS(parse_tdl_profile("tdl v1 X\n10 0\n0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_tdl_profile("tdl v1 X\n0 zero\n"), ParseError);
    CHECK_THROWS_AS(parse_tdl_profile("chan X\n0 0\n"), ParseError);
    CHECK_THROWS_AS(find_tdl_profile("nope"), ConfigError);
}

TEST_CASE("shipped profiles are power-normalised") {
    for (const char* name : {"EPA", "EVA", "ETU", "eva"}) {
        CAPTURE(name);
        REQUIRE(tdl_profile_exists(name));
        const auto p = find_tdl_profile(name);
        CHECK(p.total_linear_power() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(find_tdl_profile("EVA").max_delay_ns() == 2510.0);
    CHECK(find_tdl_profile("ETU").max_delay_ns() == 5000.0);
    CHECK_FALSE(tdl_profile_exists(""));
}

TEST_CASE("single-tap channel is a complex scalar") {
    const auto p = parse_tdl_profile("tdl v1 One\n0 0\n");
    RngStream rng(1, "ch");
    SignalBuffer x{std::vector<cdouble>{1.0, 2.0, cdouble{0, 1}}, 7.68e6};
    const auto r = apply_tdl(x, p, rng);
    REQUIRE(r.signal.size() == 3);
    const cdouble g = r.channel.gains[0];
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r.signal.samples[i] - g * x.samples[i]) < 1e-15);
}

TEST_CASE("two-tap channel matches the oracle convolution") {
    const auto p = parse_tdl_profile("tdl v1 Two\n0 0\n1000 -3\n");
    RngStream rng(2, "ch");
    const auto ch = draw_tdl(p, 7.68e6, rng, 36);
    REQUIRE(ch.delays_samples == std::vector<std::size_t>{0, 8});
    CHECK(ch.rounding_error_samples[1] == doctest::Approx(-0.32));
    CHECK_FALSE(ch.exceeds_cp_budget);
    CHECK(draw_tdl(p, 7.68e6, rng, 4).exceeds_cp_budget);
    RngStream sig_rng(3, "x");
    SignalBuffer x{std::vector<cdouble>(200), 7.68e6};
    for (auto& s : x.samples) s = sig_rng.complex_normal(1.0);
    std::vector<cdouble> h(9);
    h[0] = ch.gains[0];
    h[8] = ch.gains[1];
    const auto y = apply_channel(x, ch);
    CHECK(oracle::rel_l2(y.samples, oracle::convolve(x.samples, h)) < 1e-14);
    CHECK(std::abs(ch.response_at(1e5, 7.68e6) - oracle::response(h, 1e5, 7.68e6) *
                                                    std::polar(1.0, -2 * oracle::kPi * 1e5 * 4 / 7.68e6)) < 1e-12);
}

TEST_CASE("tap gains follow the profile powers on average") {
    const auto p = find_tdl_profile("EPA");
    RngStream rng(4, "ch");
    std::vector<double> acc(p.taps.size(), 0.0);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        const auto ch = draw_tdl(p, 30.72e6, rng);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(ch.gains[k]);
    }
    for (std::size_t k = 0; k < acc.size(); ++k) {
        const double want = std::pow(10.0, p.taps[k].power_db / 10.0);
        CHECK(acc[k] / draws == doctest::Approx(want).epsilon(0.05));
    }
}

TEST_CASE("OFDM over a TDL channel inside the CP equalises to the floor") {
    const Numerology n{15e3, 2048, 144, 14};
    const std::size_t tones = 600;
    RngStream bits(5, "bits");
    std::vector<std::uint8_t> b(tones * 14 * 4);
    for (auto& v : b) v = bits.bit();
    ResourceGrid g(tones, 14);
    const auto pts = qam_map(b, Modulation::Qam16);
    std::copy(pts.begin(), pts.end(), g.cells().begin());
    const auto layout = ToneLayout::centered(tones);
    const auto tx = ofdm_modulate(g, n, layout);
    RngStream rng(6, "ch");
    const auto r = apply_tdl(tx, find_tdl_profile("EVA"), rng, n.cp_samples);
    REQUIRE_FALSE(r.channel.exceeds_cp_budget);
    SignalBuffer cut{{r.signal.samples.begin(), r.signal.samples.begin() + tx.size()}, tx.sample_rate_hz};
    const auto rx = ofdm_demodulate(cut, n, layout);
    EqualizerState eq;
    for (std::size_t t = 0; t < tones; ++t) {
        eq.estimates.push_back(r.channel.response_at(layout.bin(t) * 15e3, 30.72e6));
    }
    CHECK(evm_db(g, equalize(rx, eq).grid) <= -60.0);
}

TEST_CASE("Rapp PA properties") {
    CHECK(rapp_amplitude(0.0, 1.0, 2.0) == 0.0);
    CHECK(rapp_amplitude(1.0, 1.0, 2.0) == doctest::Approx(std::pow(0.5, 0.25)));
    CHECK(rapp_amplitude(1e-4, 1.0, 2.0) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(rapp_amplitude(100.0, 1.0, 2.0) < 1.0);
    CHECK(rapp_amplitude(100.0, 1.0, 2.0) > 0.99);
    double prev = 0.0;
    for (double a = 0.01; a < 10.0; a += 0.01) {
        const double y = rapp_amplitude(a, 1.0, 3.0);
        REQUIRE(y > prev);
        REQUIRE(y <= a);
        prev = y;
    }
    CHECK_THROWS_AS(rapp_amplitude(1.0, 1.0, 0.0), ConfigError);

    SignalBuffer x{{cdouble{3, 4}, cdouble{0, 0}, cdouble{-0.1, 0.2}}, 7.68e6};
    const auto y = pa_rapp(x, 0.0, 2.0);
    CHECK(std::arg(y.samples[0]) == doctest::Approx(std::arg(x.samples[0])));
    CHECK(y.samples[1] == cdouble{});
    CHECK(std::abs(y.samples[0]) < 5.0);
}

TEST_CASE("PA at low backoff regrows the spectrum, high backoff is transparent") {
    const Numerology n{15e3, 512, 36, 14};
    const auto sig = ofdm_burst(144, 280, n, 8);
    const FrequencyBand band{-72 * 15e3, 72 * 15e3};
    const std::vector<double> off{1e6};
    auto leak = [&](const SignalBuffer& s) {
        const FrequencyBand ib[] = {band};
        return oobe(psd_welch(s, 1024, 0.5, ib), band, off)[0];
    };
    const double clean = leak(sig);
    const double mild = leak(pa_rapp(sig, 30.0, 2.0));
    const double hard = leak(pa_rapp(sig, 3.0, 2.0));
    CHECK(mild < clean + 1.0);
    CHECK(hard > clean + 3.0);
}
