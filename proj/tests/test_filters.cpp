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
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "wlab/error.hpp"
#include "wlab/fft.hpp"
#include "wlab/filters.hpp"
#include "wlab/rng.hpp"

using namespace wlab;

namespace {

constexpr double kFs = 30.72e6;

FirFilter design(std::uint32_t order, double width, double centre = 0.0, double fs = kFs,
                 WindowKind w = WindowKind::Hann) {
    FilterSpec s;
    s.order = order;
    s.passband_width_hz = width;
    s.center_offset_hz = centre;
    s.window = w;
    return design_windowed_sinc(s, fs);
}

SignalBuffer random_signal(std::size_t n, RngStream& rng, double fs = kFs) {
    SignalBuffer x{std::vector<cdouble>(n), fs};
    for (auto& s : x.samples) s = rng.complex_normal(1.0);
    return x;
}

std::vector<cdouble> random_taps(std::size_t n, RngStream& rng) {
    std::vector<cdouble> h(n);
    for (auto& t : h) t = rng.complex_normal(1.0);
    return h;
}

} // namespace

TEST_CASE("order-1024 design for a 720 kHz subband") {
    const auto f = design(1024, 720e3);
    REQUIRE(f.taps.size() == 1025);
    CHECK(f.delay() == 512);
    double max_imag = 0.0, max_asym = 0.0;
    for (std::size_t n = 0; n < f.taps.size(); ++n) {
        max_imag = std::max(max_imag, std::abs(f.taps[n].imag()));
        max_asym = std::max(max_asym, std::abs(f.taps[n] - f.taps[f.taps.size() - 1 - n]));
    }
    CHECK(max_imag == 0.0);
    CHECK(max_asym < 1e-15);
    CHECK(std::abs(f.taps.front()) == doctest::Approx(0.0));
    CHECK(std::abs(f.response_at(0.0, kFs)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("design rejects degenerate parameters") {
    CHECK_THROWS_AS(design(256, kFs), ConfigError);
    CHECK_THROWS_AS(design(256, 0.0), ConfigError);
    CHECK_THROWS_AS(design(255, 1e6), ConfigError);
    CHECK_THROWS_AS(design(0, 1e6), ConfigError);
    CHECK(design(4096, 1e6).taps.size() == kDefaultMaxTaps);
    FilterSpec s;
    s.order = 8192;
    s.passband_width_hz = 1e6;
    CHECK_THROWS_AS(design_windowed_sinc(s, kFs), ConfigError);
    CHECK_THROWS_AS(rrc_window(64, 0.0), ConfigError);
}

TEST_CASE("passband flat and stopband below -40 dB") {
    for (std::uint32_t order : {256u, 512u, 1024u}) {
        CAPTURE(order);
        const double width = 720e3;
        const auto f = design(order, width, 0.0, 7.68e6);
        const double transition = 4.0 * 7.68e6 / order;
        // Oracle response on a dense grid.
        double worst_stop = -1e9;
        for (double fr = width / 2 + 2 * transition; fr < 3.84e6; fr += 997.0) {
            worst_stop = std::max(worst_stop, 20 * std::log10(std::abs(oracle::response(f.taps, fr, 7.68e6))));
        }
        CHECK(worst_stop <= -40.0);
        const auto mid = oracle::response(f.taps, 0.0, 7.68e6);
        CHECK(std::abs(mid) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(mid.imag()) < 1e-12);
    }
}

TEST_CASE("frequency_response agrees with the direct DTFT") {
    const auto f = design(256, 1e6, 1.5e6, 7.68e6);
    const auto r = frequency_response(f, 1024, 7.68e6);
    REQUIRE(r.freqs_hz.size() == 1024);
    CHECK(r.freqs_hz.front() == doctest::Approx(-3.84e6));
    for (std::size_t i = 1; i < r.freqs_hz.size(); ++i) REQUIRE(r.freqs_hz[i] > r.freqs_hz[i - 1]);
    for (std::size_t i = 0; i < r.freqs_hz.size(); i += 37) {
        const auto h = oracle::response(f.taps, r.freqs_hz[i], 7.68e6);
        const double want = 20 * std::log10(std::max(std::abs(h), 1e-300));
        if (want > -200) CHECK(r.magnitude_db[i] == doctest::Approx(want).epsilon(1e-6));
    }
    CHECK(std::abs(f.response_at(1.5e6, 7.68e6)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("in-band tone passes with its amplitude and phase") {
    const auto f = design(512, 1.08e6, 0.0, 7.68e6);
    const double tone = 200e3;
    const std::size_t n = 4096;
    SignalBuffer x{std::vector<cdouble>(n), 7.68e6};
    for (std::size_t i = 0; i < n; ++i) x.samples[i] = std::polar(1.0, 2 * oracle::kPi * tone * i / 7.68e6);
    const auto y = direct_convolve(x, f);
    const auto h = f.response_at(tone, 7.68e6);
    for (std::size_t i = f.taps.size(); i < n; i += 101) {
        CHECK(std::abs(y.samples[i] - h * x.samples[i - f.delay()]) < 1e-10);
    }
    CHECK(std::abs(h) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("mainlobe width follows the cutoff") {
    const auto narrow = design(1024, kFs / 64);
    CHECK(narrow.mainlobe_samples == 128);
    CHECK(narrow.mainlobe_bounded);
    const auto wide = design(1024, kFs / 4);
    CHECK(wide.mainlobe_samples == 8);
    const auto unit = unit_filter();
    CHECK(unit.mainlobe_samples == 1);
    const auto ml = mainlobe_width(unit.taps);
    CHECK(ml.samples == 1);
    // Tiny order: sinc never reaches its first zero inside the window.
    const auto stub = mainlobe_width(design(8, kFs / 64).taps);
    CHECK_FALSE(stub.bounded);
    CHECK(stub.samples == 9);
}

TEST_CASE("overlap-save equals the oracle linear convolution") {
    RngStream rng(5, "ols");
    for (std::size_t taps : {1u, 2u, 3u, 17u, 129u, 1025u}) {
        for (std::size_t len : {1u, 5u, 300u, 5000u}) {
            CAPTURE(taps);
            CAPTURE(len);
            const auto h = random_taps(taps, rng);
            const auto x = random_signal(len, rng);
            const auto want = oracle::convolve(x.samples, h);
            const OverlapSaveKernel k(h, default_block_size(taps));
            const auto got = k.apply(x);
            REQUIRE(got.size() == want.size());
            CHECK(oracle::rel_l2(got.samples, want) < 1e-9);
            CHECK(got.sample_rate_hz == kFs);
            const auto direct = direct_convolve(x, h);
            CHECK(oracle::rel_l2(direct.samples, want) < 1e-12);
        }
    }
}

TEST_CASE("overlap-save edge inputs") {
    const auto f = design(64, 1e6);
    const std::size_t block = default_block_size(f.taps.size());
    CHECK(block >= 2 * f.taps.size());
    CHECK(fft::is_power_of_two(block));
    SignalBuffer impulse{std::vector<cdouble>(1, 1.0), kFs};
    const auto y = overlap_save_convolve(impulse, f, block);
    REQUIRE(y.size() == f.taps.size());
    CHECK(oracle::rel_l2(y.samples, f.taps) < 1e-12);
    SignalBuffer zeros{std::vector<cdouble>(1000), kFs};
    for (const auto& s : overlap_save_convolve(zeros, f, block).samples) REQUIRE(s == cdouble{});
    CHECK(overlap_save_convolve(SignalBuffer{{}, kFs}, f, block).empty());
    CHECK_THROWS_AS(OverlapSaveKernel(f.taps, f.taps.size()), ConfigError);
    CHECK_THROWS_AS(OverlapSaveKernel(std::span<const cdouble>{}, 256), ConfigError);
    const std::vector<cdouble> ones{1.0, 1.0};
    SignalBuffer two{ones, kFs};
    const auto tri = OverlapSaveKernel(ones, 4).apply(two);
    REQUIRE(tri.size() == 3);
    CHECK(std::abs(tri.samples[0] - 1.0) < 1e-12);
    CHECK(std::abs(tri.samples[1] - 2.0) < 1e-12);
    CHECK(std::abs(tri.samples[2] - 1.0) < 1e-12);
}

TEST_CASE("filtering is linear and cannot create energy beyond the peak gain") {
    RngStream rng(8, "lin");
    const auto f = design(256, 2e6, 0.5e6, 7.68e6);
    const OverlapSaveKernel k(f.taps, default_block_size(f.taps.size()));
    const auto a = random_signal(3000, rng, 7.68e6);
    const auto b = random_signal(3000, rng, 7.68e6);
    const cdouble alpha{0.3, -1.2}, beta{2.0, 0.5};
    SignalBuffer mix{std::vector<cdouble>(3000), 7.68e6};
    for (std::size_t i = 0; i < 3000; ++i) mix.samples[i] = alpha * a.samples[i] + beta * b.samples[i];
    const auto ya = k.apply(a), yb = k.apply(b), ym = k.apply(mix);
    std::vector<cdouble> want(ym.size());
    for (std::size_t i = 0; i < want.size(); ++i) want[i] = alpha * ya.samples[i] + beta * yb.samples[i];
    CHECK(oracle::rel_l2(ym.samples, want) < 1e-12);
    const auto r = frequency_response(f, 8192, 7.68e6);
    const double peak = std::pow(10.0, *std::max_element(r.magnitude_db.begin(), r.magnitude_db.end()) / 20.0);
    CHECK(ya.energy() <= peak * peak * a.energy() * (1 + 1e-6));
}

TEST_CASE("tap file round-trip and malformed files") {
    const auto dir = std::filesystem::temp_directory_path() / "wlab_taps_test";
    std::filesystem::create_directories(dir);
    const auto f = design(128, 1e6, 1e6, 7.68e6);
    export_taps(dir / "f.taps", f);
    const auto g = import_taps(dir / "f.taps");
    REQUIRE(g.taps.size() == f.taps.size());
    CHECK(oracle::rel_l2(g.taps, f.taps) < 1e-12);
    CHECK(g.spec.window == WindowKind::External);
    CHECK(g.spec.center_offset_hz == doctest::Approx(1e6 / 7.68e6).epsilon(1e-3));
    CHECK(g.mainlobe_samples == f.mainlobe_samples);

    auto write = [&](const std::string& body) {
        std::ofstream(dir / "bad.taps") << body;
        return dir / "bad.taps";
    };
    CHECK_THROWS_AS(import_taps(write("")), ParseError);
    CHECK_THROWS_AS(import_taps(write("taps v1 3\n1 0\nnan 0\n1 0\n")), ParseError);
    CHECK_THROWS_AS(import_taps(write("taps v1 3\n1 0\n1 0\n")), ParseError);
    CHECK_THROWS_AS(import_taps(write("taps v1 2\n1 0\n1 0\n")), ParseError);
    CHECK_THROWS_AS(import_taps(write("taps v1 1\n1 0\n7\n")), ParseError);
    CHECK_THROWS_AS(import_taps(write("taps v2 1\n1 0\n")), ParseError);
    CHECK_THROWS_AS(import_taps(write("taps v1 5001\n")), ConfigError);
    CHECK_THROWS_AS(import_taps(dir / "missing.taps"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("rrc window shape") {
    const auto w = rrc_window(100, 0.4);
    REQUIRE(w.size() == 101);
    CHECK(w[50] == 1.0);
    CHECK(w[35] == 1.0);  // |x| = 0.3 lies in the flat part
    CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t n = 0; n < 50; ++n) {
        REQUIRE(w[n] == doctest::Approx(w[100 - n]));
        REQUIRE(w[n] <= w[n + 1] + 1e-15);
    }
    const auto rrc = design(256, 1e6, 0.0, 7.68e6, WindowKind::Rrc);
    CHECK(std::abs(rrc.response_at(0.0, 7.68e6)) == doctest::Approx(1.0));
}

TEST_CASE("pruning keeps the passband bins and stays close") {
    RngStream rng(3, "prune");
    const auto f = design(256, 1e6, 0.0, 7.68e6);
    const std::size_t block = default_block_size(f.taps.size());
    const OverlapSaveKernel full(f.taps, block);
    const OverlapSaveKernel pruned(f.taps, block, -60.0);
    CHECK(full.kept_bins() == block);
    CHECK(pruned.kept_bins() < block / 2);
    CHECK(pruned.kept_bins() >= resolvable_bins(f, block, 3.0));
    const auto x = random_signal(4000, rng, 7.68e6);
    CHECK(oracle::rel_l2(pruned.apply(x).samples, full.apply(x).samples) < 1e-2);
}
