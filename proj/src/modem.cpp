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

#include "wlab/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wlab/error.hpp"
#include "wlab/fft.hpp"

namespace wlab {

namespace {

// LTE Gray recursion on one axis: code bits c0..c_{k-1} (c0 is the sign).
double axis_level(std::uint32_t code, int k) {
    // Innermost term uses the last code bit: mag_i = 2^i - s(c_{k-i}) * mag_{i-1}.
    double mag = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
        const int b = static_cast<int>((code >> (i - 1)) & 1u);
        mag = static_cast<double>(1 << i) - (1 - 2 * b) * mag;
    }
    const int sign_bit = static_cast<int>((code >> (k - 1)) & 1u);
    return (1 - 2 * sign_bit) * mag;
}

double scale_for(Modulation m) {
    switch (m) {
    case Modulation::Qpsk: return 1.0 / std::sqrt(2.0);
    case Modulation::Qam16: return 1.0 / std::sqrt(10.0);
    case Modulation::Qam64: return 1.0 / std::sqrt(42.0);
    }
    return 0.0;
}

struct AxisTable {
    int k = 0;
    std::vector<double> levels;  // indexed by axis code
};

AxisTable make_axis(Modulation m) {
    AxisTable t;
    t.k = bits_per_symbol(m) / 2;
    const double s = scale_for(m);
    t.levels.resize(std::size_t{1} << t.k);
    for (std::uint32_t c = 0; c < t.levels.size(); ++c) t.levels[c] = axis_level(c, t.k) * s;
    return t;
}

const AxisTable& axis(Modulation m) {
    static const AxisTable q = make_axis(Modulation::Qpsk);
    static const AxisTable q16 = make_axis(Modulation::Qam16);
    static const AxisTable q64 = make_axis(Modulation::Qam64);
    switch (m) {
    case Modulation::Qpsk: return q;
    case Modulation::Qam16: return q16;
    case Modulation::Qam64: return q64;
    }
    return q;
}

// Nearest level; strict comparison over ascending codes keeps the lower code on ties.
std::uint32_t nearest_code(const AxisTable& t, double v) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t c = 0; c < t.levels.size(); ++c) {
        const double d = std::abs(v - t.levels[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::vector<cdouble> make_constellation(Modulation m) {
    const int bps = bits_per_symbol(m);
    std::vector<cdouble> pts(std::size_t{1} << bps);
    std::vector<std::uint8_t> bits(bps);
    for (std::uint32_t label = 0; label < pts.size(); ++label) {
        for (int i = 0; i < bps; ++i) bits[i] = static_cast<std::uint8_t>((label >> (bps - 1 - i)) & 1u);
        pts[label] = qam_map(bits, m)[0];
    }
    return pts;
}

double inv_sqrt(std::uint32_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

std::size_t wrap_bin(std::int64_t bin, std::uint32_t n) {
    const auto nn = static_cast<std::int64_t>(n);
    return static_cast<std::size_t>(((bin % nn) + nn) % nn);
}

} // namespace

const std::vector<cdouble>& constellation(Modulation m) {
    static const std::vector<cdouble> q = make_constellation(Modulation::Qpsk);
    static const std::vector<cdouble> q16 = make_constellation(Modulation::Qam16);
    static const std::vector<cdouble> q64 = make_constellation(Modulation::Qam64);
    switch (m) {
    case Modulation::Qpsk: return q;
    case Modulation::Qam16: return q16;
    case Modulation::Qam64: return q64;
    }
    return q;
}

std::vector<cdouble> qam_map(std::span<const std::uint8_t> bits, Modulation m) {
    const auto bps = static_cast<std::size_t>(bits_per_symbol(m));
    if (bits.size() % bps != 0) {
        throw ConfigError("bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                          std::to_string(bps));
    }
    const AxisTable& t = axis(m);
    std::vector<cdouble> out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto* b = bits.data() + s * bps;
        std::uint32_t ci = 0, cq = 0;
        for (int i = 0; i < t.k; ++i) {
            ci = (ci << 1) | (b[2 * i] & 1u);
            cq = (cq << 1) | (b[2 * i + 1] & 1u);
        }
        out[s] = {t.levels[ci], t.levels[cq]};
    }
    return out;
}

std::vector<std::uint8_t> qam_demap(std::span<const cdouble> symbols, Modulation m) {
    const AxisTable& t = axis(m);
    const auto bps = static_cast<std::size_t>(bits_per_symbol(m));
    std::vector<std::uint8_t> out(symbols.size() * bps);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const std::uint32_t ci = nearest_code(t, symbols[s].real());
        const std::uint32_t cq = nearest_code(t, symbols[s].imag());
        auto* b = out.data() + s * bps;
        for (int i = 0; i < t.k; ++i) {
            b[2 * i] = static_cast<std::uint8_t>((ci >> (t.k - 1 - i)) & 1u);
            b[2 * i + 1] = static_cast<std::uint8_t>((cq >> (t.k - 1 - i)) & 1u);
        }
    }
    return out;
}

ToneLayout ToneLayout::centered(std::size_t tones) {
    return {tones, -static_cast<std::int64_t>(tones / 2)};
}

SignalBuffer ofdm_modulate(const ResourceGrid& grid, const Numerology& n, const ToneLayout& layout) {
    if (grid.tones() > n.fft_size) throw ConfigError("resource grid is wider than the FFT");
    if (layout.tones != grid.tones()) throw SignalError("tone layout does not match the grid");
    const std::size_t nfft = n.fft_size;
    const std::size_t cp = n.cp_samples;
    const std::size_t sym_len = nfft + cp;
    const double scale = inv_sqrt(n.fft_size);
    SignalBuffer out;
    out.sample_rate_hz = n.sample_rate_hz();
    out.samples.resize(grid.symbols() * sym_len);
    std::vector<cdouble> buf(nfft);
    for (std::size_t s = 0; s < grid.symbols(); ++s) {
        std::fill(buf.begin(), buf.end(), cdouble{});
        const auto col = grid.symbol(s);
        for (std::size_t t = 0; t < col.size(); ++t) buf[wrap_bin(layout.bin(t), n.fft_size)] = col[t];
        fft::inverse(buf, buf);
        auto* dst = out.samples.data() + s * sym_len;
        for (std::size_t i = 0; i < cp; ++i) dst[i] = buf[nfft - cp + i] * scale;
        for (std::size_t i = 0; i < nfft; ++i) dst[cp + i] = buf[i] * scale;
    }
    return out;
}

SignalBuffer ofdm_modulate(const ResourceGrid& grid, const Numerology& n) {
    return ofdm_modulate(grid, n, ToneLayout::centered(grid.tones()));
}

ResourceGrid ofdm_demodulate(const SignalBuffer& sig, const Numerology& n, const ToneLayout& layout,
                             std::size_t window_advance) {
    if (window_advance > 0 && window_advance >= n.cp_samples) {
        throw ConfigError("window advance must be shorter than the cyclic prefix");
    }
    if (layout.tones == 0 || layout.tones > n.fft_size) throw ConfigError("tone layout does not fit the FFT");
    const std::size_t nfft = n.fft_size;
    const std::size_t sym_len = nfft + n.cp_samples;
    const std::size_t symbols = sig.size() / sym_len;
    if (symbols == 0) throw SignalError("signal is shorter than one OFDM symbol");
    const double scale = inv_sqrt(n.fft_size);
    ResourceGrid grid(layout.tones, symbols);
    std::vector<cdouble> buf(nfft);
    for (std::size_t s = 0; s < symbols; ++s) {
        const std::size_t start = s * sym_len + n.cp_samples - window_advance;
        std::copy_n(sig.samples.begin() + static_cast<std::ptrdiff_t>(start), nfft, buf.begin());
        fft::forward(buf, buf);
        auto col = grid.symbol(s);
        for (std::size_t t = 0; t < layout.tones; ++t) col[t] = buf[wrap_bin(layout.bin(t), n.fft_size)] * scale;
    }
    return grid;
}

std::vector<cdouble> window_advance_response(const ToneLayout& layout, std::uint32_t fft_size,
                                             std::size_t window_advance) {
    std::vector<cdouble> r(layout.tones);
    for (std::size_t t = 0; t < layout.tones; ++t) {
        // Reduce k·a mod N in integers so the phase stays exact for large products.
        const auto n = static_cast<std::int64_t>(fft_size);
        const std::int64_t ka = ((layout.bin(t) % n) * static_cast<std::int64_t>(window_advance % fft_size)) % n;
        const double ph = -2.0 * std::numbers::pi * static_cast<double>(ka) / static_cast<double>(fft_size);
        r[t] = {std::cos(ph), std::sin(ph)};
    }
    return r;
}

EqualizedGrid equalize(const ResourceGrid& grid, const EqualizerState& eq) {
    if (eq.estimates.size() != grid.tones()) throw SignalError("equalizer length does not match the grid");
    EqualizedGrid out{ResourceGrid(grid.tones(), grid.symbols()), std::vector<bool>(grid.tones(), false)};
    for (std::size_t t = 0; t < grid.tones(); ++t) {
        const cdouble h = eq.estimates[t];
        if (std::abs(h) == 0.0) {
            out.erased[t] = true;
            continue;
        }
        for (std::size_t s = 0; s < grid.symbols(); ++s) out.grid.at(t, s) = grid.at(t, s) / h;
    }
    return out;
}

void EvmAccumulator::add(const ResourceGrid& reference, const ResourceGrid& received,
                         std::span<const bool> tone_mask) {
    if (reference.tones() != received.tones() || reference.symbols() != received.symbols()) {
        throw SignalError("EVM grids differ in shape");
    }
    if (!tone_mask.empty() && tone_mask.size() != reference.tones()) {
        throw SignalError("EVM tone mask does not match the grid");
    }
    for (std::size_t s = 0; s < reference.symbols(); ++s) {
        const auto ref = reference.symbol(s);
        const auto rx = received.symbol(s);
        for (std::size_t t = 0; t < ref.size(); ++t) {
            if (!tone_mask.empty() && !tone_mask[t]) continue;
            const double p = std::norm(ref[t]);
            if (p == 0.0) continue;
            reference_power += p;
            error_power += std::norm(rx[t] - ref[t]);
            ++cells;
        }
    }
}

void EvmAccumulator::merge(const EvmAccumulator& other) {
    error_power += other.error_power;
    reference_power += other.reference_power;
    cells += other.cells;
}

double EvmAccumulator::db() const {
    if (reference_power == 0.0) throw SignalError("EVM reference is all zero");
    if (error_power == 0.0) return kEvmFloorDb;
    return std::max(kEvmFloorDb, 10.0 * std::log10(error_power / reference_power));
}

double evm_db(const ResourceGrid& reference, const ResourceGrid& received) {
    EvmAccumulator acc;
    acc.add(reference, received);
    return acc.db();
}

BitErrorCount ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits) {
    if (tx_bits.size() != rx_bits.size()) throw SignalError("bit streams differ in length");
    BitErrorCount c;
    c.total = tx_bits.size();
    for (std::size_t i = 0; i < tx_bits.size(); ++i) c.errors += (tx_bits[i] & 1u) != (rx_bits[i] & 1u);
    return c;
}

} // namespace wlab
