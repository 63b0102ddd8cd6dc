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

#include "wlab/subband_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "wlab/error.hpp"
#include "wlab/rng.hpp"

namespace wlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRbHz = kTonesPerRb * kReferenceToneHz;

cdouble phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

void mix(std::vector<cdouble>& s, double offset_hz, double fs) {
    if (offset_hz == 0.0) return;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] *= phasor(2.0 * kPi * offset_hz * static_cast<double>(i) / fs);
    }
}

} // namespace

std::string_view to_string(Waveform w) { return w == Waveform::Ofdm ? "ofdm" : "fofdm"; }

TailPolicy derive_tail_policy(const FirFilter& f, const Numerology& n, double threshold) {
    const double ml = static_cast<double>(f.mainlobe_samples);
    if (ml <= static_cast<double>(n.cp_samples) * threshold) return {};
    TailPolicy p;
    p.mode = TailMode::ExtendedCp;
    p.extra_cp_samples = f.mainlobe_samples > n.cp_samples ? f.mainlobe_samples - n.cp_samples : 0;
    p.rx_advance_samples = f.mainlobe_samples / 2;
    return p;
}

SubbandPlacement place_subband(const ScenarioConfig& cfg, std::size_t index) {
    if (index >= cfg.subbands.size()) throw ConfigError("subband index out of range");
    const SubbandSpec& sb = cfg.subbands[index];
    const double scs = sb.numerology.scs_hz;
    SubbandPlacement p;
    p.low_edge_hz = sb.low_edge_hz();
    p.high_edge_hz = sb.high_edge_hz();
    const auto tones = static_cast<std::size_t>(std::llround(sb.width_tones * kReferenceToneHz / scs));
    const double first = p.low_edge_hz + 0.5 * scs;
    const double b0 = std::floor(first / scs);
    p.layout = {tones, static_cast<std::int64_t>(b0)};
    p.mix_offset_hz = first - b0 * scs;

    for (std::size_t j = 0; j < cfg.subbands.size(); ++j) {
        if (j == index) continue;
        const auto& o = cfg.subbands[j];
        const int gap_below = sb.start_tone - o.end_tone();
        const int gap_above = o.start_tone - sb.end_tone();
        if (gap_below >= 0 && gap_below < kTonesPerRb) p.neighbour_below = true;
        if (gap_above >= 0 && gap_above < kTonesPerRb) p.neighbour_above = true;
    }
    const double excess = cfg.filter.excess_tones * kReferenceToneHz;
    p.passband_low_hz = p.low_edge_hz - (p.neighbour_below ? 0.0 : excess);
    p.passband_high_hz = p.high_edge_hz + (p.neighbour_above ? 0.0 : excess);

    p.tone_freqs_hz.resize(tones);
    p.edge_tones.assign(tones, false);
    const bool any_neighbour = p.neighbour_below || p.neighbour_above;
    for (std::size_t t = 0; t < tones; ++t) {
        const double f = first + static_cast<double>(t) * scs;
        p.tone_freqs_hz[t] = f;
        const bool low_rb = f < p.low_edge_hz + kRbHz;
        const bool high_rb = f > p.high_edge_hz - kRbHz;
        p.edge_tones[t] = any_neighbour ? (low_rb && p.neighbour_below) || (high_rb && p.neighbour_above)
                                        : low_rb || high_rb;
    }
    return p;
}

std::uint32_t effective_filter_order(const ScenarioConfig& cfg) {
    std::uint32_t order = cfg.filter.order;
    const std::uint32_t cap = shortest_fft(cfg) / 2;
    if (cap > 0) order = std::min(order, cap);
    return order & ~std::uint32_t{1};
}

std::size_t SubbandPlan::payload_bits() const {
    return placement.layout.tones * frame_symbols * static_cast<std::size_t>(bits_per_symbol(spec.modulation));
}

SubbandPlan plan_subband(const ScenarioConfig& cfg, std::size_t index, const PlanOptions& opts) {
    require_valid(cfg);
    if (index >= cfg.subbands.size()) throw ConfigError("subband index out of range");
    SubbandPlan plan;
    plan.index = index;
    plan.spec = cfg.subbands[index];
    plan.waveform = opts.waveform;
    plan.numerology = plan.spec.numerology;
    plan.placement = place_subband(cfg, index);
    plan.sample_rate_hz = cfg.sample_rate_hz;
    plan.frame_symbols = opts.ttis * plan.numerology.symbols_per_tti + opts.extra_symbols;
    if (plan.frame_symbols == 0) throw ConfigError("subband frame has no symbols");
    plan.amplitude = opts.muted ? 0.0 : std::pow(10.0, plan.spec.power_offset_db / 20.0);

    if (opts.waveform == Waveform::Ofdm) {
        plan.filter = unit_filter();
        plan.policy = opts.forced_policy.value_or(TailPolicy{});
    } else {
        FilterSpec fs;
        fs.order = effective_filter_order(cfg);
        fs.passband_width_hz = plan.placement.passband_high_hz - plan.placement.passband_low_hz;
        fs.center_offset_hz = 0.5 * (plan.placement.passband_high_hz + plan.placement.passband_low_hz);
        fs.window = cfg.filter.window;
        fs.rolloff = cfg.filter.rolloff;
        plan.filter = design_windowed_sinc(fs, cfg.sample_rate_hz, cfg.filter.max_taps);
        plan.kernel = std::make_shared<const OverlapSaveKernel>(
            plan.filter.taps, default_block_size(plan.filter.taps.size()), cfg.filter.prune_below_db);
        if (opts.forced_policy) {
            plan.policy = *opts.forced_policy;
        } else if (opts.tail_treatment) {
            plan.policy = derive_tail_policy(plan.filter, plan.numerology, opts.tail_threshold);
        }
    }

    plan.numerology.cp_samples += static_cast<std::uint32_t>(plan.policy.extra_cp_samples);
    if (plan.numerology.cp_samples >= plan.numerology.fft_size) {
        throw ConfigError("extended cyclic prefix reaches the FFT length");
    }
    if (plan.policy.mode == TailMode::ExtendedCp) {
        plan.rx_window_advance = plan.policy.rx_advance_samples;
    } else if (plan.waveform == Waveform::Fofdm) {
        // Mid-CP window: the filter cascade spreads both ways around its delay.
        plan.rx_window_advance = plan.numerology.cp_samples / 2;
    }
    if (plan.rx_window_advance > 0 && plan.rx_window_advance >= plan.numerology.cp_samples) {
        throw ConfigError("receiver window advance must be shorter than the cyclic prefix");
    }
    return plan;
}

std::vector<SubbandPlan> plan_all(const ScenarioConfig& cfg, const PlanOptions& opts) {
    std::vector<SubbandPlan> plans;
    plans.reserve(cfg.subbands.size());
    for (std::size_t i = 0; i < cfg.subbands.size(); ++i) plans.push_back(plan_subband(cfg, i, opts));
    return plans;
}

TxSubband tx_subband(const SubbandPlan& plan, std::span<const std::uint8_t> bits) {
    const std::size_t tones = plan.placement.layout.tones;
    ResourceGrid grid(tones, plan.frame_symbols);
    if (!bits.empty()) {
        if (bits.size() != plan.payload_bits()) {
            throw SignalError("payload has " + std::to_string(bits.size()) + " bits, subband needs " +
                              std::to_string(plan.payload_bits()));
        }
        const auto symbols = qam_map(bits, plan.spec.modulation);
        std::copy(symbols.begin(), symbols.end(), grid.cells().begin());
    }
    SignalBuffer x = ofdm_modulate(grid, plan.numerology, plan.placement.layout);
    x.sample_rate_hz = plan.sample_rate_hz;
    mix(x.samples, plan.placement.mix_offset_hz, plan.sample_rate_hz);

    TxSubband out;
    out.signal = plan.kernel ? plan.kernel->apply(x) : std::move(x);
    if (plan.amplitude != 1.0) {
        for (auto& s : out.signal.samples) s *= plan.amplitude;
    }
    out.artifacts.filter = plan.filter;
    out.artifacts.grid = std::move(grid);
    out.artifacts.bits.assign(bits.begin(), bits.end());
    out.artifacts.filter_delay = plan.filter_delay();
    out.artifacts.amplitude = plan.amplitude;
    return out;
}

SignalBuffer assemble(std::span<const SignalBuffer> signals, std::span<const std::int64_t> offsets) {
    if (signals.size() != offsets.size()) throw ConfigError("one offset per signal is required");
    SignalBuffer out;
    if (signals.empty()) return out;
    out.sample_rate_hz = signals.front().sample_rate_hz;
    std::size_t len = 0;
    for (std::size_t i = 0; i < signals.size(); ++i) {
        require_same_rate(signals.front(), signals[i]);
        if (offsets[i] < 0) throw ConfigError("assembly offsets must be nonnegative");
        len = std::max(len, static_cast<std::size_t>(offsets[i]) + signals[i].size());
    }
    out.samples.assign(len, cdouble{});
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const auto off = static_cast<std::size_t>(offsets[i]);
        const auto& s = signals[i].samples;
        for (std::size_t n = 0; n < s.size(); ++n) out.samples[off + n] += s[n];
    }
    return out;
}

std::vector<cdouble> genie_estimates(const SubbandPlan& plan, const ChannelSnapshot* channel) {
    const auto& pl = plan.placement;
    const auto ramp = window_advance_response(pl.layout, plan.numerology.fft_size, plan.rx_window_advance);
    std::vector<cdouble> est(pl.layout.tones);
    for (std::size_t t = 0; t < est.size(); ++t) {
        const double f = pl.tone_freqs_hz[t];
        cdouble h = plan.amplitude * ramp[t];
        if (plan.kernel) {
            const cdouble a = plan.filter.response_at(f, plan.sample_rate_hz);
            h *= a * a;
        }
        if (channel) h *= channel->response_at(f, plan.sample_rate_hz);
        est[t] = h;
    }
    return est;
}

RxSubband rx_subband(const SignalBuffer& composite, const SubbandPlan& plan, const SubbandTxArtifacts& artifacts,
                     std::int64_t frame_offset, const ChannelSnapshot* channel) {
    if (composite.sample_rate_hz != plan.sample_rate_hz) throw SignalError("composite sample rate mismatch");
    const std::size_t cascade = 2 * plan.filter_delay();
    const std::size_t need = plan.frame_samples() + cascade;
    if (frame_offset < 0 || static_cast<std::size_t>(frame_offset) + need > composite.size()) {
        throw SignalError("subband frame does not fit inside the composite buffer");
    }
    SignalBuffer slice;
    slice.sample_rate_hz = composite.sample_rate_hz;
    const auto begin = composite.samples.begin() + frame_offset;
    slice.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(need));

    SignalBuffer aligned;
    aligned.sample_rate_hz = slice.sample_rate_hz;
    if (plan.kernel) {
        const SignalBuffer z = plan.kernel->apply(slice);
        const auto from = z.samples.begin() + static_cast<std::ptrdiff_t>(cascade);
        aligned.samples.assign(from, from + static_cast<std::ptrdiff_t>(plan.frame_samples()));
    } else {
        aligned = std::move(slice);
    }
    mix(aligned.samples, -plan.placement.mix_offset_hz, plan.sample_rate_hz);

    const ResourceGrid raw = ofdm_demodulate(aligned, plan.numerology, plan.placement.layout, plan.rx_window_advance);
    EqualizedGrid eq = equalize(raw, EqualizerState{genie_estimates(plan, channel)});

    RxSubband out;
    out.grid = std::move(eq.grid);
    out.bits = qam_demap(out.grid.cells(), plan.spec.modulation);
    if (artifacts.grid.tones() != out.grid.tones() || artifacts.grid.symbols() != out.grid.symbols()) {
        throw SignalError("transmit artifacts do not match the subband plan");
    }
    if (artifacts.grid.energy() > 0.0) {
        const auto& edge = plan.placement.edge_tones;
        // std::vector<bool> has no contiguous storage to span over.
        auto em = std::make_unique<bool[]>(edge.size());
        auto im = std::make_unique<bool[]>(edge.size());
        for (std::size_t t = 0; t < edge.size(); ++t) {
            em[t] = edge[t];
            im[t] = !edge[t];
        }
        out.evm_all.add(artifacts.grid, out.grid);
        out.evm_edge.add(artifacts.grid, out.grid, std::span<const bool>(em.get(), edge.size()));
        out.evm_inner.add(artifacts.grid, out.grid, std::span<const bool>(im.get(), edge.size()));
        out.evm_db = out.evm_all.db();
    } else {
        out.evm_db = kEvmFloorDb;
    }
    if (!artifacts.bits.empty()) out.bit_errors = ber(artifacts.bits, out.bits);
    return out;
}

std::int64_t probe_timing_error(const SubbandPlan& plan) {
    if (!plan.kernel) return 0;
    SignalBuffer impulse;
    impulse.sample_rate_hz = plan.sample_rate_hz;
    impulse.samples.assign(1, cdouble{1.0, 0.0});
    const SignalBuffer once = plan.kernel->apply(impulse);
    const SignalBuffer twice = plan.kernel->apply(once);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < twice.size(); ++i) {
        if (std::abs(twice.samples[i]) > std::abs(twice.samples[peak])) peak = i;
    }
    return static_cast<std::int64_t>(peak) - static_cast<std::int64_t>(2 * plan.filter_delay());
}

std::vector<std::uint8_t> random_bits(const SubbandPlan& plan, std::uint64_t seed, std::string_view label) {
    RngStream rng(seed, label);
    std::vector<std::uint8_t> bits(plan.payload_bits());
    for (auto& b : bits) b = rng.bit();
    return bits;
}

ScenarioConfig with_guard_tones(const ScenarioConfig& base, int guard, std::size_t anchor) {
    if (guard < 0) throw ConfigError("guard tone count must be nonnegative");
    if (!base.subbands.empty() && anchor >= base.subbands.size()) throw ConfigError("anchor subband out of range");
    ScenarioConfig cfg = base;
    const std::size_t n = cfg.subbands.size();
    int start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& sb = cfg.subbands[i];
        sb.start_tone = start;
        sb.guard_tones_left = 0;
        sb.guard_tones_right = i + 1 < n ? guard : 0;
        start = sb.span_end();
    }
    if (n == 0) return cfg;
    const int shift = base.subbands[anchor].start_tone - cfg.subbands[anchor].start_tone;
    for (auto& sb : cfg.subbands) sb.start_tone += shift;
    return cfg;
}

const SweepRow* SweepResult::find(int guard, double offset_db, Modulation m) const {
    for (const auto& r : cells) {
        if (r.guard_tones == guard && r.power_offset_db == offset_db && r.modulation == m) return &r;
    }
    return nullptr;
}

const SweepRow* SweepResult::find_baseline(int guard, Modulation m) const {
    for (const auto& r : baseline) {
        if (r.guard_tones == guard && r.modulation == m) return &r;
    }
    return nullptr;
}

namespace {

struct TrialTally {
    EvmAccumulator edge;
    EvmAccumulator inner;
    BitErrorCount bits;
};

struct CellSetup {
    ScenarioConfig cfg;
    std::vector<SubbandPlan> plans;
    std::vector<std::int64_t> offsets;
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

CellSetup setup_cell(const SweepRequest& req, int guard, double offset_db, Modulation m, bool isolated) {
    CellSetup c;
    c.cfg = with_guard_tones(req.base, guard, req.victim);
    const std::size_t v = req.victim;
    for (std::size_t i = 0; i < c.cfg.subbands.size(); ++i) {
        auto& sb = c.cfg.subbands[i];
        sb.modulation = m;
        sb.timing_offset_samples = 0;
        const std::size_t dist = i > v ? i - v : v - i;
        sb.power_offset_db = dist == 1 ? offset_db : 0.0;
    }
    PlanOptions vopt;
    vopt.ttis = req.ttis;
    const SubbandPlan victim = plan_subband(c.cfg, v, vopt);

    std::size_t max_sym = 0;
    for (const auto& sb : c.cfg.subbands) max_sym = std::max<std::size_t>(max_sym, sb.numerology.samples_per_symbol());
    const std::size_t victim_span = victim.tx_samples();

    c.plans.resize(c.cfg.subbands.size());
    c.offsets.resize(c.cfg.subbands.size());
    for (std::size_t i = 0; i < c.cfg.subbands.size(); ++i) {
        if (i == v) {
            c.plans[i] = victim;
            c.offsets[i] = static_cast<std::int64_t>(max_sym);
            continue;
        }
        const auto& n = c.cfg.subbands[i].numerology;
        const std::size_t sym = n.samples_per_symbol();
        const std::size_t dist = i > v ? i - v : v - i;
        const std::size_t half = dist % 2 == 1 ? sym / 2 : 0;
        // One leading symbol, then enough symbols to outlast the victim span.
        const std::size_t needed = 1 + ceil_div(victim_span + half, sym) + 1;
        PlanOptions iopt;
        iopt.ttis = 0;
        iopt.extra_symbols = needed;
        iopt.muted = isolated;
        c.plans[i] = plan_subband(c.cfg, i, iopt);
        c.offsets[i] = static_cast<std::int64_t>(max_sym + half) - static_cast<std::int64_t>(sym);
    }
    return c;
}

// Labels omit guard and offset so every cell of a trial shares payload and noise.
std::string trial_label(const char* kind, Modulation m, std::size_t trial, std::size_t sb) {
    std::ostringstream os;
    os << kind << '/' << to_string(m) << "/t" << trial << "/s" << sb;
    return os.str();
}

TrialTally run_trial(const SweepRequest& req, const CellSetup& c, Modulation m, std::size_t trial) {
    std::vector<SignalBuffer> signals;
    signals.reserve(c.plans.size());
    SubbandTxArtifacts victim_art;
    for (std::size_t i = 0; i < c.plans.size(); ++i) {
        const auto bits = random_bits(c.plans[i], req.base.seed, trial_label("bits", m, trial, i));
        TxSubband tx = tx_subband(c.plans[i], bits);
        if (i == req.victim) victim_art = std::move(tx.artifacts);
        signals.push_back(std::move(tx.signal));
    }
    SignalBuffer composite = assemble(signals, c.offsets);
    const SubbandPlan& vp = c.plans[req.victim];
    RngStream noise(req.base.seed, trial_label("noise", m, trial, req.victim));
    composite = add_noise(composite, vp.amplitude * vp.amplitude * std::pow(10.0, -req.snr_db / 10.0), noise);
    const RxSubband rx = rx_subband(composite, vp, victim_art, c.offsets[req.victim]);
    return {rx.evm_edge, rx.evm_inner, rx.bit_errors};
}

SweepRow run_cell(const SweepRequest& req, int guard, double offset_db, Modulation m, bool isolated) {
    const CellSetup c = setup_cell(req, guard, offset_db, m, isolated);
    std::vector<TrialTally> tallies(req.trials);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t t = next++; t < req.trials; t = next++) {
            try {
                tallies[t] = run_trial(req, c, m, t);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(req.jobs, req.trials));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    // Fixed merge order keeps results independent of the job count.
    TrialTally total;
    for (const auto& t : tallies) {
        total.edge.merge(t.edge);
        total.inner.merge(t.inner);
        total.bits += t.bits;
    }
    SweepRow row;
    row.isolated = isolated;
    row.guard_tones = guard;
    row.power_offset_db = isolated ? 0.0 : offset_db;
    row.modulation = m;
    row.snr_db = req.snr_db;
    row.evm_db_edge = total.edge.cells ? total.edge.db() : kEvmFloorDb;
    row.evm_db_inner = total.inner.cells ? total.inner.db() : kEvmFloorDb;
    row.ber = total.bits.ratio();
    return row;
}

} // namespace

SweepResult guardtone_sweep(const SweepRequest& req) {
    if (req.trials == 0) throw ConfigError("sweep needs at least one trial");
    if (req.victim >= req.base.subbands.size()) throw ConfigError("victim subband index out of range");
    if (!std::isfinite(req.snr_db)) throw ConfigError("sweep snr_db must be finite");
    SweepResult res;
    std::vector<int> guards = req.guard_counts;
    std::vector<double> offsets = req.power_offsets_db;
    std::vector<Modulation> mods = req.modulations;
    std::sort(guards.begin(), guards.end());
    guards.erase(std::unique(guards.begin(), guards.end()), guards.end());
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    std::sort(mods.begin(), mods.end());
    mods.erase(std::unique(mods.begin(), mods.end()), mods.end());
    for (int g : guards) {
        if (g < 0) throw ConfigError("guard tone count must be nonnegative");
    }

    const bool single = req.base.subbands.size() < 2;
    for (int g : guards) {
        for (Modulation m : mods) res.baseline.push_back(run_cell(req, g, 0.0, m, true));
    }
    if (single) return res;
    for (int g : guards) {
        for (double o : offsets) {
            for (Modulation m : mods) res.cells.push_back(run_cell(req, g, o, m, false));
        }
    }
    return res;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string s(kSweepCsvHeader);
    s += '\n';
    char buf[256];
    for (const auto& r : rows) {
        const std::string mod(to_string(r.modulation));
        std::snprintf(buf, sizeof buf, "%d,%.2f,%s,%.2f,%.4f,%.4f,%.6e\n", r.guard_tones, r.power_offset_db,
                      mod.c_str(), r.snr_db, r.evm_db_edge, r.evm_db_inner, r.ber);
        s += buf;
    }
    return s;
}

} // namespace wlab
