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

#include "wlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "wlab/error.hpp"
#include "wlab/fft.hpp"
#include "wlab/impairments.hpp"
#include "wlab/manifest.hpp"
#include "wlab/rng.hpp"
#include "wlab/scenario_io.hpp"

namespace wlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct LoadedScenario {
    ScenarioConfig cfg;
    std::string preset_name;
    std::uint64_t hash = 0;
};

LoadedScenario load_for_run(const CommonOptions& opts) {
    if (opts.scenario.empty()) throw ConfigError("--scenario is required");
    const auto path = resolve_scenario_path(opts.scenario.string());
    const std::string text = read_text_file(path);
    LoadedScenario s;
    s.cfg = parse_scenario(text);
    if (opts.seed) s.cfg.seed = *opts.seed;
    s.preset_name = s.cfg.name.empty() ? path.stem().string() : s.cfg.name;
    s.hash = fnv1a64(text);
    require_valid(s.cfg);
    return s;
}

RunManifest start_manifest(const CommonOptions& opts, std::string command, const std::string& preset,
                           std::uint64_t scenario_hash, std::uint64_t seed) {
    if (opts.out_dir.empty()) throw ConfigError("--out is required");
    RunManifest m;
    m.command = std::move(command);
    m.preset_name = preset;
    m.scenario_hash = scenario_hash;
    m.seed = seed;
    m.library_version = library_version();
    write_manifest(opts.out_dir, m);
    return m;
}

void finish_manifest(const CommonOptions& opts, RunManifest& m, Clock::time_point t0) {
    m.status = "complete";
    m.wall_clock_s = seconds_since(t0);
    write_manifest(opts.out_dir, m);
}

std::string fmt_row(const char* f, double a, double b, double c, double d) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

SignalBuffer transmit_all(const ScenarioConfig& cfg, Waveform w, std::size_t ttis) {
    PlanOptions po;
    po.waveform = w;
    po.ttis = ttis;
    const auto plans = plan_all(cfg, po);
    std::vector<SignalBuffer> signals;
    std::vector<std::int64_t> offsets;
    std::int64_t min_off = 0;
    for (const auto& sb : cfg.subbands) min_off = std::min(min_off, sb.timing_offset_samples);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        // Payload labels are waveform-independent so both chains carry the same bits.
        const auto bits = random_bits(plans[i], cfg.seed, "psd/bits/s" + std::to_string(i));
        signals.push_back(tx_subband(plans[i], bits).signal);
        offsets.push_back(cfg.subbands[i].timing_offset_samples - min_off);
    }
    return assemble(signals, offsets);
}

} // namespace

std::vector<double> oobe_offsets_for(double sample_rate_hz, const FrequencyBand& allocated) {
    const double scale = sample_rate_hz / 30.72e6;
    const double nyq = 0.5 * sample_rate_hz;
    const double reach = std::max(allocated.high_hz, -allocated.low_hz);
    std::vector<double> out;
    for (double mhz : {0.5, 1.0, 2.0}) {
        const double off = mhz * 1e6 * scale;
        if (reach + off + 7.5e3 <= nyq) out.push_back(off);
    }
    return out;
}

PsdOutcome cmd_psd(const PsdOptions& opts) {
    const auto t0 = Clock::now();
    LoadedScenario s = load_for_run(opts);
    if (opts.ttis == 0) throw ConfigError("psd needs at least one TTI");
    RunManifest m = start_manifest(opts, "psd", s.preset_name, s.hash, s.cfg.seed);
    const auto& cfg = s.cfg;

    PsdOutcome out;
    std::vector<FrequencyBand> bands;
    out.allocated = {cfg.subbands.front().low_edge_hz(), cfg.subbands.front().high_edge_hz()};
    for (const auto& sb : cfg.subbands) {
        bands.push_back({sb.low_edge_hz(), sb.high_edge_hz()});
        out.allocated.low_hz = std::min(out.allocated.low_hz, sb.low_edge_hz());
        out.allocated.high_hz = std::max(out.allocated.high_hz, sb.high_edge_hz());
    }
    out.offsets_hz = oobe_offsets_for(cfg.sample_rate_hz, out.allocated);

    const bool pa = opts.pa_on || cfg.impairments.pa.enabled;
    auto run = [&](Waveform w) {
        SignalBuffer sig = transmit_all(cfg, w, opts.ttis);
        if (pa) sig = pa_rapp(sig, cfg.impairments.pa.input_backoff_db, cfg.impairments.pa.smoothness);
        if (cfg.impairments.snr_db) {
            RngStream rng(cfg.seed, std::string("psd/noise/") + std::string(to_string(w)));
            sig = awgn(sig, cfg.impairments.snr_db, rng);
        }
        return psd_welch(sig, opts.segment_size, 0.5, bands);
    };
    out.ofdm = run(Waveform::Ofdm);
    out.fofdm = run(Waveform::Fofdm);
    out.oobe_ofdm_dbr = oobe(out.ofdm, out.allocated, out.offsets_hz);
    out.oobe_fofdm_dbr = oobe(out.fofdm, out.allocated, out.offsets_hz);

    write_output(opts.out_dir, m, "psd_ofdm.csv", psd_csv(out.ofdm));
    write_output(opts.out_dir, m, "psd_fofdm.csv", psd_csv(out.fofdm));
    std::string summary = "offset_hz,ofdm_dbr,fofdm_dbr,gap_db\n";
    for (std::size_t i = 0; i < out.offsets_hz.size(); ++i) {
        summary += fmt_row("%.1f,%.4f,%.4f,%.4f\n", out.offsets_hz[i], out.oobe_ofdm_dbr[i], out.oobe_fofdm_dbr[i],
                           out.oobe_ofdm_dbr[i] - out.oobe_fofdm_dbr[i]);
    }
    write_output(opts.out_dir, m, "oobe_summary.csv", summary);
    finish_manifest(opts, m, t0);
    return out;
}

SweepResult cmd_guardtone(const GuardtoneOptions& opts) {
    const auto t0 = Clock::now();
    LoadedScenario s = load_for_run(opts);
    if (opts.trials == 0) throw ConfigError("--trials must be positive");
    if (opts.guards.empty() || opts.offsets_db.empty() || opts.modulations.empty()) {
        throw ConfigError("guard, offset and modulation lists must be nonempty");
    }
    RunManifest m = start_manifest(opts, "guardtone", s.preset_name, s.hash, s.cfg.seed);
    SweepRequest req;
    req.base = s.cfg;
    req.guard_counts = opts.guards;
    req.power_offsets_db = opts.offsets_db;
    req.modulations = opts.modulations;
    req.snr_db = opts.snr_db;
    req.trials = opts.trials;
    req.jobs = std::max<std::size_t>(1, opts.jobs);
    SweepResult res = guardtone_sweep(req);
    const auto& main_rows = res.cells.empty() ? res.baseline : res.cells;
    write_output(opts.out_dir, m, "guardtone.csv", sweep_csv(main_rows));
    write_output(opts.out_dir, m, "guardtone_baseline.csv", sweep_csv(res.baseline));
    finish_manifest(opts, m, t0);
    return res;
}

ThroughputPreset parse_throughput_preset(std::string_view text) {
    using json = nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("throughput preset is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("throughput preset must be an object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "name" && key != "baseline" && key != "fofdm") {
            throw ParseError("unknown key '" + key + "' in throughput preset");
        }
    }
    ThroughputPreset p;
    if (auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) throw ParseError("throughput preset name must be a string");
        p.name = it->get<std::string>();
    }
    auto entries = [&](const char* key) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_array() || it->empty()) {
            throw ParseError(std::string("throughput preset needs a nonempty '") + key + "' array");
        }
        std::vector<ThroughputEntry> v;
        for (const auto& e : *it) {
            if (!e.is_object()) throw ParseError("throughput entries must be objects");
            ThroughputEntry t;
            for (const auto& [k, val] : e.items()) {
                const bool text_key = k == "name";
                if (text_key) {
                    if (!val.is_string()) throw ParseError("entry name must be a string");
                    t.name = val.get<std::string>();
                    continue;
                }
                if (!val.is_number()) throw ParseError("throughput field '" + k + "' must be a number");
                const double x = val.get<double>();
                if (k == "scs_hz") {
                    t.scs_hz = x;
                } else if (k == "cp_duration_s") {
                    t.cp_duration_s = x;
                } else if (k == "data_tone_fraction") {
                    t.data_tone_fraction = x;
                } else if (k == "bandwidth_share") {
                    t.bandwidth_share = x;
                } else {
                    throw ParseError("unknown key '" + k + "' in throughput entry");
                }
            }
            if (!e.contains("scs_hz") || !e.contains("cp_duration_s")) {
                throw ParseError("throughput entries need scs_hz and cp_duration_s");
            }
            v.push_back(std::move(t));
        }
        return v;
    };
    p.baseline = entries("baseline");
    p.fofdm = entries("fofdm");
    return p;
}

ThroughputReport cmd_throughput(const CommonOptions& opts) {
    const auto t0 = Clock::now();
    const std::string arg = opts.scenario.empty() ? std::string("throughput-four-scenario") : opts.scenario.string();
    const auto path = resolve_scenario_path(arg);
    const std::string text = read_text_file(path);
    const ThroughputPreset preset = parse_throughput_preset(text);
    RunManifest m = start_manifest(opts, "throughput", preset.name.empty() ? path.stem().string() : preset.name,
                                   fnv1a64(text), opts.seed.value_or(0));
    ThroughputReport r = normalized_throughput(preset.baseline, preset.fofdm);
    write_output(opts.out_dir, m, "throughput.csv", throughput_csv(r));
    write_output(opts.out_dir, m, "throughput_caveat.txt", std::string(kThroughputCaveat) + "\n");
    finish_manifest(opts, m, t0);
    return r;
}

// ---------------------------------------------------------------- selftest

bool SelftestReport::all_passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string SelftestReport::table() const {
    std::string s;
    char buf[512];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%-4s  %-26s %7.2f s  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                      c.seconds, c.detail.c_str());
        s += buf;
    }
    std::snprintf(buf, sizeof buf, "%s  %zu checks in %.2f s\n", all_passed() ? "ALL PASS" : "FAILED", checks.size(),
                  seconds);
    s += buf;
    return s;
}

namespace {

ScenarioConfig selftest_three_subband() {
    ScenarioConfig cfg;
    cfg.name = "selftest-three-subband";
    cfg.seed = 7;
    const int widths[] = {48, 288, 48};
    for (int w : widths) {
        SubbandSpec sb;
        sb.width_tones = w;
        cfg.subbands.push_back(sb);
    }
    cfg.subbands.front().start_tone = -194;
    return with_guard_tones(cfg, 2);
}

double rel_l2(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::string fmt_detail(const char* f, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

SelftestCheck check_overlap_save(bool corrupt) {
    SelftestCheck c{"overlap-save == direct", true, "", 0.0};
    RngStream rng(2024, "selftest/ols");
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::size_t taps = 1 + static_cast<std::size_t>(rng.uniform() * 1025.0);
        SignalBuffer x;
        x.sample_rate_hz = 1.0;
        x.samples.resize(4096);
        for (auto& s : x.samples) s = rng.complex_normal(1.0);
        std::vector<cdouble> h(taps);
        for (auto& t : h) t = rng.complex_normal(1.0);
        const std::size_t block = fft::next_power_of_two(2 * taps) << static_cast<int>(rng.uniform() * 3.0);
        std::vector<cdouble> used = h;
        if (corrupt) used[used.size() / 2] += cdouble{1e-3, 0.0};
        const auto fast = OverlapSaveKernel(used, block).apply(x);
        const auto slow = direct_convolve(x, h);
        worst = std::max(worst, rel_l2(fast.samples, slow.samples));
    }
    c.passed = worst < 1e-9;
    c.detail = fmt_detail("worst relative L2 %.2e (limit 1e-9)", worst);
    return c;
}

SelftestCheck check_loopback() {
    SelftestCheck c{"loopback BER == 0", true, "", 0.0};
    ScenarioConfig cfg;
    cfg.subbands.push_back(SubbandSpec{});
    cfg.subbands[0].start_tone = -18;
    cfg.subbands[0].width_tones = 36;
    std::size_t bits = 0, errors = 0;
    double worst_ofdm = kEvmFloorDb;
    for (Modulation m : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64}) {
        cfg.subbands[0].modulation = m;
        for (Waveform w : {Waveform::Ofdm, Waveform::Fofdm}) {
            PlanOptions po;
            po.waveform = w;
            const SubbandPlan plan = plan_subband(cfg, 0, po);
            const auto payload = random_bits(plan, 11, "selftest/loopback");
            const TxSubband tx = tx_subband(plan, payload);
            const RxSubband rx = rx_subband(tx.signal, plan, tx.artifacts, 0);
            bits += rx.bit_errors.total;
            errors += rx.bit_errors.errors;
            if (w == Waveform::Ofdm) worst_ofdm = std::max(worst_ofdm, rx.evm_db);
        }
    }
    c.passed = errors == 0 && worst_ofdm <= -90.0;
    c.detail = std::to_string(errors) + " errors in " + std::to_string(bits) + " bits; OFDM EVM " +
               fmt_detail("%.1f dB", worst_ofdm);
    return c;
}

SelftestCheck check_parseval() {
    SelftestCheck c{"Parseval", true, "", 0.0};
    RngStream rng(5, "selftest/parseval");
    Numerology n;
    ResourceGrid g(300, 14);
    for (auto& cell : g.cells()) cell = rng.complex_normal(1.0);
    const SignalBuffer x = ofdm_modulate(g, n);
    double worst = 0.0;
    for (std::size_t s = 0; s < g.symbols(); ++s) {
        double e_time = 0.0, e_grid = 0.0;
        const std::size_t start = s * n.samples_per_symbol() + n.cp_samples;
        for (std::size_t i = 0; i < n.fft_size; ++i) e_time += std::norm(x.samples[start + i]);
        for (const auto& v : g.symbol(s)) e_grid += std::norm(v);
        worst = std::max(worst, std::abs(e_time - e_grid) / e_grid);
    }
    c.passed = worst < 1e-12;
    c.detail = fmt_detail("worst relative energy error %.2e (limit 1e-12)", worst);
    return c;
}

SelftestCheck check_awgn() {
    SelftestCheck c{"AWGN calibration", true, "", 0.0};
    RngStream src(3, "selftest/awgn-signal");
    SignalBuffer x;
    x.sample_rate_hz = 7.68e6;
    x.samples.resize(1000000);
    for (auto& s : x.samples) s = src.complex_normal(2.5);
    RngStream noise(3, "selftest/awgn-noise");
    const SignalBuffer y = awgn(x, 20.0, noise);
    double pn = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) pn += std::norm(y.samples[i] - x.samples[i]);
    pn /= static_cast<double>(x.size());
    const double snr = 10.0 * std::log10(x.mean_power() / pn);
    c.passed = std::abs(snr - 20.0) <= 0.05;
    c.detail = fmt_detail("measured SNR %.4f dB for target 20 dB (tolerance 0.05)", snr);
    return c;
}

SelftestCheck check_monotonicity(std::size_t jobs) {
    SelftestCheck c{"guard-count monotonicity", true, "", 0.0};
    SweepRequest req;
    req.base = selftest_three_subband();
    req.guard_counts = {0, 1, 2};
    req.power_offsets_db = {0.0};
    req.modulations = {Modulation::Qam64};
    // Noise well below the ISI floor so the guard effect is not masked.
    req.snr_db = 60.0;
    req.trials = 6;
    req.jobs = jobs;
    const SweepResult r = guardtone_sweep(req);
    std::string detail = "edge EVM";
    double prev = 1e9;
    for (int g : req.guard_counts) {
        const double e = r.find(g, 0.0, Modulation::Qam64)->evm_db_edge;
        detail += fmt_detail(" g%.0f:", static_cast<double>(g)) + fmt_detail("%.2f", e);
        if (e > prev) c.passed = false;
        prev = e;
    }
    c.detail = detail + " dB";
    return c;
}

SelftestCheck check_linearity() {
    SelftestCheck c{"assembly linearity", true, "", 0.0};
    const ScenarioConfig cfg = selftest_three_subband();
    const SubbandPlan victim = plan_subband(cfg, 0);
    const SubbandPlan other = plan_subband(cfg, 1);
    const TxSubband a = tx_subband(victim, random_bits(victim, 1, "selftest/lin/a"));
    const TxSubband b = tx_subband(other, random_bits(other, 1, "selftest/lin/b"));
    const std::int64_t off_a = 600, off_b = 300;
    const SignalBuffer ab = assemble(std::vector<SignalBuffer>{a.signal, b.signal}, std::vector<std::int64_t>{off_a, off_b});
    SignalBuffer only_b = assemble(std::vector<SignalBuffer>{b.signal}, std::vector<std::int64_t>{off_b});
    SignalBuffer only_a = assemble(std::vector<SignalBuffer>{a.signal}, std::vector<std::int64_t>{off_a});
    only_b.samples.resize(ab.size());
    only_a.samples.resize(ab.size());
    const RxSubband r_ab = rx_subband(ab, victim, a.artifacts, off_a);
    const RxSubband r_a = rx_subband(only_a, victim, a.artifacts, off_a);
    const RxSubband r_b = rx_subband(only_b, victim, a.artifacts, off_a);
    double worst = 0.0;
    for (std::size_t i = 0; i < r_ab.grid.cells().size(); ++i) {
        worst = std::max(worst, std::abs(r_ab.grid.cells()[i] - r_a.grid.cells()[i] - r_b.grid.cells()[i]));
    }
    c.passed = worst < 1e-9;
    c.detail = fmt_detail("max |rx(A+B) - rx(A) - rx(B)| %.2e (limit 1e-9)", worst);
    return c;
}

SelftestCheck check_determinism(std::size_t jobs) {
    SelftestCheck c{"deterministic reruns", true, "", 0.0};
    SweepRequest req;
    req.base = selftest_three_subband();
    req.guard_counts = {0, 2};
    req.power_offsets_db = {0.0, 10.0};
    req.modulations = {Modulation::Qpsk, Modulation::Qam64};
    req.trials = 2;
    req.jobs = 1;
    const auto first = guardtone_sweep(req);
    const auto second = guardtone_sweep(req);
    req.jobs = std::max<std::size_t>(2, jobs);
    const auto parallel = guardtone_sweep(req);
    const std::string a = sweep_csv(first.cells), b = sweep_csv(second.cells), p = sweep_csv(parallel.cells);
    c.passed = a == b && a == p;
    c.detail = c.passed ? "identical CSV bytes across reruns and job counts" : "CSV bytes differ between runs";
    return c;
}

} // namespace

SelftestReport cmd_selftest(const SelftestOptions& opts) {
    const auto t0 = Clock::now();
    SelftestReport rep;
    auto run = [&](const char* name, auto&& fn) {
        const auto t = Clock::now();
        SelftestCheck c{name, false, "", 0.0};
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.detail = std::string("exception: ") + e.what();
        }
        c.seconds = seconds_since(t);
        rep.checks.push_back(std::move(c));
    };
    run("overlap-save == direct", [&] { return check_overlap_save(opts.corrupt_taps); });
    run("loopback BER == 0", [] { return check_loopback(); });
    run("Parseval", [] { return check_parseval(); });
    run("AWGN calibration", [] { return check_awgn(); });
    run("guard-count monotonicity", [&] { return check_monotonicity(opts.jobs); });
    run("assembly linearity", [] { return check_linearity(); });
    run("deterministic reruns", [&] { return check_determinism(opts.jobs); });
    rep.seconds = seconds_since(t0);
    return rep;
}

} // namespace wlab
