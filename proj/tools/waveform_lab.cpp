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

// Batch front end: psd | guardtone | throughput | selftest.
//
// Exit codes: 0 success, 1 a selftest check failed, 2 usage or
// configuration error, 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wlab/error.hpp"
#include "wlab/experiments.hpp"
#include "wlab/manifest.hpp"

namespace {

void add_common(CLI::App* cmd, wlab::CommonOptions& o, bool scenario_required) {
    auto* s = cmd->add_option("--scenario", o.scenario, "scenario file or preset name");
    if (scenario_required) s->required();
    cmd->add_option("--out", o.out_dir, "output directory")->required();
    cmd->add_option("--seed", o.seed, "override the scenario seed");
    cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

std::vector<wlab::Modulation> parse_modulations(const std::vector<std::string>& names) {
    std::vector<wlab::Modulation> out;
    for (const auto& n : names) {
        auto m = wlab::parse_modulation(n);
        if (!m) throw CLI::ValidationError("--modulations", "unknown modulation '" + n + "'");
        out.push_back(*m);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"waveform_lab: filtered-OFDM link-level experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", wlab::library_version());

    wlab::PsdOptions psd;
    auto* c_psd = app.add_subcommand("psd", "PSD of plain OFDM and f-OFDM with OOBE summary");
    add_common(c_psd, psd, true);
    c_psd->add_flag("--pa_on", psd.pa_on, "apply the Rapp PA at the scenario backoff");
    c_psd->add_option("--ttis", psd.ttis, "TTIs per subband")->check(CLI::PositiveNumber);
    c_psd->add_option("--segment", psd.segment_size, "Welch segment size")->check(CLI::PositiveNumber);

    wlab::GuardtoneOptions gt;
    std::vector<std::string> mod_names;
    auto* c_gt = app.add_subcommand("guardtone", "guard-tone and power-offset sweep");
    add_common(c_gt, gt, true);
    c_gt->add_option("--guards", gt.guards, "guard tone counts")->delimiter(',');
    c_gt->add_option("--offsets_db", gt.offsets_db, "interferer power offsets in dB")->delimiter(',');
    c_gt->add_option("--snr_db", gt.snr_db, "per-tone SNR of the victim");
    c_gt->add_option("--trials", gt.trials, "Monte-Carlo trials per cell")->check(CLI::PositiveNumber);
    c_gt->add_option("--modulations", mod_names, "QPSK,QAM16,QAM64")->delimiter(',');

    wlab::CommonOptions tp;
    auto* c_tp = app.add_subcommand("throughput", "OFDM vs f-OFDM overhead throughput");
    add_common(c_tp, tp, false);

    wlab::SelftestOptions st;
    auto* c_st = app.add_subcommand("selftest", "oracle and property checks");
    c_st->add_flag("--corrupt_taps", st.corrupt_taps, "test hook: perturb one overlap-save tap");
    c_st->add_option("--jobs", st.jobs, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
        if (!mod_names.empty()) gt.modulations = parse_modulations(mod_names);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_psd->parsed()) {
            const auto r = wlab::cmd_psd(psd);
            std::printf("offset_hz  ofdm_dbr  fofdm_dbr\n");
            for (std::size_t i = 0; i < r.offsets_hz.size(); ++i) {
                std::printf("%9.0f  %8.2f  %9.2f\n", r.offsets_hz[i], r.oobe_ofdm_dbr[i], r.oobe_fofdm_dbr[i]);
            }
        } else if (c_gt->parsed()) {
            const auto r = wlab::cmd_guardtone(gt);
            std::fputs(wlab::sweep_csv(r.cells.empty() ? r.baseline : r.cells).c_str(), stdout);
        } else if (c_tp->parsed()) {
            const auto r = wlab::cmd_throughput(tp);
            std::printf("baseline %.6f  f-OFDM %.6f  gain %.2f%%\n", r.baseline_total, r.fofdm_total, r.gain_percent);
            std::printf("note: %s\n", std::string(wlab::kThroughputCaveat).c_str());
        } else if (c_st->parsed()) {
            const auto r = wlab::cmd_selftest(st);
            std::fputs(r.table().c_str(), stdout);
            return r.all_passed() ? 0 : 1;
        }
    } catch (const wlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const wlab::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
