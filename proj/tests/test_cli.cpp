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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "wlab/error.hpp"
#include "wlab/experiments.hpp"
#include "wlab/manifest.hpp"
#include "wlab/scenario_io.hpp"

using namespace wlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("wlab_cli_" + name);
    fs::remove_all(d);
    return d;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + WLAB_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::size_t line_count(const fs::path& p) {
    const std::string s = read_text_file(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("psd command writes both spectra and the OOBE summary") {
    PsdOptions o;
    o.scenario = "three-subband-lte20-desk";
    o.out_dir = fresh_dir("psd");
    o.ttis = 4;
    o.segment_size = 1024;
    const auto r = cmd_psd(o);
    for (const char* f : {"psd_ofdm.csv", "psd_fofdm.csv", "oobe_summary.csv", "manifest.json"})
        CHECK(fs::exists(o.out_dir / f));
    CHECK(line_count(o.out_dir / "psd_ofdm.csv") == 1025);
    REQUIRE(r.offsets_hz.size() == r.oobe_fofdm_dbr.size());
    REQUIRE_FALSE(r.offsets_hz.empty());
    for (std::size_t i = 0; i < r.offsets_hz.size(); ++i) CHECK(r.oobe_fofdm_dbr[i] < r.oobe_ofdm_dbr[i]);
    CHECK(read_text_file(o.out_dir / "oobe_summary.csv").rfind("offset_hz,ofdm_dbr,fofdm_dbr,gap_db\n", 0) == 0);

    const auto j = nlohmann::json::parse(read_text_file(o.out_dir / "manifest.json"));
    CHECK(j["status"] == "complete");
    CHECK(j["command"] == "psd");
    CHECK(j["preset_name"] == "three-subband-lte20-desk");
    CHECK(j["seed"] == 20160601u);
    CHECK(j["library_version"] == library_version());
    REQUIRE(j["outputs"].size() == 3);
    for (const auto& out : j["outputs"]) {
        char hex[19];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash_file(out["path"].get<std::string>())));
        CHECK(out["fnv1a64"] == std::string(hex));
    }
    fs::remove_all(o.out_dir);
}

TEST_CASE("psd with the PA keeps a filtered-waveform advantage") {
    PsdOptions o;
    o.scenario = "three-subband-lte20-desk";
    o.out_dir = fresh_dir("psd_pa");
    o.ttis = 4;
    o.segment_size = 1024;
    o.pa_on = true;
    const auto r = cmd_psd(o);
    CHECK(r.oobe_fofdm_dbr[0] < r.oobe_ofdm_dbr[0]);
    fs::remove_all(o.out_dir);
}

TEST_CASE("guardtone command on a single-subband scenario writes the baseline") {
    GuardtoneOptions o;
    o.scenario = "single-subband-desk";
    o.out_dir = fresh_dir("gt1");
    o.guards = {0};
    o.modulations = {Modulation::Qpsk};
    o.trials = 1;
    const auto r = cmd_guardtone(o);
    CHECK(r.cells.empty());
    CHECK(r.baseline.size() == 1);
    CHECK(line_count(o.out_dir / "guardtone.csv") == 2);
    CHECK(read_text_file(o.out_dir / "guardtone.csv") == read_text_file(o.out_dir / "guardtone_baseline.csv"));
    fs::remove_all(o.out_dir);
}

TEST_CASE("throughput command reports the caveat") {
    CommonOptions o;
    o.out_dir = fresh_dir("tp");
    const auto r = cmd_throughput(o);
    CHECK(r.baseline_total == doctest::Approx(0.72));
    CHECK(fs::exists(o.out_dir / "throughput.csv"));
    CHECK(read_text_file(o.out_dir / "throughput_caveat.txt").find("link adaptation") != std::string::npos);
    o.scenario = "no-such-preset";
    CHECK_THROWS_AS(cmd_throughput(o), ConfigError);
    fs::remove_all(o.out_dir);
}

TEST_CASE("missing scenario and output are configuration errors") {
    PsdOptions o;
    o.out_dir = fresh_dir("none");
    CHECK_THROWS_AS(cmd_psd(o), ConfigError);
    o.scenario = "three-subband-lte20-desk";
    o.out_dir.clear();
    CHECK_THROWS_AS(cmd_psd(o), ConfigError);
}

TEST_CASE("selftest passes and the corrupt-taps hook fails it") {
    const auto ok = cmd_selftest();
    CHECK(ok.all_passed());
    CHECK(ok.checks.size() == 7);
    SelftestOptions bad;
    bad.corrupt_taps = true;
    const auto r = cmd_selftest(bad);
    CHECK_FALSE(r.all_passed());
    CHECK_FALSE(r.checks.front().passed);
    CHECK(r.table().find("FAIL") != std::string::npos);
}

TEST_CASE("binary exit codes") {
    const auto dir = fresh_dir("bin");
    fs::create_directories(dir);
    const auto log = dir / "log.txt";
    CHECK(run_cli("--version", log) == 0);
    CHECK(run_cli("", log) == 2);
    CHECK(run_cli("bogus", log) == 2);
    CHECK(run_cli("guardtone --scenario single-subband-desk --out \"" + dir.string() + "\" --modulations QAM256", log) == 2);
    CHECK(read_text_file(log).find("QAM256") != std::string::npos);
    CHECK(run_cli("psd --out \"" + dir.string() + "\"", log) == 2);
    CHECK(run_cli("psd --scenario nowhere.json --out \"" + dir.string() + "\"", log) == 2);
    {
        std::ofstream(dir / "bad.json") << "{\"name\": 1";
    }
    CHECK(run_cli("psd --scenario \"" + (dir / "bad.json").string() + "\" --out \"" + dir.string() + "\"", log) == 2);
    CHECK(run_cli("selftest", log) == 0);
    CHECK(read_text_file(log).find("ALL PASS") != std::string::npos);
    CHECK(run_cli("selftest --corrupt_taps", log) == 1);
    CHECK(run_cli("throughput --out \"" + dir.string() + "\"", log) == 0);
    CHECK(read_text_file(log).find("note:") != std::string::npos);
    CHECK(run_cli("guardtone --scenario three-subband-lte20-desk --out \"" + dir.string() +
                      "\" --guards 0,1 --offsets_db 0 --modulations qpsk --trials 1 --jobs 2",
                  log) == 0);
    CHECK(line_count(dir / "guardtone.csv") == 3);
    fs::remove_all(dir);
}
