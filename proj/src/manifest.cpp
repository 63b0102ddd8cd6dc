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

#include "wlab/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "wlab/error.hpp"
#include "wlab/rng.hpp"
#include "wlab/scenario_io.hpp"

#ifndef WLAB_VERSION
#define WLAB_VERSION "0.0.0"
#endif

namespace wlab {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + path.string());
    os << content;
    if (!os) throw Error("write failed for " + path.string());
}

} // namespace

std::string library_version() { return WLAB_VERSION; }

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["status"] = m.status;
    j["preset_name"] = m.preset_name;
    j["scenario_hash"] = hex64(m.scenario_hash);
    j["seed"] = m.seed;
    j["library_version"] = m.library_version.empty() ? library_version() : m.library_version;
    j["wall_clock_s"] = m.wall_clock_s;
    auto outs = nlohmann::ordered_json::array();
    for (const auto& o : m.outputs) {
        outs.push_back({{"name", o.name}, {"path", o.path.string()}, {"fnv1a64", hex64(o.hash)}});
    }
    j["outputs"] = std::move(outs);
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& m) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "manifest.json", manifest_json(m));
}

void write_output(const std::filesystem::path& out_dir, RunManifest& m, const std::string& name,
                  const std::string& content) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / name;
    write_file(path, content);
    ManifestOutput o{name, path, fnv1a64(content)};
    for (auto& existing : m.outputs) {
        if (existing.name == name) {
            existing = o;
            return;
        }
    }
    m.outputs.push_back(std::move(o));
}

std::uint64_t hash_file(const std::filesystem::path& path) { return fnv1a64(read_text_file(path)); }

} // namespace wlab
