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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wlab {

struct ManifestOutput {
    std::string name;
    std::filesystem::path path;
    std::uint64_t hash = 0;
};

/// Written before any data ("running") and rewritten on completion.
struct RunManifest {
    std::string command;
    std::string preset_name;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    std::string status = "running";
    std::vector<ManifestOutput> outputs;
    double wall_clock_s = 0.0;
    std::string library_version;
};

std::string library_version();

std::string manifest_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& m);

/// Writes `content` and records its FNV-1a hash in the manifest.
void write_output(const std::filesystem::path& out_dir, RunManifest& m, const std::string& name,
                  const std::string& content);

std::uint64_t hash_file(const std::filesystem::path& path);

} // namespace wlab
