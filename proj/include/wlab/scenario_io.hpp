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

#include <filesystem>
#include <string>
#include <string_view>

#include "wlab/scenario.hpp"

namespace wlab {

/// Parses a scenario document (JSON). Unknown keys, missing required keys
/// and wrong types raise ParseError. The result is not validated.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical JSON form; parse_scenario(emit_scenario(c)) == c.
std::string emit_scenario(const ScenarioConfig& cfg);

/// Preset directory: $WAVEFORM_LAB_PRESETS if set, else the shipped data dir.
std::filesystem::path preset_dir();
/// Shipped data root (presets/ and profiles/ live below it).
std::filesystem::path data_dir();

/// Resolves a --scenario argument: an existing path, or a preset name
/// looked up as <preset_dir>/<name>.json.
std::filesystem::path resolve_scenario_path(std::string_view arg);

std::string read_text_file(const std::filesystem::path& path);

} // namespace wlab
