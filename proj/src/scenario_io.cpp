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

#include "wlab/scenario_io.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "wlab/error.hpp"

#ifndef WLAB_DEFAULT_DATA_DIR
#define WLAB_DEFAULT_DATA_DIR "data"
#endif

namespace wlab {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ParseError(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ParseError("unknown key '" + where + "." + key + "'");
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing key '" + where + "." + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ParseError(what + " must be a number");
    return v.get<double>();
}

template <typename Int>
Int as_integer(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw ParseError(what + " must be an integer");
    if constexpr (std::is_unsigned_v<Int>) {
        if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
        if (v.get<std::int64_t>() < 0) throw ParseError(what + " must be nonnegative");
        return static_cast<Int>(v.get<std::int64_t>());
    } else {
        return static_cast<Int>(v.get<std::int64_t>());
    }
}

std::string as_string(const json& v, const std::string& what) {
    if (!v.is_string()) throw ParseError(what + " must be a string");
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& what) {
    if (!v.is_boolean()) throw ParseError(what + " must be true or false");
    return v.get<bool>();
}

template <typename T, typename F>
void optional_field(const json& obj, const std::string& where, const char* key, T& dst, F convert) {
    if (auto it = obj.find(key); it != obj.end()) dst = convert(*it, where + "." + key);
}

Numerology parse_numerology(const json& j, const std::string& where) {
    reject_unknown(j, where, {"scs_hz", "fft_size", "cp_samples", "symbols_per_tti"});
    Numerology n;
    n.scs_hz = as_number(require(j, where, "scs_hz"), where + ".scs_hz");
    n.fft_size = as_integer<std::uint32_t>(require(j, where, "fft_size"), where + ".fft_size");
    n.cp_samples = as_integer<std::uint32_t>(require(j, where, "cp_samples"), where + ".cp_samples");
    optional_field(j, where, "symbols_per_tti", n.symbols_per_tti, as_integer<std::uint32_t>);
    return n;
}

SubbandSpec parse_subband(const json& j, const std::string& where) {
    reject_unknown(j, where,
                   {"start_tone", "width_tones", "guard_tones_left", "guard_tones_right", "numerology",
                    "modulation", "power_offset_db", "timing_offset_samples"});
    SubbandSpec sb;
    sb.start_tone = as_integer<int>(require(j, where, "start_tone"), where + ".start_tone");
    sb.width_tones = as_integer<int>(require(j, where, "width_tones"), where + ".width_tones");
    optional_field(j, where, "guard_tones_left", sb.guard_tones_left, as_integer<int>);
    optional_field(j, where, "guard_tones_right", sb.guard_tones_right, as_integer<int>);
    sb.numerology = parse_numerology(require(j, where, "numerology"), where + ".numerology");
    if (auto it = j.find("modulation"); it != j.end()) {
        const auto text = as_string(*it, where + ".modulation");
        auto m = parse_modulation(text);
        if (!m) throw ParseError("unknown modulation '" + text + "' in " + where);
        sb.modulation = *m;
    }
    optional_field(j, where, "power_offset_db", sb.power_offset_db, as_number);
    optional_field(j, where, "timing_offset_samples", sb.timing_offset_samples, as_integer<std::int64_t>);
    return sb;
}

ImpairmentConfig parse_impairments(const json& j) {
    const std::string where = "impairments";
    reject_unknown(j, where, {"snr_db", "channel", "pa"});
    ImpairmentConfig imp;
    if (auto it = j.find("snr_db"); it != j.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "off") throw ParseError("impairments.snr_db must be a number or \"off\"");
        } else {
            imp.snr_db = as_number(*it, "impairments.snr_db");
        }
    }
    if (auto it = j.find("channel"); it != j.end()) {
        reject_unknown(*it, "impairments.channel", {"kind", "profile"});
        const auto kind = as_string(require(*it, "impairments.channel", "kind"), "impairments.channel.kind");
        if (kind == "ideal") {
            imp.channel.kind = ChannelKind::Ideal;
        } else if (kind == "tdl") {
            imp.channel.kind = ChannelKind::Tdl;
        } else {
            throw ParseError("impairments.channel.kind must be \"ideal\" or \"tdl\"");
        }
        optional_field(*it, "impairments.channel", "profile", imp.channel.profile, as_string);
    }
    if (auto it = j.find("pa"); it != j.end()) {
        reject_unknown(*it, "impairments.pa", {"enabled", "input_backoff_db", "smoothness"});
        optional_field(*it, "impairments.pa", "enabled", imp.pa.enabled, as_bool);
        optional_field(*it, "impairments.pa", "input_backoff_db", imp.pa.input_backoff_db, as_number);
        optional_field(*it, "impairments.pa", "smoothness", imp.pa.smoothness, as_number);
    }
    return imp;
}

FilterSettings parse_filter(const json& j) {
    const std::string where = "filter";
    reject_unknown(j, where, {"order", "window", "rolloff", "excess_tones", "max_taps", "prune_below_db"});
    FilterSettings f;
    optional_field(j, where, "order", f.order, as_integer<std::uint32_t>);
    if (auto it = j.find("window"); it != j.end()) {
        const auto w = as_string(*it, "filter.window");
        if (w == "hann") {
            f.window = WindowKind::Hann;
        } else if (w == "rrc") {
            f.window = WindowKind::Rrc;
        } else {
            throw ParseError("filter.window must be \"hann\" or \"rrc\"");
        }
    }
    optional_field(j, where, "rolloff", f.rolloff, as_number);
    optional_field(j, where, "excess_tones", f.excess_tones, as_number);
    optional_field(j, where, "max_taps", f.max_taps, as_integer<std::uint32_t>);
    if (auto it = j.find("prune_below_db"); it != j.end() && !it->is_null()) {
        f.prune_below_db = as_number(*it, "filter.prune_below_db");
    }
    return f;
}

} // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    const std::string where = "scenario";
    reject_unknown(doc, where,
                   {"name", "sample_rate_hz", "total_bandwidth_hz", "subbands", "impairments", "filter", "seed"});
    ScenarioConfig cfg;
    optional_field(doc, where, "name", cfg.name, as_string);
    cfg.sample_rate_hz = as_number(require(doc, where, "sample_rate_hz"), "scenario.sample_rate_hz");
    optional_field(doc, where, "total_bandwidth_hz", cfg.total_bandwidth_hz, as_number);
    optional_field(doc, where, "seed", cfg.seed, as_integer<std::uint64_t>);
    const json& subs = require(doc, where, "subbands");
    if (!subs.is_array()) throw ParseError("scenario.subbands must be an array");
    for (std::size_t i = 0; i < subs.size(); ++i) {
        cfg.subbands.push_back(parse_subband(subs[i], "subbands[" + std::to_string(i) + "]"));
    }
    if (auto it = doc.find("impairments"); it != doc.end()) cfg.impairments = parse_impairments(*it);
    if (auto it = doc.find("filter"); it != doc.end()) cfg.filter = parse_filter(*it);
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    try {
        return parse_scenario(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string emit_scenario(const ScenarioConfig& cfg) {
    json doc = json::object();
    doc["name"] = cfg.name;
    doc["sample_rate_hz"] = cfg.sample_rate_hz;
    doc["total_bandwidth_hz"] = cfg.total_bandwidth_hz;
    doc["seed"] = cfg.seed;
    json subs = json::array();
    for (const auto& sb : cfg.subbands) {
        json s;
        s["start_tone"] = sb.start_tone;
        s["width_tones"] = sb.width_tones;
        s["guard_tones_left"] = sb.guard_tones_left;
        s["guard_tones_right"] = sb.guard_tones_right;
        s["numerology"] = {{"scs_hz", sb.numerology.scs_hz},
                           {"fft_size", sb.numerology.fft_size},
                           {"cp_samples", sb.numerology.cp_samples},
                           {"symbols_per_tti", sb.numerology.symbols_per_tti}};
        s["modulation"] = std::string(to_string(sb.modulation));
        s["power_offset_db"] = sb.power_offset_db;
        s["timing_offset_samples"] = sb.timing_offset_samples;
        subs.push_back(std::move(s));
    }
    doc["subbands"] = std::move(subs);
    const auto& imp = cfg.impairments;
    json ij;
    ij["snr_db"] = imp.snr_db ? json(*imp.snr_db) : json("off");
    ij["channel"] = {{"kind", imp.channel.kind == ChannelKind::Tdl ? "tdl" : "ideal"},
                     {"profile", imp.channel.profile}};
    ij["pa"] = {{"enabled", imp.pa.enabled},
                {"input_backoff_db", imp.pa.input_backoff_db},
                {"smoothness", imp.pa.smoothness}};
    doc["impairments"] = std::move(ij);
    const auto& f = cfg.filter;
    json fj;
    fj["order"] = f.order;
    fj["window"] = f.window == WindowKind::Rrc ? "rrc" : "hann";
    fj["rolloff"] = f.rolloff;
    fj["excess_tones"] = f.excess_tones;
    fj["max_taps"] = f.max_taps;
    fj["prune_below_db"] = f.prune_below_db ? json(*f.prune_below_db) : json(nullptr);
    doc["filter"] = std::move(fj);
    return doc.dump(2) + "\n";
}

std::filesystem::path data_dir() { return std::filesystem::path(WLAB_DEFAULT_DATA_DIR); }

std::filesystem::path preset_dir() {
    if (const char* env = std::getenv("WAVEFORM_LAB_PRESETS"); env && *env) return std::filesystem::path(env);
    return data_dir() / "presets";
}

std::filesystem::path resolve_scenario_path(std::string_view arg) {
    if (arg.empty()) throw ConfigError("no scenario given");
    const std::filesystem::path direct(arg);
    if (std::filesystem::is_regular_file(direct)) return direct;
    const auto dir = preset_dir();
    for (const auto& candidate : {dir / (std::string(arg) + ".json"), dir / direct}) {
        if (std::filesystem::is_regular_file(candidate)) return candidate;
    }
    throw ConfigError("scenario '" + std::string(arg) + "' is neither a file nor a preset in " + dir.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace wlab
