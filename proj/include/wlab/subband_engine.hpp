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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wlab/filters.hpp"
#include "wlab/impairments.hpp"
#include "wlab/modem.hpp"
#include "wlab/scenario.hpp"

namespace wlab {

enum class Waveform { Ofdm, Fofdm };

std::string_view to_string(Waveform w);

enum class TailMode { None, ExtendedCp };

/// Filter-tail treatment: lengthen the CP to cover the filter mainlobe and
/// open the FFT window half a mainlobe early.
struct TailPolicy {
    TailMode mode = TailMode::None;
    std::size_t extra_cp_samples = 0;
    std::size_t rx_advance_samples = 0;

    bool operator==(const TailPolicy&) const = default;
};

/// None while the mainlobe fits in `threshold` × CP, else ExtendedCp with
/// rx_advance = mainlobe / 2 and extra_cp = max(0, mainlobe - CP).
TailPolicy derive_tail_policy(const FirFilter& f, const Numerology& n, double threshold = 1.0);

/// Spectral placement of one subband on the common sample-rate grid.
struct SubbandPlacement {
    ToneLayout layout;              // subband tones on its own FFT lattice
    double mix_offset_hz = 0.0;     // residual shift off the FFT bin grid
    double low_edge_hz = 0.0;       // occupied extent
    double high_edge_hz = 0.0;
    double passband_low_hz = 0.0;   // subband filter passband
    double passband_high_hz = 0.0;
    bool neighbour_below = false;
    bool neighbour_above = false;
    std::vector<double> tone_freqs_hz;
    std::vector<bool> edge_tones;   // tones in an RB that faces a neighbour

    double center_hz() const { return 0.5 * (low_edge_hz + high_edge_hz); }
};

/// A side faces a neighbour when another subband's occupied tones start
/// within one RB of this subband's edge. The filter passband is widened by
/// FilterSettings::excess_tones only on sides that do not.
SubbandPlacement place_subband(const ScenarioConfig& cfg, std::size_t index);

struct PlanOptions {
    Waveform waveform = Waveform::Fofdm;
    /// Derive a TailPolicy from the filter mainlobe; otherwise TailMode::None.
    bool tail_treatment = true;
    double tail_threshold = 1.0;
    std::optional<TailPolicy> forced_policy;
    std::size_t ttis = 1;
    std::size_t extra_symbols = 0;
    bool muted = false;  // transmit at zero amplitude
};

/// Everything needed to transmit and receive one subband of a scenario.
struct SubbandPlan {
    std::size_t index = 0;
    SubbandSpec spec;
    Waveform waveform = Waveform::Fofdm;
    Numerology numerology;          // CP includes any tail extension
    SubbandPlacement placement;
    FirFilter filter;               // identity for plain OFDM
    std::shared_ptr<const OverlapSaveKernel> kernel;
    TailPolicy policy;
    double sample_rate_hz = 0.0;
    std::size_t frame_symbols = 0;
    std::size_t rx_window_advance = 0;
    double amplitude = 1.0;

    std::size_t payload_bits() const;
    std::size_t frame_samples() const { return frame_symbols * numerology.samples_per_symbol(); }
    std::size_t filter_delay() const { return filter.delay(); }
    /// Length of the transmitted signal including both filter transients.
    std::size_t tx_samples() const { return frame_samples() + filter.taps.size() - 1; }
};

/// Requires a scenario that validates.
SubbandPlan plan_subband(const ScenarioConfig& cfg, std::size_t index, const PlanOptions& opts = {});
std::vector<SubbandPlan> plan_all(const ScenarioConfig& cfg, const PlanOptions& opts = {});

/// Filter order actually used: the requested order capped at half the
/// shortest FFT, rounded down to even.
std::uint32_t effective_filter_order(const ScenarioConfig& cfg);

struct SubbandTxArtifacts {
    FirFilter filter;
    ResourceGrid grid{1, 1};
    std::vector<std::uint8_t> bits;
    std::size_t filter_delay = 0;
    double amplitude = 1.0;
};

struct TxSubband {
    SignalBuffer signal;
    SubbandTxArtifacts artifacts;
};

/// QAM map -> grid -> OFDM (CP per policy) -> shift -> filter -> gain.
/// An empty `bits` span transmits an all-zero grid.
TxSubband tx_subband(const SubbandPlan& plan, std::span<const std::uint8_t> bits);

/// Delays each signal by its (nonnegative) offset and sums them.
SignalBuffer assemble(std::span<const SignalBuffer> signals, std::span<const std::int64_t> offsets);

struct RxSubband {
    ResourceGrid grid{1, 1};  // equalised
    std::vector<std::uint8_t> bits;
    double evm_db = 0.0;
    EvmAccumulator evm_all;
    EvmAccumulator evm_edge;
    EvmAccumulator evm_inner;
    BitErrorCount bit_errors;
};

/// Per-tone response the genie equaliser divides by: gain, filter cascade,
/// channel (when given) and FFT-window phase ramp.
std::vector<cdouble> genie_estimates(const SubbandPlan& plan, const ChannelSnapshot* channel = nullptr);

/// Receives one subband whose transmit signal starts at `frame_offset` in
/// the composite.
RxSubband rx_subband(const SignalBuffer& composite, const SubbandPlan& plan,
                     const SubbandTxArtifacts& artifacts, std::int64_t frame_offset,
                     const ChannelSnapshot* channel = nullptr);

/// Peak position of the tx+rx filter cascade impulse response minus the
/// delay the receiver compensates. Zero when the bookkeeping is right.
std::int64_t probe_timing_error(const SubbandPlan& plan);

/// Random payload for `plan`, drawn from stream (seed, label).
std::vector<std::uint8_t> random_bits(const SubbandPlan& plan, std::uint64_t seed, std::string_view label);

/// Repacks the subbands contiguously, in list order, with `guard` empty
/// reference tones between neighbours (owned as the lower subband's right
/// guard). Subband `anchor` keeps its start tone.
ScenarioConfig with_guard_tones(const ScenarioConfig& base, int guard, std::size_t anchor = 0);

struct SweepRequest {
    ScenarioConfig base;
    std::vector<int> guard_counts{0, 1, 2};
    std::vector<double> power_offsets_db{0.0, 10.0};
    std::vector<Modulation> modulations{Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64};
    double snr_db = 30.0;
    std::size_t trials = 1;
    std::size_t victim = 0;
    std::size_t jobs = 1;
    std::size_t ttis = 1;
};

struct SweepRow {
    bool isolated = false;
    int guard_tones = 0;
    double power_offset_db = 0.0;
    Modulation modulation = Modulation::Qpsk;
    double snr_db = 0.0;
    double evm_db_edge = 0.0;
    double evm_db_inner = 0.0;
    double ber = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> baseline;  // victim alone, one row per (guard, modulation)
    std::vector<SweepRow> cells;     // full factorial, sorted by sweep keys

    const SweepRow* find(int guard, double offset_db, Modulation m) const;
    const SweepRow* find_baseline(int guard, Modulation m) const;
};

/// Victim-centred guard-tone sweep. Every modulation is applied to all
/// subbands; the power offset lifts the victim's adjacent subbands; each
/// non-victim subband runs half of its own symbol (plus one leading symbol)
/// out of step with the victim. Noise is set per tone relative to the
/// victim (Es/N0 = snr_db). Single-subband scenarios yield baseline rows only.
SweepResult guardtone_sweep(const SweepRequest& req);

inline constexpr std::string_view kSweepCsvHeader =
    "guard_tones,power_offset_db,modulation,snr_db,evm_db_edge,evm_db_inner,ber";

std::string sweep_csv(std::span<const SweepRow> rows);

} // namespace wlab
