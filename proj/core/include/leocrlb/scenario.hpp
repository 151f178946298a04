#pragma once

#include <cstdint>
#include <vector>

#include "leocrlb/geometry.hpp"
#include "leocrlb/signal.hpp"

namespace leocrlb {

enum class LinkKind { LeoRx, BsRx, LeoBs };

/// Case 1 keeps the LEO-BS observations, case 2 uses receiver observations only.
enum class ParamCase { WithBsObservations, ReceiverOnly };

/// One real gain per link, or one gain per delay observation.
enum class GainModel { Shared, PerObservation };

const char* to_string(LinkKind kind);
const char* to_string(ParamCase c);
const char* to_string(GainModel g);

/// A complete problem instance.
struct Scenario {
    ReceiverState receiver;
    std::vector<LeoState> leos;
    std::vector<BsState> base_stations;
    SlotGrid grid;

    SignalProps leo_rx;
    SignalProps bs_rx;
    SignalProps leo_bs;

    OffsetParams leo_rx_offset;
    OffsetParams bs_rx_offset;
    OffsetParams leo_bs_offset;

    GainModel gain_model{GainModel::Shared};

    int n_leo() const { return static_cast<int>(leos.size()); }
    int n_bs() const { return static_cast<int>(base_stations.size()); }
    int n_slots() const { return grid.n_slots; }
    int n_ant() const { return static_cast<int>(receiver.antenna_offsets.size()); }

    const SignalProps& props(LinkKind kind) const;
    const OffsetParams& offsets(LinkKind kind) const;

    /// Throws std::invalid_argument on a malformed instance.
    void validate() const;
};

/// Random geometry with the published scenario statistics.
struct ScenarioTemplate {
    int n_leo{1};
    int n_bs{3};
    int n_slots{3};
    int n_ant{4};
    double slot_spacing{1.0};  // s

    double carrier_freq{40e9};
    double eff_bandwidth{1e8};
    double bcc{0.0};
    double rms_duration{rms_duration_for_window(1e-3)};
    double snr_leo_rx{100.0};
    double snr_bs_rx{100.0};
    double snr_leo_bs{100.0};
    GainModel gain_model{GainModel::Shared};

    double leo_range{2.0e6};        // m from the receiver
    double receiver_radius{30.0};   // m from the origin
    double bs_radius{100.0};        // m from the origin
    double leo_speed{8000.0};       // m/s
    double receiver_speed{25.0};    // m/s
    double direction_perturbation{0.1};  // max rad per slot
    double array_extent_wavelengths{100.0};  // half-width of the antenna cube
};

/// Draws one scenario. Every entity uses its own stream so that growing one
/// count leaves the other entities unchanged.
Scenario generate_scenario(const ScenarioTemplate& tpl, std::uint64_t seed);

/// Seed of trial t for a base seed.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

}  // namespace leocrlb
