#include "leocrlb/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

#include "leocrlb/random.hpp"

namespace leocrlb {

namespace {

enum StreamTag : std::uint64_t {
    kReceiverStream = 1,
    kLeoStream = 2,
    kBsStream = 3,
    kAntennaStream = 4,
    kTrialStream = 5,
};

// Rotates a unit vector by `angle` about a random axis orthogonal to it.
Vec3 perturb_direction(const Vec3& d, double angle, SplitMix64& rng) {
    Vec3 axis = d.cross(rng.unit_vector());
    while (axis.norm() < 1e-6) axis = d.cross(rng.unit_vector());
    axis.normalize();
    Vec3 out = std::cos(angle) * d + std::sin(angle) * axis.cross(d);
    return out.normalized();
}

}  // namespace

Vec3 SplitMix64::unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double az = uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(az), r * std::sin(az), z};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    std::uint64_t h = splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL);
    h = splitmix64_mix(h ^ (tag * 0xd1b54a32d192ed03ULL));
    return splitmix64_mix(h ^ (index + 0x632be59bd9b4e019ULL));
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    return derive_seed(seed, kTrialStream, static_cast<std::uint64_t>(trial));
}

const char* to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::LeoRx: return "leo_rx";
        case LinkKind::BsRx: return "bs_rx";
        case LinkKind::LeoBs: return "leo_bs";
    }
    return "?";
}

const char* to_string(ParamCase c) {
    return c == ParamCase::WithBsObservations ? "with_bs_observations" : "receiver_only";
}

const char* to_string(GainModel g) {
    return g == GainModel::Shared ? "shared" : "per_observation";
}

const SignalProps& Scenario::props(LinkKind kind) const {
    switch (kind) {
        case LinkKind::LeoRx: return leo_rx;
        case LinkKind::BsRx: return bs_rx;
        case LinkKind::LeoBs: return leo_bs;
    }
    throw std::logic_error("unknown link kind");
}

const OffsetParams& Scenario::offsets(LinkKind kind) const {
    switch (kind) {
        case LinkKind::LeoRx: return leo_rx_offset;
        case LinkKind::BsRx: return bs_rx_offset;
        case LinkKind::LeoBs: return leo_bs_offset;
    }
    throw std::logic_error("unknown link kind");
}

void Scenario::validate() const {
    if (grid.n_slots < 1) throw std::invalid_argument("need at least one slot");
    if (!(grid.spacing > 0.0)) throw std::invalid_argument("slot spacing must be > 0");
    if (receiver.antenna_offsets.empty()) throw std::invalid_argument("need at least one antenna");
    if (receiver.antenna_offsets.size() > 1) {
        bool all_same = true;
        for (const auto& s : receiver.antenna_offsets) {
            all_same = all_same && (s == receiver.antenna_offsets.front());
        }
        if (all_same) throw std::invalid_argument("antenna offsets are all identical");
    }
    for (std::size_t b = 0; b < leos.size(); ++b) {
        const auto& leo = leos[b];
        if (static_cast<int>(leo.slot_directions.size()) != grid.n_slots) {
            throw std::invalid_argument("LEO " + std::to_string(b) + " needs one direction per slot");
        }
        for (const auto& d : leo.slot_directions) {
            if (std::abs(d.norm() - 1.0) > 1e-12) {
                throw std::invalid_argument("LEO " + std::to_string(b) + " has a non-unit direction");
            }
        }
    }
    leo_rx.validate();
    bs_rx.validate();
    leo_bs.validate();
}

Scenario generate_scenario(const ScenarioTemplate& tpl, std::uint64_t seed) {
    if (tpl.n_leo < 0 || tpl.n_bs < 0 || tpl.n_slots < 1 || tpl.n_ant < 1) {
        throw std::invalid_argument("scenario counts out of range");
    }
    Scenario s;
    s.grid = {tpl.n_slots, tpl.slot_spacing};

    SplitMix64 rx_rng(derive_seed(seed, kReceiverStream, 0));
    s.receiver.centroid_p0 = tpl.receiver_radius * rx_rng.unit_vector();
    s.receiver.velocity = tpl.receiver_speed * rx_rng.unit_vector();
    const double pi = std::numbers::pi;
    s.receiver.orientation = {rx_rng.uniform(-pi, pi), rx_rng.uniform(-pi, pi),
                              rx_rng.uniform(-pi, pi)};

    const double wavelength = kSpeedOfLight / tpl.carrier_freq;
    const double half_width = tpl.array_extent_wavelengths * wavelength;
    SplitMix64 ant_rng(derive_seed(seed, kAntennaStream, 0));
    for (int u = 0; u < tpl.n_ant; ++u) {
        const double x = ant_rng.uniform(-1.0, 1.0);
        const double y = ant_rng.uniform(-1.0, 1.0);
        const double z = ant_rng.uniform(-1.0, 1.0);
        s.receiver.antenna_offsets.push_back(half_width * Vec3(x, y, z));
    }

    for (int b = 0; b < tpl.n_leo; ++b) {
        SplitMix64 rng(derive_seed(seed, kLeoStream, static_cast<std::uint64_t>(b)));
        LeoState leo;
        leo.reference_p0 = s.receiver.centroid_p0 + tpl.leo_range * rng.unit_vector();
        leo.speed = tpl.leo_speed;
        Vec3 d = rng.unit_vector();
        leo.slot_directions.push_back(d);
        for (int k = 1; k < tpl.n_slots; ++k) {
            d = perturb_direction(d, rng.uniform(0.0, tpl.direction_perturbation), rng);
            leo.slot_directions.push_back(d);
        }
        s.leos.push_back(std::move(leo));
    }

    SplitMix64 bs_rng(derive_seed(seed, kBsStream, 0));
    for (int q = 0; q < tpl.n_bs; ++q) {
        s.base_stations.push_back({tpl.bs_radius * bs_rng.unit_vector()});
    }

    SignalProps base;
    base.eff_bandwidth = tpl.eff_bandwidth;
    base.bcc = tpl.bcc;
    base.rms_duration = tpl.rms_duration;
    base.carrier_freq = tpl.carrier_freq;
    s.leo_rx = base;
    s.leo_rx.snr_linear = tpl.snr_leo_rx;
    s.bs_rx = base;
    s.bs_rx.snr_linear = tpl.snr_bs_rx;
    s.leo_bs = base;
    s.leo_bs.snr_linear = tpl.snr_leo_bs;
    s.gain_model = tpl.gain_model;
    return s;
}

}  // namespace leocrlb
